// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "test_util.hpp"
#include "trom/error.hpp"
#include "trom/sampling.hpp"

namespace trom {
namespace {

using Eigen::VectorXd;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidInput;
}

CartesianGrid grid1d(std::vector<double> nodes) {
  return CartesianGrid(ParameterBox({nodes.front()}, {nodes.back()}), {nodes});
}

TEST(ParameterBox, Validation) {
  EXPECT_THROW(ParameterBox({1.0}, {1.0}), Error);
  EXPECT_THROW(ParameterBox({0.0, 0.0}, {1.0}), Error);
  const ParameterBox b({0, -1}, {3, 3});
  EXPECT_DOUBLE_EQ(b.diameter(), 5.0);
  EXPECT_TRUE(b.contains(std::vector<double>{0, 3}));
  EXPECT_FALSE(b.contains(std::vector<double>{-1e-6, 0}));
}

TEST(CartesianGrid, RowMajorPoints) {
  const CartesianGrid g = CartesianGrid::uniform(ParameterBox({0, 0}, {1, 2}), {2, 3});
  EXPECT_EQ(g.count(), 6u);
  EXPECT_EQ(g.point(1), (Point{0.0, 1.0}));
  EXPECT_EQ(g.point(3), (Point{1.0, 0.0}));
  EXPECT_THROW(CartesianGrid(ParameterBox({0}, {1}), {{0.0, 0.5, 0.5}}), Error);
  EXPECT_THROW(CartesianGrid(ParameterBox({0}, {1}), {{0.0, 1.5}}), Error);
}

TEST(PositionVectors, Indicator) {
  const CartesianGrid g = grid1d({0, 0.5, 1});
  const InterpVectors e = position_vectors(g, std::vector<double>{0.5});
  EXPECT_EQ(e.axes[0], (VectorXd(3) << 0, 1, 0).finished());
  EXPECT_EQ(e.nonzero_count(0), 1u);
}

TEST(PositionVectors, Corner) {
  const CartesianGrid g = CartesianGrid::uniform(ParameterBox({0, 0}, {1, 1}), {3, 4});
  const InterpVectors e = position_vectors(g, std::vector<double>{0, 0});
  EXPECT_EQ(e.axes[0](0), 1.0);
  EXPECT_EQ(e.axes[1](0), 1.0);
  EXPECT_EQ(e.axes[0].sum(), 1.0);
}

TEST(PositionVectors, OffGrid) {
  const CartesianGrid g = grid1d({0, 0.5, 1});
  EXPECT_EQ(code_of([&] { (void)position_vectors(g, std::vector<double>{0.5 + 1e-6}); }), ErrorCode::NotOnGrid);
  // Within the relative snap tolerance still matches.
  EXPECT_NO_THROW((void)position_vectors(g, std::vector<double>{0.5 + 1e-14}));
}

TEST(LagrangeVectors, Midpoint) {
  const CartesianGrid g = grid1d({0, 1, 2, 3});
  const InterpVectors e = lagrange_vectors(g, std::vector<double>{1.5}, 2);
  EXPECT_EQ(e.axes[0], (VectorXd(4) << 0, 0.5, 0.5, 0).finished());
}

TEST(LagrangeVectors, NodeGivesIndicator) {
  const CartesianGrid g = grid1d({0, 1, 2, 3});
  for (std::size_t p = 2; p <= 4; ++p) {
    const InterpVectors e = lagrange_vectors(g, std::vector<double>{2.0}, p);
    EXPECT_EQ(e.axes[0], (VectorXd(4) << 0, 0, 1, 0).finished());
  }
}

TEST(LagrangeVectors, QuadraticReproduction) {
  const CartesianGrid g = grid1d({0, 1, 2, 3});
  const auto f = [](double x) { return 2.0 - 0.7 * x + 1.3 * x * x; };
  for (int trial = 0; trial < 20; ++trial) {
    const double a = test::uniform(0, 3);
    const InterpVectors e = lagrange_vectors(g, std::vector<double>{a}, 3);
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += e.axes[0](j) * f(j);
    EXPECT_NEAR(s, f(a), 1e-13);
    EXPECT_NEAR(e.axes[0].sum(), 1.0, 1e-14);
    EXPECT_LE(e.nonzero_count(0), 3u);
  }
}

TEST(LagrangeVectors, StabilityForP2) {
  const CartesianGrid g(ParameterBox({0, 0}, {1, 1}), {{0, 0.1, 0.5, 1}, {0, 0.3, 1}});
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> a{test::uniform(0, 1), test::uniform(0, 1)};
    const InterpVectors e = lagrange_vectors(g, a, 2);
    for (const auto& v : e.axes) {
      EXPECT_LE(v.norm(), 1.0 + 1e-12);
      EXPECT_NEAR(v.sum(), 1.0, 1e-14);
    }
  }
}

TEST(LagrangeVectors, Errors) {
  const CartesianGrid g = grid1d({0, 1, 2});
  EXPECT_EQ(code_of([&] { (void)lagrange_vectors(g, std::vector<double>{2.5}, 2); }), ErrorCode::OutOfDomain);
  EXPECT_EQ(code_of([&] { (void)lagrange_vectors(g, std::vector<double>{0.5}, 4); }), ErrorCode::StencilTooLarge);
}

TEST(GeneralVector, ExactHit) {
  const GeneralSampling s(ParameterBox({0, 0}, {1, 1}), {{0.1, 0.1}, {0.9, 0.2}, {0.4, 0.8}, {0.5, 0.5}});
  const InterpVectors e = general_vector(s, std::vector<double>{0.9, 0.2}, 3);
  EXPECT_TRUE(e.general);
  EXPECT_EQ(e.axes[0], (VectorXd(4) << 0, 1, 0, 0).finished());
}

TEST(GeneralVector, OneDimensionalLinear) {
  const GeneralSampling s(ParameterBox({0}, {1}), {{0.2}, {0.7}, {0.95}});
  const double a = 0.5;
  const InterpVectors e = general_vector(s, std::vector<double>{a}, 2);
  EXPECT_NEAR(e.axes[0](0), (0.7 - a) / 0.5, 1e-13);
  EXPECT_NEAR(e.axes[0](1), (a - 0.2) / 0.5, 1e-13);
  EXPECT_EQ(e.axes[0](2), 0.0);
}

TEST(GeneralVector, Barycentric) {
  const GeneralSampling s(ParameterBox({0, 0}, {1, 1}), {{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  // (0.2, 0.25): nearest three are (0,0), (1,0), (0,1).
  const InterpVectors e = general_vector(s, std::vector<double>{0.2, 0.25}, 3);
  EXPECT_NEAR(e.axes[0](0), 0.55, 1e-13);
  EXPECT_NEAR(e.axes[0](1), 0.2, 1e-13);
  EXPECT_NEAR(e.axes[0](2), 0.25, 1e-13);
  EXPECT_EQ(e.axes[0](3), 0.0);
}

TEST(GeneralVector, AffineConstraintWithMoreNeighbors) {
  std::vector<Point> pts;
  for (int i = 0; i < 30; ++i) pts.push_back({test::uniform(0, 1), test::uniform(0, 1), test::uniform(0, 1)});
  const GeneralSampling s(ParameterBox({0, 0, 0}, {1, 1, 1}), pts);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> a{test::uniform(0, 1), test::uniform(0, 1), test::uniform(0, 1)};
    const InterpVectors e = general_vector(s, a, 6);
    EXPECT_NEAR(e.axes[0].sum(), 1.0, 1e-10);
    for (std::size_t d = 0; d < 3; ++d) {
      double x = 0.0;
      for (std::size_t j = 0; j < pts.size(); ++j) x += e.axes[0](static_cast<Eigen::Index>(j)) * pts[j][d];
      EXPECT_NEAR(x, a[d], 1e-10);
    }
    EXPECT_LE(e.nonzero_count(0), 6u);
  }
}

TEST(GeneralVector, DegenerateNeighborhoodWidens) {
  // The three nearest samples are collinear; widening to six succeeds.
  const GeneralSampling s(ParameterBox({0, 0}, {1, 1}),
                          {{0.4, 0.5}, {0.5, 0.5}, {0.6, 0.5}, {0.1, 0.1}, {0.9, 0.9}, {0.1, 0.9}});
  const InterpVectors e = general_vector(s, std::vector<double>{0.5, 0.52}, 3);
  EXPECT_NEAR(e.axes[0].sum(), 1.0, 1e-10);
}

TEST(GeneralVector, DegenerateEverywhere) {
  const GeneralSampling s(ParameterBox({0, 0}, {1, 1}), {{0.1, 0.5}, {0.5, 0.5}, {0.9, 0.5}});
  EXPECT_EQ(code_of([&] { (void)general_vector(s, std::vector<double>{0.3, 0.6}, 3); }),
            ErrorCode::DegenerateNeighborhood);
}

TEST(GridDelta, ClosedForms) {
  EXPECT_NEAR(grid_delta(CartesianGrid::uniform(ParameterBox({0}, {1}), {5}), 2), 0.25, 1e-15);
  EXPECT_NEAR(grid_delta(CartesianGrid::uniform(ParameterBox({0, 0}, {1, 1}), {5, 5}), 2), 0.25 * std::sqrt(2.0),
              1e-15);
  const CartesianGrid g(ParameterBox({0, 0}, {1, 1}), {{0, 0.1, 0.5, 1}, {0, 0.7, 1}});
  EXPECT_NEAR(g.max_gap(0), 0.5, 1e-15);
  EXPECT_NEAR(g.max_gap(1), 0.7, 1e-15);
  EXPECT_NEAR(grid_delta(g, 2), std::sqrt(0.25 + 0.49), 1e-15);
}

TEST(SamplingJson, RoundTrip) {
  const SamplingScheme g = parse_sampling(R"({"box": {"lower": [0, 1], "upper": [1, 2]}, "uniform": [3, 2]})");
  ASSERT_TRUE(std::holds_alternative<CartesianGrid>(g));
  EXPECT_EQ(parameter_mode_sizes(g), (std::vector<std::size_t>{3, 2}));
  const SamplingScheme back = parse_sampling(sampling_to_json(g));
  EXPECT_EQ(sampling_points(back), sampling_points(g));

  const SamplingScheme r = parse_sampling(R"({"box": {"lower": [0], "upper": [1]}, "random": {"count": 7, "seed": 4}})");
  EXPECT_EQ(sampling_count(r), 7u);
  EXPECT_EQ(parameter_mode_sizes(r), (std::vector<std::size_t>{7}));
  EXPECT_EQ(sampling_points(parse_sampling(sampling_to_json(r))), sampling_points(r));

  EXPECT_THROW((void)parse_sampling("{not json"), Error);
  EXPECT_THROW((void)parse_sampling(R"({"box": {"lower": [0], "upper": [1]}})"), Error);
}

TEST(InterpolationVectors, DispatchesAndDefaultsQ) {
  const SamplingScheme g = CartesianGrid::uniform(ParameterBox({0}, {1}), {5});
  const InterpVectors e = interpolation_vectors(g, std::vector<double>{0.3});
  EXPECT_FALSE(e.general);
  EXPECT_EQ(e.nonzero_count(0), 2u);
  const SamplingScheme s = GeneralSampling::from_grid(std::get<CartesianGrid>(g));
  const InterpVectors f = interpolation_vectors(s, std::vector<double>{0.3});
  EXPECT_TRUE(f.general);
  EXPECT_LE((f.axes[0] - e.axes[0]).norm(), 1e-12);
}

}  // namespace
}  // namespace trom

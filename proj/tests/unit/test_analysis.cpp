// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "test_util.hpp"
#include "trom/analysis.hpp"
#include "trom/error.hpp"
#include "trom/snapshots.hpp"

namespace trom {
namespace {

using Eigen::MatrixXd;
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

TEST(ProjectionError, NaiveLoop) {
  const MatrixXd s = test::random_matrix(9, 4);
  const MatrixXd z = test::random_orthonormal(9, 3);
  long double acc = 0.0L;
  for (Eigen::Index j = 0; j < 4; ++j) {
    const VectorXd c = s.col(j);
    const VectorXd r = c - z * (z.transpose() * c);
    for (Eigen::Index i = 0; i < 9; ++i) acc += static_cast<long double>(r(i)) * r(i);
  }
  EXPECT_NEAR(projection_error(s, z), static_cast<double>(acc / 36.0L), 1e-15);
  EXPECT_NEAR(projection_error(s, MatrixXd::Identity(9, 9)), 0.0, 1e-28);
  EXPECT_THROW((void)projection_error(s, MatrixXd::Identity(8, 2)), Error);
}

TEST(InSampleError, AveragesBlocks) {
  const DenseTensor phi = test::random_tensor({6, 3, 4});
  const SamplingScheme s = CartesianGrid::uniform(ParameterBox({0}, {1}), {3});
  const MatrixXd z = test::random_orthonormal(6, 2);
  double sum = 0.0;
  for (std::size_t j = 0; j < 3; ++j) sum += projection_error(snapshot_block(phi, j), z);
  const double e = in_sample_error(phi, s, [&](std::size_t, const Point&) { return z; });
  EXPECT_NEAR(e, std::sqrt(sum / 3.0), 1e-15);
  EXPECT_NEAR(in_sample_error(phi, s, [&](std::size_t, const Point&) { return z; }, false), sum / 3.0, 1e-15);
  // Representation error at a node equals the block error.
  const InterpVectors pos = position_vectors(std::get<CartesianGrid>(s), std::vector<double>{0.5});
  EXPECT_NEAR(representation_error(phi, z, pos), projection_error(snapshot_block(phi, 1), z), 1e-15);
}

TEST(SolutionError, Cases) {
  Trajectory truth{{0.1, 0.2}, (MatrixXd(2, 2) << 3, 0, 4, 1).finished()};
  Trajectory approx = truth;
  EXPECT_EQ(solution_error(approx, truth), 0.0);
  approx.states(1, 1) += 0.5;
  EXPECT_NEAR(solution_error(approx, truth), 0.5 / 5.0, 1e-15);
  approx.states(0, 0) += 2.0;
  EXPECT_NEAR(solution_error(approx, truth), 2.0 / 5.0, 1e-15);
  Trajectory zero{{0.1, 0.2}, MatrixXd::Zero(2, 2)};
  EXPECT_EQ(code_of([&] { (void)solution_error(approx, zero); }), ErrorCode::ZeroDenominator);
  Trajectory shifted = truth;
  shifted.times[1] = 0.3;
  EXPECT_EQ(code_of([&] { (void)solution_error(truth, shifted); }), ErrorCode::DimensionMismatch);
  Trajectory shorter{{0.1}, truth.states.leftCols(1)};
  EXPECT_EQ(code_of([&] { (void)solution_error(shorter, truth); }), ErrorCode::DimensionMismatch);
}

TEST(EstimateTerms, Closed) {
  EstimateInputs in;
  in.eps = 1e-3;
  in.phi_norm = 20.0;
  in.sigma = (VectorXd(4) << 5, 2, 1, 0.5).finished();
  in.n = 2;
  in.delta = 0.1;
  in.p = 2;
  in.c_e = 1.5;
  in.parameter_dim = 2;
  in.state_dim = 10;
  in.time_steps = 5;
  const EstimateTerms t = estimate_terms(in);
  const double ce = std::pow(1.5, 4.0);
  EXPECT_NEAR(t.term1_as_written, ce * 1e-6 * 20.0 / 50.0, 1e-18);
  EXPECT_NEAR(t.term1_squared, ce * 1e-6 * 400.0 / 50.0, 1e-16);
  EXPECT_NEAR(t.term2, 1.25 / 50.0, 1e-16);
  EXPECT_NEAR(t.term3_scaffold, 1e-4, 1e-18);
  in.general_sampling = true;
  in.p = 3;
  const EstimateTerms g = estimate_terms(in);
  EXPECT_NEAR(g.term1_as_written, 1.5 * 1.5 * 1e-6 * 20.0 / 50.0, 1e-18);
  EXPECT_NEAR(g.term3_scaffold, 1e-2, 1e-17);
  in.n = 4;
  EXPECT_EQ(estimate_terms(in).term2, 0.0);
}

TEST(CompressionReport, CountsAndFactor) {
  // CP on a general sampling with K = 3 and R = 2: 3 + 3 + 6 entries.
  const CompressionReport cp = compression_report(Format::Cp, {2}, {3}, 10, 5);
  EXPECT_EQ(cp.online_count, 12u);
  EXPECT_EQ(cp.full_count, 150u);
  EXPECT_EQ(cp.cf_numerator, 25u);
  EXPECT_EQ(cp.cf_denominator, 2u);
  EXPECT_DOUBLE_EQ(cp.compression_factor(), 12.5);
  // R above N keeps the N x R factor.
  EXPECT_EQ(compression_report(Format::Cp, {6}, {4}, 10, 3).online_count, 21u + 18u + 24u);

  const CompressionReport h = compression_report(Format::Hosvd, {5, 3, 3, 4}, {9, 9}, 400, 50);
  EXPECT_EQ(h.online_count, 180u + 27u + 27u);
  EXPECT_EQ(h.full_count, 1620000u);
  EXPECT_EQ(h.cf_numerator, 90000u);
  EXPECT_EQ(h.cf_denominator, 13u);

  const CompressionReport t = compression_report(Format::Tt, {4, 3, 5}, {9, 9}, 400, 50);
  EXPECT_EQ(t.online_count, 108u + 135u + 5u);

  EXPECT_EQ(code_of([] { (void)compression_report(Format::Tt, {4, 3}, {9, 9}, 400, 50); }), ErrorCode::InvalidRanks);
  EXPECT_EQ(code_of([] { (void)compression_report(Format::Hosvd, {5, 10, 3, 4}, {9, 9}, 400, 50); }),
            ErrorCode::InvalidRanks);
  EXPECT_EQ(code_of([] { (void)compression_report(Format::Cp, {0}, {9}, 400, 50); }), ErrorCode::InvalidRanks);
  EXPECT_EQ(code_of([] { (void)compression_report(Format::Cp, {401}, {9}, 400, 50); }), ErrorCode::InvalidRanks);
  EXPECT_EQ(code_of([] {
              (void)compression_report(Format::Hosvd, {1, 1, 1, 1}, {1u << 31, 1u << 31}, 1u << 31, 4);
            }),
            ErrorCode::OverflowRisk);
  const std::string js = compression_report_json(h);
  EXPECT_NE(js.find("\"online_count\": 234"), std::string::npos);
}

TEST(CompressionReport, MatchesPayloadEntryCount) {
  const DenseTensor phi = test::random_tensor({12, 3, 4, 6});
  const auto [u, p] = offline(AnyDecomposition{tt_svd(phi, 1e-3)});
  const PayloadFile f{p, std::nullopt, 1e-3, 0.0, 12, 6};
  EXPECT_EQ(compression_report(f).online_count, payload_count(p));
  const auto [u2, p2] = offline(AnyDecomposition{hosvd(phi, HosvdAccuracy{1e-3})});
  EXPECT_EQ(compression_report(PayloadFile{p2, std::nullopt, 1e-3, 0.0, 12, 6}).online_count, payload_count(p2));
}

TEST(Methods, Parse) {
  EXPECT_EQ(parse_method("trom-hosvd"), Method::Hosvd);
  EXPECT_EQ(parse_method("pod"), Method::Pod);
  EXPECT_EQ(method_label(Method::Tt), "tt");
  EXPECT_THROW((void)parse_method("svd"), Error);
}

TEST(RandomParameters, SeededAndInBox) {
  const ParameterBox box({0, -1}, {1, 1});
  const auto a = random_parameters(box, 20, 9);
  EXPECT_EQ(a, random_parameters(box, 20, 9));
  EXPECT_NE(a, random_parameters(box, 20, 10));
  for (const auto& p : a) EXPECT_TRUE(box.contains(p));
}

TEST(Aggregates, Statistics) {
  std::vector<ErrorRecord> recs;
  for (double g : {1.0, 2.0, 3.0, 6.0}) recs.push_back({{0.0}, 0, Method::Hosvd, 3, 1e-6, 0.0, 1.0 / g, 1.0, g, ""});
  recs.push_back({{0.0}, 0, Method::Hosvd, 3, 1e-6, 0.0, 0.0, 0.0, 0.0, "failed"});
  recs.push_back({{0.0}, 0, Method::Tt, 3, 1e-6, 0.0, 0.5, 1.0, 2.0, ""});
  const auto agg = aggregate_records(recs);
  ASSERT_EQ(agg.size(), 2u);
  EXPECT_EQ(agg[0].count, 4u);
  EXPECT_EQ(agg[0].failures, 1u);
  EXPECT_DOUBLE_EQ(agg[0].gain_mean, 3.0);
  EXPECT_DOUBLE_EQ(agg[0].gain_min, 1.0);
  EXPECT_NEAR(agg[0].gain_std, std::sqrt((4.0 + 1.0 + 0.0 + 9.0) / 4.0), 1e-15);
  EXPECT_DOUBLE_EQ(agg[0].error_max, 1.0);
  EXPECT_NEAR(agg[0].error_mean, (1.0 + 0.5 + 1.0 / 3.0 + 1.0 / 6.0) / 4.0, 1e-15);
  EXPECT_EQ(agg[1].method, Method::Tt);
}

class StudyFixture : public ::testing::Test {
 protected:
  static constexpr double kDt = 0.2;
  static constexpr std::size_t kSteps = 12;
  AffineSystem sys = build_heat_model({.nx = 5, .ny = 4}, 2);
  SamplingScheme grid = CartesianGrid::uniform(default_heat_box(2), {4, 4});
};

TEST_F(StudyFixture, PodGainsAreOneAndRecordsAreConsistent) {
  StudyOptions opt;
  opt.methods = {Method::Pod, Method::Hosvd, Method::Tt};
  opt.n_values = {2, 4};
  opt.eps_values = {1e-8};
  opt.random_samples = 6;
  opt.seed = 5;
  const DenseTensor phi = generate_snapshots(sys, grid, kDt, kSteps);
  const ErrorReport rep = gain_study(sys, grid, phi, kDt, opt);
  EXPECT_EQ(rep.records.size(), 6u * 2u * 3u);
  for (const auto& r : rep.records) {
    ASSERT_TRUE(r.failure.empty()) << r.failure;
    if (r.method == Method::Pod) EXPECT_EQ(r.gain, 1.0);
    EXPECT_NEAR(r.gain, r.pod_error / r.solution_error, 1e-12 * r.gain);
  }
  const ErrorAggregate* pod = rep.find(Method::Pod, 4, 0.0);
  ASSERT_NE(pod, nullptr);
  EXPECT_EQ(pod->count, 6u);
  EXPECT_DOUBLE_EQ(pod->gain_mean, 1.0);
  EXPECT_EQ(pod->gain_std, 0.0);

  // Recompute one HOSVD record from the public building blocks.
  const TuckerDecomposition d = hosvd(phi, HosvdAccuracy{1e-8});
  const auto [u, p] = offline_hosvd(d);
  const Point alpha = random_parameters(default_heat_box(2), 6, 5)[2];
  const LocalBasis lb = local_basis(OnlinePayload{p}, interpolation_vectors(grid, alpha), 4);
  const Trajectory red = crank_nicolson(project_local(project_universal(sys, u), lb), alpha, kDt, kSteps);
  const double err = solution_error(reconstruct_states(red, u, lb), crank_nicolson(sys, alpha, kDt, kSteps));
  bool found = false;
  for (const auto& r : rep.records)
    if (r.method == Method::Hosvd && r.sample == 2 && r.n == 4) {
      EXPECT_NEAR(r.solution_error, err, 1e-10 * err);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST_F(StudyFixture, BudgetFailuresAreRecorded) {
  StudyOptions opt;
  opt.methods = {Method::Hosvd};
  opt.n_values = {2, 500};
  opt.eps_values = {1e-3};
  opt.random_samples = 3;
  const ErrorReport rep = gain_study(sys, grid, kDt, kSteps, opt);
  EXPECT_EQ(rep.records.size(), 6u);
  const ErrorAggregate* big = rep.find(Method::Hosvd, 500, 1e-3);
  ASSERT_NE(big, nullptr);
  EXPECT_EQ(big->failures, 3u);
  EXPECT_EQ(rep.find(Method::Hosvd, 2, 1e-3)->failures, 0u);
}

TEST_F(StudyFixture, CsvOutput) {
  test::TempDir dir("study");
  StudyOptions opt;
  opt.methods = {Method::Pod, Method::Tt};
  opt.n_values = {3};
  opt.random_samples = 2;
  const ErrorReport rep = gain_study(sys, grid, kDt, kSteps, opt);
  write_report_csv(dir / "r.csv", rep);
  write_aggregates_csv(dir / "a.csv", rep);
  std::ifstream in(dir / "r.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1u + rep.records.size());
  std::ifstream ain(dir / "a.csv");
  lines = 0;
  while (std::getline(ain, line)) ++lines;
  EXPECT_EQ(lines, 1u + rep.aggregates.size());
}

TEST(StudySpec, Parse) {
  const StudySpec s = parse_study_spec(R"({
    "model": {"model": "heat", "nx": 5, "ny": 4, "parameters": 2, "steps": 3},
    "sampling": {"box": {"lower": [0.01, 0], "upper": [0.5, 0.9]}, "uniform": [3, 3]},
    "methods": ["pod", "trom-tt"], "n": [2, 3], "eps": [1e-4], "samples": 4, "seed": 11, "p": 3})");
  EXPECT_EQ(s.options.methods, (std::vector<Method>{Method::Pod, Method::Tt}));
  EXPECT_EQ(s.options.n_values, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(s.options.random_samples, 4u);
  EXPECT_EQ(s.options.seed, 11u);
  EXPECT_EQ(s.options.interp.p, 3u);
  EXPECT_EQ(s.model.steps, 3u);
  EXPECT_THROW((void)parse_study_spec(R"({"model": {"model": "heat"}})"), Error);
}

}  // namespace
}  // namespace trom

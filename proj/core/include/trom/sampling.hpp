// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace trom {

using Point = std::vector<double>;

class ParameterBox {
 public:
  ParameterBox() = default;
  ParameterBox(std::vector<double> lower, std::vector<double> upper);

  [[nodiscard]] std::size_t dimension() const noexcept { return lower_.size(); }
  [[nodiscard]] const std::vector<double>& lower() const noexcept { return lower_; }
  [[nodiscard]] const std::vector<double>& upper() const noexcept { return upper_; }
  [[nodiscard]] double width(std::size_t i) const { return upper_.at(i) - lower_.at(i); }
  [[nodiscard]] double diameter() const;
  /// Inside up to a slack of 1e-12 times each axis width.
  [[nodiscard]] bool contains(std::span<const double> alpha) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

class CartesianGrid {
 public:
  CartesianGrid() = default;
  CartesianGrid(ParameterBox box, std::vector<std::vector<double>> nodes);
  /// n_i equispaced nodes per axis including both box ends.
  [[nodiscard]] static CartesianGrid uniform(ParameterBox box, const std::vector<std::size_t>& counts);

  [[nodiscard]] const ParameterBox& box() const noexcept { return box_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return nodes_.size(); }
  [[nodiscard]] const std::vector<double>& nodes(std::size_t axis) const { return nodes_.at(axis); }
  [[nodiscard]] std::vector<std::size_t> axis_sizes() const;
  /// K, the number of grid points.
  [[nodiscard]] std::size_t count() const;
  /// Largest gap between adjacent nodes on an axis.
  [[nodiscard]] double max_gap(std::size_t axis) const;
  /// Grid point with the given row-major linear index (last axis fastest).
  [[nodiscard]] Point point(std::size_t linear) const;
  [[nodiscard]] std::vector<Point> points() const;

 private:
  ParameterBox box_;
  std::vector<std::vector<double>> nodes_;
};

class GeneralSampling {
 public:
  GeneralSampling() = default;
  GeneralSampling(ParameterBox box, std::vector<Point> samples);
  /// Grid points flattened in row-major order.
  [[nodiscard]] static GeneralSampling from_grid(const CartesianGrid& grid);

  [[nodiscard]] const ParameterBox& box() const noexcept { return box_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return box_.dimension(); }
  [[nodiscard]] std::size_t count() const noexcept { return samples_.size(); }
  [[nodiscard]] const std::vector<Point>& samples() const noexcept { return samples_; }

 private:
  ParameterBox box_;
  std::vector<Point> samples_;
};

using SamplingScheme = std::variant<CartesianGrid, GeneralSampling>;

/// Per-axis vectors e^i (Cartesian) or one vector of length K (general).
struct InterpVectors {
  std::vector<Eigen::VectorXd> axes;
  bool general = false;

  [[nodiscard]] std::size_t nonzero_count(std::size_t axis) const;
};

/// Indicators of the grid node matching each coordinate (relative snap 1e-12
/// of the axis width).
[[nodiscard]] InterpVectors position_vectors(const CartesianGrid& grid, std::span<const double> alpha);

/// Lagrange weights over p consecutive nodes: the interval bracketing each
/// coordinate, grown toward the nearer neighbor. This is the p nearest nodes
/// on uniform grids. Ties go to the lower index, so an exact midpoint takes
/// the left-biased stencil.
[[nodiscard]] InterpVectors lagrange_vectors(const CartesianGrid& grid, std::span<const double> alpha,
                                             std::size_t p);

/// Weighted minimum-norm coefficients over the q nearest samples. A sample
/// closer than 1e-12 diam(A) gives its indicator. A degenerate neighborhood
/// is retried once with min(K, 2q) neighbors.
[[nodiscard]] InterpVectors general_vector(const GeneralSampling& s, std::span<const double> alpha,
                                           std::size_t q);

struct InterpOptions {
  std::size_t p = 2;  ///< Lagrange stencil size on grids
  std::size_t q = 0;  ///< neighbor count for general sampling; 0 means D + 1
};

[[nodiscard]] InterpVectors interpolation_vectors(const SamplingScheme& s, std::span<const double> alpha,
                                                  const InterpOptions& options = {});

/// delta = (sum_i delta_i^p)^(1/p) with delta_i the largest gap on axis i.
[[nodiscard]] double grid_delta(const CartesianGrid& grid, double p);

[[nodiscard]] const ParameterBox& sampling_box(const SamplingScheme& s);
[[nodiscard]] std::size_t sampling_count(const SamplingScheme& s);
/// Axis lengths of the parameter modes of the snapshot tensor: (n_1..n_D) for
/// grids, (K) for general sampling.
[[nodiscard]] std::vector<std::size_t> parameter_mode_sizes(const SamplingScheme& s);
[[nodiscard]] std::vector<Point> sampling_points(const SamplingScheme& s);

/// JSON forms:
///   {"box": {"lower": [...], "upper": [...]}, "nodes": [[...], ...]}
///   {"box": ..., "uniform": [n_1, ...]}
///   {"box": ..., "samples": [[...], ...]}
///   {"box": ..., "random": {"count": K, "seed": s}}
[[nodiscard]] SamplingScheme parse_sampling(const std::string& json_text);
[[nodiscard]] SamplingScheme load_sampling(const std::filesystem::path& path);
[[nodiscard]] std::string sampling_to_json(const SamplingScheme& s);
[[nodiscard]] ParameterBox parse_box(const std::string& json_text);

}  // namespace trom

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "trom/tensor.hpp"

namespace trom {

/// Sum of R outer products u^r o sigma_1^r o ... o sigma_D^r o v^r.
struct CpDecomposition {
  std::size_t rank = 0;
  Eigen::MatrixXd u_factors;                   ///< M x R
  std::vector<Eigen::MatrixXd> sigma_factors;  ///< n_i x R per parameter axis
  Eigen::MatrixXd v_factors;                   ///< N x R
  double relative_error = 0.0;                 ///< ||Phi - Phi~|| / ||Phi|| at exit
  std::size_t sweeps = 0;                      ///< sweeps run by the winning restart
  std::uint64_t seed = 0;
};

struct TuckerDecomposition {
  DenseTensor core;                        ///< (M~, n~_1 .. n~_D, N~)
  Eigen::MatrixXd u;                       ///< M x M~, orthonormal columns
  std::vector<Eigen::MatrixXd> s_factors;  ///< n~_i x n_i, orthonormal rows
  Eigen::MatrixXd v;                       ///< N x N~, orthonormal columns
  /// Per-mode truncation residuals Delta_k, in processing order.
  std::vector<double> truncation_residuals;
  double input_norm = 0.0;

  [[nodiscard]] Dims ranks() const { return core.dims(); }
  /// sqrt(sum Delta_k^2) / ||Phi||, an upper bound on the relative error.
  [[nodiscard]] double relative_error_bound() const;
};

struct TtDecomposition {
  Eigen::MatrixXd u;                  ///< M x r~_1, orthonormal columns
  std::vector<DenseTensor> carriages; ///< (r~_i, n_i, r~_{i+1}), left-orthogonal
  Eigen::MatrixXd v;                  ///< N x r~_{D+1}, orthogonal columns
  Eigen::VectorXd w_scale;            ///< column norms of v
  std::vector<double> truncation_residuals;
  double input_norm = 0.0;

  /// (r~_1, ..., r~_{D+1}).
  [[nodiscard]] Dims ranks() const;
  [[nodiscard]] double relative_error_bound() const;
};

struct CpOptions {
  std::size_t rank = 1;
  std::size_t max_sweeps = 500;
  /// Stop when the relative fit error changes by less than this between sweeps.
  double rel_change_tol = 1e-12;
  std::size_t restarts = 1;
  std::uint64_t seed = 0;
};

/// Alternating least squares from random Gaussian starts; returns the best
/// restart. After every sweep the column norms of the leading factors are
/// moved into v_factors.
[[nodiscard]] CpDecomposition cp_als(const DenseTensor& phi, const CpOptions& options);

struct HosvdAccuracy {
  double eps;
};
struct HosvdRanks {
  Dims ranks;
};
using HosvdMode = std::variant<HosvdAccuracy, HosvdRanks>;

/// Sequentially truncated HOSVD processing modes in order (space, parameters,
/// time). Accuracy mode truncates every mode at eps ||Phi|| / sqrt(order).
[[nodiscard]] TuckerDecomposition hosvd(const DenseTensor& phi, const HosvdMode& mode);

/// TT-SVD with per-step threshold eps ||Phi|| / sqrt(order - 1). The cores are
/// left-orthogonal, so v carries the singular values of the last step.
[[nodiscard]] TtDecomposition tt_svd(const DenseTensor& phi, double eps);

inline constexpr std::size_t kDefaultReconstructCap = 50'000'000;

[[nodiscard]] DenseTensor reconstruct(const CpDecomposition& d, std::size_t cap = kDefaultReconstructCap);
[[nodiscard]] DenseTensor reconstruct(const TuckerDecomposition& d, std::size_t cap = kDefaultReconstructCap);
[[nodiscard]] DenseTensor reconstruct(const TtDecomposition& d, std::size_t cap = kDefaultReconstructCap);

/// Rows of the Khatri-Rao product of the factors in the given order, the last
/// factor's index varying fastest.
[[nodiscard]] Eigen::MatrixXd khatri_rao(const std::vector<const Eigen::MatrixXd*>& factors);

}  // namespace trom

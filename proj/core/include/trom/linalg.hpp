// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <variant>

#include <Eigen/Dense>

namespace trom {

struct SvdResult {
  Eigen::MatrixXd left;             ///< M x r, orthonormal columns
  Eigen::VectorXd singular_values;  ///< length r, nonincreasing
  Eigen::MatrixXd right;            ///< N x r, orthonormal columns
  /// Frobenius norm of the discarded part, sqrt(sum of dropped sigma^2).
  double discarded_norm = 0.0;
};

struct QrResult {
  Eigen::MatrixXd q;  ///< M x R, orthonormal columns
  Eigen::MatrixXd r;  ///< R x R upper triangular, nonnegative diagonal
};

struct SvdRank {
  std::size_t rank;
};
/// Keep the fewest leading triplets whose Frobenius tail is at most tau.
struct SvdTolerance {
  double tau;
};
using SvdTruncation = std::variant<SvdRank, SvdTolerance>;

/// Thin SVD with all min(M, N) triplets and the sign rule applied.
[[nodiscard]] SvdResult thin_svd(const Eigen::MatrixXd& a);

/// Sign rule: in every left singular vector the entry of largest magnitude
/// (lowest index on ties) is positive; the right vector flips with it.
///
/// Tolerance mode never returns fewer than one triplet for a nonempty matrix.
[[nodiscard]] SvdResult truncated_svd(const Eigen::MatrixXd& a, SvdTruncation mode);

/// Left singular vectors only, allowing rank up to rows(a). Columns past the
/// thin rank come from the orthonormal completion of the full SVD.
[[nodiscard]] SvdResult leading_left_vectors(const Eigen::MatrixXd& a, std::size_t rank);

/// Thin Householder QR for M >= R with the diagonal of r made nonnegative.
[[nodiscard]] QrResult thin_qr(const Eigen::MatrixXd& a);

/// Weighted minimum-norm solution of x * a = rhs:
///   a = W (x W)^+ rhs,   W = diag(1 / d_k).
/// Singular values below max(rows, cols) * eps * sigma_max are dropped; a
/// row-rank deficient x raises DegenerateNeighborhood.
[[nodiscard]] Eigen::VectorXd weighted_minnorm_solve(const Eigen::MatrixXd& x,
                                                     const Eigen::VectorXd& d_weights,
                                                     const Eigen::VectorXd& rhs);

/// Applies the sign rule in place to matching column pairs.
void apply_svd_sign_rule(Eigen::MatrixXd& left, Eigen::MatrixXd& right);

[[nodiscard]] bool all_finite(const Eigen::MatrixXd& a);

}  // namespace trom

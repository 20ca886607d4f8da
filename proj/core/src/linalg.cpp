// SPDX-License-Identifier: Apache-2.0
#include "trom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "trom/error.hpp"

namespace trom {

bool all_finite(const Eigen::MatrixXd& a) { return a.allFinite(); }

void apply_svd_sign_rule(Eigen::MatrixXd& left, Eigen::MatrixXd& right) {
  const Eigen::Index cols = std::min(left.cols(), right.cols());
  for (Eigen::Index j = 0; j < cols; ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < left.rows(); ++i) {
      const double v = std::abs(left(i, j));
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (left.rows() > 0 && left(best, j) < 0.0) {
      left.col(j) *= -1.0;
      right.col(j) *= -1.0;
    }
  }
}

namespace {

// Eigen's bidiagonal divide-and-conquer SVD; it falls back to Jacobi for
// small blocks internally.
void full_thin(const Eigen::MatrixXd& a, Eigen::MatrixXd& u, Eigen::VectorXd& s, Eigen::MatrixXd& v) {
  if (a.rows() == 0 || a.cols() == 0) {
    u.resize(a.rows(), 0);
    s.resize(0);
    v.resize(a.cols(), 0);
    return;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  u = svd.matrixU();
  s = svd.singularValues();
  v = svd.matrixV();
}

double tail_norm(const Eigen::VectorXd& s, Eigen::Index from) {
  double acc = 0.0;
  for (Eigen::Index i = s.size() - 1; i >= from; --i) acc += s(i) * s(i);
  return std::sqrt(acc);
}

}  // namespace

SvdResult thin_svd(const Eigen::MatrixXd& a) {
  require(all_finite(a), ErrorCode::InvalidInput, "SVD input has non-finite entries");
  SvdResult out;
  full_thin(a, out.left, out.singular_values, out.right);
  apply_svd_sign_rule(out.left, out.right);
  return out;
}

SvdResult truncated_svd(const Eigen::MatrixXd& a, SvdTruncation mode) {
  require(all_finite(a), ErrorCode::InvalidInput, "SVD input has non-finite entries");
  const auto kmax = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  if (const auto* r = std::get_if<SvdRank>(&mode)) {
    if (r->rank > kmax)
      fail(ErrorCode::InvalidRank, "rank " + std::to_string(r->rank) + " exceeds min(M,N) = " + std::to_string(kmax));
  } else {
    const double tau = std::get<SvdTolerance>(mode).tau;
    require(tau >= 0.0 && std::isfinite(tau), ErrorCode::InvalidTolerance, "tolerance must be finite and >= 0");
  }

  Eigen::MatrixXd u, v;
  Eigen::VectorXd s;
  full_thin(a, u, s, v);

  Eigen::Index r = 0;
  if (const auto* rk = std::get_if<SvdRank>(&mode)) {
    r = static_cast<Eigen::Index>(rk->rank);
  } else {
    const double tau = std::get<SvdTolerance>(mode).tau;
    // tails[i] = ||sigma(i:)||, accumulated from the small end
    Eigen::VectorXd tails(s.size() + 1);
    tails(s.size()) = 0.0;
    double acc = 0.0;
    for (Eigen::Index i = s.size() - 1; i >= 0; --i) {
      acc += s(i) * s(i);
      tails(i) = std::sqrt(acc);
    }
    r = s.size();
    for (Eigen::Index i = 0; i <= s.size(); ++i)
      if (tails(i) <= tau) {
        r = i;
        break;
      }
    if (s.size() > 0) r = std::max<Eigen::Index>(r, 1);
  }

  SvdResult out;
  out.left = u.leftCols(r);
  out.right = v.leftCols(r);
  out.singular_values = s.head(r);
  out.discarded_norm = tail_norm(s, r);
  apply_svd_sign_rule(out.left, out.right);
  return out;
}

SvdResult leading_left_vectors(const Eigen::MatrixXd& a, std::size_t rank) {
  require(all_finite(a), ErrorCode::InvalidInput, "SVD input has non-finite entries");
  require(rank <= static_cast<std::size_t>(a.rows()), ErrorCode::InvalidRank, "rank exceeds row count");
  const auto thin = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  if (rank <= thin) return truncated_svd(a, SvdRank{rank});

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeThinV);
  SvdResult out;
  const auto r = static_cast<Eigen::Index>(rank);
  out.left = svd.matrixU().leftCols(r);
  out.singular_values = Eigen::VectorXd::Zero(r);
  out.singular_values.head(static_cast<Eigen::Index>(thin)) = svd.singularValues();
  out.right = Eigen::MatrixXd::Zero(a.cols(), r);
  out.right.leftCols(static_cast<Eigen::Index>(thin)) = svd.matrixV();
  out.discarded_norm = 0.0;
  apply_svd_sign_rule(out.left, out.right);
  return out;
}

QrResult thin_qr(const Eigen::MatrixXd& a) {
  require(all_finite(a), ErrorCode::InvalidInput, "QR input has non-finite entries");
  require(a.rows() >= a.cols(), ErrorCode::InvalidDimension, "thin QR needs rows >= cols");
  const Eigen::Index m = a.rows();
  const Eigen::Index k = a.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  QrResult out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (out.r(i, i) < 0.0) {
      out.r.row(i) *= -1.0;
      out.q.col(i) *= -1.0;
    }
  }
  return out;
}

Eigen::VectorXd weighted_minnorm_solve(const Eigen::MatrixXd& x, const Eigen::VectorXd& d_weights,
                                       const Eigen::VectorXd& rhs) {
  require(all_finite(x) && d_weights.allFinite() && rhs.allFinite(), ErrorCode::InvalidInput,
          "min-norm inputs must be finite");
  require(d_weights.size() == x.cols(), ErrorCode::DimensionMismatch, "weight count must equal column count");
  require(rhs.size() == x.rows(), ErrorCode::DimensionMismatch, "rhs length must equal row count");
  require(x.cols() >= x.rows(), ErrorCode::InvalidDimension, "need at least as many columns as rows");
  require((d_weights.array() > 0.0).all(), ErrorCode::InvalidInput, "weights must be positive");

  const Eigen::VectorXd w = d_weights.cwiseInverse();
  const Eigen::MatrixXd b = x * w.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cutoff =
      static_cast<double>(std::max(b.rows(), b.cols())) * std::numeric_limits<double>::epsilon() * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  if (rank < x.rows())
    fail(ErrorCode::DegenerateNeighborhood,
         "neighbor matrix has row rank " + std::to_string(rank) + " < " + std::to_string(x.rows()));

  const Eigen::VectorXd coeffs = svd.matrixU().leftCols(rank).transpose() * rhs;
  const Eigen::VectorXd y = svd.matrixV().leftCols(rank) * coeffs.cwiseQuotient(s.head(rank));
  return w.asDiagonal() * y;
}

}  // namespace trom

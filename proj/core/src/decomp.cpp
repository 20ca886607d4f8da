// SPDX-License-Identifier: Apache-2.0
#include "trom/decomp.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "trom/error.hpp"
#include "trom/linalg.hpp"

namespace trom {

namespace {

void require_snapshot_order(const DenseTensor& phi) {
  require(phi.order() >= 3, ErrorCode::InvalidDimension,
          "snapshot tensors need order >= 3 (space, parameters, time)");
}

void check_cap(std::size_t count, std::size_t cap) {
  if (count > cap)
    fail(ErrorCode::OverflowRisk,
         "reconstruction needs " + std::to_string(count) + " entries, cap is " + std::to_string(cap));
}

double rms_sum(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double TuckerDecomposition::relative_error_bound() const {
  return input_norm > 0.0 ? rms_sum(truncation_residuals) / input_norm : 0.0;
}

Dims TtDecomposition::ranks() const {
  Dims r;
  r.push_back(static_cast<std::size_t>(u.cols()));
  for (const auto& c : carriages) r.push_back(c.dim(2));
  return r;
}

double TtDecomposition::relative_error_bound() const {
  return input_norm > 0.0 ? rms_sum(truncation_residuals) / input_norm : 0.0;
}

Eigen::MatrixXd khatri_rao(const std::vector<const Eigen::MatrixXd*>& factors) {
  require(!factors.empty(), ErrorCode::InvalidDimension, "Khatri-Rao needs at least one factor");
  const Eigen::Index r = factors.front()->cols();
  Eigen::MatrixXd out = *factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const Eigen::MatrixXd& b = *factors[f];
    require(b.cols() == r, ErrorCode::InvalidDimension, "Khatri-Rao factors need equal column counts");
    Eigen::MatrixXd next(out.rows() * b.rows(), r);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      next.middleRows(i * b.rows(), b.rows()) = b.array().rowwise() * out.row(i).array();
    out.swap(next);
  }
  return out;
}

// ---------------------------------------------------------------- CP ----

namespace {

struct AlsRun {
  std::vector<Eigen::MatrixXd> factors;
  double error = std::numeric_limits<double>::infinity();
  std::size_t sweeps = 0;
};

Eigen::MatrixXd hadamard_gram(const std::vector<Eigen::MatrixXd>& factors, std::size_t skip) {
  const Eigen::Index r = factors.front().cols();
  Eigen::MatrixXd g = Eigen::MatrixXd::Ones(r, r);
  for (std::size_t j = 0; j < factors.size(); ++j)
    if (j != skip) g.array() *= (factors[j].transpose() * factors[j]).array();
  return g;
}

Eigen::MatrixXd solve_gram(const Eigen::MatrixXd& g, const Eigen::MatrixXd& mttkrp) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXd x = llt.solve(mttkrp.transpose()).transpose();
    if (x.allFinite()) return x;
  }
  return g.completeOrthogonalDecomposition().solve(mttkrp.transpose()).transpose();
}

std::vector<const Eigen::MatrixXd*> others(const std::vector<Eigen::MatrixXd>& factors, std::size_t skip) {
  std::vector<const Eigen::MatrixXd*> out;
  for (std::size_t j = 0; j < factors.size(); ++j)
    if (j != skip) out.push_back(&factors[j]);
  return out;
}

AlsRun run_als(const std::vector<Eigen::MatrixXd>& unfoldings, double norm, std::vector<Eigen::MatrixXd> factors,
               const CpOptions& options) {
  const std::size_t order = factors.size();
  const std::size_t last = order - 1;
  AlsRun run;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    Eigen::MatrixXd kr_last;
    for (std::size_t k = 0; k < order; ++k) {
      Eigen::MatrixXd kr = khatri_rao(others(factors, k));
      const Eigen::MatrixXd mttkrp = unfoldings[k] * kr;
      factors[k] = solve_gram(hadamard_gram(factors, k), mttkrp);
      if (!factors[k].allFinite())
        fail(ErrorCode::AlsDiverged, "non-finite factor in sweep " + std::to_string(sweep));
      if (k == last) kr_last = std::move(kr);
    }
    const double resid = (unfoldings[last] - factors[last] * kr_last.transpose()).norm();
    if (!std::isfinite(resid)) fail(ErrorCode::AlsDiverged, "non-finite residual in sweep " + std::to_string(sweep));

    for (std::size_t k = 0; k < last; ++k)
      for (Eigen::Index r = 0; r < factors[k].cols(); ++r) {
        const double c = factors[k].col(r).norm();
        if (c > 0.0) {
          factors[k].col(r) /= c;
          factors[last].col(r) *= c;
        }
      }

    const double err = norm > 0.0 ? resid / norm : 0.0;
    run.error = err;
    run.sweeps = sweep;
    if (err < 1e-15 || std::abs(prev - err) < options.rel_change_tol) break;
    prev = err;
  }
  run.factors = std::move(factors);
  return run;
}

}  // namespace

CpDecomposition cp_als(const DenseTensor& phi, const CpOptions& options) {
  require_snapshot_order(phi);
  if (options.rank < 1) fail(ErrorCode::InvalidRank, "CP rank must be >= 1");
  if (options.rank > phi.dim(0))
    fail(ErrorCode::InvalidRank, "CP rank " + std::to_string(options.rank) + " exceeds M = " + std::to_string(phi.dim(0)));
  require(options.restarts >= 1, ErrorCode::InvalidInput, "restarts must be >= 1");
  require(options.max_sweeps >= 1, ErrorCode::InvalidInput, "max_sweeps must be >= 1");

  const std::size_t order = phi.order();
  std::vector<Eigen::MatrixXd> unfoldings;
  unfoldings.reserve(order);
  for (std::size_t k = 0; k < order; ++k) unfoldings.push_back(unfold(phi, k));
  const double norm = frobenius_norm(phi);
  const auto r = static_cast<Eigen::Index>(options.rank);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  AlsRun best;
  for (std::size_t t = 0; t < options.restarts; ++t) {
    std::vector<Eigen::MatrixXd> init(order);
    for (std::size_t k = 0; k < order; ++k) {
      init[k].resize(static_cast<Eigen::Index>(phi.dim(k)), r);
      for (Eigen::Index j = 0; j < init[k].cols(); ++j)
        for (Eigen::Index i = 0; i < init[k].rows(); ++i) init[k](i, j) = gauss(rng);
    }
    AlsRun run = run_als(unfoldings, norm, std::move(init), options);
    if (run.error < best.error) best = std::move(run);
  }

  CpDecomposition d;
  d.rank = options.rank;
  d.u_factors = std::move(best.factors.front());
  d.v_factors = std::move(best.factors.back());
  for (std::size_t k = 1; k + 1 < order; ++k) d.sigma_factors.push_back(std::move(best.factors[k]));
  d.relative_error = best.error;
  d.sweeps = best.sweeps;
  d.seed = options.seed;
  return d;
}

// ------------------------------------------------------------- HOSVD ----

TuckerDecomposition hosvd(const DenseTensor& phi, const HosvdMode& mode) {
  require_snapshot_order(phi);
  const std::size_t order = phi.order();
  const double norm = frobenius_norm(phi);
  double tau = 0.0;
  const Dims* ranks = nullptr;
  if (const auto* acc = std::get_if<HosvdAccuracy>(&mode)) {
    if (!(acc->eps > 0.0) || !std::isfinite(acc->eps)) fail(ErrorCode::InvalidTolerance, "HOSVD accuracy must be > 0");
    tau = acc->eps * norm / std::sqrt(static_cast<double>(order));
  } else {
    ranks = &std::get<HosvdRanks>(mode).ranks;
    if (ranks->size() != order) fail(ErrorCode::InvalidRank, "need one Tucker rank per mode");
    for (std::size_t k = 0; k < order; ++k)
      if ((*ranks)[k] < 1 || (*ranks)[k] > phi.dim(k))
        fail(ErrorCode::InvalidRank, "Tucker rank out of range for mode " + std::to_string(k));
  }

  TuckerDecomposition d;
  d.input_norm = norm;
  std::vector<Eigen::MatrixXd> bases(order);
  DenseTensor y = phi;
  for (std::size_t k = 0; k < order; ++k) {
    SvdResult svd;
    if (k == 0) {
      const Eigen::MatrixXd a = leading_mode_view(y);
      svd = ranks ? leading_left_vectors(a, (*ranks)[k]) : truncated_svd(a, SvdTolerance{tau});
    } else {
      const Eigen::MatrixXd a = unfold(y, k);
      svd = ranks ? leading_left_vectors(a, (*ranks)[k]) : truncated_svd(a, SvdTolerance{tau});
    }
    d.truncation_residuals.push_back(svd.discarded_norm);
    y = mode_multiply(y, svd.left.transpose(), k);
    bases[k] = std::move(svd.left);
  }
  d.core = std::move(y);
  d.u = std::move(bases.front());
  d.v = std::move(bases.back());
  for (std::size_t k = 1; k + 1 < order; ++k) d.s_factors.push_back(bases[k].transpose());
  return d;
}

// ---------------------------------------------------------------- TT ----

TtDecomposition tt_svd(const DenseTensor& phi, double eps) {
  require_snapshot_order(phi);
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::InvalidTolerance, "TT accuracy must be > 0");
  const std::size_t order = phi.order();
  const double norm = frobenius_norm(phi);
  const double tau = eps * norm / std::sqrt(static_cast<double>(order - 1));

  TtDecomposition d;
  d.input_norm = norm;
  // Remaining tensor as a row-major (r_k * n_k) x rest matrix.
  RowMajorMatrix c = leading_mode_view(phi);
  std::size_t r_prev = 1;
  for (std::size_t k = 0; k + 1 < order; ++k) {
    const std::size_t n_k = phi.dim(k);
    const std::size_t rows = r_prev * n_k;
    const std::size_t cols = static_cast<std::size_t>(c.size()) / rows;
    const Eigen::Map<const RowMajorMatrix> a(c.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    SvdResult svd = truncated_svd(Eigen::MatrixXd(a), SvdTolerance{tau});
    d.truncation_residuals.push_back(svd.discarded_norm);
    const auto r_next = static_cast<std::size_t>(svd.left.cols());
    if (k == 0) {
      d.u = svd.left;
    } else {
      std::vector<double> core(rows * r_next);
      Eigen::Map<RowMajorMatrix>(core.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(r_next)) =
          svd.left;
      d.carriages.emplace_back(Dims{r_prev, n_k, r_next}, std::move(core));
    }
    c = svd.singular_values.asDiagonal() * svd.right.transpose();
    r_prev = r_next;
  }
  // c is r_{D+1} x N and its rows are orthogonal with norms sigma.
  d.v = c.transpose();
  d.w_scale = d.v.colwise().norm().transpose();
  return d;
}

// -------------------------------------------------------- reconstruct ----

DenseTensor reconstruct(const CpDecomposition& d, std::size_t cap) {
  Dims dims{static_cast<std::size_t>(d.u_factors.rows())};
  std::vector<const Eigen::MatrixXd*> rest;
  for (const auto& s : d.sigma_factors) {
    dims.push_back(static_cast<std::size_t>(s.rows()));
    rest.push_back(&s);
  }
  dims.push_back(static_cast<std::size_t>(d.v_factors.rows()));
  rest.push_back(&d.v_factors);
  check_cap(dims_product(dims), cap);
  const Eigen::MatrixXd kr = khatri_rao(rest);
  std::vector<double> values(dims_product(dims));
  Eigen::Map<RowMajorMatrix>(values.data(), d.u_factors.rows(), kr.rows()).noalias() = d.u_factors * kr.transpose();
  return DenseTensor(std::move(dims), std::move(values));
}

DenseTensor reconstruct(const TuckerDecomposition& d, std::size_t cap) {
  Dims dims{static_cast<std::size_t>(d.u.rows())};
  for (const auto& s : d.s_factors) dims.push_back(static_cast<std::size_t>(s.cols()));
  dims.push_back(static_cast<std::size_t>(d.v.rows()));
  check_cap(dims_product(dims), cap);
  DenseTensor t = mode_multiply(d.core, d.u, 0);
  for (std::size_t i = 0; i < d.s_factors.size(); ++i) t = mode_multiply(t, d.s_factors[i].transpose(), i + 1);
  return mode_multiply(t, d.v, t.order() - 1);
}

DenseTensor reconstruct(const TtDecomposition& d, std::size_t cap) {
  Dims dims{static_cast<std::size_t>(d.u.rows())};
  for (const auto& c : d.carriages) dims.push_back(c.dim(1));
  dims.push_back(static_cast<std::size_t>(d.v.rows()));
  check_cap(dims_product(dims), cap);
  Eigen::MatrixXd acc = d.u;  // rows: leading modes, cols: current rank
  for (const auto& c : d.carriages) {
    const Eigen::Map<const RowMajorMatrix> core(c.data(), static_cast<Eigen::Index>(c.dim(0)),
                                                static_cast<Eigen::Index>(c.dim(1) * c.dim(2)));
    const RowMajorMatrix prod = acc * core;  // row-major (P) x (n r') == (P n) x r'
    acc = Eigen::Map<const RowMajorMatrix>(prod.data(), prod.rows() * static_cast<Eigen::Index>(c.dim(1)),
                                           static_cast<Eigen::Index>(c.dim(2)));
  }
  std::vector<double> values(dims_product(dims));
  Eigen::Map<RowMajorMatrix>(values.data(), acc.rows(), d.v.rows()).noalias() = acc * d.v.transpose();
  return DenseTensor(std::move(dims), std::move(values));
}

}  // namespace trom

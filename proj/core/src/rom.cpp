// SPDX-License-Identifier: Apache-2.0
#include "trom/rom.hpp"

#include <string>

#include "trom/error.hpp"
#include "trom/linalg.hpp"

namespace trom {

std::string_view format_label(Format f) noexcept {
  switch (f) {
    case Format::Cp: return "cp";
    case Format::Hosvd: return "hosvd";
    case Format::Tt: return "tt";
  }
  return "unknown";
}

Format parse_format(std::string_view name) {
  if (name == "cp") return Format::Cp;
  if (name == "hosvd") return Format::Hosvd;
  if (name == "tt") return Format::Tt;
  fail(ErrorCode::InvalidInput, "unknown format '" + std::string(name) + "'");
}

// ------------------------------------------------------------- offline ----

std::pair<UniversalBasis, OnlinePayloadCP> offline_cp(const CpDecomposition& d) {
  const auto m = static_cast<std::size_t>(d.u_factors.rows());
  const auto n = static_cast<std::size_t>(d.v_factors.rows());
  if (d.rank > m) fail(ErrorCode::InvalidRank, "CP rank exceeds the state dimension");
  QrResult qu = thin_qr(d.u_factors);
  OnlinePayloadCP p;
  p.r_u = std::move(qu.r);
  if (d.rank <= n) {
    p.r_v = thin_qr(d.v_factors).r;
  } else {
    p.r_v = d.v_factors;  // V is the identity in this case
  }
  p.sigma_factors = d.sigma_factors;
  return {UniversalBasis{std::move(qu.q), Format::Cp}, std::move(p)};
}

std::pair<UniversalBasis, OnlinePayloadHOSVD> offline_hosvd(const TuckerDecomposition& d) {
  return {UniversalBasis{d.u, Format::Hosvd}, OnlinePayloadHOSVD{d.core, d.s_factors}};
}

std::pair<UniversalBasis, OnlinePayloadTT> offline_tt(const TtDecomposition& d) {
  return {UniversalBasis{d.u, Format::Tt}, OnlinePayloadTT{d.carriages, d.w_scale}};
}

std::pair<UniversalBasis, OnlinePayload> offline(const AnyDecomposition& d) {
  return std::visit(
      [](const auto& x) -> std::pair<UniversalBasis, OnlinePayload> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CpDecomposition>) {
          auto [u, p] = offline_cp(x);
          return {std::move(u), std::move(p)};
        } else if constexpr (std::is_same_v<T, TuckerDecomposition>) {
          auto [u, p] = offline_hosvd(x);
          return {std::move(u), std::move(p)};
        } else {
          auto [u, p] = offline_tt(x);
          return {std::move(u), std::move(p)};
        }
      },
      d);
}

// ------------------------------------------------------------ metadata ----

Format payload_format(const OnlinePayload& p) noexcept {
  switch (p.index()) {
    case 0: return Format::Cp;
    case 1: return Format::Hosvd;
    default: return Format::Tt;
  }
}

std::vector<std::size_t> payload_axis_sizes(const OnlinePayload& p) {
  std::vector<std::size_t> out;
  if (const auto* cp = std::get_if<OnlinePayloadCP>(&p)) {
    for (const auto& s : cp->sigma_factors) out.push_back(static_cast<std::size_t>(s.rows()));
  } else if (const auto* h = std::get_if<OnlinePayloadHOSVD>(&p)) {
    for (const auto& s : h->s_factors) out.push_back(static_cast<std::size_t>(s.cols()));
  } else {
    for (const auto& c : std::get<OnlinePayloadTT>(p).carriages) out.push_back(c.dim(1));
  }
  return out;
}

std::vector<std::size_t> payload_ranks(const OnlinePayload& p) {
  if (const auto* cp = std::get_if<OnlinePayloadCP>(&p)) return {cp->rank()};
  if (const auto* h = std::get_if<OnlinePayloadHOSVD>(&p)) return h->core.dims();
  const auto& tt = std::get<OnlinePayloadTT>(p);
  std::vector<std::size_t> r;
  for (const auto& c : tt.carriages) r.push_back(c.dim(0));
  r.push_back(static_cast<std::size_t>(tt.w_scale.size()));
  return r;
}

std::size_t payload_count(const OnlinePayload& p) {
  if (const auto* cp = std::get_if<OnlinePayloadCP>(&p)) {
    const std::size_t r = cp->rank();
    std::size_t count = r * (r + 1) / 2;
    count += cp->square_r_v() ? r * (r + 1) / 2 : static_cast<std::size_t>(cp->r_v.size());
    for (const auto& s : cp->sigma_factors) count += static_cast<std::size_t>(s.size());
    return count;
  }
  if (const auto* h = std::get_if<OnlinePayloadHOSVD>(&p)) {
    std::size_t count = h->core.size();
    for (const auto& s : h->s_factors) count += static_cast<std::size_t>(s.size());
    return count;
  }
  const auto& tt = std::get<OnlinePayloadTT>(p);
  std::size_t count = static_cast<std::size_t>(tt.w_scale.size());
  for (const auto& c : tt.carriages) count += c.size();
  return count;
}

std::size_t column_budget(const OnlinePayload& p) {
  if (const auto* cp = std::get_if<OnlinePayloadCP>(&p)) return cp->rank();
  if (const auto* h = std::get_if<OnlinePayloadHOSVD>(&p))
    return std::min(h->core.dim(0), h->core.dim(h->core.order() - 1));
  const auto& tt = std::get<OnlinePayloadTT>(p);
  return std::min(tt.carriages.front().dim(0), static_cast<std::size_t>(tt.w_scale.size()));
}

std::size_t universal_dim(const OnlinePayload& p) {
  if (const auto* cp = std::get_if<OnlinePayloadCP>(&p)) return cp->rank();
  if (const auto* h = std::get_if<OnlinePayloadHOSVD>(&p)) return h->core.dim(0);
  return std::get<OnlinePayloadTT>(p).carriages.front().dim(0);
}

// -------------------------------------------------------------- online ----

namespace {

void check_axes(const std::vector<std::size_t>& sizes, const InterpVectors& e) {
  if (e.axes.size() != sizes.size())
    fail(ErrorCode::DimensionMismatch, "got " + std::to_string(e.axes.size()) + " interpolation vectors for " +
                                           std::to_string(sizes.size()) + " parameter modes");
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (static_cast<std::size_t>(e.axes[i].size()) != sizes[i])
      fail(ErrorCode::DimensionMismatch, "interpolation vector " + std::to_string(i) + " has length " +
                                             std::to_string(e.axes[i].size()) + ", mode has " +
                                             std::to_string(sizes[i]));
}

}  // namespace

Eigen::MatrixXd core_matrix(const OnlinePayload& p, const InterpVectors& e) {
  check_axes(payload_axis_sizes(p), e);
  if (const auto* cp = std::get_if<OnlinePayloadCP>(&p)) {
    Eigen::VectorXd s = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(cp->rank()));
    for (std::size_t i = 0; i < cp->sigma_factors.size(); ++i)
      s.array() *= (cp->sigma_factors[i].transpose() * e.axes[i]).array();
    return cp->r_u * s.asDiagonal() * cp->r_v.transpose();
  }
  if (const auto* h = std::get_if<OnlinePayloadHOSVD>(&p)) {
    DenseTensor c = h->core;
    for (std::size_t i = 0; i < h->s_factors.size(); ++i) {
      const Eigen::VectorXd w = h->s_factors[i] * e.axes[i];
      c = kmode_product(c, w, 1);
    }
    return c.to_matrix();
  }
  const auto& tt = std::get<OnlinePayloadTT>(p);
  Eigen::MatrixXd acc;
  for (std::size_t i = 0; i < tt.carriages.size(); ++i) {
    const Eigen::MatrixXd f = kmode_product(tt.carriages[i], e.axes[i], 1).to_matrix();
    acc = i == 0 ? f : Eigen::MatrixXd(acc * f);
  }
  return acc;
}

LocalBasis local_basis(const OnlinePayload& p, const InterpVectors& e, std::size_t n) {
  const std::size_t budget = column_budget(p);
  if (n < 1 || n > budget)
    fail(ErrorCode::RankBudgetExceeded,
         "n = " + std::to_string(n) + " outside the column budget 1.." + std::to_string(budget));
  Eigen::MatrixXd c = core_matrix(p, e);
  if (const auto* tt = std::get_if<OnlinePayloadTT>(&p)) c = c * tt->w_scale.asDiagonal();

  SvdResult svd = thin_svd(c);
  LocalBasis lb;
  lb.n = n;
  lb.singular_values = svd.singular_values;
  const std::size_t thin = static_cast<std::size_t>(svd.left.cols());
  if (n <= thin) {
    lb.coords = svd.left.leftCols(static_cast<Eigen::Index>(n));
  } else {
    lb.coords = leading_left_vectors(c, n).left;
  }
  const double s1 = svd.singular_values.size() > 0 ? svd.singular_values(0) : 0.0;
  std::size_t numerical_rank = 0;
  for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i)
    if (svd.singular_values(i) > 1e-14 * s1) ++numerical_rank;
  lb.completed = n > numerical_rank ? n - numerical_rank : 0;
  return lb;
}

Eigen::MatrixXd pod_basis(const DenseTensor& phi, std::size_t n) {
  const Eigen::MatrixXd a = leading_mode_view(phi);
  return truncated_svd(a, SvdRank{n}).left;
}

Eigen::MatrixXd extract_dense(const DenseTensor& phi, const InterpVectors& e) {
  require(phi.order() >= 3, ErrorCode::InvalidDimension, "extraction needs a snapshot tensor of order >= 3");
  std::vector<std::size_t> sizes(phi.dims().begin() + 1, phi.dims().end() - 1);
  check_axes(sizes, e);
  DenseTensor t = phi;
  for (const auto& v : e.axes) t = kmode_product(t, v, 1);
  return t.to_matrix();
}

Eigen::MatrixXd extract_dense(const AnyDecomposition& d, const InterpVectors& e) {
  if (const auto* cp = std::get_if<CpDecomposition>(&d)) {
    std::vector<std::size_t> sizes;
    for (const auto& s : cp->sigma_factors) sizes.push_back(static_cast<std::size_t>(s.rows()));
    check_axes(sizes, e);
    Eigen::VectorXd s = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(cp->rank));
    for (std::size_t i = 0; i < cp->sigma_factors.size(); ++i)
      s.array() *= (cp->sigma_factors[i].transpose() * e.axes[i]).array();
    return cp->u_factors * s.asDiagonal() * cp->v_factors.transpose();
  }
  if (const auto* tk = std::get_if<TuckerDecomposition>(&d)) {
    const Eigen::MatrixXd c = core_matrix(OnlinePayloadHOSVD{tk->core, tk->s_factors}, e);
    return tk->u * c * tk->v.transpose();
  }
  const auto& tt = std::get<TtDecomposition>(d);
  const Eigen::MatrixXd c = core_matrix(OnlinePayloadTT{tt.carriages, tt.w_scale}, e);
  return tt.u * c * tt.v.transpose();
}

}  // namespace trom

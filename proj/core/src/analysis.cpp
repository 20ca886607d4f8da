// SPDX-License-Identifier: Apache-2.0
#include "trom/analysis.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "json_util.hpp"
#include "trom/error.hpp"
#include "trom/snapshots.hpp"

namespace trom {

double projection_error(const Eigen::MatrixXd& snapshots, const Eigen::MatrixXd& z) {
  if (z.rows() != snapshots.rows())
    fail(ErrorCode::DimensionMismatch, "basis has " + std::to_string(z.rows()) + " rows, snapshots have " +
                                           std::to_string(snapshots.rows()));
  require(snapshots.size() > 0, ErrorCode::InvalidInput, "empty snapshot matrix");
  const Eigen::MatrixXd r = snapshots - z * (z.transpose() * snapshots);
  return r.squaredNorm() / static_cast<double>(snapshots.size());
}

double representation_error(const DenseTensor& phi, const Eigen::MatrixXd& z, const InterpVectors& e, bool take_sqrt) {
  const double v = projection_error(extract_dense(phi, e), z);
  return take_sqrt ? std::sqrt(v) : v;
}

Eigen::MatrixXd reduced_basis(const UniversalBasis& u, const LocalBasis& lb) {
  require(u.u.cols() == lb.coords.rows(), ErrorCode::DimensionMismatch, "coordinates do not match the universal basis");
  return u.u * lb.coords;
}

double in_sample_error(const DenseTensor& phi, const SamplingScheme& sampling, const BasisProvider& basis,
                       bool take_sqrt) {
  const std::vector<Point> pts = sampling_points(sampling);
  const std::size_t k = pts.size();
  require(phi.order() >= 3 && phi.size() == phi.dim(0) * k * phi.dim(phi.order() - 1), ErrorCode::DimensionMismatch,
          "snapshot tensor does not match the sampling");
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum += projection_error(snapshot_block(phi, j), basis(j, pts[j]));
  const double v = sum / static_cast<double>(k);
  return take_sqrt ? std::sqrt(v) : v;
}

double solution_error(const Trajectory& approx, const Trajectory& truth) {
  if (approx.states.rows() != truth.states.rows() || approx.states.cols() != truth.states.cols())
    fail(ErrorCode::DimensionMismatch, "trajectories differ in shape");
  require(approx.times.size() == truth.times.size(), ErrorCode::DimensionMismatch, "time grids differ");
  for (std::size_t k = 0; k < truth.times.size(); ++k)
    require(std::abs(approx.times[k] - truth.times[k]) <= 1e-12 * std::max(1.0, std::abs(truth.times[k])),
            ErrorCode::DimensionMismatch, "time grids differ");
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index k = 0; k < truth.states.cols(); ++k) {
    num = std::max(num, (approx.states.col(k) - truth.states.col(k)).norm());
    den = std::max(den, truth.states.col(k).norm());
  }
  if (den == 0.0) fail(ErrorCode::ZeroDenominator, "reference trajectory is identically zero");
  return num / den;
}

EstimateTerms estimate_terms(const EstimateInputs& in) {
  const double nm = static_cast<double>(in.state_dim) * static_cast<double>(in.time_steps);
  const double d = in.general_sampling ? 1.0 : static_cast<double>(in.parameter_dim);
  const double ce = std::pow(in.c_e, 2.0 * d);
  EstimateTerms t;
  t.term1_as_written = ce * in.eps * in.eps * in.phi_norm / nm;
  t.term1_squared = ce * in.eps * in.eps * in.phi_norm * in.phi_norm / nm;
  double tail = 0.0;
  for (Eigen::Index i = static_cast<Eigen::Index>(in.n); i < in.sigma.size(); ++i) tail += in.sigma(i) * in.sigma(i);
  t.term2 = tail / nm;
  t.term3_scaffold = in.general_sampling ? in.delta * in.delta : std::pow(in.delta, 2.0 * in.p);
  return t;
}

// ------------------------------------------------------- compression ----

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    fail(ErrorCode::OverflowRisk, "entry count overflows 64 bits");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) fail(ErrorCode::OverflowRisk, "entry count overflows 64 bits");
  return a + b;
}

void require_ranks(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidRanks, what);
}

}  // namespace

CompressionReport compression_report(Format format, const std::vector<std::size_t>& ranks,
                                     const std::vector<std::size_t>& axis_sizes, std::size_t m, std::size_t n) {
  require(m > 0 && n > 0 && !axis_sizes.empty(), ErrorCode::InvalidInput, "sizes must be positive");
  for (std::size_t a : axis_sizes) require(a > 0, ErrorCode::InvalidInput, "axis sizes must be positive");
  for (std::size_t r : ranks) require_ranks(r > 0, "ranks must be positive");
  const std::size_t d = axis_sizes.size();
  CompressionReport rep;
  rep.format = format;
  rep.ranks = ranks;
  rep.axis_sizes = axis_sizes;

  std::uint64_t k = 1;
  for (std::size_t a : axis_sizes) k = checked_mul(k, a);
  rep.full_count = checked_mul(checked_mul(m, k), n);

  std::uint64_t online = 0;
  if (format == Format::Cp) {
    require_ranks(ranks.size() == 1, "CP takes one rank");
    const std::uint64_t r = ranks[0];
    require_ranks(r <= m, "CP rank exceeds the state dimension");
    const std::uint64_t tri = checked_mul(r, r + 1) / 2;
    online = checked_add(tri, r <= n ? tri : checked_mul(n, r));
    for (std::size_t a : axis_sizes) online = checked_add(online, checked_mul(r, a));
  } else if (format == Format::Hosvd) {
    require_ranks(ranks.size() == d + 2, "HOSVD takes D + 2 ranks");
    require_ranks(ranks.front() <= m && ranks.back() <= n, "HOSVD ranks exceed the tensor size");
    std::uint64_t core = 1;
    for (std::size_t r : ranks) core = checked_mul(core, r);
    online = core;
    for (std::size_t i = 0; i < d; ++i) {
      require_ranks(ranks[i + 1] <= axis_sizes[i], "HOSVD rank exceeds its mode size");
      online = checked_add(online, checked_mul(ranks[i + 1], axis_sizes[i]));
    }
  } else {
    require_ranks(ranks.size() == d + 1, "TT takes D + 1 ranks");
    require_ranks(ranks.front() <= m && ranks.back() <= n, "TT ranks exceed the tensor size");
    for (std::size_t i = 0; i < d; ++i)
      online = checked_add(online, checked_mul(checked_mul(ranks[i], axis_sizes[i]), ranks[i + 1]));
    online = checked_add(online, ranks.back());
  }
  rep.online_count = online;
  const std::uint64_t g = std::gcd(rep.full_count, online);
  rep.cf_numerator = rep.full_count / g;
  rep.cf_denominator = online / g;
  return rep;
}

CompressionReport compression_report(const PayloadFile& file) {
  return compression_report(payload_format(file.payload), payload_ranks(file.payload),
                            payload_axis_sizes(file.payload), file.state_dim, file.time_steps);
}

std::string compression_report_json(const CompressionReport& r) {
  detail::json j;
  j["format"] = std::string(format_label(r.format));
  j["ranks"] = r.ranks;
  j["axis_sizes"] = r.axis_sizes;
  j["full_count"] = r.full_count;
  j["online_count"] = r.online_count;
  j["cf"] = {{"numerator", r.cf_numerator}, {"denominator", r.cf_denominator}, {"value", r.compression_factor()}};
  return j.dump(2);
}

// ----------------------------------------------------------- methods ----

std::string_view method_label(Method m) noexcept {
  switch (m) {
    case Method::Pod: return "pod";
    case Method::Cp: return "cp";
    case Method::Hosvd: return "hosvd";
    case Method::Tt: return "tt";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name.starts_with("trom-")) name.remove_prefix(5);
  if (name == "pod") return Method::Pod;
  if (name == "cp") return Method::Cp;
  if (name == "hosvd") return Method::Hosvd;
  if (name == "tt") return Method::Tt;
  fail(ErrorCode::InvalidInput, "unknown method '" + std::string(name) + "'");
}

}  // namespace trom

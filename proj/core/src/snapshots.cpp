// SPDX-License-Identifier: Apache-2.0
#include "trom/snapshots.hpp"

#include <sstream>
#include <string>

#include "trom/error.hpp"

namespace trom {

namespace {

std::string format_point(const Point& p) {
  std::ostringstream s;
  s.precision(17);
  s << '(';
  for (std::size_t i = 0; i < p.size(); ++i) s << (i ? ", " : "") << p[i];
  s << ')';
  return s.str();
}

}  // namespace

DenseTensor generate_snapshots(const AffineSystem& sys, const SamplingScheme& sampling, double dt, std::size_t steps) {
  if (sampling_box(sampling).dimension() != sys.parameter_dim())
    fail(ErrorCode::DimensionMismatch, "sampling has " + std::to_string(sampling_box(sampling).dimension()) +
                                           " parameters, model takes " + std::to_string(sys.parameter_dim()));
  const std::vector<Point> pts = sampling_points(sampling);
  const std::size_t m = sys.state_dim();
  const std::size_t k = pts.size();
  Dims dims{m};
  for (std::size_t n : parameter_mode_sizes(sampling)) dims.push_back(n);
  dims.push_back(steps);
  std::vector<double> values(m * k * steps);
  for (std::size_t j = 0; j < k; ++j) {
    Trajectory t;
    try {
      t = crank_nicolson(sys, pts[j], dt, steps);
    } catch (const Error& e) {
      fail(e.code(), std::string(e.what()) + " at alpha = " + format_point(pts[j]));
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t s = 0; s < steps; ++s)
        values[(i * k + j) * steps + s] = t.states(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s));
  }
  return DenseTensor(std::move(dims), std::move(values));
}

Eigen::MatrixXd snapshot_block(const DenseTensor& phi, std::size_t sample) {
  require(phi.order() >= 3, ErrorCode::InvalidDimension, "snapshot tensor must have order >= 3");
  const std::size_t m = phi.dim(0);
  const std::size_t n = phi.dim(phi.order() - 1);
  const std::size_t k = phi.size() / (m * n);
  require(sample < k, ErrorCode::InvalidInput, "sample index out of range");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t s = 0; s < n; ++s)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = phi[(i * k + sample) * n + s];
  return out;
}

}  // namespace trom

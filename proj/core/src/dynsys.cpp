// SPDX-License-Identifier: Apache-2.0
#include "trom/dynsys.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "trom/error.hpp"
#include "trom/tensor_io.hpp"

namespace trom {

Coefficient constant_coefficient(double value) {
  return [value](std::span<const double>) { return value; };
}

Coefficient parameter_coefficient(std::size_t index) {
  return [index](std::span<const double> a) { return a[index]; };
}

AffineSystem::AffineSystem(SparseMatrix mass, std::vector<AffineTerm> terms, std::vector<AffineForcing> forcings,
                           Eigen::VectorXd initial_state, std::size_t parameter_dim)
    : mass_(std::move(mass)),
      terms_(std::move(terms)),
      forcings_(std::move(forcings)),
      initial_(std::move(initial_state)),
      parameter_dim_(parameter_dim) {
  const Eigen::Index m = mass_.rows();
  require(m > 0 && mass_.cols() == m, ErrorCode::DimensionMismatch, "mass matrix must be square and nonempty");
  for (const auto& t : terms_)
    require(t.a.rows() == m && t.a.cols() == m, ErrorCode::DimensionMismatch, "term matrix has wrong size");
  for (const auto& f : forcings_) require(f.g.size() == m, ErrorCode::DimensionMismatch, "forcing vector has wrong size");
  require(initial_.size() == m, ErrorCode::DimensionMismatch, "initial state has wrong size");
  require(SparseMatrix(mass_ - SparseMatrix(mass_.transpose())).norm() <= 1e-12 * mass_.norm(),
          ErrorCode::InvalidInput, "mass matrix must be symmetric");
  Eigen::SimplicialLLT<SparseMatrix> llt(mass_);
  require(llt.info() == Eigen::Success, ErrorCode::InvalidInput, "mass matrix must be positive definite");
}

SparseMatrix AffineSystem::operator_at(std::span<const double> alpha) const {
  require(alpha.size() == parameter_dim_, ErrorCode::DimensionMismatch, "parameter vector has wrong length");
  SparseMatrix a(mass_.rows(), mass_.cols());
  for (const auto& t : terms_) {
    const double f = t.coef(alpha);
    if (f != 0.0) a += f * t.a;
  }
  return a;
}

Eigen::VectorXd AffineSystem::forcing_at(std::span<const double> alpha) const {
  require(alpha.size() == parameter_dim_, ErrorCode::DimensionMismatch, "parameter vector has wrong length");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(mass_.rows());
  for (const auto& f : forcings_) g += f.coef(alpha) * f.g;
  return g;
}

Eigen::MatrixXd ReducedSystem::operator_at(std::span<const double> alpha) const {
  require(alpha.size() == parameter_dim, ErrorCode::DimensionMismatch, "parameter vector has wrong length");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(mass.rows(), mass.cols());
  for (const auto& t : terms) a += t.coef(alpha) * t.a;
  return a;
}

Eigen::VectorXd ReducedSystem::forcing_at(std::span<const double> alpha) const {
  require(alpha.size() == parameter_dim, ErrorCode::DimensionMismatch, "parameter vector has wrong length");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(mass.rows());
  for (const auto& f : forcings) g += f.coef(alpha) * f.g;
  return g;
}

namespace {

void check_steps(double dt, std::size_t steps) {
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::InvalidInput, "time step must be positive");
  require(steps >= 1, ErrorCode::InvalidInput, "need at least one time step");
}

std::vector<double> time_grid(double dt, std::size_t steps) {
  std::vector<double> t(steps);
  for (std::size_t k = 0; k < steps; ++k) t[k] = static_cast<double>(k + 1) * dt;
  return t;
}

}  // namespace

Trajectory crank_nicolson(const AffineSystem& sys, std::span<const double> alpha, double dt, std::size_t steps) {
  check_steps(dt, steps);
  const SparseMatrix a = sys.operator_at(alpha);
  const Eigen::VectorXd g = sys.forcing_at(alpha);
  const SparseMatrix mdt = sys.mass() / dt;
  SparseMatrix lhs = mdt + 0.5 * a;
  const SparseMatrix rhs = mdt - 0.5 * a;
  lhs.makeCompressed();
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(lhs);
  if (lu.info() != Eigen::Success) fail(ErrorCode::SingularStep, "implicit Crank-Nicolson matrix is singular");

  Trajectory out;
  out.times = time_grid(dt, steps);
  out.states.resize(static_cast<Eigen::Index>(sys.state_dim()), static_cast<Eigen::Index>(steps));
  Eigen::VectorXd u = sys.initial_state();
  for (std::size_t k = 0; k < steps; ++k) {
    u = lu.solve(rhs * u + g);
    if (lu.info() != Eigen::Success || !u.allFinite())
      fail(ErrorCode::SingularStep, "implicit solve failed at step " + std::to_string(k + 1));
    out.states.col(static_cast<Eigen::Index>(k)) = u;
  }
  return out;
}

Trajectory crank_nicolson(const ReducedSystem& sys, std::span<const double> alpha, double dt, std::size_t steps) {
  check_steps(dt, steps);
  const Eigen::MatrixXd a = sys.operator_at(alpha);
  const Eigen::VectorXd g = sys.forcing_at(alpha);
  const Eigen::MatrixXd mdt = sys.mass / dt;
  const Eigen::MatrixXd lhs = mdt + 0.5 * a;
  const Eigen::MatrixXd rhs = mdt - 0.5 * a;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
  if (lhs.size() > 0 && !(lu.rcond() > std::numeric_limits<double>::epsilon()))
    fail(ErrorCode::SingularStep, "implicit Crank-Nicolson matrix is singular");

  Trajectory out;
  out.times = time_grid(dt, steps);
  out.states.resize(static_cast<Eigen::Index>(sys.dim()), static_cast<Eigen::Index>(steps));
  Eigen::VectorXd u = sys.initial_state;
  for (std::size_t k = 0; k < steps; ++k) {
    u = lu.solve(rhs * u + g);
    if (!u.allFinite()) fail(ErrorCode::SingularStep, "implicit solve failed at step " + std::to_string(k + 1));
    out.states.col(static_cast<Eigen::Index>(k)) = u;
  }
  return out;
}

ReducedSystem project(const AffineSystem& sys, const Eigen::MatrixXd& z, Stage stage) {
  if (static_cast<std::size_t>(z.rows()) != sys.state_dim())
    fail(ErrorCode::DimensionMismatch, "basis has " + std::to_string(z.rows()) + " rows, system has " +
                                           std::to_string(sys.state_dim()));
  ReducedSystem rs;
  rs.stage = stage;
  rs.parameter_dim = sys.parameter_dim();
  rs.mass = z.transpose() * (sys.mass() * z);
  for (const auto& t : sys.terms()) rs.terms.push_back({t.coef, z.transpose() * (t.a * z)});
  for (const auto& f : sys.forcings()) rs.forcings.push_back({f.coef, z.transpose() * f.g});
  rs.initial_state = z.transpose() * sys.initial_state();
  return rs;
}

ReducedSystem project_universal(const AffineSystem& sys, const UniversalBasis& u) {
  return project(sys, u.u, Stage::Universal);
}

ReducedSystem project_local(const ReducedSystem& rs, const LocalBasis& lb) {
  require(rs.stage == Stage::Universal, ErrorCode::InvalidInput, "local projection needs a universal-stage system");
  const Eigen::MatrixXd& c = lb.coords;
  if (static_cast<std::size_t>(c.rows()) != rs.dim())
    fail(ErrorCode::DimensionMismatch, "local coordinates have " + std::to_string(c.rows()) +
                                           " rows, universal space has " + std::to_string(rs.dim()));
  ReducedSystem out;
  out.stage = Stage::Local;
  out.parameter_dim = rs.parameter_dim;
  out.mass = c.transpose() * rs.mass * c;
  for (const auto& t : rs.terms) out.terms.push_back({t.coef, c.transpose() * t.a * c});
  for (const auto& f : rs.forcings) out.forcings.push_back({f.coef, c.transpose() * f.g});
  out.initial_state = c.transpose() * rs.initial_state;
  return out;
}

Trajectory lift(const Trajectory& reduced, const Eigen::MatrixXd& z) {
  require(z.cols() == reduced.states.rows(), ErrorCode::DimensionMismatch, "basis width differs from reduced state size");
  return Trajectory{reduced.times, z * reduced.states};
}

Trajectory reconstruct_states(const Trajectory& reduced, const UniversalBasis& u, const LocalBasis& lb) {
  require(u.u.cols() == lb.coords.rows(), ErrorCode::DimensionMismatch, "coordinates do not match the universal basis");
  return lift(reduced, u.u * lb.coords);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << "t";
  for (Eigen::Index i = 0; i < t.states.rows(); ++i) out << ",u" << i;
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    out << t.times[k];
    for (Eigen::Index i = 0; i < t.states.rows(); ++i) out << ',' << t.states(i, static_cast<Eigen::Index>(k));
    out << '\n';
  }
}

void write_trajectory_tensor(const std::filesystem::path& path, const Trajectory& t) {
  save_tensor(path, DenseTensor::from_matrix(t.states));
}

}  // namespace trom

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "trom/rom.hpp"

namespace trom {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Coefficient = std::function<double(std::span<const double>)>;

[[nodiscard]] Coefficient constant_coefficient(double value);
/// alpha -> alpha[index]
[[nodiscard]] Coefficient parameter_coefficient(std::size_t index);

struct AffineTerm {
  Coefficient coef;
  SparseMatrix a;
  std::string label;
};

struct AffineForcing {
  Coefficient coef;
  Eigen::VectorXd g;
  std::string label;
};

/// mass u_t + sum_i f_i(alpha) A_i u = sum_j c_j(alpha) g_j. The coefficient
/// functions carry the whole parameter dependence, so one object stands for
/// the family alpha -> system.
class AffineSystem {
 public:
  AffineSystem(SparseMatrix mass, std::vector<AffineTerm> terms, std::vector<AffineForcing> forcings,
               Eigen::VectorXd initial_state, std::size_t parameter_dim);

  [[nodiscard]] std::size_t state_dim() const noexcept { return static_cast<std::size_t>(mass_.rows()); }
  [[nodiscard]] std::size_t parameter_dim() const noexcept { return parameter_dim_; }
  [[nodiscard]] const SparseMatrix& mass() const noexcept { return mass_; }
  [[nodiscard]] const std::vector<AffineTerm>& terms() const noexcept { return terms_; }
  [[nodiscard]] const std::vector<AffineForcing>& forcings() const noexcept { return forcings_; }
  [[nodiscard]] const Eigen::VectorXd& initial_state() const noexcept { return initial_; }

  [[nodiscard]] SparseMatrix operator_at(std::span<const double> alpha) const;
  [[nodiscard]] Eigen::VectorXd forcing_at(std::span<const double> alpha) const;

 private:
  SparseMatrix mass_;
  std::vector<AffineTerm> terms_;
  std::vector<AffineForcing> forcings_;
  Eigen::VectorXd initial_;
  std::size_t parameter_dim_;
};

struct Trajectory {
  std::vector<double> times;  ///< t_1 .. t_N
  Eigen::MatrixXd states;     ///< one column per time
};

enum class Stage { Universal, Local, Direct };

struct ReducedTerm {
  Coefficient coef;
  Eigen::MatrixXd a;
};

struct ReducedForcing {
  Coefficient coef;
  Eigen::VectorXd g;
};

struct ReducedSystem {
  Eigen::MatrixXd mass;
  std::vector<ReducedTerm> terms;
  std::vector<ReducedForcing> forcings;
  Eigen::VectorXd initial_state;
  Stage stage = Stage::Universal;
  std::size_t parameter_dim = 0;

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(mass.rows()); }
  [[nodiscard]] Eigen::MatrixXd operator_at(std::span<const double> alpha) const;
  [[nodiscard]] Eigen::VectorXd forcing_at(std::span<const double> alpha) const;
};

/// Fixed step t_k = k dt, k = 1..N:
///   (M/dt + A/2) u_{k+1} = (M/dt - A/2) u_k + g.
[[nodiscard]] Trajectory crank_nicolson(const AffineSystem& sys, std::span<const double> alpha, double dt,
                                        std::size_t steps);
[[nodiscard]] Trajectory crank_nicolson(const ReducedSystem& sys, std::span<const double> alpha, double dt,
                                        std::size_t steps);

/// Galerkin projection onto the columns of z (orthonormal or not).
[[nodiscard]] ReducedSystem project(const AffineSystem& sys, const Eigen::MatrixXd& z, Stage stage = Stage::Direct);
[[nodiscard]] ReducedSystem project_universal(const AffineSystem& sys, const UniversalBasis& u);
[[nodiscard]] ReducedSystem project_local(const ReducedSystem& rs, const LocalBasis& lb);

/// Lifts reduced states by U * coords.
[[nodiscard]] Trajectory reconstruct_states(const Trajectory& reduced, const UniversalBasis& u, const LocalBasis& lb);
[[nodiscard]] Trajectory lift(const Trajectory& reduced, const Eigen::MatrixXd& z);

/// CSV with a header row; one line per time: t, u_0, ..., u_{M-1}.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t);
/// States as an order-2 (M x N) tensor in the binary tensor format.
void write_trajectory_tensor(const std::filesystem::path& path, const Trajectory& t);

}  // namespace trom

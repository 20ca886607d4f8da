// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace trom {

using Dims = std::vector<std::size_t>;

/// Order-m array of finite reals stored with the last index varying fastest.
///
/// Modes are numbered from 0 in this API: mode 0 is space, the trailing mode
/// is time, and the modes in between are parameter axes.
class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(Dims dims, std::vector<double> values);

  [[nodiscard]] static DenseTensor zeros(Dims dims);
  /// Order-2 tensor with the same entries as the matrix.
  [[nodiscard]] static DenseTensor from_matrix(const Eigen::MatrixXd& m);
  [[nodiscard]] static DenseTensor from_vector(const Eigen::VectorXd& v);

  [[nodiscard]] std::size_t order() const noexcept { return dims_.size(); }
  [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t dim(std::size_t k) const { return dims_.at(k); }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const double* data() const noexcept { return values_.data(); }

  [[nodiscard]] std::size_t linear_index(std::span<const std::size_t> index) const;
  [[nodiscard]] double at(std::span<const std::size_t> index) const;
  [[nodiscard]] double operator[](std::size_t linear) const { return values_[linear]; }

  /// Order-2 tensors only.
  [[nodiscard]] Eigen::MatrixXd to_matrix() const;
  /// Order-1 tensors only.
  [[nodiscard]] Eigen::VectorXd to_vector() const;

  /// Moves the storage out; the tensor is left empty.
  [[nodiscard]] std::vector<double> release() &&;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Dims dims_;
  std::vector<double> values_;
};

[[nodiscard]] std::size_t dims_product(std::span<const std::size_t> dims);

/// Contracts mode k with v; the result has order m-1 (mode k removed).
[[nodiscard]] DenseTensor kmode_product(const DenseTensor& t, std::span<const double> v,
                                        std::size_t k);
[[nodiscard]] DenseTensor kmode_product(const DenseTensor& t, const Eigen::VectorXd& v,
                                        std::size_t k);

/// Mode-k unfolding: row i holds all entries with mode-k index i; columns run
/// over the remaining modes in ascending order with the last one fastest.
[[nodiscard]] Eigen::MatrixXd unfold(const DenseTensor& t, std::size_t k);

/// Inverse of unfold for a tensor of the given dims.
[[nodiscard]] DenseTensor refold(const Eigen::MatrixXd& m, const Dims& dims, std::size_t k);

/// Mode-k matrix product: replaces mode k (size n_k) by a.rows(), contracting
/// with the columns of a (a is r x n_k).
[[nodiscard]] DenseTensor mode_multiply(const DenseTensor& t, const Eigen::MatrixXd& a, std::size_t k);

[[nodiscard]] double frobenius_norm(const DenseTensor& t);

/// Row-major view of the tensor as (dims[0]) x (rest); same as unfold(t, 0)
/// without copying.
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
[[nodiscard]] Eigen::Map<const RowMajorMatrix> leading_mode_view(const DenseTensor& t);
[[nodiscard]] Eigen::Map<const RowMajorMatrix> reshape_view(const DenseTensor& t,
                                                            std::size_t rows);

}  // namespace trom

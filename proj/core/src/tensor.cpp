// SPDX-License-Identifier: Apache-2.0
#include "trom/tensor.hpp"

#include <cmath>
#include <string>

#include "trom/error.hpp"

namespace trom {

std::size_t dims_product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

DenseTensor::DenseTensor(Dims dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  require(!dims_.empty(), ErrorCode::InvalidDimension, "tensor order must be positive");
  for (std::size_t d : dims_) require(d > 0, ErrorCode::InvalidDimension, "tensor dims must be positive");
  if (values_.size() != dims_product(dims_)) {
    fail(ErrorCode::InvalidDimension, "value count " + std::to_string(values_.size()) +
                                          " does not match dims product " +
                                          std::to_string(dims_product(dims_)));
  }
  for (double x : values_) require(std::isfinite(x), ErrorCode::InvalidInput, "tensor entries must be finite");
}

DenseTensor DenseTensor::zeros(Dims dims) {
  const std::size_t n = dims_product(dims);
  return DenseTensor(std::move(dims), std::vector<double>(n, 0.0));
}

DenseTensor DenseTensor::from_matrix(const Eigen::MatrixXd& m) {
  std::vector<double> v(static_cast<std::size_t>(m.size()));
  Eigen::Map<RowMajorMatrix>(v.data(), m.rows(), m.cols()) = m;
  return DenseTensor({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                     std::move(v));
}

DenseTensor DenseTensor::from_vector(const Eigen::VectorXd& v) {
  return DenseTensor({static_cast<std::size_t>(v.size())}, std::vector<double>(v.data(), v.data() + v.size()));
}

std::size_t DenseTensor::linear_index(std::span<const std::size_t> index) const {
  require(index.size() == dims_.size(), ErrorCode::InvalidDimension, "index order mismatch");
  std::size_t lin = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    require(index[k] < dims_[k], ErrorCode::InvalidDimension, "index out of range");
    lin = lin * dims_[k] + index[k];
  }
  return lin;
}

double DenseTensor::at(std::span<const std::size_t> index) const { return values_[linear_index(index)]; }

Eigen::MatrixXd DenseTensor::to_matrix() const {
  require(order() == 2, ErrorCode::InvalidDimension, "to_matrix needs an order-2 tensor");
  return Eigen::Map<const RowMajorMatrix>(values_.data(), static_cast<Eigen::Index>(dims_[0]),
                                          static_cast<Eigen::Index>(dims_[1]));
}

Eigen::VectorXd DenseTensor::to_vector() const {
  require(order() == 1, ErrorCode::InvalidDimension, "to_vector needs an order-1 tensor");
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

std::vector<double> DenseTensor::release() && {
  dims_.clear();
  return std::move(values_);
}

namespace {

struct Split {
  std::size_t left;
  std::size_t mid;
  std::size_t right;
};

Split split_at(const Dims& dims, std::size_t k) {
  Split s{1, dims[k], 1};
  for (std::size_t j = 0; j < k; ++j) s.left *= dims[j];
  for (std::size_t j = k + 1; j < dims.size(); ++j) s.right *= dims[j];
  return s;
}

}  // namespace

DenseTensor kmode_product(const DenseTensor& t, std::span<const double> v, std::size_t k) {
  require(k < t.order(), ErrorCode::InvalidMode, "mode index out of range");
  require(v.size() == t.dim(k), ErrorCode::InvalidDimension, "vector length does not match mode size");
  const Split s = split_at(t.dims(), k);
  std::vector<double> out(s.left * s.right, 0.0);
  const double* src = t.data();
  for (std::size_t l = 0; l < s.left; ++l) {
    double* dst = out.data() + l * s.right;
    for (std::size_t j = 0; j < s.mid; ++j) {
      const double w = v[j];
      if (w == 0.0) continue;
      const double* row = src + (l * s.mid + j) * s.right;
      for (std::size_t r = 0; r < s.right; ++r) dst[r] += w * row[r];
    }
  }
  Dims dims;
  for (std::size_t j = 0; j < t.order(); ++j)
    if (j != k) dims.push_back(t.dim(j));
  if (dims.empty()) dims.push_back(1);  // contracting an order-1 tensor gives a scalar
  return DenseTensor(std::move(dims), std::move(out));
}

DenseTensor kmode_product(const DenseTensor& t, const Eigen::VectorXd& v, std::size_t k) {
  return kmode_product(t, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), k);
}

Eigen::MatrixXd unfold(const DenseTensor& t, std::size_t k) {
  require(k < t.order(), ErrorCode::InvalidMode, "mode index out of range");
  const Split s = split_at(t.dims(), k);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(s.mid), static_cast<Eigen::Index>(s.left * s.right));
  const double* src = t.data();
  for (std::size_t l = 0; l < s.left; ++l)
    for (std::size_t j = 0; j < s.mid; ++j) {
      const double* row = src + (l * s.mid + j) * s.right;
      for (std::size_t r = 0; r < s.right; ++r)
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l * s.right + r)) = row[r];
    }
  return m;
}

DenseTensor refold(const Eigen::MatrixXd& m, const Dims& dims, std::size_t k) {
  require(k < dims.size(), ErrorCode::InvalidMode, "mode index out of range");
  const Split s = split_at(dims, k);
  require(static_cast<std::size_t>(m.rows()) == s.mid && static_cast<std::size_t>(m.cols()) == s.left * s.right,
          ErrorCode::InvalidDimension, "matrix shape does not match the unfolding of dims");
  std::vector<double> out(dims_product(dims));
  for (std::size_t l = 0; l < s.left; ++l)
    for (std::size_t j = 0; j < s.mid; ++j) {
      double* row = out.data() + (l * s.mid + j) * s.right;
      for (std::size_t r = 0; r < s.right; ++r)
        row[r] = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l * s.right + r));
    }
  return DenseTensor(dims, std::move(out));
}

DenseTensor mode_multiply(const DenseTensor& t, const Eigen::MatrixXd& a, std::size_t k) {
  require(k < t.order(), ErrorCode::InvalidMode, "mode index out of range");
  require(static_cast<std::size_t>(a.cols()) == t.dim(k), ErrorCode::InvalidDimension,
          "matrix column count does not match mode size");
  require(a.rows() > 0, ErrorCode::InvalidDimension, "matrix must have rows");
  const Split s = split_at(t.dims(), k);
  const auto r = static_cast<std::size_t>(a.rows());
  std::vector<double> out(s.left * r * s.right);
  for (std::size_t l = 0; l < s.left; ++l) {
    Eigen::Map<const RowMajorMatrix> src(t.data() + l * s.mid * s.right, static_cast<Eigen::Index>(s.mid),
                                         static_cast<Eigen::Index>(s.right));
    Eigen::Map<RowMajorMatrix> dst(out.data() + l * r * s.right, static_cast<Eigen::Index>(r),
                                   static_cast<Eigen::Index>(s.right));
    dst.noalias() = a * src;
  }
  Dims dims = t.dims();
  dims[k] = r;
  return DenseTensor(std::move(dims), std::move(out));
}

double frobenius_norm(const DenseTensor& t) {
  double sum = 0.0;
  bool any_nonzero = false;
  for (double x : t.values()) {
    sum += x * x;
    any_nonzero = any_nonzero || x != 0.0;
  }
  if (std::isfinite(sum) && (sum > 1e-280 || !any_nonzero)) return std::sqrt(sum);

  // Rescaled pass for entries whose squares overflow or underflow.
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : t.values()) {
    if (x == 0.0) continue;
    const double a = std::abs(x);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

Eigen::Map<const RowMajorMatrix> leading_mode_view(const DenseTensor& t) {
  return reshape_view(t, t.dim(0));
}

Eigen::Map<const RowMajorMatrix> reshape_view(const DenseTensor& t, std::size_t rows) {
  require(rows > 0 && t.size() % rows == 0, ErrorCode::InvalidDimension, "reshape row count must divide size");
  return Eigen::Map<const RowMajorMatrix>(t.data(), static_cast<Eigen::Index>(rows),
                                          static_cast<Eigen::Index>(t.size() / rows));
}

}  // namespace trom

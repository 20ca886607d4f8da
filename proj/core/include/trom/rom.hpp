// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "trom/container.hpp"
#include "trom/decomp.hpp"
#include "trom/sampling.hpp"
#include "trom/tensor.hpp"

namespace trom {

enum class Format { Cp, Hosvd, Tt };

[[nodiscard]] std::string_view format_label(Format f) noexcept;
/// Accepts "cp", "hosvd", "tt".
[[nodiscard]] Format parse_format(std::string_view name);

/// Orthonormal basis of the universal space; stays with the offline stage.
struct UniversalBasis {
  Eigen::MatrixXd u;
  Format source_format = Format::Hosvd;

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(u.cols()); }
};

struct OnlinePayloadCP {
  Eigen::MatrixXd r_u;  ///< R x R upper triangular
  /// R x R upper triangular when R <= N; otherwise the N x R factor itself.
  Eigen::MatrixXd r_v;
  std::vector<Eigen::MatrixXd> sigma_factors;  ///< n_i x R

  [[nodiscard]] std::size_t rank() const noexcept { return static_cast<std::size_t>(r_u.cols()); }
  [[nodiscard]] bool square_r_v() const noexcept { return r_v.rows() == r_v.cols(); }
};

struct OnlinePayloadHOSVD {
  DenseTensor core;                        ///< (M~, n~_1 .. n~_D, N~)
  std::vector<Eigen::MatrixXd> s_factors;  ///< n~_i x n_i
};

struct OnlinePayloadTT {
  std::vector<DenseTensor> carriages;  ///< (r~_i, n_i, r~_{i+1})
  Eigen::VectorXd w_scale;             ///< length r~_{D+1}
};

using OnlinePayload = std::variant<OnlinePayloadCP, OnlinePayloadHOSVD, OnlinePayloadTT>;

struct LocalBasis {
  Eigen::MatrixXd coords;           ///< T_r x n, orthonormal columns
  Eigen::VectorXd singular_values;  ///< every singular value of the core matrix
  std::size_t n = 0;
  /// Trailing coordinates taken from the orthonormal completion because the
  /// core's numerical rank (sigma > 1e-14 sigma_1) is below n.
  std::size_t completed = 0;

  [[nodiscard]] bool degenerate() const noexcept { return completed > 0; }
};

[[nodiscard]] std::pair<UniversalBasis, OnlinePayloadCP> offline_cp(const CpDecomposition& d);
[[nodiscard]] std::pair<UniversalBasis, OnlinePayloadHOSVD> offline_hosvd(const TuckerDecomposition& d);
[[nodiscard]] std::pair<UniversalBasis, OnlinePayloadTT> offline_tt(const TtDecomposition& d);
[[nodiscard]] std::pair<UniversalBasis, OnlinePayload> offline(const AnyDecomposition& d);

[[nodiscard]] Format payload_format(const OnlinePayload& p) noexcept;
/// Lengths of the parameter modes the payload expects.
[[nodiscard]] std::vector<std::size_t> payload_axis_sizes(const OnlinePayload& p);
/// CP: [R]; HOSVD: core dims; TT: [r~_1 .. r~_{D+1}].
[[nodiscard]] std::vector<std::size_t> payload_ranks(const OnlinePayload& p);
/// Entries sent online, CP triangles counted as R(R+1)/2.
[[nodiscard]] std::size_t payload_count(const OnlinePayload& p);
/// Largest admissible n for local_basis.
[[nodiscard]] std::size_t column_budget(const OnlinePayload& p);
/// Row count of the core matrix, i.e. the universal space dimension.
[[nodiscard]] std::size_t universal_dim(const OnlinePayload& p);

/// The alpha-specific core matrix (TT without the w_scale factor).
[[nodiscard]] Eigen::MatrixXd core_matrix(const OnlinePayload& p, const InterpVectors& e);

/// SVD of the core matrix (right-scaled by w_scale for TT); coordinates of
/// the first n left singular vectors and all singular values.
[[nodiscard]] LocalBasis local_basis(const OnlinePayload& p, const InterpVectors& e, std::size_t n);

/// First n left singular vectors of the mode-0 unfolding.
[[nodiscard]] Eigen::MatrixXd pod_basis(const DenseTensor& phi, std::size_t n);

/// Chained mode products over the parameter modes: an M x N matrix.
[[nodiscard]] Eigen::MatrixXd extract_dense(const DenseTensor& phi, const InterpVectors& e);
[[nodiscard]] Eigen::MatrixXd extract_dense(const AnyDecomposition& d, const InterpVectors& e);

/// Everything the online stage reads from disk.
struct PayloadFile {
  OnlinePayload payload;
  std::optional<SamplingScheme> sampling;
  double eps = 0.0;  ///< requested accuracy (HOSVD/TT) or 0
  double relative_error = 0.0;  ///< achieved (CP) or bounded (HOSVD/TT)
  std::size_t state_dim = 0;
  std::size_t time_steps = 0;
};

void save_payload(const std::filesystem::path& path, const PayloadFile& file);
[[nodiscard]] PayloadFile load_payload(const std::filesystem::path& path);
void save_universal_basis(const std::filesystem::path& path, const UniversalBasis& basis);
[[nodiscard]] UniversalBasis load_universal_basis(const std::filesystem::path& path);

}  // namespace trom

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

#include "trom/dynsys.hpp"
#include "trom/sampling.hpp"

namespace trom {

/// Heat conduction on [0, length] x [0, height], cell-centred finite
/// differences on nx x ny cells, insulated except for:
///   left side:   -du/dn = alpha_1 (u - 1)          (Biot number alpha_1)
///   top segments x in [0.1,0.3]L, [0.4,0.6]L, [0.7,0.9]L:
///                -du/dn = 1/2 (u - theta_j)
/// Segment temperatures theta_j by parameter count D:
///   D = 1: all 0;  D = 2: all alpha_2;  D = 3: alpha_2, alpha_3, alpha_3;
///   D = 4: alpha_2, alpha_3, alpha_4.
struct HeatModelOptions {
  std::size_t nx = 20;
  std::size_t ny = 20;
  double length = 10.0;
  double height = 4.0;
};

[[nodiscard]] AffineSystem build_heat_model(const HeatModelOptions& opt, std::size_t parameter_dim);
/// Default heat parameter box [0.01, 0.5] x [0, 0.9]^{D-1}.
[[nodiscard]] ParameterBox default_heat_box(std::size_t parameter_dim);

/// w_t = nu Lap w - eta . grad w + f on the unit square, Neumann boundary,
/// eta = (cos a9, sin a9) + curl(h)/pi with h the 8-term cosine polynomial.
/// Face fluxes come from stream-function differences, so the discrete field
/// is divergence-free cell by cell. When the mesh Peclet number bound over
/// the box exceeds 1, isotropic artificial diffusion max|eta| h/2 - nu is
/// added to K, which keeps the system affine.
struct AdvDiffOptions {
  std::size_t nx = 24;
  std::size_t ny = 24;
  double nu = 0.1;
  double source_sigma = 0.05;
  std::array<double, 2> source_center{0.25, 0.25};
};

[[nodiscard]] AffineSystem build_advdiff_model(const AdvDiffOptions& opt, const ParameterBox& box);
/// [-0.05, 0.05]^8 x [0.1 pi, 0.3 pi].
[[nodiscard]] ParameterBox default_advdiff_box();

/// eta(x, alpha) evaluated in closed form.
[[nodiscard]] std::array<double, 2> advection_field(double x1, double x2, std::span<const double> alpha);
/// Stream function psi with eta = (d psi/dx2, -d psi/dx1).
[[nodiscard]] double stream_function(double x1, double x2, std::span<const double> alpha);
/// Net outward face flux per unit area of every cell, as assembled.
[[nodiscard]] Eigen::VectorXd advdiff_cell_divergence(std::size_t nx, std::size_t ny, std::span<const double> alpha);
/// Upper bound of |eta| over the unit square and the box.
[[nodiscard]] double advection_speed_bound(const ParameterBox& box);
/// Artificial diffusion added by build_advdiff_model (0 when not needed).
[[nodiscard]] double artificial_diffusion(const AdvDiffOptions& opt, const ParameterBox& box);

enum class ModelKind { Heat, AdvDiff };

/// JSON model description:
///   {"model": "heat"|"advdiff", "nx", "ny", "parameters" (heat D),
///    "length", "height" (heat), "nu" (advdiff), "box", "dt", "steps"}
struct ModelConfig {
  ModelKind kind = ModelKind::Heat;
  HeatModelOptions heat;
  AdvDiffOptions advdiff;
  ParameterBox box;
  double dt = 0.2;
  std::size_t steps = 50;

  [[nodiscard]] std::size_t parameter_dim() const noexcept { return box.dimension(); }
};

[[nodiscard]] ModelConfig parse_model_config(const std::string& json_text);
[[nodiscard]] ModelConfig load_model_config(const std::filesystem::path& path);
[[nodiscard]] std::string model_config_to_json(const ModelConfig& cfg);
[[nodiscard]] AffineSystem build_model(const ModelConfig& cfg);

}  // namespace trom

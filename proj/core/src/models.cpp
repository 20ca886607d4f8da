// SPDX-License-Identifier: Apache-2.0
#include "trom/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "json_util.hpp"
#include "trom/error.hpp"

namespace trom {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(std::size_t m, const Triplets& t) {
  SparseMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

SparseMatrix scaled_identity(std::size_t m, double s) {
  Triplets t;
  for (std::size_t i = 0; i < m; ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), s);
  return from_triplets(m, t);
}

// Two-point flux conductances between neighboring cells, weighted by c.
void add_diffusion(Triplets& t, std::size_t nx, std::size_t ny, double gx, double gy) {
  auto add_pair = [&](std::size_t a, std::size_t b, double g) {
    const int ia = static_cast<int>(a);
    const int ib = static_cast<int>(b);
    t.emplace_back(ia, ia, g);
    t.emplace_back(ib, ib, g);
    t.emplace_back(ia, ib, -g);
    t.emplace_back(ib, ia, -g);
  };
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t c = j * nx + i;
      if (i + 1 < nx) add_pair(c, c + 1, gx);
      if (j + 1 < ny) add_pair(c, c + nx, gy);
    }
}

// Frequencies (a, b) of h_i = cos(a pi x1) cos(b pi x2).
constexpr std::array<std::array<int, 2>, 8> kModes{{{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2}}};

double h_term(std::size_t i, double x1, double x2) {
  const double pi = std::numbers::pi;
  return std::cos(kModes[i][0] * pi * x1) * std::cos(kModes[i][1] * pi * x2);
}

// Stream function of one affine component: 0 -> x2 (cos a9), 1 -> -x1
// (sin a9), 2 + i -> h_i / pi.
double component_psi(std::size_t comp, double x1, double x2) {
  if (comp == 0) return x2;
  if (comp == 1) return -x1;
  return h_term(comp - 2, x1, x2) / std::numbers::pi;
}

struct FaceFluxes {
  std::vector<double> vertical;    // (nx+1) x ny, flux in +x1 through x1 = i hx
  std::vector<double> horizontal;  // nx x (ny+1), flux in +x2 through x2 = j hy
};

template <class Psi>
FaceFluxes face_fluxes(std::size_t nx, std::size_t ny, Psi psi) {
  const double hx = 1.0 / static_cast<double>(nx);
  const double hy = 1.0 / static_cast<double>(ny);
  FaceFluxes f;
  f.vertical.resize((nx + 1) * ny);
  f.horizontal.resize(nx * (ny + 1));
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i) {
      const double x = static_cast<double>(i) * hx;
      f.vertical[j * (nx + 1) + i] = psi(x, static_cast<double>(j + 1) * hy) - psi(x, static_cast<double>(j) * hy);
    }
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const double y = static_cast<double>(j) * hy;
      f.horizontal[j * nx + i] = psi(static_cast<double>(i) * hx, y) - psi(static_cast<double>(i + 1) * hx, y);
    }
  return f;
}

// Non-conservative central form: (H u)_c = sum_f F_f (u_f - u_c) with the
// face value the neighbor average; boundary faces drop out under Neumann.
SparseMatrix advection_matrix(std::size_t nx, std::size_t ny, const FaceFluxes& f) {
  Triplets t;
  auto add_face = [&](std::size_t c, std::size_t nb, double flux) {
    const int ic = static_cast<int>(c);
    const int in = static_cast<int>(nb);
    t.emplace_back(ic, in, 0.5 * flux);
    t.emplace_back(ic, ic, -0.5 * flux);
    t.emplace_back(in, ic, -0.5 * flux);
    t.emplace_back(in, in, 0.5 * flux);
  };
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i + 1 < nx; ++i) add_face(j * nx + i, j * nx + i + 1, f.vertical[j * (nx + 1) + i + 1]);
  for (std::size_t j = 0; j + 1 < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) add_face(j * nx + i, (j + 1) * nx + i, f.horizontal[(j + 1) * nx + i]);
  return from_triplets(nx * ny, t);
}

}  // namespace

// ---------------------------------------------------------------- heat ----

ParameterBox default_heat_box(std::size_t parameter_dim) {
  require(parameter_dim >= 1 && parameter_dim <= 4, ErrorCode::InvalidDimension, "heat model takes 1 to 4 parameters");
  std::vector<double> lo{0.01};
  std::vector<double> hi{0.5};
  for (std::size_t i = 1; i < parameter_dim; ++i) {
    lo.push_back(0.0);
    hi.push_back(0.9);
  }
  return ParameterBox(std::move(lo), std::move(hi));
}

AffineSystem build_heat_model(const HeatModelOptions& opt, std::size_t parameter_dim) {
  const std::size_t nx = opt.nx;
  const std::size_t ny = opt.ny;
  if (nx < 3 || ny < 3) fail(ErrorCode::InvalidGrid, "heat grid needs at least 3 x 3 cells");
  require(opt.length > 0 && opt.height > 0, ErrorCode::InvalidGrid, "domain sides must be positive");
  require(parameter_dim >= 1 && parameter_dim <= 4, ErrorCode::InvalidDimension, "heat model takes 1 to 4 parameters");
  const std::size_t m = nx * ny;
  const double hx = opt.length / static_cast<double>(nx);
  const double hy = opt.height / static_cast<double>(ny);

  Triplets kt;
  add_diffusion(kt, nx, ny, hy / hx, hx / hy);

  constexpr std::array<std::array<double, 2>, 3> kSegments{{{0.1, 0.3}, {0.4, 0.6}, {0.7, 0.9}}};
  constexpr double kSegmentBiot = 0.5;
  std::array<Eigen::VectorXd, 3> seg_load;
  for (std::size_t s = 0; s < 3; ++s) {
    seg_load[s] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < nx; ++i) {
      const double xc = (static_cast<double>(i) + 0.5) * hx / opt.length;
      if (xc < kSegments[s][0] || xc > kSegments[s][1]) continue;
      const std::size_t c = (ny - 1) * nx + i;
      kt.emplace_back(static_cast<int>(c), static_cast<int>(c), kSegmentBiot * hx);
      seg_load[s](static_cast<Eigen::Index>(c)) = kSegmentBiot * hx;
      ++hits;
    }
    if (hits == 0) fail(ErrorCode::InvalidGrid, "grid too coarse to resolve the top boundary segments");
  }

  Triplets qt;
  Eigen::VectorXd g0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t c = j * nx;
    qt.emplace_back(static_cast<int>(c), static_cast<int>(c), hy);
    g0(static_cast<Eigen::Index>(c)) = hy;
  }

  std::vector<AffineTerm> terms;
  terms.push_back({constant_coefficient(1.0), from_triplets(m, kt), "K"});
  terms.push_back({parameter_coefficient(0), from_triplets(m, qt), "Q1"});

  std::vector<AffineForcing> forcings;
  forcings.push_back({parameter_coefficient(0), g0, "g0"});
  if (parameter_dim == 2) {
    forcings.push_back({parameter_coefficient(1), seg_load[0] + seg_load[1] + seg_load[2], "g1"});
  } else if (parameter_dim == 3) {
    forcings.push_back({parameter_coefficient(1), seg_load[0], "g1"});
    forcings.push_back({parameter_coefficient(2), seg_load[1] + seg_load[2], "g2"});
  } else if (parameter_dim == 4) {
    for (std::size_t s = 0; s < 3; ++s)
      forcings.push_back({parameter_coefficient(s + 1), seg_load[s], "g" + std::to_string(s + 1)});
  }

  return AffineSystem(scaled_identity(m, hx * hy), std::move(terms), std::move(forcings),
                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m)), parameter_dim);
}

// ----------------------------------------------------- advection-diffusion ----

ParameterBox default_advdiff_box() {
  std::vector<double> lo(9, -0.05);
  std::vector<double> hi(9, 0.05);
  lo[8] = 0.1 * std::numbers::pi;
  hi[8] = 0.3 * std::numbers::pi;
  return ParameterBox(std::move(lo), std::move(hi));
}

double stream_function(double x1, double x2, std::span<const double> alpha) {
  require(alpha.size() == 9, ErrorCode::DimensionMismatch, "advection field takes 9 parameters");
  double psi = x2 * std::cos(alpha[8]) - x1 * std::sin(alpha[8]);
  for (std::size_t i = 0; i < 8; ++i) psi += alpha[i] * h_term(i, x1, x2) / std::numbers::pi;
  return psi;
}

std::array<double, 2> advection_field(double x1, double x2, std::span<const double> alpha) {
  require(alpha.size() == 9, ErrorCode::DimensionMismatch, "advection field takes 9 parameters");
  const double pi = std::numbers::pi;
  double e1 = std::cos(alpha[8]);
  double e2 = std::sin(alpha[8]);
  for (std::size_t i = 0; i < 8; ++i) {
    const double a = kModes[i][0] * pi;
    const double b = kModes[i][1] * pi;
    // (dh/dx2, -dh/dx1) / pi
    e1 += alpha[i] * (-b * std::cos(a * x1) * std::sin(b * x2)) / pi;
    e2 -= alpha[i] * (-a * std::sin(a * x1) * std::cos(b * x2)) / pi;
  }
  return {e1, e2};
}

Eigen::VectorXd advdiff_cell_divergence(std::size_t nx, std::size_t ny, std::span<const double> alpha) {
  require(nx >= 1 && ny >= 1, ErrorCode::InvalidGrid, "empty grid");
  const std::vector<double> a(alpha.begin(), alpha.end());
  // Sum the per-component fluxes with their coefficients, as the assembled
  // operator does.
  std::vector<double> coef{std::cos(a.at(8)), std::sin(a.at(8))};
  for (std::size_t i = 0; i < 8; ++i) coef.push_back(a.at(i));
  FaceFluxes total{std::vector<double>((nx + 1) * ny, 0.0), std::vector<double>(nx * (ny + 1), 0.0)};
  for (std::size_t comp = 0; comp < 10; ++comp) {
    const FaceFluxes f = face_fluxes(nx, ny, [comp](double x, double y) { return component_psi(comp, x, y); });
    for (std::size_t k = 0; k < f.vertical.size(); ++k) total.vertical[k] += coef[comp] * f.vertical[k];
    for (std::size_t k = 0; k < f.horizontal.size(); ++k) total.horizontal[k] += coef[comp] * f.horizontal[k];
  }
  const double area = 1.0 / static_cast<double>(nx * ny);
  Eigen::VectorXd div(static_cast<Eigen::Index>(nx * ny));
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const double out = total.vertical[j * (nx + 1) + i + 1] - total.vertical[j * (nx + 1) + i] +
                         total.horizontal[(j + 1) * nx + i] - total.horizontal[j * nx + i];
      div(static_cast<Eigen::Index>(j * nx + i)) = out / area;
    }
  return div;
}

double advection_speed_bound(const ParameterBox& box) {
  require(box.dimension() == 9, ErrorCode::InvalidDimension, "advection-diffusion box must have 9 axes");
  double bound = 1.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double amp = std::max(std::abs(box.lower()[i]), std::abs(box.upper()[i]));
    bound += amp * std::hypot(kModes[i][0], kModes[i][1]);
  }
  return bound;
}

double artificial_diffusion(const AdvDiffOptions& opt, const ParameterBox& box) {
  const double h = 1.0 / static_cast<double>(std::min(opt.nx, opt.ny));
  return std::max(0.0, 0.5 * advection_speed_bound(box) * h - opt.nu);
}

AffineSystem build_advdiff_model(const AdvDiffOptions& opt, const ParameterBox& box) {
  const std::size_t nx = opt.nx;
  const std::size_t ny = opt.ny;
  if (nx < 3 || ny < 3) fail(ErrorCode::InvalidGrid, "advection-diffusion grid needs at least 3 x 3 cells");
  require(opt.nu > 0 && std::isfinite(opt.nu), ErrorCode::InvalidInput, "diffusion coefficient must be positive");
  require(opt.source_sigma > 0, ErrorCode::InvalidInput, "source width must be positive");
  require(box.dimension() == 9, ErrorCode::InvalidDimension, "advection-diffusion box must have 9 axes");
  const double hx = 1.0 / static_cast<double>(nx);
  const double hy = 1.0 / static_cast<double>(ny);
  if (std::max(hx, hy) > opt.source_sigma)
    fail(ErrorCode::InvalidGrid, "grid step " + std::to_string(std::max(hx, hy)) +
                                     " does not resolve the source width " + std::to_string(opt.source_sigma));
  const std::size_t m = nx * ny;
  const double nu_eff = opt.nu + artificial_diffusion(opt, box);

  Triplets kt;
  add_diffusion(kt, nx, ny, nu_eff * hy / hx, nu_eff * hx / hy);

  std::vector<AffineTerm> terms;
  terms.push_back({constant_coefficient(1.0), from_triplets(m, kt), "K"});
  terms.push_back({[](std::span<const double> a) { return std::cos(a[8]); },
                   advection_matrix(nx, ny, face_fluxes(nx, ny, [](double x, double y) { return component_psi(0, x, y); })),
                   "Hcos"});
  terms.push_back({[](std::span<const double> a) { return std::sin(a[8]); },
                   advection_matrix(nx, ny, face_fluxes(nx, ny, [](double x, double y) { return component_psi(1, x, y); })),
                   "Hsin"});
  for (std::size_t i = 0; i < 8; ++i)
    terms.push_back({parameter_coefficient(i),
                     advection_matrix(nx, ny, face_fluxes(nx, ny, [i](double x, double y) {
                                        return component_psi(i + 2, x, y);
                                      })),
                     "H" + std::to_string(i + 1)});

  Eigen::VectorXd f(static_cast<Eigen::Index>(m));
  const double s2 = opt.source_sigma * opt.source_sigma;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const double dx = (static_cast<double>(i) + 0.5) * hx - opt.source_center[0];
      const double dy = (static_cast<double>(j) + 0.5) * hy - opt.source_center[1];
      f(static_cast<Eigen::Index>(j * nx + i)) =
          hx * hy * std::exp(-(dx * dx + dy * dy) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
    }
  std::vector<AffineForcing> forcings;
  forcings.push_back({constant_coefficient(1.0), std::move(f), "f"});

  return AffineSystem(scaled_identity(m, hx * hy), std::move(terms), std::move(forcings),
                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m)), 9);
}

// -------------------------------------------------------------- config ----

namespace {

ModelConfig config_from_json(const detail::json& j) {
  using detail::json;
  try {
    ModelConfig cfg;
    const std::string kind = j.value("model", "heat");
    if (kind == "heat") {
      cfg.kind = ModelKind::Heat;
      cfg.heat.nx = j.value("nx", cfg.heat.nx);
      cfg.heat.ny = j.value("ny", cfg.heat.ny);
      cfg.heat.length = j.value("length", cfg.heat.length);
      cfg.heat.height = j.value("height", cfg.heat.height);
      cfg.dt = j.value("dt", 0.2);
      cfg.steps = j.value("steps", std::size_t{50});
      if (j.contains("box")) {
        cfg.box = detail::box_from_json(j.at("box"));
      } else {
        cfg.box = default_heat_box(j.value("parameters", std::size_t{2}));
      }
    } else if (kind == "advdiff") {
      cfg.kind = ModelKind::AdvDiff;
      cfg.advdiff.nx = j.value("nx", cfg.advdiff.nx);
      cfg.advdiff.ny = j.value("ny", cfg.advdiff.ny);
      cfg.advdiff.nu = j.value("nu", cfg.advdiff.nu);
      cfg.dt = j.value("dt", 1.0 / 30.0);
      cfg.steps = j.value("steps", std::size_t{30});
      cfg.box = j.contains("box") ? detail::box_from_json(j.at("box")) : default_advdiff_box();
    } else {
      fail(ErrorCode::InvalidInput, "unknown model '" + kind + "'");
    }
    require(cfg.dt > 0, ErrorCode::InvalidInput, "dt must be positive");
    require(cfg.steps >= 1, ErrorCode::InvalidInput, "steps must be at least 1");
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad model config: ") + e.what());
  }
}

}  // namespace

ModelConfig parse_model_config(const std::string& json_text) {
  return config_from_json(detail::parse_json_text(json_text, "model config"));
}

ModelConfig load_model_config(const std::filesystem::path& path) { return config_from_json(detail::read_json_file(path)); }

std::string model_config_to_json(const ModelConfig& cfg) {
  detail::json j;
  if (cfg.kind == ModelKind::Heat) {
    j["model"] = "heat";
    j["nx"] = cfg.heat.nx;
    j["ny"] = cfg.heat.ny;
    j["length"] = cfg.heat.length;
    j["height"] = cfg.heat.height;
  } else {
    j["model"] = "advdiff";
    j["nx"] = cfg.advdiff.nx;
    j["ny"] = cfg.advdiff.ny;
    j["nu"] = cfg.advdiff.nu;
  }
  j["box"] = detail::box_to_json(cfg.box);
  j["dt"] = cfg.dt;
  j["steps"] = cfg.steps;
  return j.dump(2);
}

AffineSystem build_model(const ModelConfig& cfg) {
  if (cfg.kind == ModelKind::Heat) return build_heat_model(cfg.heat, cfg.box.dimension());
  return build_advdiff_model(cfg.advdiff, cfg.box);
}

}  // namespace trom

// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: one PASS/FAIL line per criterion. Thresholds are fixed
// here and not configurable.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "test_util.hpp"
#include "trom/analysis.hpp"
#include "trom/container.hpp"
#include "trom/decomp.hpp"
#include "trom/dynsys.hpp"
#include "trom/linalg.hpp"
#include "trom/models.hpp"
#include "trom/rom.hpp"
#include "trom/sampling.hpp"
#include "trom/snapshots.hpp"
#include "trom/tensor.hpp"

namespace {

using namespace trom;
using trom::test::gauss;
using trom::test::uniform_int;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_diff_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double den = b.norm();
  return den == 0.0 ? (a - b).norm() : (a - b).norm() / den;
}

/// Orthonormal basis of the numerical column space (sigma > 1e-13 sigma_1).
Eigen::MatrixXd column_space(const Eigen::MatrixXd& a) {
  const SvdResult s = thin_svd(a);
  Eigen::Index r = 0;
  const double cut = s.singular_values.size() > 0 ? 1e-13 * s.singular_values(0) : 0.0;
  while (r < s.singular_values.size() && s.singular_values(r) > cut) ++r;
  return s.left.leftCols(r);
}

double squared_residual(const Eigen::MatrixXd& s, const Eigen::MatrixXd& z) {
  return (s - z * (z.transpose() * s)).squaredNorm();
}

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Desk heat model with D = 2: default 20 x 20 mesh (M = 400), dt 0.2, N = 50.
constexpr double kHeatDt = 0.2;
constexpr std::size_t kHeatSteps = 50;

AffineSystem desk_heat() { return build_heat_model(HeatModelOptions{}, 2); }

CartesianGrid heat_grid(std::size_t n1, std::size_t n2) { return CartesianGrid::uniform(default_heat_box(2), {n1, n2}); }

// ------------------------------------------------------------------ 1 ----

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t order = uniform_int(1, 5);
    Dims dims(order);
    for (auto& d : dims) d = uniform_int(1, order <= 3 ? 9 : 5);
    const DenseTensor t = test::random_tensor(dims);
    const double nrm = test::naive_norm(t);
    worst = std::max(worst, std::abs(frobenius_norm(t) - nrm) / nrm);
    for (std::size_t k = 0; k < order; ++k) {
      std::vector<double> v(dims[k]);
      for (double& x : v) x = gauss();
      const DenseTensor got = kmode_product(t, v, k);
      const DenseTensor want = test::naive_kmode(t, v, k);
      if (got.dims() != want.dims() && !(want.dims() == Dims{1} && got.size() == 1))
        return {false, "k-mode product shape mismatch"};
      worst = std::max(worst, test::max_rel_diff(got, want));
      worst = std::max(worst, rel_diff_matrix(unfold(t, k), test::naive_unfold(t, k)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-13 && secs < 10.0, "max rel diff " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 2 ----

/// Random tensor with geometrically decaying spectra so truncation is active.
DenseTensor decaying_tensor(const Dims& dims) {
  Dims core_dims = dims;
  DenseTensor t = test::random_tensor(core_dims);
  std::vector<double> v(t.values().begin(), t.values().end());
  for (std::size_t lin = 0; lin < v.size(); ++lin) {
    const auto idx = test::multi_index(dims, lin);
    std::size_t s = 0;
    for (auto i : idx) s += i;
    v[lin] *= std::pow(0.3, static_cast<double>(s));
  }
  DenseTensor c(core_dims, std::move(v));
  for (std::size_t k = 0; k < dims.size(); ++k)
    c = mode_multiply(c, test::random_orthonormal(static_cast<Eigen::Index>(dims[k]),
                                                  static_cast<Eigen::Index>(dims[k])),
                      k);
  return c;
}

Outcome criterion2() {
  const std::vector<double> eps_values{1e-2, 1e-4, 1e-6, 1e-8};
  const std::vector<Dims> shapes{{12, 9, 10, 8}, {11, 12, 7, 10}, {6, 5, 4, 6, 5, 4}, {5, 6, 5, 4, 3, 6}};
  double worst_ratio = 0.0;
  double worst_bound_ratio = 0.0;
  bool ok = true;
  for (const Dims& dims : shapes) {
    const DenseTensor phi = decaying_tensor(dims);
    for (double eps : eps_values) {
      const TuckerDecomposition h = hosvd(phi, HosvdAccuracy{eps});
      const double eh = test::rel_error(reconstruct(h), phi);
      const double bound = h.relative_error_bound();
      const TtDecomposition tt = tt_svd(phi, eps);
      const double et = test::rel_error(reconstruct(tt), phi);
      worst_ratio = std::max({worst_ratio, eh / eps, et / eps});
      if (bound > 0) worst_bound_ratio = std::max(worst_bound_ratio, eh / bound);
      ok = ok && eh <= eps && et <= eps && eh <= bound * (1 + 1e-10) + 1e-13;
    }
  }
  return {ok, "max err/eps " + fmt(worst_ratio) + ", max HOSVD err/bound " + fmt(worst_bound_ratio)};
}

// ------------------------------------------------------------------ 3 ----

Outcome criterion3() {
  const AffineSystem sys = build_heat_model(HeatModelOptions{10, 8, 10.0, 4.0}, 2);
  const CartesianGrid grid = heat_grid(5, 4);
  std::vector<Point> scattered = random_parameters(grid.box(), 18, 11);
  const std::vector<SamplingScheme> schemes{grid, GeneralSampling(grid.box(), scattered)};
  const std::vector<Point> alphas = random_parameters(grid.box(), 50, 12);
  double worst = 0.0;
  for (const SamplingScheme& s : schemes) {
    const DenseTensor phi = generate_snapshots(sys, s, 0.5, 12);
    std::vector<AnyDecomposition> ds;
    ds.emplace_back(cp_als(phi, CpOptions{6, 200, 1e-12, 1, 3}));
    ds.emplace_back(hosvd(phi, HosvdAccuracy{1e-8}));
    ds.emplace_back(tt_svd(phi, 1e-8));
    for (const AnyDecomposition& d : ds) {
      const auto [u, payload] = offline(d);
      for (const Point& a : alphas) {
        const InterpVectors e = interpolation_vectors(s, a);
        const LocalBasis lb = local_basis(payload, e, 1);
        const Eigen::VectorXd dense = thin_svd(extract_dense(d, e)).singular_values;
        const double s1 = dense(0);
        for (Eigen::Index i = 0; i < std::max(dense.size(), lb.singular_values.size()); ++i) {
          const double a1 = i < lb.singular_values.size() ? lb.singular_values(i) : 0.0;
          const double b1 = i < dense.size() ? dense(i) : 0.0;
          // Values below rounding level are compared against sigma_1.
          worst = std::max(worst, std::abs(a1 - b1) / std::max(b1, 1e-4 * s1));
        }
      }
    }
  }
  return {worst <= 1e-10, "max rel diff " + fmt(worst)};
}

// ------------------------------------------------------------------ 4 ----

Outcome criterion4() {
  const AffineSystem sys = desk_heat();
  const CartesianGrid grid = heat_grid(9, 5);
  const DenseTensor phi = generate_snapshots(sys, grid, kHeatDt, kHeatSteps);
  const double phi2 = std::pow(frobenius_norm(phi), 2);
  double worst = 0.0;
  bool ok = true;
  for (double eps : {1e-4, 1e-6}) {
    std::vector<AnyDecomposition> ds;
    ds.emplace_back(hosvd(phi, HosvdAccuracy{eps}));
    ds.emplace_back(tt_svd(phi, eps));
    for (const AnyDecomposition& d : ds) {
      const std::vector<Point> pts = grid.points();
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const InterpVectors e = position_vectors(grid, pts[j]);
        const Eigen::MatrixXd ut = column_space(extract_dense(d, e));
        const double lhs = squared_residual(snapshot_block(phi, j), ut);
        const double ratio = lhs / (eps * eps * phi2);
        worst = std::max(worst, ratio);
        ok = ok && ratio <= 1.0 + 1e-6;
      }
    }
  }
  return {ok, "max LHS/(eps^2 ||Phi||^2) " + fmt(worst) + " over 45 points, 2 formats, 2 eps"};
}

// ------------------------------------------------------------------ 5 ----

Outcome criterion5() {
  const CompressionReport h = compression_report(Format::Hosvd, {34, 4, 2, 2, 2, 12}, {9, 5, 5, 5}, 2000, 100);
  const CompressionReport t = compression_report(Format::Tt, {34, 35, 30, 21, 12}, {9, 5, 5, 5}, 2000, 100);
  const bool ok = h.online_count == 13122 && t.online_count == 20382;
  return {ok, "HOSVD " + std::to_string(h.online_count) + ", TT " + std::to_string(t.online_count)};
}

// ------------------------------------------------------------------ 6 ----

struct Truth {
  std::vector<Point> alphas;
  std::vector<Eigen::MatrixXd> states;
};

Truth heat_truth(const AffineSystem& sys, std::size_t count, std::uint64_t seed) {
  Truth t;
  t.alphas = random_parameters(default_heat_box(2), count, seed);
  for (const Point& a : t.alphas) t.states.push_back(crank_nicolson(sys, a, kHeatDt, kHeatSteps).states);
  return t;
}

/// Out-of-sample E = sqrt(mean over alpha of (1/(MN)) ||(I - Z Z^T) Phi(alpha)||_F^2)
/// with HOSVD at eps and n = the full column budget.
double out_of_sample_error(const DenseTensor& phi, const CartesianGrid& grid, const Truth& truth, double eps) {
  const auto [u, payload] = offline(AnyDecomposition{hosvd(phi, HosvdAccuracy{eps})});
  const std::size_t n = column_budget(payload);
  double sum = 0.0;
  for (std::size_t j = 0; j < truth.alphas.size(); ++j) {
    const InterpVectors e = lagrange_vectors(grid, truth.alphas[j], 2);
    const Eigen::MatrixXd z = reduced_basis(u, local_basis(payload, e, n));
    sum += projection_error(truth.states[j], z);
  }
  return std::sqrt(sum / static_cast<double>(truth.alphas.size()));
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const AffineSystem sys = desk_heat();
  const Truth truth = heat_truth(sys, 100, 6);

  std::ostringstream os;
  std::vector<double> deltas, errs;
  DenseTensor finest;
  CartesianGrid fine_grid = heat_grid(2, 2);
  for (std::size_t n : {5, 9, 17}) {
    const CartesianGrid grid = heat_grid(n, n);
    DenseTensor phi = generate_snapshots(sys, grid, kHeatDt, kHeatSteps);
    deltas.push_back(grid_delta(grid, 2.0));
    errs.push_back(out_of_sample_error(phi, grid, truth, 1e-7));
    os << n << "x" << n << ": E " << fmt(errs.back()) << "; ";
    if (n == 17) {
      finest = std::move(phi);
      fine_grid = grid;
    }
  }
  const double order = loglog_slope(deltas, errs);
  const bool delta_ok = order >= 1.8;
  os << "order in delta " << fmt(order) << "; ";

  // Eps sweep on the finest grid. The regime where the compression term
  // dominates is where E exceeds the eps-independent floor tenfold.
  const double floor = out_of_sample_error(finest, fine_grid, truth, 1e-11);
  std::vector<double> eps_in, err_in;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
    const double e = out_of_sample_error(finest, fine_grid, truth, eps);
    os << "eps " << fmt(eps) << ": E " << fmt(e) << "; ";
    if (e >= 10.0 * floor) {
      eps_in.push_back(eps);
      err_in.push_back(e);
    }
  }
  const double slope = eps_in.size() >= 3 ? loglog_slope(eps_in, err_in) : std::nan("");
  const bool eps_ok = eps_in.size() >= 3 && std::abs(slope - 1.0) <= 0.2;
  const double secs = seconds_since(t0);
  os << "floor " << fmt(floor) << ", slope in eps " << fmt(slope) << " over " << eps_in.size() << " points, "
     << fmt(secs) << " s";
  return {delta_ok && eps_ok && secs < 600.0, os.str()};
}

// ------------------------------------------------------------------ 7 ----

Outcome criterion7() {
  const AffineSystem sys = desk_heat();
  const CartesianGrid grid = heat_grid(9, 5);
  const DenseTensor phi = generate_snapshots(sys, grid, kHeatDt, kHeatSteps);
  constexpr std::size_t n = 10;
  const Eigen::MatrixXd pod = pod_basis(phi, n);
  const double e_pod = in_sample_error(phi, grid, [&](std::size_t, const Point&) { return pod; });
  std::ostringstream os;
  os << "POD " << fmt(e_pod);
  bool ok = true;
  std::vector<AnyDecomposition> ds;
  ds.emplace_back(hosvd(phi, HosvdAccuracy{1e-6}));
  ds.emplace_back(tt_svd(phi, 1e-6));
  for (const AnyDecomposition& d : ds) {
    const auto [u, payload] = offline(d);
    const double e = in_sample_error(phi, grid, [&](std::size_t, const Point& a) {
      return reduced_basis(u, local_basis(payload, position_vectors(grid, a), n));
    });
    os << ", " << format_name(d) << " " << fmt(e) << " (ratio " << fmt(e_pod / e) << ")";
    ok = ok && e_pod >= 10.0 * e;
  }
  return {ok, os.str()};
}

// ------------------------------------------------------------------ 8 ----

Outcome criterion8() {
  const AffineSystem sys = desk_heat();
  StudyOptions opt;
  opt.methods = {Method::Cp, Method::Hosvd, Method::Tt};
  opt.n_values = {10};
  opt.eps_values = {1e-6};
  // Targeted CP rank: ALS reaches a fit near 1e-4 here. At R = 20 the fit
  // stalls near 1e-3 on every grid and the CP gain stops improving with K.
  opt.cp_rank = 40;
  opt.random_samples = 50;
  opt.seed = 8;
  std::ostringstream os;
  bool ok = true;
  std::vector<std::vector<double>> means(3);
  for (std::size_t k : {3, 5, 9}) {
    const ErrorReport rep = gain_study(sys, heat_grid(k, k), kHeatDt, kHeatSteps, opt);
    os << k << "x" << k << ":";
    const Method ms[] = {Method::Cp, Method::Hosvd, Method::Tt};
    for (int i = 0; i < 3; ++i) {
      const ErrorAggregate* a = rep.find(ms[i], 10, ms[i] == Method::Cp ? 0.0 : 1e-6);
      const double g = a && a->failures == 0 ? a->gain_mean : std::nan("");
      means[i].push_back(g);
      os << " " << method_label(ms[i]) << " " << fmt(g);
      ok = ok && std::isfinite(g) && g > 1.0;
    }
    os << "; ";
  }
  for (const auto& m : means) ok = ok && m[0] < m[1] && m[1] < m[2];
  return {ok, os.str()};
}

// ------------------------------------------------------------------ 9 ----

Outcome criterion9() {
  // u' = -lambda u + lambda on [0, T] with u(0) = 0: u(T) = 1 - exp(-lambda T).
  constexpr double lambda = 2.0;
  constexpr double t_end = 1.0;
  SparseMatrix mass(1, 1), a(1, 1);
  mass.insert(0, 0) = 1.0;
  a.insert(0, 0) = lambda;
  const AffineSystem sys(mass, {AffineTerm{constant_coefficient(1.0), a, "decay"}},
                         {AffineForcing{constant_coefficient(lambda), Eigen::VectorXd::Ones(1), "load"}},
                         Eigen::VectorXd::Zero(1), 1);
  const Point alpha{0.0};
  const double exact = 1.0 - std::exp(-lambda * t_end);
  auto err = [&](std::size_t steps) {
    const Trajectory t = crank_nicolson(sys, alpha, t_end / static_cast<double>(steps), steps);
    return std::abs(t.states(0, t.states.cols() - 1) - exact);
  };
  const double ratio = err(20) / err(40);
  return {ratio >= 3.6 && ratio <= 4.4, "ratio " + fmt(ratio)};
}

// ----------------------------------------------------------------- 10 ----

Outcome criterion10() {
  // Small model so that CP can use R = K N, the rank at which ALS fits exactly.
  const AffineSystem sys = build_heat_model(HeatModelOptions{10, 10, 10.0, 4.0}, 2);
  const CartesianGrid grid = heat_grid(3, 3);
  constexpr double dt = 0.5;
  constexpr std::size_t steps = 10;
  const DenseTensor phi = generate_snapshots(sys, grid, dt, steps);
  std::vector<AnyDecomposition> ds;
  ds.emplace_back(cp_als(phi, CpOptions{grid.count() * steps, 50, 1e-15, 1, 10}));
  ds.emplace_back(hosvd(phi, HosvdAccuracy{1e-14}));
  ds.emplace_back(tt_svd(phi, 1e-14));
  std::ostringstream os;
  bool ok = true;
  for (const AnyDecomposition& d : ds) {
    const auto [u, payload] = offline(d);
    const ReducedSystem universal = project_universal(sys, u);
    const std::size_t n = std::min(column_budget(payload), steps);
    double worst = 0.0;
    for (const Point& a : grid.points()) {
      const LocalBasis lb = local_basis(payload, position_vectors(grid, a), n);
      const Trajectory red = crank_nicolson(project_local(universal, lb), a, dt, steps);
      const Trajectory full = reconstruct_states(red, u, lb);
      const Trajectory truth = crank_nicolson(sys, a, dt, steps);
      worst = std::max(worst, solution_error(full, truth));
    }
    os << format_name(d) << " n=" << n << " " << fmt(worst) << "; ";
    ok = ok && worst <= 1e-8;
  }
  if (const auto* cp = std::get_if<CpDecomposition>(&ds[0])) os << "CP fit " << fmt(cp->relative_error);
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria runner"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(0, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all = true;
  for (int i = 1; i <= 10; ++i) {
    if (only != 0 && only != i) continue;
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(i - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}

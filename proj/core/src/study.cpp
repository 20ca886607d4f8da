// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>

#include "json_util.hpp"
#include "trom/analysis.hpp"
#include "trom/error.hpp"
#include "trom/snapshots.hpp"

namespace trom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TromModel {
  Method method;
  double eps = 0.0;
  std::optional<UniversalBasis> basis;
  std::optional<OnlinePayload> payload;
  std::optional<ReducedSystem> universal;
  std::string failure;
};

TromModel build_trom(const AffineSystem& sys, const DenseTensor& phi, Method method, double eps,
                     const StudyOptions& opt) {
  TromModel m{method, eps, {}, {}, {}, {}};
  try {
    AnyDecomposition d;
    if (method == Method::Cp) {
      CpOptions cp = opt.cp;
      cp.rank = opt.cp_rank;
      cp.seed = opt.seed;
      d = cp_als(phi, cp);
    } else if (method == Method::Hosvd) {
      d = hosvd(phi, HosvdAccuracy{eps});
    } else {
      d = tt_svd(phi, eps);
    }
    auto [u, p] = offline(d);
    m.universal = project_universal(sys, u);
    m.basis = std::move(u);
    m.payload = std::move(p);
  } catch (const Error& e) {
    m.failure = e.what();
  }
  return m;
}

struct PodModel {
  std::size_t n = 0;
  Eigen::MatrixXd z;
  std::optional<ReducedSystem> rs;
  std::string failure;
};

}  // namespace

std::vector<Point> random_parameters(const ParameterBox& box, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts(count, Point(box.dimension()));
  for (auto& p : pts)
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = std::uniform_real_distribution<double>(box.lower()[i], box.upper()[i])(rng);
  return pts;
}

const ErrorAggregate* ErrorReport::find(Method m, std::size_t n, double eps) const {
  for (const auto& a : aggregates)
    if (a.method == m && a.n == n && a.eps == eps) return &a;
  return nullptr;
}

std::vector<ErrorAggregate> aggregate_records(const std::vector<ErrorRecord>& records) {
  std::vector<ErrorAggregate> out;
  std::vector<std::vector<double>> gains;
  std::vector<std::vector<double>> errors;
  for (const auto& r : records) {
    std::size_t slot = out.size();
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i].method == r.method && out[i].n == r.n && out[i].eps == r.eps) slot = i;
    if (slot == out.size()) {
      out.push_back(ErrorAggregate{r.method, r.n, r.eps});
      gains.emplace_back();
      errors.emplace_back();
    }
    ErrorAggregate& a = out[slot];
    if (!r.failure.empty()) {
      ++a.failures;
      continue;
    }
    ++a.count;
    if (std::isfinite(r.gain)) gains[slot].push_back(r.gain);
    if (std::isfinite(r.solution_error)) errors[slot].push_back(r.solution_error);
  }
  for (std::size_t s = 0; s < out.size(); ++s) {
    ErrorAggregate& a = out[s];
    const auto& g = gains[s];
    if (g.empty()) {
      a.gain_mean = a.gain_min = a.gain_std = kNaN;
    } else {
      double sum = 0.0;
      a.gain_min = g.front();
      for (double v : g) {
        sum += v;
        a.gain_min = std::min(a.gain_min, v);
      }
      a.gain_mean = sum / static_cast<double>(g.size());
      double var = 0.0;
      for (double v : g) var += (v - a.gain_mean) * (v - a.gain_mean);
      a.gain_std = std::sqrt(var / static_cast<double>(g.size()));
    }
    const auto& e = errors[s];
    if (e.empty()) {
      a.error_mean = a.error_max = kNaN;
    } else {
      double sum = 0.0;
      for (double v : e) {
        sum += v;
        a.error_max = std::max(a.error_max, v);
      }
      a.error_mean = sum / static_cast<double>(e.size());
    }
  }
  return out;
}

ErrorReport gain_study(const AffineSystem& sys, const SamplingScheme& sampling, const DenseTensor& phi, double dt,
                       const StudyOptions& opt) {
  require(phi.order() >= 3 && phi.dim(0) == sys.state_dim(), ErrorCode::DimensionMismatch,
          "snapshot tensor does not match the system");
  require(!opt.n_values.empty() && !opt.methods.empty(), ErrorCode::InvalidInput, "study needs methods and n values");
  const std::size_t steps = phi.dim(phi.order() - 1);
  const std::vector<Point> alphas = random_parameters(sampling_box(sampling), opt.random_samples, opt.seed);

  // The POD baseline is always built since every gain is relative to it.
  std::vector<PodModel> pods;
  for (std::size_t n : opt.n_values) {
    PodModel p{n, {}, {}, {}};
    try {
      p.z = pod_basis(phi, n);
      if (static_cast<std::size_t>(p.z.cols()) < n)
        fail(ErrorCode::RankBudgetExceeded, "POD basis has only " + std::to_string(p.z.cols()) + " columns");
      p.rs = project(sys, p.z);
    } catch (const Error& e) {
      p.failure = e.what();
    }
    pods.push_back(std::move(p));
  }

  std::vector<TromModel> troms;
  for (Method m : opt.methods) {
    if (m == Method::Pod) continue;
    if (m == Method::Cp) {
      troms.push_back(build_trom(sys, phi, m, 0.0, opt));
    } else {
      for (double eps : opt.eps_values) troms.push_back(build_trom(sys, phi, m, eps, opt));
    }
  }
  const bool report_pod = std::find(opt.methods.begin(), opt.methods.end(), Method::Pod) != opt.methods.end();

  ErrorReport report;
  report.seed = opt.seed;
  for (std::size_t r = 0; r < alphas.size(); ++r) {
    const Point& alpha = alphas[r];
    std::optional<Trajectory> truth;
    std::string truth_failure;
    if (opt.solve_truth) {
      try {
        truth = crank_nicolson(sys, alpha, dt, steps);
      } catch (const Error& e) {
        truth_failure = std::string("truth: ") + e.what();
      }
    }

    auto score = [&](ErrorRecord& rec, const Eigen::MatrixXd& z, const Trajectory& reduced) {
      if (!truth) return;
      rec.representation_error = projection_error(truth->states, z);
      rec.solution_error = solution_error(lift(reduced, z), *truth);
    };

    for (std::size_t ni = 0; ni < pods.size(); ++ni) {
      const PodModel& p = pods[ni];
      double pod_error = kNaN;
      ErrorRecord rec{alpha, r, Method::Pod, p.n, 0.0, kNaN, kNaN, kNaN, kNaN, p.failure};
      if (rec.failure.empty() && !truth_failure.empty()) rec.failure = truth_failure;
      if (rec.failure.empty()) {
        try {
          const Trajectory red = crank_nicolson(*p.rs, alpha, dt, steps);
          score(rec, p.z, red);
          pod_error = rec.solution_error;
          rec.pod_error = pod_error;
          rec.gain = pod_error / rec.solution_error;
        } catch (const Error& e) {
          rec.failure = e.what();
        }
      }
      if (report_pod) report.records.push_back(rec);

      for (const TromModel& tm : troms) {
        ErrorRecord tr{alpha, r, tm.method, p.n, tm.eps, kNaN, kNaN, pod_error, kNaN, tm.failure};
        if (tr.failure.empty() && !truth_failure.empty()) tr.failure = truth_failure;
        if (tr.failure.empty()) {
          try {
            const InterpVectors e = interpolation_vectors(sampling, alpha, opt.interp);
            const LocalBasis lb = local_basis(*tm.payload, e, p.n);
            const ReducedSystem rs = project_local(*tm.universal, lb);
            const Trajectory red = crank_nicolson(rs, alpha, dt, steps);
            score(tr, reduced_basis(*tm.basis, lb), red);
            tr.gain = pod_error / tr.solution_error;
          } catch (const Error& e) {
            tr.failure = e.what();
          }
        }
        report.records.push_back(std::move(tr));
      }
    }
  }
  report.aggregates = aggregate_records(report.records);
  return report;
}

ErrorReport gain_study(const AffineSystem& sys, const SamplingScheme& sampling, double dt, std::size_t steps,
                       const StudyOptions& opt) {
  const DenseTensor phi = generate_snapshots(sys, sampling, dt, steps);
  return gain_study(sys, sampling, phi, dt, opt);
}

// ---------------------------------------------------------------- csv ----

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_report_csv(const std::filesystem::path& path, const ErrorReport& report) {
  std::ofstream out = open_out(path);
  const std::size_t d = report.records.empty() ? 0 : report.records.front().alpha.size();
  out << "seed,sample";
  for (std::size_t i = 0; i < d; ++i) out << ",alpha" << i + 1;
  out << ",method,n,eps,representation_error,solution_error,pod_error,gain,failure\n";
  for (const auto& r : report.records) {
    out << report.seed << ',' << r.sample;
    for (double a : r.alpha) out << ',' << a;
    std::string failure = r.failure;
    for (char& c : failure)
      if (c == ',' || c == '\n' || c == '"') c = ' ';
    out << ',' << method_label(r.method) << ',' << r.n << ',' << r.eps << ',' << r.representation_error << ','
        << r.solution_error << ',' << r.pod_error << ',' << r.gain << ',' << failure << '\n';
  }
}

void write_aggregates_csv(const std::filesystem::path& path, const ErrorReport& report) {
  std::ofstream out = open_out(path);
  out << "seed,method,n,eps,count,failures,gain_mean,gain_min,gain_std,error_mean,error_max\n";
  for (const auto& a : report.aggregates)
    out << report.seed << ',' << method_label(a.method) << ',' << a.n << ',' << a.eps << ',' << a.count << ','
        << a.failures << ',' << a.gain_mean << ',' << a.gain_min << ',' << a.gain_std << ',' << a.error_mean << ','
        << a.error_max << '\n';
}

// --------------------------------------------------------------- spec ----

namespace {

ModelConfig model_from_value(const detail::json& j) { return parse_model_config(j.dump()); }

StudySpec spec_from_json(const detail::json& j) {
  try {
    StudySpec s{model_from_value(j.at("model")), detail::sampling_from_json(j.at("sampling")), {}};
    StudyOptions& o = s.options;
    if (j.contains("methods")) {
      o.methods.clear();
      for (const auto& m : j.at("methods")) o.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("n")) o.n_values = j.at("n").get<std::vector<std::size_t>>();
    if (j.contains("eps")) o.eps_values = j.at("eps").get<std::vector<double>>();
    o.cp_rank = j.value("cp_rank", o.cp_rank);
    o.cp.max_sweeps = j.value("max_sweeps", o.cp.max_sweeps);
    o.cp.restarts = j.value("restarts", o.cp.restarts);
    o.random_samples = j.value("samples", o.random_samples);
    o.seed = j.value("seed", o.seed);
    o.interp.p = j.value("p", o.interp.p);
    o.interp.q = j.value("q", o.interp.q);
    const std::string truth = j.value("truth", "solve");
    if (truth != "solve" && truth != "skip") fail(ErrorCode::InvalidInput, "truth must be 'solve' or 'skip'");
    o.solve_truth = truth == "solve";
    if (sampling_box(s.sampling).dimension() != s.model.parameter_dim())
      fail(ErrorCode::DimensionMismatch, "sampling and model parameter counts differ");
    return s;
  } catch (const detail::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad study spec: ") + e.what());
  }
}

}  // namespace

StudySpec parse_study_spec(const std::string& json_text) {
  return spec_from_json(detail::parse_json_text(json_text, "study spec"));
}

StudySpec load_study_spec(const std::filesystem::path& path) { return spec_from_json(detail::read_json_file(path)); }

}  // namespace trom

// SPDX-License-Identifier: Apache-2.0
#include "trom_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trom/analysis.hpp"
#include "trom/container.hpp"
#include "trom/decomp.hpp"
#include "trom/dynsys.hpp"
#include "trom/error.hpp"
#include "trom/models.hpp"
#include "trom/rom.hpp"
#include "trom/sampling.hpp"
#include "trom/snapshots.hpp"
#include "trom/tensor_io.hpp"

namespace trom::cli {

namespace {

using json = nlohmann::json;

Point parse_alpha(const std::string& text) {
  Point out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidInput, "cannot parse '" + item + "' in --alpha");
    }
    if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
      fail(ErrorCode::InvalidInput, "cannot parse '" + item + "' in --alpha");
    out.push_back(v);
  }
  require(!out.empty(), ErrorCode::InvalidInput, "--alpha is empty");
  return out;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  f << text << '\n';
}

struct InterpArgs {
  std::size_t p = 2;
  std::size_t q = 0;
};

void add_interp(CLI::App* c, InterpArgs& a) {
  c->add_option("--p", a.p, "Lagrange stencil size on grids")->capture_default_str();
  c->add_option("--q", a.q, "neighbor count for general sampling (0: D + 1)")->capture_default_str();
}

SamplingScheme sampling_for(const PayloadFile& f, const std::string& override_path) {
  if (!override_path.empty()) return load_sampling(override_path);
  if (!f.sampling) fail(ErrorCode::InvalidInput, "payload carries no sampling; pass --sampling");
  return *f.sampling;
}

// ------------------------------------------------------------ commands ----

struct GenerateArgs {
  std::string model, sampling, out, csv;
  std::optional<double> dt;
  std::optional<std::size_t> steps;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  ModelConfig cfg = load_model_config(a.model);
  if (a.dt) cfg.dt = *a.dt;
  if (a.steps) cfg.steps = *a.steps;
  const SamplingScheme s = load_sampling(a.sampling);
  const AffineSystem sys = build_model(cfg);
  const DenseTensor phi = generate_snapshots(sys, s, cfg.dt, cfg.steps);
  save_tensor(a.out, phi);
  if (!a.csv.empty()) {
    const Eigen::MatrixXd block = snapshot_block(phi, 0);
    Trajectory t;
    for (std::size_t k = 0; k < cfg.steps; ++k) t.times.push_back(static_cast<double>(k + 1) * cfg.dt);
    t.states = block;
    write_trajectory_csv(a.csv, t);
  }
  out << json{{"tensor", a.out}, {"dims", phi.dims()}, {"norm", frobenius_norm(phi)}}.dump(2) << '\n';
  return kExitOk;
}

struct CompressArgs {
  std::string input, format, payload, basis, sampling, decomposition;
  std::optional<double> eps;
  std::vector<std::size_t> rank;
  std::uint64_t seed = 0;
  std::size_t max_sweeps = 500;
  std::size_t restarts = 1;
};

int do_compress(const CompressArgs& a, std::ostream& out) {
  const DenseTensor phi = load_tensor(a.input);
  require(phi.order() >= 3, ErrorCode::InvalidDimension, "snapshot tensor must have order >= 3");
  const Format fmt = parse_format(a.format);
  AnyDecomposition d;
  double achieved = 0.0;
  if (fmt == Format::Cp) {
    require(a.rank.size() == 1 && !a.eps, ErrorCode::InvalidInput, "cp takes --rank R and no --eps");
    CpOptions o;
    o.rank = a.rank[0];
    o.seed = a.seed;
    o.max_sweeps = a.max_sweeps;
    o.restarts = a.restarts;
    CpDecomposition cp = cp_als(phi, o);
    achieved = cp.relative_error;
    d = std::move(cp);
  } else if (fmt == Format::Hosvd) {
    require(a.eps.has_value() != !a.rank.empty(), ErrorCode::InvalidInput, "hosvd takes exactly one of --eps, --rank");
    TuckerDecomposition t = a.eps ? hosvd(phi, HosvdAccuracy{*a.eps}) : hosvd(phi, HosvdRanks{a.rank});
    achieved = t.relative_error_bound();
    d = std::move(t);
  } else {
    require(a.eps.has_value() && a.rank.empty(), ErrorCode::InvalidInput, "tt takes --eps");
    TtDecomposition t = tt_svd(phi, *a.eps);
    achieved = t.relative_error_bound();
    d = std::move(t);
  }
  if (!a.decomposition.empty()) save_decomposition(a.decomposition, d);
  auto [u, payload] = offline(d);
  PayloadFile f{std::move(payload), std::nullopt, a.eps.value_or(0.0), achieved, phi.dim(0),
                phi.dim(phi.order() - 1)};
  if (!a.sampling.empty()) {
    f.sampling = load_sampling(a.sampling);
    const auto sizes = parameter_mode_sizes(*f.sampling);
    if (sizes != payload_axis_sizes(f.payload))
      fail(ErrorCode::DimensionMismatch, "sampling does not match the tensor's parameter modes");
  }
  save_payload(a.payload, f);
  save_universal_basis(a.basis, u);
  json j = json::parse(compression_report_json(compression_report(f)));
  j["relative_error"] = achieved;
  j["universal_dim"] = u.dim();
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct BasisArgs {
  std::string payload, alpha, out, sampling, sv_out;
  std::size_t n = 0;
  InterpArgs interp;
};

int do_basis(const BasisArgs& a, std::ostream& out) {
  const PayloadFile f = load_payload(a.payload);
  const SamplingScheme s = sampling_for(f, a.sampling);
  const Point alpha = parse_alpha(a.alpha);
  const InterpVectors e = interpolation_vectors(s, alpha, InterpOptions{a.interp.p, a.interp.q});
  const LocalBasis lb = local_basis(f.payload, e, a.n);
  save_tensor(a.out, DenseTensor::from_matrix(lb.coords));
  if (!a.sv_out.empty()) {
    std::ostringstream ss;
    ss.precision(17);
    ss << "index,sigma";
    for (Eigen::Index i = 0; i < lb.singular_values.size(); ++i) ss << '\n' << i + 1 << ',' << lb.singular_values(i);
    write_text(a.sv_out, ss.str());
  }
  out << json{{"n", lb.n}, {"completed", lb.completed}, {"singular_values", vector_json(lb.singular_values)}}.dump(2)
      << '\n';
  return kExitOk;
}

struct SolveArgs {
  std::string model, alpha, method, payload, basis, tensor, sampling, out, truth = "solve";
  std::size_t n = 0;
  InterpArgs interp;
};

int do_solve(const SolveArgs& a, std::ostream& out) {
  const ModelConfig cfg = load_model_config(a.model);
  const AffineSystem sys = build_model(cfg);
  const Point alpha = parse_alpha(a.alpha);
  if (!cfg.box.contains(alpha)) fail(ErrorCode::OutOfDomain, "alpha lies outside the model's parameter box");
  require(a.truth == "solve" || a.truth == "skip", ErrorCode::InvalidInput, "--truth must be solve or skip");
  const Method method = parse_method(a.method);

  Eigen::MatrixXd z;
  Trajectory reduced;
  json j{{"method", std::string(method_label(method))}, {"n", a.n}};
  if (method == Method::Pod) {
    require(!a.tensor.empty(), ErrorCode::InvalidInput, "pod needs --tensor");
    z = pod_basis(load_tensor(a.tensor), a.n);
    if (static_cast<std::size_t>(z.cols()) < a.n) fail(ErrorCode::RankBudgetExceeded, "POD basis is too small");
    reduced = crank_nicolson(project(sys, z), alpha, cfg.dt, cfg.steps);
  } else {
    require(!a.payload.empty() && !a.basis.empty(), ErrorCode::InvalidInput, "trom methods need --payload and --basis");
    const PayloadFile f = load_payload(a.payload);
    const UniversalBasis u = load_universal_basis(a.basis);
    const Format want = method == Method::Cp ? Format::Cp : method == Method::Hosvd ? Format::Hosvd : Format::Tt;
    if (payload_format(f.payload) != want)
      fail(ErrorCode::InvalidInput, "payload format does not match --method");
    const SamplingScheme s = sampling_for(f, a.sampling);
    const InterpVectors e = interpolation_vectors(s, alpha, InterpOptions{a.interp.p, a.interp.q});
    const LocalBasis lb = local_basis(f.payload, e, a.n);
    reduced = crank_nicolson(project_local(project_universal(sys, u), lb), alpha, cfg.dt, cfg.steps);
    z = reduced_basis(u, lb);
    j["completed"] = lb.completed;
  }
  const Trajectory full = lift(reduced, z);
  if (!a.out.empty()) write_trajectory_csv(a.out, full);
  if (a.truth == "solve") {
    const Trajectory truth = crank_nicolson(sys, alpha, cfg.dt, cfg.steps);
    j["solution_error"] = solution_error(full, truth);
    j["representation_error"] = projection_error(truth.states, z);
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct StudyArgs {
  std::string spec, out, aggregates;
};

int do_study(const StudyArgs& a, std::ostream& out) {
  const StudySpec spec = load_study_spec(a.spec);
  const AffineSystem sys = build_model(spec.model);
  const ErrorReport rep = gain_study(sys, spec.sampling, spec.model.dt, spec.model.steps, spec.options);
  write_report_csv(a.out, rep);
  if (!a.aggregates.empty()) write_aggregates_csv(a.aggregates, rep);
  json arr = json::array();
  for (const auto& g : rep.aggregates) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    arr.push_back({{"method", std::string(method_label(g.method))},
                   {"n", g.n},
                   {"eps", g.eps},
                   {"count", g.count},
                   {"failures", g.failures},
                   {"gain_mean", num(g.gain_mean)},
                   {"gain_min", num(g.gain_min)},
                   {"gain_std", num(g.gain_std)},
                   {"error_mean", num(g.error_mean)},
                   {"error_max", num(g.error_max)}});
  }
  out << json{{"seed", rep.seed}, {"aggregates", arr}}.dump(2) << '\n';
  return kExitOk;
}

struct ReportArgs {
  std::string payload, out;
};

int do_report(const ReportArgs& a, std::ostream& out) {
  const PayloadFile f = load_payload(a.payload);
  const std::string text = compression_report_json(compression_report(f));
  if (!a.out.empty()) write_text(a.out, text);
  out << text << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpolatory tensorial reduced-order models"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "solve the model at every sample and write the snapshot tensor");
  g->add_option("--model", gen.model, "model config JSON")->required();
  g->add_option("--sampling", gen.sampling, "sampling JSON")->required();
  g->add_option("--out", gen.out, "snapshot tensor file")->required();
  g->add_option("--dt", gen.dt, "override the config time step");
  g->add_option("--steps", gen.steps, "override the config step count");
  g->add_option("--csv", gen.csv, "also write the first sample's trajectory as CSV");

  CompressArgs comp;
  auto* c = app.add_subcommand("compress", "compress a snapshot tensor into a payload and universal basis");
  c->add_option("--input", comp.input, "snapshot tensor file")->required();
  c->add_option("--format", comp.format, "cp, hosvd or tt")->required()->check(CLI::IsMember({"cp", "hosvd", "tt"}));
  c->add_option("--eps", comp.eps, "relative accuracy (hosvd, tt)");
  c->add_option("--rank", comp.rank, "CP rank or HOSVD ranks")->delimiter(',');
  c->add_option("--payload", comp.payload, "output payload file")->required();
  c->add_option("--basis", comp.basis, "output universal basis file")->required();
  c->add_option("--sampling", comp.sampling, "sampling JSON embedded into the payload");
  c->add_option("--decomposition", comp.decomposition, "also save the full decomposition");
  c->add_option("--seed", comp.seed, "ALS seed")->capture_default_str();
  c->add_option("--max-sweeps", comp.max_sweeps, "ALS sweep limit")->capture_default_str();
  c->add_option("--restarts", comp.restarts, "ALS random restarts")->capture_default_str();

  BasisArgs bas;
  auto* b = app.add_subcommand("basis", "compute local basis coordinates at a parameter");
  b->add_option("--payload", bas.payload, "payload file")->required();
  b->add_option("--alpha", bas.alpha, "comma-separated parameter vector")->required();
  b->add_option("--n", bas.n, "reduced dimension")->required();
  b->add_option("--out", bas.out, "coordinates tensor file")->required();
  b->add_option("--sampling", bas.sampling, "sampling JSON when the payload has none");
  b->add_option("--sv-out", bas.sv_out, "singular values CSV");
  add_interp(b, bas.interp);

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "solve a reduced model at a parameter");
  s->add_option("--model", sol.model, "model config JSON")->required();
  s->add_option("--alpha", sol.alpha, "comma-separated parameter vector")->required();
  s->add_option("--n", sol.n, "reduced dimension")->required();
  s->add_option("--method", sol.method, "trom-cp, trom-hosvd, trom-tt or pod")
      ->required()
      ->check(CLI::IsMember({"trom-cp", "trom-hosvd", "trom-tt", "cp", "hosvd", "tt", "pod"}));
  s->add_option("--payload", sol.payload, "payload file (trom methods)");
  s->add_option("--basis", sol.basis, "universal basis file (trom methods)");
  s->add_option("--tensor", sol.tensor, "snapshot tensor (pod)");
  s->add_option("--sampling", sol.sampling, "sampling JSON when the payload has none");
  s->add_option("--out", sol.out, "trajectory CSV");
  s->add_option("--truth", sol.truth, "solve or skip the high-fidelity reference")
      ->check(CLI::IsMember({"solve", "skip"}))
      ->capture_default_str();
  add_interp(s, sol.interp);

  StudyArgs stu;
  auto* st = app.add_subcommand("study", "run an out-of-sample gain study");
  st->add_option("--spec", stu.spec, "study JSON")->required();
  st->add_option("--out", stu.out, "per-parameter CSV report")->required();
  st->add_option("--aggregates", stu.aggregates, "aggregate CSV report");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "compression accounting of a payload");
  r->add_option("--payload", rep.payload, "payload file")->required();
  r->add_option("--out", rep.out, "JSON output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (g->parsed()) return do_generate(gen, out);
    if (c->parsed()) return do_compress(comp, out);
    if (b->parsed()) return do_basis(bas, out);
    if (s->parsed()) return do_solve(sol, out);
    if (st->parsed()) return do_study(stu, out);
    if (r->parsed()) return do_report(rep, out);
  } catch (const Error& e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return is_numerical_failure(e.code()) ? kExitNumerical : kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInvalidInput;
}

}  // namespace trom::cli

// SPDX-License-Identifier: Apache-2.0
#include <json.hpp>

#include "trom/container.hpp"
#include "trom/error.hpp"

namespace trom {

using json = nlohmann::json;

namespace {

std::string axis_name(const char* stem, std::size_t i) { return std::string(stem) + std::to_string(i); }

Eigen::MatrixXd matrix_section(const SectionedFile& f, std::string_view name) {
  const DenseTensor& t = f.get(name);
  if (t.order() != 2) fail(ErrorCode::FormatError, "section '" + std::string(name) + "' is not a matrix");
  return t.to_matrix();
}

json parse_header(const SectionedFile& f) {
  try {
    return json::parse(f.header_json);
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError, std::string("bad container header: ") + e.what());
  }
}

}  // namespace

std::string_view format_name(const AnyDecomposition& d) {
  switch (d.index()) {
    case 0: return "cp";
    case 1: return "hosvd";
    default: return "tt";
  }
}

void save_decomposition(const std::filesystem::path& path, const AnyDecomposition& d) {
  SectionedFile f;
  json h;
  h["kind"] = "decomposition";
  h["format"] = std::string(format_name(d));
  if (const auto* cp = std::get_if<CpDecomposition>(&d)) {
    h["ranks"] = {cp->rank};
    h["relative_error"] = cp->relative_error;
    h["sweeps"] = cp->sweeps;
    h["seed"] = cp->seed;
    h["parameter_axes"] = cp->sigma_factors.size();
    f.add("u", DenseTensor::from_matrix(cp->u_factors));
    for (std::size_t i = 0; i < cp->sigma_factors.size(); ++i)
      f.add(axis_name("sigma", i), DenseTensor::from_matrix(cp->sigma_factors[i]));
    f.add("v", DenseTensor::from_matrix(cp->v_factors));
  } else if (const auto* tk = std::get_if<TuckerDecomposition>(&d)) {
    h["ranks"] = tk->ranks();
    h["relative_error_bound"] = tk->relative_error_bound();
    h["truncation_residuals"] = tk->truncation_residuals;
    h["input_norm"] = tk->input_norm;
    h["parameter_axes"] = tk->s_factors.size();
    f.add("core", tk->core);
    f.add("u", DenseTensor::from_matrix(tk->u));
    for (std::size_t i = 0; i < tk->s_factors.size(); ++i)
      f.add(axis_name("s", i), DenseTensor::from_matrix(tk->s_factors[i]));
    f.add("v", DenseTensor::from_matrix(tk->v));
  } else {
    const auto& tt = std::get<TtDecomposition>(d);
    h["ranks"] = tt.ranks();
    h["relative_error_bound"] = tt.relative_error_bound();
    h["truncation_residuals"] = tt.truncation_residuals;
    h["input_norm"] = tt.input_norm;
    h["parameter_axes"] = tt.carriages.size();
    f.add("u", DenseTensor::from_matrix(tt.u));
    for (std::size_t i = 0; i < tt.carriages.size(); ++i) f.add(axis_name("carriage", i), tt.carriages[i]);
    f.add("v", DenseTensor::from_matrix(tt.v));
  }
  f.header_json = h.dump();
  write_container(path, f);
}

AnyDecomposition load_decomposition(const std::filesystem::path& path) {
  const SectionedFile f = read_container(path);
  const json h = parse_header(f);
  if (h.value("kind", "") != "decomposition") fail(ErrorCode::FormatError, path.string() + " is not a decomposition");
  try {
    const std::string fmt = h.at("format");
    const std::size_t axes = h.at("parameter_axes");
    if (fmt == "cp") {
      CpDecomposition d;
      d.rank = h.at("ranks").at(0);
      d.relative_error = h.at("relative_error");
      d.sweeps = h.value("sweeps", std::size_t{0});
      d.seed = h.value("seed", std::uint64_t{0});
      d.u_factors = matrix_section(f, "u");
      for (std::size_t i = 0; i < axes; ++i) d.sigma_factors.push_back(matrix_section(f, axis_name("sigma", i)));
      d.v_factors = matrix_section(f, "v");
      return d;
    }
    if (fmt == "hosvd") {
      TuckerDecomposition d;
      d.core = f.get("core");
      d.u = matrix_section(f, "u");
      for (std::size_t i = 0; i < axes; ++i) d.s_factors.push_back(matrix_section(f, axis_name("s", i)));
      d.v = matrix_section(f, "v");
      d.truncation_residuals = h.at("truncation_residuals").get<std::vector<double>>();
      d.input_norm = h.at("input_norm");
      return d;
    }
    if (fmt == "tt") {
      TtDecomposition d;
      d.u = matrix_section(f, "u");
      for (std::size_t i = 0; i < axes; ++i) d.carriages.push_back(f.get(axis_name("carriage", i)));
      d.v = matrix_section(f, "v");
      d.w_scale = d.v.colwise().norm().transpose();
      d.truncation_residuals = h.at("truncation_residuals").get<std::vector<double>>();
      d.input_norm = h.at("input_norm");
      return d;
    }
    fail(ErrorCode::FormatError, "unknown decomposition format '" + fmt + "'");
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError, std::string("bad decomposition header: ") + e.what());
  }
}

}  // namespace trom

// SPDX-License-Identifier: Apache-2.0
#include "json_util.hpp"
#include "trom/error.hpp"
#include "trom/rom.hpp"

namespace trom {

using detail::json;

namespace {

// Upper triangle packed row by row.
DenseTensor pack_upper(const Eigen::MatrixXd& r) {
  std::vector<double> v;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = i; j < r.cols(); ++j) v.push_back(r(i, j));
  const std::size_t n = v.size();
  return DenseTensor({n}, std::move(v));
}

Eigen::MatrixXd unpack_upper(const DenseTensor& t, std::size_t r) {
  if (t.order() != 1 || t.size() != r * (r + 1) / 2) fail(ErrorCode::FormatError, "bad packed triangle");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  std::size_t k = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t[k++];
  return m;
}

std::string section(const char* stem, std::size_t i) { return std::string(stem) + std::to_string(i); }

Eigen::MatrixXd as_matrix(const DenseTensor& t) {
  if (t.order() != 2) fail(ErrorCode::FormatError, "section is not a matrix");
  return t.to_matrix();
}

}  // namespace

void save_payload(const std::filesystem::path& path, const PayloadFile& file) {
  SectionedFile f;
  json h;
  h["kind"] = "payload";
  h["format"] = std::string(format_label(payload_format(file.payload)));
  h["ranks"] = payload_ranks(file.payload);
  h["axis_sizes"] = payload_axis_sizes(file.payload);
  h["eps"] = file.eps;
  h["relative_error"] = file.relative_error;
  h["state_dim"] = file.state_dim;
  h["time_steps"] = file.time_steps;
  h["online_count"] = payload_count(file.payload);
  if (file.sampling) h["sampling"] = detail::sampling_to_json_value(*file.sampling);

  if (const auto* cp = std::get_if<OnlinePayloadCP>(&file.payload)) {
    h["r_v_square"] = cp->square_r_v();
    f.add("r_u", pack_upper(cp->r_u));
    f.add("r_v", cp->square_r_v() ? pack_upper(cp->r_v) : DenseTensor::from_matrix(cp->r_v));
    for (std::size_t i = 0; i < cp->sigma_factors.size(); ++i)
      f.add(section("sigma", i), DenseTensor::from_matrix(cp->sigma_factors[i]));
  } else if (const auto* hp = std::get_if<OnlinePayloadHOSVD>(&file.payload)) {
    f.add("core", hp->core);
    for (std::size_t i = 0; i < hp->s_factors.size(); ++i)
      f.add(section("s", i), DenseTensor::from_matrix(hp->s_factors[i]));
  } else {
    const auto& tt = std::get<OnlinePayloadTT>(file.payload);
    for (std::size_t i = 0; i < tt.carriages.size(); ++i) f.add(section("carriage", i), tt.carriages[i]);
    f.add("w_scale", DenseTensor::from_vector(tt.w_scale));
  }
  f.header_json = h.dump(2);
  write_container(path, f);
}

PayloadFile load_payload(const std::filesystem::path& path) {
  const SectionedFile f = read_container(path);
  const json h = detail::parse_json_text(f.header_json, "payload header");
  if (h.value("kind", "") != "payload") fail(ErrorCode::FormatError, path.string() + " is not a payload file");
  try {
    PayloadFile out;
    out.eps = h.value("eps", 0.0);
    out.relative_error = h.value("relative_error", 0.0);
    out.state_dim = h.value("state_dim", std::size_t{0});
    out.time_steps = h.value("time_steps", std::size_t{0});
    if (h.contains("sampling")) out.sampling = detail::sampling_from_json(h.at("sampling"));
    const Format fmt = parse_format(h.at("format").get<std::string>());
    const std::size_t axes = h.at("axis_sizes").size();
    if (fmt == Format::Cp) {
      OnlinePayloadCP p;
      const std::size_t r = h.at("ranks").at(0);
      p.r_u = unpack_upper(f.get("r_u"), r);
      p.r_v = h.at("r_v_square").get<bool>() ? unpack_upper(f.get("r_v"), r) : as_matrix(f.get("r_v"));
      for (std::size_t i = 0; i < axes; ++i) p.sigma_factors.push_back(as_matrix(f.get(section("sigma", i))));
      out.payload = std::move(p);
    } else if (fmt == Format::Hosvd) {
      OnlinePayloadHOSVD p{f.get("core"), {}};
      for (std::size_t i = 0; i < axes; ++i) p.s_factors.push_back(as_matrix(f.get(section("s", i))));
      out.payload = std::move(p);
    } else {
      OnlinePayloadTT p;
      for (std::size_t i = 0; i < axes; ++i) p.carriages.push_back(f.get(section("carriage", i)));
      p.w_scale = f.get("w_scale").to_vector();
      out.payload = std::move(p);
    }
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError, std::string("bad payload header: ") + e.what());
  }
}

void save_universal_basis(const std::filesystem::path& path, const UniversalBasis& basis) {
  SectionedFile f;
  json h;
  h["kind"] = "universal_basis";
  h["format"] = std::string(format_label(basis.source_format));
  h["rows"] = basis.u.rows();
  h["cols"] = basis.u.cols();
  f.header_json = h.dump(2);
  f.add("u", DenseTensor::from_matrix(basis.u));
  write_container(path, f);
}

UniversalBasis load_universal_basis(const std::filesystem::path& path) {
  const SectionedFile f = read_container(path);
  const json h = detail::parse_json_text(f.header_json, "basis header");
  if (h.value("kind", "") != "universal_basis") fail(ErrorCode::FormatError, path.string() + " is not a basis file");
  return UniversalBasis{as_matrix(f.get("u")), parse_format(h.value("format", "hosvd"))};
}

}  // namespace trom

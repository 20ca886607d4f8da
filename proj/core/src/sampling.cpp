// SPDX-License-Identifier: Apache-2.0
#include "trom/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "json_util.hpp"
#include "trom/error.hpp"
#include "trom/linalg.hpp"

namespace trom {

namespace {
constexpr double kSnapTol = 1e-12;
constexpr double kExactHitTol = 1e-12;
}  // namespace

// ------------------------------------------------------------ ParameterBox

ParameterBox::ParameterBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  require(!lower_.empty(), ErrorCode::InvalidInput, "parameter box needs at least one axis");
  require(lower_.size() == upper_.size(), ErrorCode::DimensionMismatch, "box bound lengths differ");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    require(std::isfinite(lower_[i]) && std::isfinite(upper_[i]), ErrorCode::InvalidInput, "box bounds must be finite");
    require(lower_[i] < upper_[i], ErrorCode::InvalidInput, "box needs lower < upper on every axis");
  }
}

double ParameterBox::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) s += width(i) * width(i);
  return std::sqrt(s);
}

bool ParameterBox::contains(std::span<const double> alpha) const {
  if (alpha.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double slack = kSnapTol * width(i);
    if (!(alpha[i] >= lower_[i] - slack && alpha[i] <= upper_[i] + slack)) return false;
  }
  return true;
}

// ----------------------------------------------------------- CartesianGrid

CartesianGrid::CartesianGrid(ParameterBox box, std::vector<std::vector<double>> nodes)
    : box_(std::move(box)), nodes_(std::move(nodes)) {
  require(nodes_.size() == box_.dimension(), ErrorCode::DimensionMismatch, "need one node list per box axis");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& ax = nodes_[i];
    require(!ax.empty(), ErrorCode::InvalidGrid, "grid axis has no nodes");
    for (std::size_t j = 0; j < ax.size(); ++j) {
      require(std::isfinite(ax[j]), ErrorCode::InvalidGrid, "grid nodes must be finite");
      const double slack = kSnapTol * box_.width(i);
      require(ax[j] >= box_.lower()[i] - slack && ax[j] <= box_.upper()[i] + slack, ErrorCode::InvalidGrid,
              "grid node outside the box");
      if (j > 0) require(ax[j] > ax[j - 1], ErrorCode::InvalidGrid, "grid nodes must be strictly increasing");
    }
  }
}

CartesianGrid CartesianGrid::uniform(ParameterBox box, const std::vector<std::size_t>& counts) {
  require(counts.size() == box.dimension(), ErrorCode::DimensionMismatch, "need one node count per axis");
  std::vector<std::vector<double>> nodes(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    require(counts[i] >= 1, ErrorCode::InvalidGrid, "node counts must be >= 1");
    const double lo = box.lower()[i];
    const double hi = box.upper()[i];
    if (counts[i] == 1) {
      nodes[i] = {0.5 * (lo + hi)};
      continue;
    }
    for (std::size_t j = 0; j < counts[i]; ++j)
      nodes[i].push_back(j + 1 == counts[i] ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(counts[i] - 1));
  }
  return CartesianGrid(std::move(box), std::move(nodes));
}

std::vector<std::size_t> CartesianGrid::axis_sizes() const {
  std::vector<std::size_t> s;
  for (const auto& ax : nodes_) s.push_back(ax.size());
  return s;
}

std::size_t CartesianGrid::count() const {
  std::size_t k = 1;
  for (const auto& ax : nodes_) k *= ax.size();
  return k;
}

double CartesianGrid::max_gap(std::size_t axis) const {
  const auto& ax = nodes_.at(axis);
  double g = 0.0;
  for (std::size_t j = 1; j < ax.size(); ++j) g = std::max(g, ax[j] - ax[j - 1]);
  return g;
}

Point CartesianGrid::point(std::size_t linear) const {
  require(linear < count(), ErrorCode::InvalidInput, "grid point index out of range");
  Point p(nodes_.size());
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    const std::size_t n = nodes_[i].size();
    p[i] = nodes_[i][linear % n];
    linear /= n;
  }
  return p;
}

std::vector<Point> CartesianGrid::points() const {
  std::vector<Point> out;
  const std::size_t k = count();
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) out.push_back(point(j));
  return out;
}

// --------------------------------------------------------- GeneralSampling

GeneralSampling::GeneralSampling(ParameterBox box, std::vector<Point> samples)
    : box_(std::move(box)), samples_(std::move(samples)) {
  require(samples_.size() >= box_.dimension() + 1, ErrorCode::InvalidInput, "general sampling needs K >= D + 1");
  for (const auto& s : samples_) {
    require(s.size() == box_.dimension(), ErrorCode::DimensionMismatch, "sample dimension differs from the box");
    require(box_.contains(s), ErrorCode::OutOfDomain, "sample outside the box");
  }
  std::vector<std::size_t> order(samples_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples_[a] < samples_[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    require(samples_[order[i]] != samples_[order[i - 1]], ErrorCode::InvalidInput, "samples must be pairwise distinct");
}

GeneralSampling GeneralSampling::from_grid(const CartesianGrid& grid) {
  return GeneralSampling(grid.box(), grid.points());
}

// ----------------------------------------------------------- InterpVectors

std::size_t InterpVectors::nonzero_count(std::size_t axis) const {
  const auto& v = axes.at(axis);
  return static_cast<std::size_t>((v.array() != 0.0).count());
}

namespace {

void check_alpha_dims(std::size_t got, std::size_t want) {
  if (got != want)
    fail(ErrorCode::DimensionMismatch,
         "parameter vector has " + std::to_string(got) + " entries, expected " + std::to_string(want));
}

// Index of the node within snap tolerance of x, or npos.
std::size_t snap(const std::vector<double>& nodes, double x, double width) {
  const double tol = kSnapTol * width;
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), x - tol);
  if (it != nodes.end() && std::abs(*it - x) <= tol) return static_cast<std::size_t>(it - nodes.begin());
  return static_cast<std::size_t>(-1);
}

Eigen::VectorXd indicator(std::size_t n, std::size_t j) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

}  // namespace

InterpVectors position_vectors(const CartesianGrid& grid, std::span<const double> alpha) {
  check_alpha_dims(alpha.size(), grid.dimension());
  InterpVectors out;
  for (std::size_t i = 0; i < grid.dimension(); ++i) {
    const auto& nodes = grid.nodes(i);
    const std::size_t j = snap(nodes, alpha[i], grid.box().width(i));
    if (j == static_cast<std::size_t>(-1))
      fail(ErrorCode::NotOnGrid, "coordinate " + std::to_string(i) + " = " + std::to_string(alpha[i]) +
                                     " is not a grid node");
    out.axes.push_back(indicator(nodes.size(), j));
  }
  return out;
}

InterpVectors lagrange_vectors(const CartesianGrid& grid, std::span<const double> alpha, std::size_t p) {
  check_alpha_dims(alpha.size(), grid.dimension());
  require(p >= 1, ErrorCode::InvalidInput, "stencil size must be >= 1");
  if (!grid.box().contains(alpha)) fail(ErrorCode::OutOfDomain, "parameter vector lies outside the box");
  InterpVectors out;
  for (std::size_t i = 0; i < grid.dimension(); ++i) {
    const auto& nodes = grid.nodes(i);
    const std::size_t n = nodes.size();
    if (p > n)
      fail(ErrorCode::StencilTooLarge,
           "stencil " + std::to_string(p) + " exceeds " + std::to_string(n) + " nodes on axis " + std::to_string(i));
    const double x = alpha[i];
    const std::size_t hit = snap(nodes, x, grid.box().width(i));
    if (hit != static_cast<std::size_t>(-1)) {
      out.axes.push_back(indicator(n, hit));
      continue;
    }
    // Start from the bracketing interval (the nearest node when p = 1 or x is
    // outside the node range), then grow the window one node at a time toward
    // the closer side, preferring the left on ties.
    std::size_t lo = 0;
    std::size_t hi = 0;
    const auto up = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
    if (p == 1) {
      for (std::size_t j = 1; j < n; ++j)
        if (std::abs(nodes[j] - x) < std::abs(nodes[lo] - x)) lo = j;
      hi = lo;
    } else if (up == n) {
      lo = hi = n - 1;
    } else if (up > 0) {
      lo = up - 1;
      hi = up;
    }
    while (hi - lo + 1 < p) {
      if (lo == 0) {
        ++hi;
      } else if (hi + 1 == n) {
        --lo;
      } else if (std::abs(x - nodes[lo - 1]) <= std::abs(nodes[hi + 1] - x)) {
        --lo;
      } else {
        ++hi;
      }
    }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = lo; j <= hi; ++j) {
      double w = 1.0;
      for (std::size_t m = lo; m <= hi; ++m)
        if (m != j) w *= (x - nodes[m]) / (nodes[j] - nodes[m]);
      e(static_cast<Eigen::Index>(j)) = w;
    }
    out.axes.push_back(std::move(e));
  }
  return out;
}

namespace {

Eigen::VectorXd minnorm_on_neighbors(const GeneralSampling& s, std::span<const double> alpha,
                                     const std::vector<std::size_t>& order, const std::vector<double>& dist,
                                     std::size_t q) {
  const std::size_t d = s.dimension();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(q));
  Eigen::VectorXd w(static_cast<Eigen::Index>(q));
  for (std::size_t k = 0; k < q; ++k) {
    const auto& pt = s.samples()[order[k]];
    for (std::size_t i = 0; i < d; ++i) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = pt[i];
    x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)) = 1.0;
    w(static_cast<Eigen::Index>(k)) = dist[order[k]];
  }
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(d + 1));
  for (std::size_t i = 0; i < d; ++i) rhs(static_cast<Eigen::Index>(i)) = alpha[i];
  rhs(static_cast<Eigen::Index>(d)) = 1.0;
  const Eigen::VectorXd a = weighted_minnorm_solve(x, w, rhs);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.count()));
  for (std::size_t k = 0; k < q; ++k) e(static_cast<Eigen::Index>(order[k])) = a(static_cast<Eigen::Index>(k));
  return e;
}

}  // namespace

InterpVectors general_vector(const GeneralSampling& s, std::span<const double> alpha, std::size_t q) {
  check_alpha_dims(alpha.size(), s.dimension());
  if (!s.box().contains(alpha)) fail(ErrorCode::OutOfDomain, "parameter vector lies outside the box");
  require(q >= s.dimension() + 1, ErrorCode::InvalidInput, "need q >= D + 1 neighbors");
  require(q <= s.count(), ErrorCode::InvalidInput, "q exceeds the number of samples");

  const std::size_t k = s.count();
  std::vector<double> dist(k);
  for (std::size_t j = 0; j < k; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const double diff = s.samples()[j][i] - alpha[i];
      acc += diff * diff;
    }
    dist[j] = std::sqrt(acc);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  InterpVectors out;
  out.general = true;
  if (dist[order[0]] < kExactHitTol * s.box().diameter()) {
    out.axes.push_back(indicator(k, order[0]));
    return out;
  }
  try {
    out.axes.push_back(minnorm_on_neighbors(s, alpha, order, dist, q));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateNeighborhood || q == k) throw;
    out.axes.push_back(minnorm_on_neighbors(s, alpha, order, dist, std::min(k, 2 * q)));
  }
  return out;
}

InterpVectors interpolation_vectors(const SamplingScheme& s, std::span<const double> alpha,
                                    const InterpOptions& options) {
  if (const auto* g = std::get_if<CartesianGrid>(&s)) return lagrange_vectors(*g, alpha, options.p);
  const auto& gs = std::get<GeneralSampling>(s);
  const std::size_t q = options.q == 0 ? gs.dimension() + 1 : options.q;
  return general_vector(gs, alpha, q);
}

double grid_delta(const CartesianGrid& grid, double p) {
  require(p > 0.0, ErrorCode::InvalidInput, "grid_delta exponent must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < grid.dimension(); ++i) s += std::pow(grid.max_gap(i), p);
  return std::pow(s, 1.0 / p);
}

const ParameterBox& sampling_box(const SamplingScheme& s) {
  return std::visit([](const auto& x) -> const ParameterBox& { return x.box(); }, s);
}

std::size_t sampling_count(const SamplingScheme& s) {
  return std::visit([](const auto& x) { return x.count(); }, s);
}

std::vector<std::size_t> parameter_mode_sizes(const SamplingScheme& s) {
  if (const auto* g = std::get_if<CartesianGrid>(&s)) return g->axis_sizes();
  return {std::get<GeneralSampling>(s).count()};
}

std::vector<Point> sampling_points(const SamplingScheme& s) {
  if (const auto* g = std::get_if<CartesianGrid>(&s)) return g->points();
  return std::get<GeneralSampling>(s).samples();
}

// -------------------------------------------------------------------- JSON

namespace detail {

json parse_json_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed ") + what + " JSON: " + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string().c_str());
}

ParameterBox box_from_json(const json& j) {
  try {
    return ParameterBox(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>());
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad box JSON: ") + e.what());
  }
}

json box_to_json(const ParameterBox& box) { return json{{"lower", box.lower()}, {"upper", box.upper()}}; }

SamplingScheme sampling_from_json(const json& j) {
  try {
    ParameterBox box = box_from_json(j.at("box"));
    if (j.contains("nodes"))
      return CartesianGrid(std::move(box), j.at("nodes").get<std::vector<std::vector<double>>>());
    if (j.contains("uniform")) return CartesianGrid::uniform(std::move(box), j.at("uniform").get<std::vector<std::size_t>>());
    if (j.contains("samples")) return GeneralSampling(std::move(box), j.at("samples").get<std::vector<Point>>());
    if (j.contains("random")) {
      const auto& r = j.at("random");
      const std::size_t count = r.at("count");
      std::mt19937_64 rng(r.value("seed", std::uint64_t{0}));
      std::vector<Point> pts(count, Point(box.dimension()));
      for (auto& p : pts)
        for (std::size_t i = 0; i < p.size(); ++i)
          p[i] = std::uniform_real_distribution<double>(box.lower()[i], box.upper()[i])(rng);
      return GeneralSampling(std::move(box), std::move(pts));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad sampling JSON: ") + e.what());
  }
  fail(ErrorCode::InvalidInput, "sampling JSON needs one of nodes, uniform, samples, random");
}

json sampling_to_json_value(const SamplingScheme& s) {
  json j;
  j["box"] = box_to_json(sampling_box(s));
  if (const auto* g = std::get_if<CartesianGrid>(&s)) {
    json nodes = json::array();
    for (std::size_t i = 0; i < g->dimension(); ++i) nodes.push_back(g->nodes(i));
    j["nodes"] = nodes;
  } else {
    j["samples"] = std::get<GeneralSampling>(s).samples();
  }
  return j;
}

}  // namespace detail

SamplingScheme parse_sampling(const std::string& json_text) {
  return detail::sampling_from_json(detail::parse_json_text(json_text, "sampling"));
}

SamplingScheme load_sampling(const std::filesystem::path& path) {
  return detail::sampling_from_json(detail::read_json_file(path));
}

std::string sampling_to_json(const SamplingScheme& s) { return detail::sampling_to_json_value(s).dump(); }

ParameterBox parse_box(const std::string& json_text) {
  return detail::box_from_json(detail::parse_json_text(json_text, "box"));
}

}  // namespace trom

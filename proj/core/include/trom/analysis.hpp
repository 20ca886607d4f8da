// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trom/decomp.hpp"
#include "trom/dynsys.hpp"
#include "trom/models.hpp"
#include "trom/rom.hpp"
#include "trom/sampling.hpp"

namespace trom {

// ------------------------------------------------------------ errors ----

/// (1/(NM)) ||(I - Z Z^T) S||_F^2 for an M x N snapshot matrix S and a basis
/// Z with orthonormal columns.
[[nodiscard]] double projection_error(const Eigen::MatrixXd& snapshots, const Eigen::MatrixXd& z);

/// projection_error of the dense extraction of the raw tensor at e; the
/// square root of it when take_sqrt is set.
[[nodiscard]] double representation_error(const DenseTensor& phi, const Eigen::MatrixXd& z, const InterpVectors& e,
                                          bool take_sqrt = false);

/// Z = U * coords.
[[nodiscard]] Eigen::MatrixXd reduced_basis(const UniversalBasis& u, const LocalBasis& lb);

/// Basis chosen for the j-th sample point.
using BasisProvider = std::function<Eigen::MatrixXd(std::size_t, const Point&)>;

/// E over the sampling set: sqrt((1/(MNK)) sum_j ||(I - Z_j Z_j^T) Phi_j||_F^2),
/// or its square when take_sqrt is false.
[[nodiscard]] double in_sample_error(const DenseTensor& phi, const SamplingScheme& sampling,
                                     const BasisProvider& basis, bool take_sqrt = true);

/// Relative discrete L-infinity-in-time, l2-in-space error:
/// max_k ||w_k - v_k|| / max_k ||v_k|| with v the reference.
[[nodiscard]] double solution_error(const Trajectory& approx, const Trajectory& truth);

// --------------------------------------------------------- estimates ----

/// The three addends of the representation estimate. The first is given with
/// ||Phi||_F as printed and with ||Phi||_F^2 as the proof chain has it; the
/// third is delta^{2p} with its unknown constant left out.
struct EstimateTerms {
  double term1_as_written = 0.0;  ///< C_e^{2D} eps^2 ||Phi||_F / (NM)
  double term1_squared = 0.0;     ///< C_e^{2D} eps^2 ||Phi||_F^2 / (NM)
  double term2 = 0.0;             ///< sum_{i>n} sigma_i^2 / (NM)
  double term3_scaffold = 0.0;    ///< delta^{2p}
};

struct EstimateInputs {
  double eps = 0.0;           ///< achieved relative compression accuracy
  double phi_norm = 0.0;      ///< ||Phi||_F
  Eigen::VectorXd sigma;      ///< all singular values of the extracted matrix
  std::size_t n = 0;
  double delta = 0.0;         ///< grid step parameter
  double p = 2.0;
  double c_e = 1.0;
  std::size_t parameter_dim = 1;
  std::size_t state_dim = 1;  ///< M
  std::size_t time_steps = 1; ///< N
  bool general_sampling = false;  ///< uses D = 1 and delta^2
};

[[nodiscard]] EstimateTerms estimate_terms(const EstimateInputs& in);

// ------------------------------------------------------- compression ----

struct CompressionReport {
  Format format = Format::Hosvd;
  std::vector<std::size_t> ranks;
  std::vector<std::size_t> axis_sizes;
  std::uint64_t full_count = 0;    ///< M K N
  std::uint64_t online_count = 0;  ///< entries of the online payload
  std::uint64_t cf_numerator = 0;  ///< CF in lowest terms
  std::uint64_t cf_denominator = 1;

  [[nodiscard]] double compression_factor() const noexcept {
    return static_cast<double>(cf_numerator) / static_cast<double>(cf_denominator);
  }
};

/// Entry counts per format:
///   CP:    R(R+1)/2 + R(R+1)/2 (or N R when R > N) + R sum n_i
///   HOSVD: prod of the core dims + sum n~_i n_i
///   TT:    sum r~_i n_i r~_{i+1} + r~_{D+1}
/// ranks are [R] for CP, the D+2 core dims for HOSVD and r~_1..r~_{D+1} for TT.
[[nodiscard]] CompressionReport compression_report(Format format, const std::vector<std::size_t>& ranks,
                                                   const std::vector<std::size_t>& axis_sizes, std::size_t m,
                                                   std::size_t n);
[[nodiscard]] CompressionReport compression_report(const PayloadFile& file);
[[nodiscard]] std::string compression_report_json(const CompressionReport& r);

// ------------------------------------------------------------- study ----

enum class Method { Pod, Cp, Hosvd, Tt };

[[nodiscard]] std::string_view method_label(Method m) noexcept;
/// Accepts "pod", "cp", "hosvd", "tt" and the "trom-" prefixed forms.
[[nodiscard]] Method parse_method(std::string_view name);

struct StudyOptions {
  std::vector<Method> methods{Method::Pod, Method::Hosvd, Method::Tt};
  std::vector<std::size_t> n_values{10};
  std::vector<double> eps_values{1e-6};
  std::size_t cp_rank = 20;
  CpOptions cp;
  std::size_t random_samples = 50;
  std::uint64_t seed = 0;
  InterpOptions interp;
  bool solve_truth = true;
};

struct ErrorRecord {
  Point alpha;
  std::size_t sample = 0;
  Method method = Method::Pod;
  std::size_t n = 0;
  double eps = 0.0;  ///< 0 for POD and CP
  double representation_error = 0.0;  ///< E_n(alpha), NaN without truth
  double solution_error = 0.0;        ///< R_X(alpha), NaN without truth
  double pod_error = 0.0;             ///< R_POD(alpha) at the same n
  double gain = 0.0;                  ///< pod_error / solution_error
  std::string failure;                ///< empty on success
};

struct ErrorAggregate {
  Method method = Method::Pod;
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t count = 0;
  std::size_t failures = 0;
  double gain_mean = 0.0;
  double gain_min = 0.0;
  double gain_std = 0.0;
  double error_mean = 0.0;
  double error_max = 0.0;  ///< approximates the L-infinity over the box
};

struct ErrorReport {
  std::vector<ErrorRecord> records;
  std::vector<ErrorAggregate> aggregates;
  std::uint64_t seed = 0;

  [[nodiscard]] const ErrorAggregate* find(Method m, std::size_t n, double eps) const;
};

/// Parameters drawn uniformly from the box with the given seed.
[[nodiscard]] std::vector<Point> random_parameters(const ParameterBox& box, std::size_t count, std::uint64_t seed);

/// Builds every requested reduced model from one snapshot tensor and compares
/// them with the high-fidelity solution at random out-of-sample parameters.
/// Per-alpha failures are recorded and the study moves on.
[[nodiscard]] ErrorReport gain_study(const AffineSystem& sys, const SamplingScheme& sampling, double dt,
                                     std::size_t steps, const StudyOptions& opt);
/// Same with a precomputed snapshot tensor.
[[nodiscard]] ErrorReport gain_study(const AffineSystem& sys, const SamplingScheme& sampling, const DenseTensor& phi,
                                     double dt, const StudyOptions& opt);

/// Aggregates recomputed from records in index order.
[[nodiscard]] std::vector<ErrorAggregate> aggregate_records(const std::vector<ErrorRecord>& records);

void write_report_csv(const std::filesystem::path& path, const ErrorReport& report);
void write_aggregates_csv(const std::filesystem::path& path, const ErrorReport& report);

/// Sweep description: {"model": {...}, "sampling": {...}, "methods": [...],
/// "n": [...], "eps": [...], "cp_rank", "samples", "seed", "p", "q",
/// "max_sweeps", "truth": "solve"|"skip"}.
struct StudySpec {
  ModelConfig model;
  SamplingScheme sampling;
  StudyOptions options;
};

[[nodiscard]] StudySpec parse_study_spec(const std::string& json_text);
[[nodiscard]] StudySpec load_study_spec(const std::filesystem::path& path);

}  // namespace trom

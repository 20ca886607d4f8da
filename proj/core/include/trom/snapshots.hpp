// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "trom/dynsys.hpp"
#include "trom/sampling.hpp"
#include "trom/tensor.hpp"

namespace trom {

/// Snapshot tensor (M, n_1 .. n_D, N) for a grid or (M, K, N) for general
/// sampling, with Phi(i, j, k) = u_i(t_k, alpha_j). Samples are solved one
/// after another; a solver error is rethrown with the failing alpha.
[[nodiscard]] DenseTensor generate_snapshots(const AffineSystem& sys, const SamplingScheme& sampling, double dt,
                                             std::size_t steps);

/// Trajectory of sample j stored in a snapshot tensor (any sampling layout).
[[nodiscard]] Eigen::MatrixXd snapshot_block(const DenseTensor& phi, std::size_t sample);

}  // namespace trom

// Copyright 2026 The ktdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KTD_FLOWS_HPP
#define KTD_FLOWS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ktd/kernels.hpp"
#include "ktd/measures.hpp"
#include "ktd/rng.hpp"
#include "ktd/types.hpp"

namespace ktd {

enum class FlowLoss {
  kKt,            ///< d_KT(mu, nu)
  kMmdK2Squared,  ///< MMD^2 with the squared kernel
};

enum class StepRule {
  /// x_j <- x_j - lr * grad f(x_j), with f the current witness (n * dLoss/dx_j).
  kParticleVelocity,
  /// x_j <- x_j - lr * dLoss/dx_j.
  kLossGradient,
};

struct FlowConfig {
  KernelSpec kernel = KernelSpec::laplacian(1.0);
  FlowLoss loss = FlowLoss::kKt;
  double learning_rate = 0.005;
  std::size_t steps = 1000;
  std::size_t record_every = 100;
  StepRule step_rule = StepRule::kParticleVelocity;
  std::uint64_t jitter_seed = 0;

  void validate() const;
};

struct Snapshot {
  std::size_t step = 0;
  PointMatrix particles;
  double loss = 0.0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  /// Loss before every step, followed by the loss at the final positions.
  std::vector<double> losses;
};

struct FlowEvaluation {
  double loss = 0.0;
  PointMatrix gradient;  ///< dLoss/dx_j, one row per particle
};

/// Loss and Danskin gradient of x -> d_KT(uniform(x), target): eigenfunctions
/// are frozen, numerically-zero eigenvalues contribute nothing. Particles that
/// coincide bitwise with a target atom or another particle are moved by a
/// seeded uniform jitter of size 1e-9 first (unless mu - nu vanishes exactly).
FlowEvaluation kt_flow_evaluate(const KernelSpec& spec, const PointMatrix& particles, const DiscreteMeasure& target,
                                std::uint64_t jitter_seed = 0);
PointMatrix kt_flow_gradient(const KernelSpec& spec, const PointMatrix& particles, const DiscreteMeasure& target,
                             std::uint64_t jitter_seed = 0);

/// Loss MMD^2_{k^2}(uniform(x), target) and its exact gradient.
FlowEvaluation mmd_k2_flow_evaluate(const KernelSpec& spec, const PointMatrix& particles,
                                    const DiscreteMeasure& target);
PointMatrix mmd_k2_flow_gradient(const KernelSpec& spec, const PointMatrix& particles, const DiscreteMeasure& target);

struct CloudPair {
  PointMatrix init;
  PointMatrix target;
};

/// Two n-point Gaussian blobs in the unit square: the initial cloud around
/// (0.3, 0.3) and the target around (0.7, 0.7), std 0.08, clipped to [0, 1]^2.
CloudPair unit_square_clouds(std::size_t n, Rng& rng);

/// Fixed-step gradient descent. Throws NumericalError on a non-finite loss or gradient.
Trajectory run_flow(const FlowConfig& config, const PointMatrix& init, const DiscreteMeasure& target);

}  // namespace ktd

#endif  // KTD_FLOWS_HPP

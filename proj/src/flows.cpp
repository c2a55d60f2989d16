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

#include "ktd/flows.hpp"

#include <cmath>
#include <cstring>
#include <string_view>
#include <unordered_set>

#include <fmt/format.h>

#include "ktd/distances.hpp"
#include "ktd/errors.hpp"
#include "ktd/spectral.hpp"

namespace ktd {
namespace {

constexpr double kJitter = 1e-9;

std::string_view row_key(const PointMatrix& m, Eigen::Index i) {
  return {reinterpret_cast<const char*>(m.data() + i * m.cols()), static_cast<std::size_t>(m.cols()) * sizeof(double)};
}

// Rows of `particles` equal to a target atom or to an earlier particle.
std::vector<Eigen::Index> colliding_rows(const PointMatrix& particles, const PointMatrix& target) {
  std::unordered_set<std::string_view> seen;
  for (Eigen::Index i = 0; i < target.rows(); ++i) seen.insert(row_key(target, i));
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < particles.rows(); ++i) {
    if (!seen.insert(row_key(particles, i)).second) out.push_back(i);
  }
  return out;
}

void check_shapes(const PointMatrix& particles, const DiscreteMeasure& target) {
  if (particles.rows() == 0) {
    throw InvalidArgument("particle flow needs at least one particle");
  }
  if (particles.cols() != target.dim()) {
    throw DimensionMismatch(
        fmt::format("particles have dimension {} but the target has {}", particles.cols(), target.dim()));
  }
}

}  // namespace

void FlowConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument(fmt::format("learning rate must be finite and nonnegative, got {}", learning_rate));
  }
  if (steps < 1) {
    throw InvalidArgument("flow needs at least one step");
  }
  if (record_every < 1) {
    throw InvalidArgument("record_every must be at least 1");
  }
  if (!kernel.differentiable()) {
    throw Unsupported(fmt::format("particle flows need a differentiable kernel, got {}", kernel.describe()));
  }
}

FlowEvaluation kt_flow_evaluate(const KernelSpec& spec, const PointMatrix& particles, const DiscreteMeasure& target,
                                std::uint64_t jitter_seed) {
  check_shapes(particles, target);
  if (!spec.differentiable()) {
    throw Unsupported(fmt::format("kt flow gradient needs a differentiable kernel, got {}", spec.describe()));
  }
  const auto n = particles.rows();
  const auto d = particles.cols();
  FlowEvaluation out{0.0, PointMatrix::Zero(n, d)};

  PointMatrix x = particles;
  DiscreteMeasure mu = DiscreteMeasure::uniform(x);
  SignedAtomList atoms = merge_difference(mu, target);
  if (atoms.empty()) {
    return out;
  }
  if (const auto hits = colliding_rows(x, target.points()); !hits.empty()) {
    Rng rng(jitter_seed, 0x6a6974746572ULL);
    for (Eigen::Index i : hits) {
      for (Eigen::Index c = 0; c < d; ++c) {
        x(i, c) += kJitter * (2.0 * rng.uniform() - 1.0);
      }
    }
    mu = DiscreteMeasure::uniform(x);
    atoms = merge_difference(mu, target);
  }

  const SignedSpectrum spectrum = signed_operator_spectrum(spec, atoms);
  out.loss = spectrum.trace_norm();
  const Witness witness = build_witness(spectrum, spec);
  const double mass = 1.0 / static_cast<double>(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    witness_gradient(witness, row_span(x, j), row_span(out.gradient, j));
  }
  out.gradient *= mass;
  return out;
}

PointMatrix kt_flow_gradient(const KernelSpec& spec, const PointMatrix& particles, const DiscreteMeasure& target,
                             std::uint64_t jitter_seed) {
  return kt_flow_evaluate(spec, particles, target, jitter_seed).gradient;
}

FlowEvaluation mmd_k2_flow_evaluate(const KernelSpec& spec, const PointMatrix& particles,
                                    const DiscreteMeasure& target) {
  check_shapes(particles, target);
  const KernelSpec sq = kernel_square(spec);
  if (!sq.differentiable()) {
    throw Unsupported(fmt::format("MMD flow gradient needs a differentiable kernel, got {}", spec.describe()));
  }
  const auto n = particles.rows();
  const auto d = particles.cols();
  const double mass = 1.0 / static_cast<double>(n);
  const Vector w = Vector::Constant(n, mass);

  FlowEvaluation out{0.0, PointMatrix::Zero(n, d)};
  const double loss = self_kernel_sum(sq, particles, w) + self_kernel_sum(sq, target.points(), target.weights()) -
                      2.0 * weighted_kernel_sum(sq, particles, w, target.points(), target.weights());
  out.loss = std::max(loss, 0.0);

  std::vector<double> g(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < n; ++j) {
    auto gj = row_span(out.gradient, j);
    for (Eigen::Index l = 0; l < n; ++l) {
      kernel_grad_y(sq, row_span(particles, l), row_span(particles, j), g);
      for (Eigen::Index c = 0; c < d; ++c) gj[c] += mass * g[c];
    }
    for (Eigen::Index b = 0; b < target.size(); ++b) {
      kernel_grad_y(sq, row_span(target.points(), b), row_span(particles, j), g);
      for (Eigen::Index c = 0; c < d; ++c) gj[c] -= target.weights()[b] * g[c];
    }
    for (Eigen::Index c = 0; c < d; ++c) gj[c] *= 2.0 * mass;
  }
  return out;
}

PointMatrix mmd_k2_flow_gradient(const KernelSpec& spec, const PointMatrix& particles, const DiscreteMeasure& target) {
  return mmd_k2_flow_evaluate(spec, particles, target).gradient;
}

CloudPair unit_square_clouds(std::size_t n, Rng& rng) {
  const Vector a = Vector::Constant(2, 0.3);
  const Vector b = Vector::Constant(2, 0.7);
  CloudPair out{sample_gaussian(a, 0.08, n, rng), sample_gaussian(b, 0.08, n, rng)};
  out.init = out.init.cwiseMax(0.0).cwiseMin(1.0);
  out.target = out.target.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

Trajectory run_flow(const FlowConfig& config, const PointMatrix& init, const DiscreteMeasure& target) {
  config.validate();
  check_shapes(init, target);
  const double n = static_cast<double>(init.rows());
  const double step_scale =
      config.learning_rate * (config.step_rule == StepRule::kParticleVelocity ? n : 1.0);

  auto evaluate = [&](const PointMatrix& x, std::size_t step) {
    FlowEvaluation e = config.loss == FlowLoss::kKt
                           ? kt_flow_evaluate(config.kernel, x, target, config.jitter_seed + step)
                           : mmd_k2_flow_evaluate(config.kernel, x, target);
    if (!std::isfinite(e.loss) || !e.gradient.allFinite()) {
      throw NumericalError(fmt::format("particle flow diverged at step {} (loss {})", step, e.loss));
    }
    return e;
  };

  Trajectory traj;
  traj.losses.reserve(config.steps + 1);
  PointMatrix x = init;
  for (std::size_t t = 0; t < config.steps; ++t) {
    const FlowEvaluation e = evaluate(x, t);
    traj.losses.push_back(e.loss);
    if (t % config.record_every == 0) {
      traj.snapshots.push_back({t, x, e.loss});
    }
    x -= step_scale * e.gradient;
  }
  const FlowEvaluation last = evaluate(x, config.steps);
  traj.losses.push_back(last.loss);
  traj.snapshots.push_back({config.steps, x, last.loss});
  return traj;
}

}  // namespace ktd

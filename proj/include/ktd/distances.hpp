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

#ifndef KTD_DISTANCES_HPP
#define KTD_DISTANCES_HPP

#include <span>
#include <string>
#include <vector>

#include "ktd/kernels.hpp"
#include "ktd/measures.hpp"
#include "ktd/spectral.hpp"

namespace ktd {

/// How kt_distance obtains the signed spectrum.
enum class SpectralRoute {
  kFactored,  ///< pivoted Cholesky + eigenvalues of F^T D F (default, scales to large r)
  kEigen,     ///< full G^{1/2} D G^{1/2} eigendecomposition
};

/// Kernel trace distance: Schatten-1 norm of Sigma_mu - Sigma_nu.
double kt_distance(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   SpectralRoute route = SpectralRoute::kFactored);

/// sum_ij wa_i wb_j k(a_i, b_j).
double weighted_kernel_sum(const KernelSpec& spec, const PointMatrix& a, const Vector& wa, const PointMatrix& b,
                           const Vector& wb);
/// sum_ij w_i w_j k(x_i, x_j), evaluated over the upper triangle.
double self_kernel_sum(const KernelSpec& spec, const PointMatrix& x, const Vector& w);

/// Biased (V-statistic) squared MMD over the merged signed atoms.
double mmd_squared(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);
double mmd(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);
/// MMD with the squared kernel = Schatten-2 norm of Sigma_mu - Sigma_nu.
double mmd_k2(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);
/// |Sigma_mu - Sigma_nu|_2 / sqrt(|Sigma_mu|_2^2 + |Sigma_nu|_2^2), in [0, sqrt(2)].
double mmd_normalized(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);
/// 0.5 * MMD_k^2, the scale on which the contaminated-Gaussian ABC thresholds
/// for plain MMD are expressed.
double mmd_half_squared(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Fidelity Tr|Sigma_mu^{1/2} Sigma_nu^{1/2}| = nuclear norm of W_X^{1/2} K_XY W_Y^{1/2}, clamped to [0, 1].
double fidelity(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);
/// Kernel Bures-Wasserstein distance sqrt(2 - 2F). Unit-diagonal kernels only.
double kbw_distance(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Exact W1 on the real line, integral of |F_mu - F_nu|.
double wasserstein1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Optimal dual function of the trace-distance IPM:
/// f(x) = sum_i sign_i (sum_k coeffs(i, k) k(z_k, x))^2.
struct Witness {
  PointMatrix atoms;
  Matrix coeffs;  ///< kept-rank x r
  Vector signs;   ///< entries in {-1, 0, +1}
  KernelSpec kernel;
};

Witness build_witness(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      double tol = kDefaultSpectralTol);
Witness build_witness(const SignedSpectrum& spectrum, const KernelSpec& spec);
double witness_evaluate(const Witness& w, std::span<const double> x);
/// Gradient of the witness at x (differentiable kernels only).
void witness_gradient(const Witness& w, std::span<const double> x, std::span<double> out);

enum class Metric { kKt, kMmd, kMmdK2, kMmdNormalized, kMmdEnergy, kKbw, kW1, kMmdHalfSquared };

/// Names used on the command line: kt, mmd, mmd2, mmdn, mmde, kbw, w1, mmd-half-sq.
Metric metric_from_name(const std::string& name);
std::string metric_name(Metric metric);
std::vector<std::string> metric_names();

/// Dispatch to the metric. `mmde` always uses the energy kernel; `w1` ignores the kernel.
double evaluate_metric(Metric metric, const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace ktd

#endif  // KTD_DISTANCES_HPP

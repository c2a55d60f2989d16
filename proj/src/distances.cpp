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

#include "ktd/distances.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "ktd/errors.hpp"

namespace ktd {
double kt_distance(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   SpectralRoute route) {
  const SignedAtomList atoms = merge_difference(mu, nu);
  if (atoms.empty()) {
    return 0.0;
  }
  if (route == SpectralRoute::kEigen) {
    return signed_operator_spectrum(spec, atoms).trace_norm();
  }
  const Vector values = signed_spectrum_values(spec, atoms);
  if (values.size() == 0) {
    return 0.0;
  }
  const double cutoff = kDefaultSpectralTol * std::abs(values[0]);
  double total = 0.0;
  for (double v : values) {
    if (std::abs(v) >= cutoff) total += std::abs(v);
  }
  return total;
}

double weighted_kernel_sum(const KernelSpec& spec, const PointMatrix& a, const Vector& wa, const PointMatrix& b,
                           const Vector& wb) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      row += wb[j] * kernel_eval(spec, row_span(a, i), row_span(b, j));
    }
    total += wa[i] * row;
  }
  return total;
}

double self_kernel_sum(const KernelSpec& spec, const PointMatrix& x, const Vector& w) {
  double diag = 0.0;
  double off = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    diag += w[i] * w[i] * kernel_eval(spec, row_span(x, i), row_span(x, i));
    double row = 0.0;
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      row += w[j] * kernel_eval(spec, row_span(x, i), row_span(x, j));
    }
    off += w[i] * row;
  }
  return diag + 2.0 * off;
}

double mmd_squared(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const SignedAtomList atoms = merge_difference(mu, nu);
  if (atoms.empty()) {
    return 0.0;
  }
  const double value = self_kernel_sum(spec, atoms.atoms, atoms.weights);
  if (value < -1e-12) {
    throw NumericalError(fmt::format("squared MMD is negative ({:.3e})", value));
  }
  return std::max(value, 0.0);
}

double mmd(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return std::sqrt(mmd_squared(spec, mu, nu));
}

double mmd_k2(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return mmd(kernel_square(spec), mu, nu);
}

double mmd_normalized(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const KernelSpec sq = kernel_square(spec);
  const double numerator = std::sqrt(mmd_squared(sq, mu, nu));
  const double denominator =
      std::sqrt(self_kernel_sum(sq, mu.points(), mu.weights()) + self_kernel_sum(sq, nu.points(), nu.weights()));
  if (!(denominator > 0.0)) {
    throw NumericalError("normalized MMD has a zero denominator");
  }
  return numerator / denominator;
}

double mmd_half_squared(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return 0.5 * mmd_squared(spec, mu, nu);
}

double fidelity(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (!spec.unit_diagonal()) {
    throw Unsupported(fmt::format("kernel Bures-Wasserstein needs a unit-diagonal kernel, got {}", spec.describe()));
  }
  if (mu.dim() != nu.dim()) {
    throw DimensionMismatch("measures live in different dimensions");
  }
  Matrix m = cross_gram(spec, mu.points(), nu.points());
  m = mu.weights().cwiseSqrt().asDiagonal() * m * nu.weights().cwiseSqrt().asDiagonal();
  Eigen::BDCSVD<Matrix> svd(m);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

double kbw_distance(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return std::sqrt(2.0 - 2.0 * fidelity(spec, mu, nu));
}

double wasserstein1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) {
    throw Unsupported("exact Wasserstein-1 is only available in dimension 1");
  }
  std::vector<std::pair<double, double>> events;
  events.reserve(static_cast<std::size_t>(mu.size() + nu.size()));
  for (Eigen::Index i = 0; i < mu.size(); ++i) events.emplace_back(mu.points()(i, 0), mu.weights()[i]);
  for (Eigen::Index i = 0; i < nu.size(); ++i) events.emplace_back(nu.points()(i, 0), -nu.weights()[i]);
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double cdf_gap = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    cdf_gap += events[i].second;
    total += std::abs(cdf_gap) * (events[i + 1].first - events[i].first);
  }
  return total;
}

Witness build_witness(const SignedSpectrum& spectrum, const KernelSpec& spec) {
  Witness w{spectrum.atoms.atoms, spectrum.coeffs.topRows(spectrum.rank), Vector(spectrum.rank), spec};
  for (Eigen::Index i = 0; i < spectrum.rank; ++i) {
    const double l = spectrum.eigenvalues[i];
    w.signs[i] = l > 0.0 ? 1.0 : (l < 0.0 ? -1.0 : 0.0);
  }
  return w;
}

Witness build_witness(const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu, double tol) {
  return build_witness(signed_operator_spectrum(spec, merge_difference(mu, nu), tol), spec);
}

namespace {

Vector projections(const Witness& w, std::span<const double> x) {
  Vector kx(w.atoms.rows());
  for (Eigen::Index k = 0; k < w.atoms.rows(); ++k) {
    kx[k] = kernel_eval(w.kernel, row_span(w.atoms, k), x);
  }
  return w.coeffs * kx;
}

}  // namespace

double witness_evaluate(const Witness& w, std::span<const double> x) {
  if (w.coeffs.rows() == 0) {
    return 0.0;
  }
  const Vector a = projections(w, x);
  return (w.signs.array() * a.array().square()).sum();
}

void witness_gradient(const Witness& w, std::span<const double> x, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (w.coeffs.rows() == 0) {
    return;
  }
  const Vector a = projections(w, x);
  // grad f = 2 sum_k beta_k grad_x k(z_k, x), beta = C^T (s .* a)
  const Vector beta = w.coeffs.transpose() * w.signs.cwiseProduct(a);
  std::vector<double> g(out.size());
  for (Eigen::Index k = 0; k < w.atoms.rows(); ++k) {
    kernel_grad_y(w.kernel, row_span(w.atoms, k), x, g);
    for (std::size_t c = 0; c < out.size(); ++c) {
      out[c] += 2.0 * beta[k] * g[c];
    }
  }
}

Metric metric_from_name(const std::string& name) {
  if (name == "kt") return Metric::kKt;
  if (name == "mmd") return Metric::kMmd;
  if (name == "mmd2") return Metric::kMmdK2;
  if (name == "mmdn") return Metric::kMmdNormalized;
  if (name == "mmde") return Metric::kMmdEnergy;
  if (name == "kbw") return Metric::kKbw;
  if (name == "w1") return Metric::kW1;
  if (name == "mmd-half-sq") return Metric::kMmdHalfSquared;
  throw InvalidArgument(fmt::format("unknown metric '{}'", name));
}

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::kKt: return "kt";
    case Metric::kMmd: return "mmd";
    case Metric::kMmdK2: return "mmd2";
    case Metric::kMmdNormalized: return "mmdn";
    case Metric::kMmdEnergy: return "mmde";
    case Metric::kKbw: return "kbw";
    case Metric::kW1: return "w1";
    case Metric::kMmdHalfSquared: return "mmd-half-sq";
  }
  return "unknown";
}

std::vector<std::string> metric_names() { return {"kt", "mmd", "mmd2", "mmdn", "mmde", "kbw", "w1", "mmd-half-sq"}; }

double evaluate_metric(Metric metric, const KernelSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  switch (metric) {
    case Metric::kKt: return kt_distance(spec, mu, nu);
    case Metric::kMmd: return mmd(spec, mu, nu);
    case Metric::kMmdK2: return mmd_k2(spec, mu, nu);
    case Metric::kMmdNormalized: return mmd_normalized(spec, mu, nu);
    case Metric::kMmdEnergy: return mmd(KernelSpec::energy(), mu, nu);
    case Metric::kKbw: return kbw_distance(spec, mu, nu);
    case Metric::kW1: return wasserstein1_1d(mu, nu);
    case Metric::kMmdHalfSquared: return mmd_half_squared(spec, mu, nu);
  }
  throw Unsupported("unknown metric");
}

}  // namespace ktd

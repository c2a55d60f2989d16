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

#include "ktd/selftest.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <Eigen/Eigenvalues>

#include "ktd/distances.hpp"
#include "ktd/spectral.hpp"

namespace ktd {
namespace {

DiscreteMeasure dirac(const Vector& x) {
  PointMatrix p(1, x.size());
  p.row(0) = x.transpose();
  return DiscreteMeasure::uniform(std::move(p));
}

Vector random_point(Eigen::Index d, double scale, Rng& rng) {
  Vector v(d);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

CheckResult two_atom_suite(Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.uniform_index(3));
    const Vector x = random_point(d, 1.0, rng);
    const Vector y = random_point(d, 1.0, rng);
    const double sigma = 0.2 + 2.0 * rng.uniform();
    const KernelSpec spec = KernelSpec::gaussian(sigma);
    const double k = kernel_eval(spec, as_span(x), as_span(y));
    const auto mu = dirac(x);
    const auto nu = dirac(y);
    const double kt = kt_distance(spec, mu, nu, SpectralRoute::kEigen);
    const Witness w = build_witness(spec, mu, nu);
    const double gap = std::abs(witness_evaluate(w, as_span(x)) - witness_evaluate(w, as_span(y)) - kt);
    worst = std::max({worst, std::abs(kt - 2.0 * std::sqrt(1.0 - k * k)),
                      std::abs(mmd_k2(spec, mu, nu) - std::sqrt(2.0 - 2.0 * k * k)),
                      std::abs(kbw_distance(spec, mu, nu) - std::sqrt(2.0 - 2.0 * std::abs(k))), gap});
  }
  return {"two-atom closed forms", worst <= 1e-8, fmt::format("max error {:.3e}", worst)};
}

CheckResult spectral_routes(Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.uniform_index(8));
    PointMatrix x(n, 2);
    PointMatrix y(n + 2, 2);
    for (auto& v : x.reshaped()) v = rng.normal();
    for (auto& v : y.reshaped()) v = rng.normal();
    y.row(0) = x.row(0);  // one shared atom
    const KernelSpec spec = KernelSpec::gaussian(0.8);
    const SignedAtomList atoms = merge_difference(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y));
    const Matrix l = difference_operator_matrix(spec, atoms);
    const Eigen::MatrixXcd k = complex_diff_kernel(spec, atoms);
    // Tr(L) vanishes for balanced unit-diagonal inputs, so scale by sum |lambda|^p
    const Vector abs_eig = Eigen::SelfAdjointEigenSolver<Matrix>(l, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs();
    for (int p = 1; p <= 3; ++p) {
      const double a = trace_moment(l, p);
      const double b = trace_moment(k, p);
      const double scale = abs_eig.array().pow(p).sum();
      worst = std::max(worst, std::abs(a - b) / std::max(1e-300, scale));
    }
  }
  return {"real vs complex trace moments", worst <= 1e-7, fmt::format("max relative error {:.3e}", worst)};
}

CheckResult inequality_suite(Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.uniform_index(20));
    const Eigen::Index m = 5 + static_cast<Eigen::Index>(rng.uniform_index(20));
    PointMatrix x(n, 2);
    PointMatrix y(m, 2);
    for (auto& v : x.reshaped()) v = rng.normal();
    for (auto& v : y.reshaped()) v = rng.normal(0.5, 1.0);
    const KernelSpec spec = t % 2 ? KernelSpec::laplacian(1.0) : KernelSpec::gaussian(1.0);
    const auto mu = DiscreteMeasure::uniform(x);
    const auto nu = DiscreteMeasure::uniform(y);
    const double kt = kt_distance(spec, mu, nu);
    const double hs = mmd_k2(spec, mu, nu);
    const double bw = kbw_distance(spec, mu, nu);
    worst = std::max({worst, hs - kt, kt - 2.0, bw * bw - kt, kt - 2.0 * bw});
  }
  return {"norm ordering and fidelity sandwich", worst <= 1e-8, fmt::format("max violation {:.3e}", worst)};
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  return {two_atom_suite(rng), spectral_routes(rng), inequality_suite(rng)};
}

}  // namespace ktd

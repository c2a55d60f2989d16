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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "../oracles.hpp"
#include "ktd/distances.hpp"
#include "ktd/errors.hpp"
#include "ktd/spectral.hpp"

namespace {

using ktd::DiscreteMeasure;
using ktd::KernelSpec;
using ktd::Metric;
using ktd::PointMatrix;
using ktd::Vector;

DiscreteMeasure dirac(std::vector<double> x) {
  PointMatrix p(1, static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) p(0, static_cast<Eigen::Index>(i)) = x[i];
  return DiscreteMeasure::uniform(p);
}

DiscreteMeasure line(std::vector<double> x) {
  PointMatrix p(static_cast<Eigen::Index>(x.size()), 1);
  for (std::size_t i = 0; i < x.size(); ++i) p(static_cast<Eigen::Index>(i), 0) = x[i];
  return DiscreteMeasure::uniform(p);
}

struct Pair {
  PointMatrix x;
  PointMatrix y;
  DiscreteMeasure mu;
  DiscreteMeasure nu;
};

Pair random_pair(ktd::Rng& rng, Eigen::Index max_n, Eigen::Index d, double shift) {
  PointMatrix x = oracle::random_points(2 + static_cast<Eigen::Index>(rng.uniform_index(max_n - 1)), d, rng);
  PointMatrix y = oracle::random_points(2 + static_cast<Eigen::Index>(rng.uniform_index(max_n - 1)), d, rng, shift);
  return {x, y, DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y)};
}

TEST(KtDistance, ZeroForEqualMeasures) {
  ktd::Rng rng(1);
  const auto mu = DiscreteMeasure::uniform(oracle::random_points(20, 3, rng));
  EXPECT_EQ(ktd::kt_distance(KernelSpec::gaussian(1.0), mu, mu), 0.0);
  EXPECT_EQ(ktd::kt_distance(KernelSpec::gaussian(1.0), mu, mu, ktd::SpectralRoute::kEigen), 0.0);
}

TEST(KtDistance, TwoDiracs) {
  ktd::Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::vector<double> x{rng.normal(), rng.normal()};
    const std::vector<double> y{rng.normal(), rng.normal()};
    const double sigma = 0.1 + 2.0 * rng.uniform();
    const auto spec = KernelSpec::gaussian(sigma);
    const double k = ktd::kernel_eval(spec, x, y);
    const double expected = 2.0 * std::sqrt(1.0 - k * k);
    EXPECT_NEAR(ktd::kt_distance(spec, dirac(x), dirac(y)), expected, 1e-10);
    EXPECT_NEAR(ktd::kt_distance(spec, dirac(x), dirac(y), ktd::SpectralRoute::kEigen), expected, 1e-10);
  }
}

TEST(KtDistance, MatchesOracleOnBothRoutes) {
  ktd::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_pair(rng, 25, 2, 0.5);
    const double sigma = 0.5 + rng.uniform();
    const double ref = oracle::kt(p.x, p.y, oracle::laplacian_kernel(sigma));
    EXPECT_NEAR(ktd::kt_distance(KernelSpec::laplacian(sigma), p.mu, p.nu), ref, 1e-9);
    EXPECT_NEAR(ktd::kt_distance(KernelSpec::laplacian(sigma), p.mu, p.nu, ktd::SpectralRoute::kEigen), ref, 1e-9);
  }
}

TEST(KtDistance, FarApartPlateau) {
  ktd::Rng rng(4);
  const auto mu = DiscreteMeasure::uniform(ktd::sample_gaussian(Vector::Zero(1), 1.0, 1000, rng));
  const auto nu = DiscreteMeasure::uniform(ktd::sample_gaussian(Vector::Constant(1, 5.0), 1.0, 1000, rng));
  for (double sigma : {0.1, 0.5, 1.0}) {
    EXPECT_NEAR(ktd::kt_distance(KernelSpec::gaussian(sigma), mu, nu), 2.0, 0.05) << sigma;
  }
}

TEST(Mmd, ClosedFormsAndOracle) {
  const auto spec = KernelSpec::gaussian(1.0);
  const double k = std::exp(-0.5 * 2.0);
  EXPECT_NEAR(ktd::mmd(spec, dirac({0.0, 0.0}), dirac({1.0, 1.0})), std::sqrt(2.0 - 2.0 * k), 1e-14);
  EXPECT_NEAR(ktd::mmd_k2(spec, dirac({0.0, 0.0}), dirac({1.0, 1.0})), std::sqrt(2.0 - 2.0 * k * k), 1e-14);
  ktd::Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_pair(rng, 30, 3, 0.3);
    EXPECT_NEAR(ktd::mmd_squared(spec, p.mu, p.nu), oracle::mmd_sq(p.x, p.y, oracle::gaussian_kernel(1.0)), 1e-12);
    EXPECT_NEAR(ktd::mmd_k2(spec, p.mu, p.nu),
                std::sqrt(oracle::mmd_sq(p.x, p.y, oracle::squared(oracle::gaussian_kernel(1.0)))), 1e-10);
    EXPECT_NEAR(ktd::mmd_half_squared(spec, p.mu, p.nu), 0.5 * ktd::mmd_squared(spec, p.mu, p.nu), 1e-15);
  }
  const auto same = random_pair(rng, 10, 2, 0.0);
  EXPECT_EQ(ktd::mmd(spec, same.mu, same.mu), 0.0);
}

TEST(Mmd, EnergyKernel) {
  // energy MMD between two diracs on the line is sqrt(|t|)
  EXPECT_NEAR(ktd::mmd(KernelSpec::energy(), line({0.0}), line({2.5})), std::sqrt(2.5), 1e-14);
  ktd::Rng rng(6);
  const auto p = random_pair(rng, 20, 2, 1.0);
  auto energy = [](const PointMatrix& a, Eigen::Index i, const PointMatrix& b, Eigen::Index j) {
    return 0.5 * (a.row(i).norm() + b.row(j).norm() - (a.row(i) - b.row(j)).norm());
  };
  EXPECT_NEAR(ktd::mmd_squared(KernelSpec::energy(), p.mu, p.nu), oracle::mmd_sq(p.x, p.y, energy), 1e-12);
  EXPECT_NEAR(ktd::evaluate_metric(Metric::kMmdEnergy, KernelSpec::gaussian(1.0), p.mu, p.nu),
              std::sqrt(oracle::mmd_sq(p.x, p.y, energy)), 1e-10);
}

TEST(Mmd, K2EqualsHilbertSchmidtNorm) {
  ktd::Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_pair(rng, 20, 2, 0.5);
    const auto spec = KernelSpec::gaussian(0.8);
    const auto s = ktd::signed_operator_spectrum(spec, ktd::merge_difference(p.mu, p.nu));
    EXPECT_NEAR(ktd::mmd_k2(spec, p.mu, p.nu), s.hilbert_schmidt_norm(), 1e-8);
    EXPECT_NEAR(ktd::mmd_k2(spec, p.mu, p.nu),
                std::sqrt(ktd::trace_moment(ktd::difference_operator_matrix(spec, ktd::merge_difference(p.mu, p.nu)), 2)),
                1e-8);
  }
}

TEST(Mmd, Normalized) {
  const auto spec = KernelSpec::gaussian(1.0);
  const auto mu = dirac({0.0});
  const auto nu = dirac({1.5});
  const double k = std::exp(-1.125);
  EXPECT_NEAR(ktd::mmd_normalized(spec, mu, nu), std::sqrt(2.0 - 2.0 * k * k) / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(ktd::mmd_normalized(spec, dirac({0.0}), dirac({100.0})), 1.0, 1e-14);
  EXPECT_EQ(ktd::mmd_normalized(spec, mu, mu), 0.0);
  ktd::Rng rng(8);
  const auto p = random_pair(rng, 5, 2, 0.5);
  const auto k2 = oracle::squared(oracle::gaussian_kernel(1.0));
  // ||Sigma_mu||_2^2 as a direct weighted double sum
  auto self = [&](const PointMatrix& a) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.rows(); ++j) s += k2(a, i, a, j);
    }
    return s / static_cast<double>(a.rows() * a.rows());
  };
  const double ref = std::sqrt(oracle::mmd_sq(p.x, p.y, k2)) / std::sqrt(self(p.x) + self(p.y));
  EXPECT_NEAR(ktd::mmd_normalized(spec, p.mu, p.nu), ref, 1e-12);
}

TEST(Kbw, ClosedFormsAndOracle) {
  const auto spec = KernelSpec::gaussian(1.0);
  ktd::Rng rng(9);
  const auto mu = DiscreteMeasure::uniform(oracle::random_points(15, 2, rng));
  EXPECT_NEAR(ktd::kbw_distance(spec, mu, mu), 0.0, 1e-6);
  EXPECT_NEAR(ktd::fidelity(spec, mu, mu), 1.0, 1e-12);
  const double k = std::exp(-0.5 * 0.25);
  EXPECT_NEAR(ktd::kbw_distance(spec, dirac({0.0}), dirac({0.5})), std::sqrt(2.0 - 2.0 * k), 1e-12);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_pair(rng, 20, 2, 0.7);
    EXPECT_NEAR(ktd::fidelity(spec, p.mu, p.nu), oracle::fidelity(p.x, p.y, oracle::gaussian_kernel(1.0)), 1e-7);
  }
  EXPECT_THROW(ktd::kbw_distance(KernelSpec::energy(), mu, mu), ktd::Unsupported);
}

TEST(Wasserstein, ClosedForms) {
  EXPECT_EQ(ktd::wasserstein1_1d(line({1.0, 2.0}), line({1.0, 2.0})), 0.0);
  EXPECT_DOUBLE_EQ(ktd::wasserstein1_1d(line({0.0}), line({-3.5})), 3.5);
  EXPECT_DOUBLE_EQ(ktd::wasserstein1_1d(line({0.0, 1.0}), line({1.0, 2.0})), 1.0);
  Vector w(2);
  w << 0.25, 0.75;
  PointMatrix p(2, 1);
  p << 0.0, 4.0;
  EXPECT_DOUBLE_EQ(ktd::wasserstein1_1d(DiscreteMeasure(p, w), line({0.0})), 3.0);
}

TEST(Wasserstein, MatchesSortedMatching) {
  ktd::Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const PointMatrix x = oracle::random_points(30, 1, rng);
    const PointMatrix y = oracle::random_points(30, 1, rng, 1.0, 2.0);
    EXPECT_NEAR(ktd::wasserstein1_1d(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y)),
                oracle::w1_sorted(x, y), 1e-12);
  }
  EXPECT_THROW(ktd::wasserstein1_1d(dirac({0.0, 1.0}), dirac({1.0, 0.0})), ktd::Unsupported);
}

TEST(Witness, ZeroForEqualMeasures) {
  const auto mu = line({0.0, 1.0});
  const auto w = ktd::build_witness(KernelSpec::gaussian(1.0), mu, mu);
  const std::vector<double> probe{0.3};
  EXPECT_EQ(ktd::witness_evaluate(w, probe), 0.0);
}

TEST(Witness, TwoDiracGap) {
  const auto spec = KernelSpec::gaussian(1.0);
  const std::vector<double> x{0.2, -0.1};
  const std::vector<double> y{1.0, 0.6};
  const auto w = ktd::build_witness(spec, dirac(x), dirac(y));
  const double k = ktd::kernel_eval(spec, x, y);
  EXPECT_NEAR(ktd::witness_evaluate(w, x) - ktd::witness_evaluate(w, y), 2.0 * std::sqrt(1.0 - k * k), 1e-10);
}

TEST(Witness, BoundedDualityAndLipschitz) {
  ktd::Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_pair(rng, 15, 2, 0.5);
    const auto spec = t % 2 ? KernelSpec::gaussian(0.8) : KernelSpec::laplacian(1.0);
    const auto w = ktd::build_witness(spec, p.mu, p.nu);
    const auto atoms = ktd::merge_difference(p.mu, p.nu);
    double gap = 0.0;
    for (Eigen::Index a = 0; a < atoms.size(); ++a) {
      gap += atoms.weights[a] * ktd::witness_evaluate(w, ktd::row_span(atoms.atoms, a));
    }
    EXPECT_NEAR(gap, ktd::kt_distance(spec, p.mu, p.nu), 1e-6);
    for (int q = 0; q < 100; ++q) {
      const std::vector<double> u{rng.normal(0.0, 2.0), rng.normal(0.0, 2.0)};
      const std::vector<double> v{u[0] + rng.normal(0.0, 0.3), u[1] + rng.normal(0.0, 0.3)};
      const double fu = ktd::witness_evaluate(w, u);
      EXPECT_LE(std::abs(fu), 1.0 + 1e-9);
      const double bound = 2.0 * std::sqrt(2.0 * (1.0 - ktd::kernel_eval(spec, u, v)));
      EXPECT_LE(std::abs(fu - ktd::witness_evaluate(w, v)), bound + 1e-9);
    }
  }
}

TEST(Witness, GradientMatchesFiniteDifference) {
  ktd::Rng rng(12);
  const auto p = random_pair(rng, 10, 3, 0.5);
  const auto w = ktd::build_witness(KernelSpec::gaussian(1.0), p.mu, p.nu);
  const double h = 1e-6;
  for (int q = 0; q < 10; ++q) {
    std::vector<double> x{rng.normal(), rng.normal(), rng.normal()};
    std::vector<double> g(3);
    ktd::witness_gradient(w, x, g);
    for (std::size_t c = 0; c < 3; ++c) {
      auto xp = x;
      auto xm = x;
      xp[c] += h;
      xm[c] -= h;
      EXPECT_NEAR(g[c], (ktd::witness_evaluate(w, xp) - ktd::witness_evaluate(w, xm)) / (2.0 * h), 1e-8);
    }
  }
}

TEST(Inequalities, NormOrderingRankAndSandwich) {
  ktd::Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const auto p = random_pair(rng, 40, 1 + static_cast<Eigen::Index>(rng.uniform_index(5)), rng.uniform());
    const auto spec = t % 2 ? KernelSpec::gaussian(0.3 + 2.0 * rng.uniform())
                            : KernelSpec::laplacian(0.3 + 2.0 * rng.uniform());
    const double kt = ktd::kt_distance(spec, p.mu, p.nu);
    const double hs = ktd::mmd_k2(spec, p.mu, p.nu);
    const double bw = ktd::kbw_distance(spec, p.mu, p.nu);
    const auto s = ktd::signed_operator_spectrum(spec, ktd::merge_difference(p.mu, p.nu));
    EXPECT_LE(hs, kt + 1e-8);
    EXPECT_LE(kt, 2.0 + 1e-8);
    EXPECT_LE(kt, std::sqrt(static_cast<double>(s.rank)) * hs + 1e-8);
    EXPECT_LE(bw * bw, kt + 1e-8);
    EXPECT_LE(kt, 2.0 * bw + 1e-8);
  }
}

TEST(Inequalities, TriangleAndSymmetry) {
  ktd::Rng rng(14);
  const auto spec = KernelSpec::gaussian(1.0);
  for (int t = 0; t < 20; ++t) {
    const auto a = DiscreteMeasure::uniform(oracle::random_points(5 + t, 2, rng));
    const auto b = DiscreteMeasure::uniform(oracle::random_points(7, 2, rng, 0.5));
    const auto c = DiscreteMeasure::uniform(oracle::random_points(9, 2, rng, -0.5));
    const double ab = ktd::kt_distance(spec, a, b);
    EXPECT_NEAR(ab, ktd::kt_distance(spec, b, a), 1e-12);
    EXPECT_LE(ktd::kt_distance(spec, a, c), ab + ktd::kt_distance(spec, b, c) + 1e-8);
  }
}

TEST(Inequalities, WassersteinBound) {
  ktd::Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const double sigma = 0.3 + 2.0 * rng.uniform();
    const auto mu = DiscreteMeasure::uniform(oracle::random_points(20, 1, rng));
    const auto nu = DiscreteMeasure::uniform(oracle::random_points(25, 1, rng, rng.uniform()));
    EXPECT_LE(ktd::kt_distance(KernelSpec::gaussian(sigma), mu, nu), 2.0 / sigma * ktd::wasserstein1_1d(mu, nu) + 1e-8);
  }
}

TEST(Metrics, NamesRoundTrip) {
  for (const auto& name : ktd::metric_names()) EXPECT_EQ(ktd::metric_name(ktd::metric_from_name(name)), name);
  EXPECT_THROW(ktd::metric_from_name("kfda"), ktd::InvalidArgument);
}

TEST(Metrics, DispatchMatchesDirectCalls) {
  ktd::Rng rng(16);
  const auto p = random_pair(rng, 10, 1, 0.5);
  const auto spec = KernelSpec::gaussian(1.0);
  EXPECT_EQ(ktd::evaluate_metric(Metric::kKt, spec, p.mu, p.nu), ktd::kt_distance(spec, p.mu, p.nu));
  EXPECT_EQ(ktd::evaluate_metric(Metric::kMmd, spec, p.mu, p.nu), ktd::mmd(spec, p.mu, p.nu));
  EXPECT_EQ(ktd::evaluate_metric(Metric::kMmdK2, spec, p.mu, p.nu), ktd::mmd_k2(spec, p.mu, p.nu));
  EXPECT_EQ(ktd::evaluate_metric(Metric::kMmdNormalized, spec, p.mu, p.nu), ktd::mmd_normalized(spec, p.mu, p.nu));
  EXPECT_EQ(ktd::evaluate_metric(Metric::kKbw, spec, p.mu, p.nu), ktd::kbw_distance(spec, p.mu, p.nu));
  EXPECT_EQ(ktd::evaluate_metric(Metric::kW1, spec, p.mu, p.nu), ktd::wasserstein1_1d(p.mu, p.nu));
  EXPECT_EQ(ktd::evaluate_metric(Metric::kMmdHalfSquared, spec, p.mu, p.nu),
            ktd::mmd_half_squared(spec, p.mu, p.nu));
}

}  // namespace

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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "../oracles.hpp"
#include "ktd/errors.hpp"
#include "ktd/measures.hpp"
#include "ktd/spectral.hpp"

namespace {

using ktd::DiscreteMeasure;
using ktd::KernelSpec;
using ktd::Matrix;
using ktd::PointMatrix;
using ktd::SignedAtomList;
using ktd::Vector;

std::vector<double> sorted(const Vector& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

// Random merged atom list with some shared and some disjoint atoms.
SignedAtomList random_atoms(ktd::Rng& rng, Eigen::Index max_side = 15) {
  const auto n = 2 + static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(max_side - 1)));
  const auto m = 2 + static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(max_side - 1)));
  PointMatrix x = oracle::random_points(n, 2, rng);
  PointMatrix y = oracle::random_points(m, 2, rng, 0.5);
  y.row(0) = x.row(0);
  return ktd::merge_difference(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y));
}

TEST(Gram, ClosedForms) {
  PointMatrix one(1, 2);
  one << 0.3, -1.0;
  EXPECT_EQ(ktd::gram(KernelSpec::gaussian(1.0), one), Matrix::Identity(1, 1));
  PointMatrix two(2, 2);
  two << 0.0, 0.0, 1.0, 1.0;
  const Matrix g = ktd::gram(KernelSpec::gaussian(1.0), two);
  EXPECT_DOUBLE_EQ(g(0, 1), std::exp(-1.0));
  EXPECT_EQ(g(0, 1), g(1, 0));
}

TEST(Gram, MatchesBruteForce) {
  ktd::Rng rng(1);
  const PointMatrix z = oracle::random_points(3, 4, rng);
  const Matrix g = ktd::gram(KernelSpec::gaussian(1.3), z);
  const Matrix ref = oracle::gram(z, oracle::gaussian_kernel(1.3));
  EXPECT_LT((g - ref).cwiseAbs().maxCoeff(), 1e-15);
  const PointMatrix w = oracle::random_points(5, 4, rng);
  const Matrix c = ktd::cross_gram(KernelSpec::laplacian(0.9), z, w);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) EXPECT_NEAR(c(i, j), oracle::laplace(z, i, w, j, 0.9), 1e-15);
  }
}

TEST(PsdSqrt, Identity) {
  const auto r = ktd::psd_sqrt(Matrix::Identity(4, 4));
  EXPECT_LT((r.sqrt - Matrix::Identity(4, 4)).norm(), 1e-14);
  EXPECT_LT((r.pinv_sqrt - Matrix::Identity(4, 4)).norm(), 1e-14);
  EXPECT_EQ(r.rank, 4);
}

TEST(PsdSqrt, TwoByTwo) {
  Matrix g(2, 2);
  g << 1.0, 0.5, 0.5, 1.0;
  const auto r = ktd::psd_sqrt(g);
  const auto ev = sorted(Eigen::SelfAdjointEigenSolver<Matrix>(r.sqrt).eigenvalues());
  EXPECT_NEAR(ev[0], std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(ev[1], std::sqrt(1.5), 1e-14);
  EXPECT_LT((r.pinv_sqrt * r.sqrt - Matrix::Identity(2, 2)).norm(), 1e-13);
}

TEST(PsdSqrt, ReconstructsRandomGram) {
  ktd::Rng rng(2);
  const Matrix g = ktd::gram(KernelSpec::gaussian(1.0), oracle::random_points(10, 2, rng));
  const auto r = ktd::psd_sqrt(g);
  EXPECT_LE((r.sqrt * r.sqrt - g).norm() / g.norm(), 1e-8);
}

TEST(PsdSqrt, RejectsIndefinite) {
  Matrix g(2, 2);
  g << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(ktd::psd_sqrt(g), ktd::NumericalError);
}

TEST(PsdSqrt, ClipsRankDeficient) {
  PointMatrix z(3, 1);
  z << 0.0, 0.0, 1.0;  // duplicated point: rank 2
  const Matrix g = ktd::gram(KernelSpec::gaussian(1.0), z);
  const auto r = ktd::psd_sqrt(g);
  EXPECT_EQ(r.rank, 2);
  EXPECT_LE((r.sqrt * r.sqrt - g).norm(), 1e-12);
}

TEST(SignedSpectrum, TwoAtoms) {
  ktd::Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    PointMatrix x = oracle::random_points(1, 2, rng);
    PointMatrix y = oracle::random_points(1, 2, rng);
    const double sigma = 0.2 + 2.0 * rng.uniform();
    const KernelSpec spec = t % 2 ? KernelSpec::gaussian(sigma) : KernelSpec::laplacian(sigma);
    const double k = t % 2 ? oracle::gauss(x, 0, y, 0, sigma) : oracle::laplace(x, 0, y, 0, sigma);
    const auto s = ktd::signed_operator_spectrum(
        spec, ktd::merge_difference(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y)));
    ASSERT_EQ(s.eigenvalues.size(), 2);
    const auto ev = sorted(s.eigenvalues);
    EXPECT_NEAR(ev[0], -std::sqrt(1.0 - k * k), 1e-12);
    EXPECT_NEAR(ev[1], std::sqrt(1.0 - k * k), 1e-12);
  }
}

TEST(SignedSpectrum, EmptyForEqualMeasures) {
  PointMatrix x(2, 1);
  x << 1.0, 2.0;
  const auto mu = DiscreteMeasure::uniform(x);
  const auto s = ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), ktd::merge_difference(mu, mu));
  EXPECT_EQ(s.eigenvalues.size(), 0);
  EXPECT_EQ(s.rank, 0);
  EXPECT_EQ(s.trace_norm(), 0.0);
  EXPECT_EQ(s.hilbert_schmidt_norm(), 0.0);
}

TEST(SignedSpectrum, SingleMeasureIsGramOverN) {
  ktd::Rng rng(4);
  const PointMatrix x = oracle::random_points(12, 2, rng);
  const auto spec = KernelSpec::gaussian(0.7);
  const auto s = ktd::signed_operator_spectrum(spec, ktd::as_signed(DiscreteMeasure::uniform(x)));
  const Vector gram_ev = Eigen::SelfAdjointEigenSolver<Matrix>(oracle::gram(x, oracle::gaussian_kernel(0.7)))
                             .eigenvalues() /
                         12.0;
  const auto a = sorted(s.eigenvalues);
  const auto b = sorted(gram_ev);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(SignedSpectrum, MatchesNonSymmetricOracle) {
  ktd::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const PointMatrix x = oracle::random_points(3 + t % 7, 2, rng);
    const PointMatrix y = oracle::random_points(4 + t % 5, 2, rng, 0.3);
    const auto s = ktd::signed_operator_spectrum(
        KernelSpec::gaussian(1.0), ktd::merge_difference(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y)));
    const auto ref = sorted(oracle::gd_eigenvalues(oracle::signed_atoms(x, y), oracle::gaussian_kernel(1.0)));
    const auto got = sorted(s.eigenvalues);
    ASSERT_EQ(ref.size(), got.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-9);
  }
}

TEST(SignedSpectrum, SortedByMagnitudeAndTraceIdentity) {
  ktd::Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const auto atoms = random_atoms(rng);
    const auto s = ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), atoms);
    for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) {
      EXPECT_GE(std::abs(s.eigenvalues[i - 1]), std::abs(s.eigenvalues[i]));
    }
    EXPECT_NEAR(s.eigenvalues.sum(), atoms.weights.sum(), 1e-8);
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
      EXPECT_EQ(s.numerically_zero(i), std::abs(s.eigenvalues[i]) < 1e-10 * std::abs(s.eigenvalues[0]));
    }
  }
}

TEST(SignedSpectrum, EigenfunctionsOrthonormal) {
  ktd::Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const auto atoms = random_atoms(rng);
    const auto spec = KernelSpec::gaussian(1.0);
    const auto s = ktd::signed_operator_spectrum(spec, atoms);
    const Matrix c = s.coeffs.topRows(s.rank);
    const Matrix gram = c * ktd::gram(spec, atoms.atoms) * c.transpose();
    EXPECT_LT((gram - Matrix::Identity(s.rank, s.rank)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(SignedSpectrum, PermutationInvariant) {
  ktd::Rng rng(8);
  const auto atoms = random_atoms(rng);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(atoms.size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[0], perm[perm.size() / 2]);
  SignedAtomList shuffled{PointMatrix(atoms.size(), atoms.atoms.cols()), Vector(atoms.size())};
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled.atoms.row(static_cast<Eigen::Index>(i)) = atoms.atoms.row(perm[i]);
    shuffled.weights[static_cast<Eigen::Index>(i)] = atoms.weights[perm[i]];
  }
  const auto a = sorted(ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), atoms).eigenvalues);
  const auto b = sorted(ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), shuffled).eigenvalues);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-8);
}

TEST(SignedSpectrum, LinearInWeights) {
  ktd::Rng rng(9);
  auto atoms = random_atoms(rng);
  const auto a = sorted(ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), atoms).eigenvalues);
  atoms.weights *= 3.5;
  const auto b = sorted(ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), atoms).eigenvalues);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(3.5 * a[i], b[i], 1e-12);
}

TEST(SignedSpectrum, SwapNegates) {
  ktd::Rng rng(10);
  const auto mu = DiscreteMeasure::uniform(oracle::random_points(8, 2, rng));
  const auto nu = DiscreteMeasure::uniform(oracle::random_points(8, 2, rng, 0.4));
  const auto a = sorted(ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), ktd::merge_difference(mu, nu))
                            .eigenvalues);
  const auto b = sorted(ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), ktd::merge_difference(nu, mu))
                            .eigenvalues);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], -b[b.size() - 1 - i], 1e-12);
}

TEST(SignedSpectrum, RankMatchesMatrixRank) {
  ktd::Rng rng(11);
  const auto atoms = random_atoms(rng);
  const auto spec = KernelSpec::gaussian(1.0);
  const auto s = ktd::signed_operator_spectrum(spec, atoms);
  Eigen::FullPivLU<Matrix> lu(ktd::difference_operator_matrix(spec, atoms));
  lu.setThreshold(1e-10);
  EXPECT_EQ(s.rank, lu.rank());
}

TEST(SignedSpectrum, InvalidToleranceRejected) {
  ktd::Rng rng(12);
  EXPECT_THROW(ktd::signed_operator_spectrum(KernelSpec::gaussian(1.0), random_atoms(rng), -1.0),
               ktd::InvalidArgument);
}

TEST(FactoredRoute, MatchesCanonicalEigenvalues) {
  ktd::Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto atoms = random_atoms(rng, 30);
    const auto spec = t % 2 ? KernelSpec::gaussian(0.5 + rng.uniform()) : KernelSpec::laplacian(0.5 + rng.uniform());
    const auto canonical = ktd::signed_operator_spectrum(spec, atoms);
    const Vector fast = ktd::signed_spectrum_values(spec, atoms);
    EXPECT_NEAR(fast.cwiseAbs().sum(), canonical.trace_norm(), 1e-9);
    const auto n = std::min<Eigen::Index>(canonical.rank, fast.size());
    for (Eigen::Index i = 0; i < n; ++i) EXPECT_NEAR(fast[i], canonical.eigenvalues[i], 1e-9);
  }
}

TEST(FactoredRoute, PivotedCholeskyReconstructs) {
  ktd::Rng rng(14);
  const PointMatrix z = oracle::random_points(40, 1, rng);
  const auto spec = KernelSpec::gaussian(1.0);
  const Matrix f = ktd::pivoted_cholesky(spec, z);
  const Matrix g = ktd::gram(spec, z);
  EXPECT_LT(f.cols(), 40);  // smooth kernel on 1-D points has fast eigen-decay
  EXPECT_LT((f * f.transpose() - g).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(ComplexKernel, DisjointSinglePoints) {
  PointMatrix x(1, 1);
  PointMatrix y(1, 1);
  x << 0.0;
  y << 1.0;
  const auto spec = KernelSpec::gaussian(1.0);
  const double k = std::exp(-0.5);
  const auto km = ktd::complex_diff_kernel(
      spec, ktd::merge_difference(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y)));
  using C = std::complex<double>;
  EXPECT_NEAR(std::abs(km(0, 0) - C(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(km(0, 1) - C(0.0, k)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(km(1, 0) - C(0.0, k)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(km(1, 1) - C(-1.0, 0.0)), 0.0, 1e-15);
}

TEST(ComplexKernel, PositiveWeightsGiveRealPsd) {
  ktd::Rng rng(15);
  const auto atoms = ktd::as_signed(DiscreteMeasure::uniform(oracle::random_points(6, 2, rng)));
  const auto km = ktd::complex_diff_kernel(KernelSpec::gaussian(1.0), atoms);
  EXPECT_EQ(km.imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(km.real()).eigenvalues().minCoeff(), -1e-12);
}

TEST(TraceMoments, FirstMomentIsTotalMass) {
  ktd::Rng rng(16);
  const auto atoms = random_atoms(rng);
  const auto spec = KernelSpec::gaussian(1.0);
  EXPECT_NEAR(ktd::trace_moment(ktd::complex_diff_kernel(spec, atoms), 1), 0.0, 1e-12);
  EXPECT_NEAR(ktd::trace_moment(ktd::difference_operator_matrix(spec, atoms), 1), 0.0, 1e-12);
}

TEST(TraceMoments, SecondMomentIsSquaredKernelSum) {
  ktd::Rng rng(17);
  const auto atoms = random_atoms(rng);
  const auto spec = KernelSpec::gaussian(1.0);
  double ref = 0.0;
  for (Eigen::Index j = 0; j < atoms.size(); ++j) {
    for (Eigen::Index k = 0; k < atoms.size(); ++k) {
      const double g = oracle::gauss(atoms.atoms, j, atoms.atoms, k, 1.0);
      ref += atoms.weights[j] * atoms.weights[k] * g * g;
    }
  }
  EXPECT_NEAR(ktd::trace_moment(ktd::difference_operator_matrix(spec, atoms), 2), ref, 1e-12);
}

TEST(TraceMoments, RealAndComplexRoutesAgree) {
  ktd::Rng rng(18);
  for (int t = 0; t < 20; ++t) {
    const auto atoms = random_atoms(rng);
    const auto spec = KernelSpec::gaussian(0.5 + rng.uniform());
    const Matrix l = ktd::difference_operator_matrix(spec, atoms);
    const auto km = ktd::complex_diff_kernel(spec, atoms);
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(l).eigenvalues().cwiseAbs();
    for (int p = 1; p <= 3; ++p) {
      const double scale = ev.array().pow(p).sum();
      EXPECT_LE(std::abs(ktd::trace_moment(l, p) - ktd::trace_moment(km, p)), 1e-7 * scale);
    }
  }
}

TEST(TraceMoments, RejectsBadInput) {
  EXPECT_THROW(ktd::trace_moment(Matrix(Matrix::Identity(2, 2)), 4), ktd::InvalidArgument);
  EXPECT_THROW(ktd::trace_moment(Matrix(2, 3), 1), ktd::DimensionMismatch);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  m(0, 0) = std::complex<double>(1.0, 0.5);
  EXPECT_THROW(ktd::trace_moment(m, 1), ktd::SpectralMismatch);
}

}  // namespace

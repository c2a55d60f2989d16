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

#ifndef KTD_SPECTRAL_HPP
#define KTD_SPECTRAL_HPP

#include <Eigen/Dense>

#include "ktd/kernels.hpp"
#include "ktd/measures.hpp"
#include "ktd/types.hpp"

namespace ktd {

/// Eigenvalues of L with |lambda| below this fraction of the largest |lambda|
/// are flagged numerically zero.
inline constexpr double kDefaultSpectralTol = 1e-10;
/// Gram eigenvalues below this fraction of the largest are clipped to zero.
inline constexpr double kDefaultPsdTol = 1e-12;
/// Pivoted Cholesky stops once every residual diagonal is below this fraction
/// of the largest kernel diagonal.
inline constexpr double kDefaultFactorTol = 1e-13;

/// G_jk = k(z_j, z_k), filled symmetrically.
Matrix gram(const KernelSpec& spec, const PointMatrix& atoms);
/// K_jk = k(x_j, y_k).
Matrix cross_gram(const KernelSpec& spec, const PointMatrix& x, const PointMatrix& y);

struct PsdRoot {
  Matrix sqrt;       ///< G^{1/2}
  Matrix pinv_sqrt;  ///< pseudo-inverse of G^{1/2} on the retained range
  Eigen::Index rank = 0;
};

/// Symmetric square root and pseudo-inverse square root of a PSD matrix.
/// Throws NumericalError if an eigenvalue is below -1e-6 * max eigenvalue.
PsdRoot psd_sqrt(const Matrix& g, double tol = kDefaultPsdTol);

/// Spectrum of the signed covariance operator Sigma_{mu - nu} = sum_k w_k phi(z_k) phi(z_k)^*.
///
/// Eigenfunction i is u_i = sum_k coeffs(i, k) phi(z_k).
struct SignedSpectrum {
  Vector eigenvalues;  ///< sorted by decreasing |lambda|
  Matrix coeffs;       ///< one row per eigenvalue, one column per atom
  Eigen::Index rank = 0;  ///< leading eigenvalues that are not numerically zero
  SignedAtomList atoms;

  [[nodiscard]] bool numerically_zero(Eigen::Index i) const { return i >= rank; }
  /// Schatten-1 norm over the retained eigenvalues.
  [[nodiscard]] double trace_norm() const;
  /// Schatten-2 norm over the retained eigenvalues.
  [[nodiscard]] double hilbert_schmidt_norm() const;
};

/// Canonical route: eigendecomposition of L = G^{1/2} D G^{1/2}, D = diag(w).
SignedSpectrum signed_operator_spectrum(const KernelSpec& spec, const SignedAtomList& atoms,
                                        double tol = kDefaultSpectralTol);

/// L = G^{1/2} D G^{1/2} itself (debug dumps and trace checks).
Matrix difference_operator_matrix(const KernelSpec& spec, const SignedAtomList& atoms);

/// Rank-revealing pivoted Cholesky: G ~= F F^T with F of size r x q, built from
/// q kernel columns. Stops when all residual diagonals are <= tol * max diagonal.
Matrix pivoted_cholesky(const KernelSpec& spec, const PointMatrix& atoms, double tol = kDefaultFactorTol);

/// Eigenvalues only, through the factor: spec(F^T D F) = nonzero spec(G D).
/// Sorted by decreasing |lambda|; suited to large r when the Gram is low rank.
Vector signed_spectrum_values(const KernelSpec& spec, const SignedAtomList& atoms,
                              double factor_tol = kDefaultFactorTol);

/// Difference kernel matrix K_jk = s_j s_k k(z_j, z_k) with s = sqrt(w) for
/// w >= 0 and i sqrt(|w|) otherwise. Complex symmetric, not Hermitian.
Eigen::MatrixXcd complex_diff_kernel(const KernelSpec& spec, const SignedAtomList& atoms);

/// Tr(M^p) by repeated multiplication, p in {1, 2, 3}.
double trace_moment(const Matrix& m, int p);
/// Complex version; throws SpectralMismatch if the imaginary part exceeds
/// 1e-8 * max(1, |real part|).
double trace_moment(const Eigen::MatrixXcd& m, int p);

}  // namespace ktd

#endif  // KTD_SPECTRAL_HPP

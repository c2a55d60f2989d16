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

#include "ktd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "ktd/errors.hpp"

namespace ktd {
namespace {

// Reorder eigenpairs by decreasing |lambda|; ties broken by larger signed value.
std::vector<Eigen::Index> abs_order(const Vector& values) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double fa = std::abs(values[a]);
    const double fb = std::abs(values[b]);
    return fa != fb ? fa > fb : values[a] > values[b];
  });
  return order;
}

Eigen::Index count_retained(const Vector& sorted_values, double tol) {
  if (sorted_values.size() == 0) return 0;
  const double top = std::abs(sorted_values[0]);
  if (top == 0.0) return 0;
  Eigen::Index rank = 0;
  while (rank < sorted_values.size() && std::abs(sorted_values[rank]) >= tol * top) {
    ++rank;
  }
  return rank;
}

void check_tol(double tol) {
  if (!(tol >= 0.0 && tol < 1.0)) {
    throw InvalidArgument(fmt::format("spectral tolerance must lie in [0, 1), got {}", tol));
  }
}

}  // namespace

Matrix gram(const KernelSpec& spec, const PointMatrix& atoms) {
  const auto r = atoms.rows();
  Matrix g(r, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    g(j, j) = kernel_eval(spec, row_span(atoms, j), row_span(atoms, j));
    for (Eigen::Index k = j + 1; k < r; ++k) {
      const double v = kernel_eval(spec, row_span(atoms, j), row_span(atoms, k));
      g(j, k) = v;
      g(k, j) = v;
    }
  }
  return g;
}

Matrix cross_gram(const KernelSpec& spec, const PointMatrix& x, const PointMatrix& y) {
  Matrix g(x.rows(), y.rows());
  for (Eigen::Index k = 0; k < y.rows(); ++k) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      g(j, k) = kernel_eval(spec, row_span(x, j), row_span(y, k));
    }
  }
  return g;
}

PsdRoot psd_sqrt(const Matrix& g, double tol) {
  check_tol(tol);
  if (g.rows() != g.cols()) {
    throw DimensionMismatch("psd_sqrt needs a square matrix");
  }
  PsdRoot out;
  const auto r = g.rows();
  if (r == 0) {
    out.sqrt = Matrix(0, 0);
    out.pinv_sqrt = Matrix(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the Gram matrix did not converge");
  }
  const Vector& lam = es.eigenvalues();  // ascending
  const double top = lam[r - 1];
  if (lam[0] < -1e-6 * std::max(top, 0.0) || top < 0.0) {
    throw NumericalError(fmt::format("matrix is not positive semidefinite (min eigenvalue {:.3e}, max {:.3e})",
                                     lam[0], top));
  }
  Vector root = Vector::Zero(r);
  Vector inv_root = Vector::Zero(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (top > 0.0 && lam[i] > tol * top) {
      root[i] = std::sqrt(lam[i]);
      inv_root[i] = 1.0 / root[i];
      ++out.rank;
    }
  }
  const Matrix& v = es.eigenvectors();
  out.sqrt = v * root.asDiagonal() * v.transpose();
  out.pinv_sqrt = v * inv_root.asDiagonal() * v.transpose();
  return out;
}

double SignedSpectrum::trace_norm() const { return eigenvalues.head(rank).cwiseAbs().sum(); }

double SignedSpectrum::hilbert_schmidt_norm() const { return eigenvalues.head(rank).norm(); }

Matrix difference_operator_matrix(const KernelSpec& spec, const SignedAtomList& atoms) {
  const PsdRoot root = psd_sqrt(gram(spec, atoms.atoms));
  Matrix l = root.sqrt * atoms.weights.asDiagonal() * root.sqrt;
  return 0.5 * (l + l.transpose());
}

SignedSpectrum signed_operator_spectrum(const KernelSpec& spec, const SignedAtomList& atoms, double tol) {
  check_tol(tol);
  SignedSpectrum out;
  out.atoms = atoms;
  const auto r = atoms.size();
  if (r == 0) {
    out.eigenvalues = Vector(0);
    out.coeffs = Matrix(0, 0);
    return out;
  }
  const PsdRoot root = psd_sqrt(gram(spec, atoms.atoms));
  Matrix l = root.sqrt * atoms.weights.asDiagonal() * root.sqrt;
  l = 0.5 * (l + l.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(l);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the difference operator did not converge");
  }
  const auto order = abs_order(es.eigenvalues());
  out.eigenvalues.resize(r);
  Matrix b(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    out.eigenvalues[i] = es.eigenvalues()[order[static_cast<std::size_t>(i)]];
    b.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  out.coeffs = b.transpose() * root.pinv_sqrt;
  out.rank = count_retained(out.eigenvalues, tol);
  return out;
}

Matrix pivoted_cholesky(const KernelSpec& spec, const PointMatrix& atoms, double tol) {
  check_tol(tol);
  const auto r = atoms.rows();
  Vector residual(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    residual[k] = kernel_eval(spec, row_span(atoms, k), row_span(atoms, k));
  }
  if (r == 0 || residual.maxCoeff() <= 0.0) {
    return Matrix(r, 0);
  }
  const double stop = tol * residual.maxCoeff();
  std::vector<bool> used(static_cast<std::size_t>(r), false);
  Eigen::Index capacity = std::min<Eigen::Index>(r, 64);
  Matrix f(r, capacity);
  Eigen::Index q = 0;
  while (q < r) {
    Eigen::Index pivot = -1;
    double best = stop;
    for (Eigen::Index k = 0; k < r; ++k) {
      if (!used[static_cast<std::size_t>(k)] && residual[k] > best) {
        best = residual[k];
        pivot = k;
      }
    }
    if (pivot < 0) break;
    if (q == capacity) {
      capacity = std::min<Eigen::Index>(r, 2 * capacity);
      f.conservativeResize(Eigen::NoChange, capacity);
    }
    Vector col(r);
    for (Eigen::Index k = 0; k < r; ++k) {
      col[k] = kernel_eval(spec, row_span(atoms, k), row_span(atoms, pivot));
    }
    if (q > 0) {
      col.noalias() -= f.leftCols(q) * f.row(pivot).head(q).transpose();
    }
    const double scale = std::sqrt(best);
    col /= scale;
    for (Eigen::Index k = 0; k < r; ++k) {
      if (used[static_cast<std::size_t>(k)]) col[k] = 0.0;
    }
    col[pivot] = scale;
    f.col(q) = col;
    residual -= col.cwiseAbs2();
    residual[pivot] = 0.0;
    used[static_cast<std::size_t>(pivot)] = true;
    ++q;
  }
  f.conservativeResize(Eigen::NoChange, q);
  return f;
}

Vector signed_spectrum_values(const KernelSpec& spec, const SignedAtomList& atoms, double factor_tol) {
  if (atoms.empty()) {
    return Vector(0);
  }
  const Matrix f = pivoted_cholesky(spec, atoms.atoms, factor_tol);
  if (f.cols() == 0) {
    return Vector(0);
  }
  Matrix m = f.transpose() * atoms.weights.asDiagonal() * f;
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the factored difference operator did not converge");
  }
  const auto order = abs_order(es.eigenvalues());
  Vector out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out[i] = es.eigenvalues()[order[static_cast<std::size_t>(i)]];
  }
  return out;
}

Eigen::MatrixXcd complex_diff_kernel(const KernelSpec& spec, const SignedAtomList& atoms) {
  const auto r = atoms.size();
  Eigen::VectorXcd s(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const double w = atoms.weights[k];
    s[k] = w >= 0.0 ? std::complex<double>(std::sqrt(w), 0.0) : std::complex<double>(0.0, std::sqrt(-w));
  }
  const Matrix g = gram(spec, atoms.atoms);
  Eigen::MatrixXcd k(r, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) {
      k(i, j) = s[i] * s[j] * g(i, j);
    }
  }
  return k;
}

namespace {

template <typename M>
typename M::Scalar trace_power(const M& m, int p) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("trace moment needs a square matrix");
  }
  if (p < 1 || p > 3) {
    throw InvalidArgument(fmt::format("trace moment order must be 1, 2 or 3, got {}", p));
  }
  switch (p) {
    case 1:
      return m.trace();
    case 2:
      // Tr(M M) = sum_ij M_ij M_ji
      return m.cwiseProduct(m.transpose()).sum();
    default: {
      const M m2 = m * m;
      return m2.cwiseProduct(m.transpose()).sum();
    }
  }
}

}  // namespace

double trace_moment(const Matrix& m, int p) { return trace_power(m, p); }

double trace_moment(const Eigen::MatrixXcd& m, int p) {
  const std::complex<double> t = trace_power(m, p);
  if (std::abs(t.imag()) > 1e-8 * std::max(1.0, std::abs(t.real()))) {
    throw SpectralMismatch(fmt::format("trace moment {} has imaginary part {:.3e}", p, t.imag()));
  }
  return t.real();
}

}  // namespace ktd

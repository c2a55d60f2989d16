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

#ifndef KTD_MEASURES_HPP
#define KTD_MEASURES_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "ktd/rng.hpp"
#include "ktd/types.hpp"

namespace ktd {

/// Weighted point cloud with nonnegative weights summing to one.
class DiscreteMeasure {
 public:
  /// Throws InvalidArgument if n == 0, weights are negative, do not sum to one
  /// within 1e-12, or any coordinate is non-finite.
  DiscreteMeasure(PointMatrix points, Vector weights);

  /// Uniform weights 1/n.
  static DiscreteMeasure uniform(PointMatrix points);

  [[nodiscard]] const PointMatrix& points() const { return points_; }
  [[nodiscard]] const Vector& weights() const { return weights_; }
  [[nodiscard]] Eigen::Index size() const { return points_.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return points_.cols(); }

 private:
  PointMatrix points_;
  Vector weights_;
};

/// Distinct atoms z_k of the union of two supports with signed masses
/// w_k = (mu - nu)({z_k}). Zero-mass atoms are never stored.
struct SignedAtomList {
  PointMatrix atoms;
  Vector weights;

  [[nodiscard]] Eigen::Index size() const { return atoms.rows(); }
  [[nodiscard]] bool empty() const { return atoms.rows() == 0; }
};

/// Signed measure mu - nu on the merged support.
///
/// Points are deduplicated by bitwise equality of their coordinates. Output
/// order: atoms only in mu, atoms in both, atoms only in nu, each group in
/// first-occurrence order. Atoms whose net mass is exactly zero are dropped.
SignedAtomList merge_difference(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// The signed list of a single measure (all weights positive).
SignedAtomList as_signed(const DiscreteMeasure& mu);

/// Draws `count` points.
using Sampler = std::function<PointMatrix(std::size_t count, Rng& rng)>;

PointMatrix sample_gaussian(const Vector& mean, double std, std::size_t n, Rng& rng);

struct GaussianComponent {
  Vector mean;
  double std = 1.0;
};

PointMatrix sample_mixture(const std::vector<GaussianComponent>& components, const std::vector<double>& weights,
                           std::size_t n, Rng& rng);

Sampler gaussian_sampler(Vector mean, double std);

/// Replace round(eps * n) rows, chosen uniformly without replacement, by
/// draws from `contamination`.
PointMatrix contaminate(const PointMatrix& points, const Sampler& contamination, double eps, Rng& rng);

}  // namespace ktd

#endif  // KTD_MEASURES_HPP

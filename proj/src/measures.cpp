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

#include "ktd/measures.hpp"

#include <cmath>
#include <cstring>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>

#include <fmt/format.h>

#include "ktd/errors.hpp"

namespace ktd {

DiscreteMeasure::DiscreteMeasure(PointMatrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() == 0) {
    throw InvalidArgument("a discrete measure needs at least one point");
  }
  if (weights_.size() != points_.rows()) {
    throw DimensionMismatch(
        fmt::format("measure has {} points but {} weights", points_.rows(), weights_.size()));
  }
  if (!points_.allFinite()) {
    throw InvalidArgument("measure points must be finite");
  }
  if ((weights_.array() < 0.0).any() || !weights_.allFinite()) {
    throw InvalidArgument("measure weights must be finite and nonnegative");
  }
  if (std::abs(weights_.sum() - 1.0) > 1e-12) {
    throw InvalidArgument(fmt::format("measure weights sum to {:.17g}, expected 1", weights_.sum()));
  }
}

DiscreteMeasure DiscreteMeasure::uniform(PointMatrix points) {
  const auto n = points.rows();
  if (n == 0) {
    throw InvalidArgument("a discrete measure needs at least one point");
  }
  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  return {std::move(points), std::move(w)};
}

SignedAtomList merge_difference(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw DimensionMismatch(fmt::format("measures live in dimensions {} and {}", mu.dim(), nu.dim()));
  }
  const auto d = mu.dim();
  const std::size_t row_bytes = static_cast<std::size_t>(d) * sizeof(double);

  struct Entry {
    const double* row;
    double mu_mass = 0.0;
    double nu_mass = 0.0;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(static_cast<std::size_t>(mu.size() + nu.size()));

  auto key_of = [&](const double* row) {
    return std::string_view(reinterpret_cast<const char*>(row), row_bytes);
  };
  auto add = [&](const DiscreteMeasure& m, bool from_mu) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double* row = m.points().data() + i * d;
      auto [it, inserted] = index.try_emplace(key_of(row), entries.size());
      if (inserted) {
        entries.push_back({row});
      }
      (from_mu ? entries[it->second].mu_mass : entries[it->second].nu_mass) += m.weights()[i];
    }
  };
  add(mu, true);
  add(nu, false);

  std::vector<std::size_t> order;
  order.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].mu_mass > 0.0 && entries[i].nu_mass == 0.0) order.push_back(i);
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].mu_mass > 0.0 && entries[i].nu_mass > 0.0) order.push_back(i);
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].mu_mass == 0.0) order.push_back(i);
  }

  SignedAtomList out;
  out.atoms.resize(static_cast<Eigen::Index>(order.size()), d);
  out.weights.resize(static_cast<Eigen::Index>(order.size()));
  Eigen::Index r = 0;
  for (std::size_t idx : order) {
    const double w = entries[idx].mu_mass - entries[idx].nu_mass;
    if (w == 0.0) {
      continue;
    }
    std::memcpy(out.atoms.data() + r * d, entries[idx].row, row_bytes);
    out.weights[r] = w;
    ++r;
  }
  out.atoms.conservativeResize(r, d);
  out.weights.conservativeResize(r);
  return out;
}

SignedAtomList as_signed(const DiscreteMeasure& mu) {
  // Merging with nothing still deduplicates repeated points.
  const auto d = mu.dim();
  std::unordered_map<std::string_view, Eigen::Index> index;
  SignedAtomList out;
  out.atoms.resize(mu.size(), d);
  out.weights.resize(mu.size());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double* row = mu.points().data() + i * d;
    std::string_view key(reinterpret_cast<const char*>(row), static_cast<std::size_t>(d) * sizeof(double));
    auto [it, inserted] = index.try_emplace(key, r);
    if (inserted) {
      out.atoms.row(r) = mu.points().row(i);
      out.weights[r] = 0.0;
      ++r;
    }
    out.weights[it->second] += mu.weights()[i];
  }
  out.atoms.conservativeResize(r, d);
  out.weights.conservativeResize(r);
  return out;
}

PointMatrix sample_gaussian(const Vector& mean, double std, std::size_t n, Rng& rng) {
  if (!(std > 0.0) || !std::isfinite(std)) {
    throw InvalidArgument(fmt::format("gaussian sampler needs std > 0, got {}", std));
  }
  if (mean.size() == 0) {
    throw InvalidArgument("gaussian sampler needs a mean of dimension >= 1");
  }
  PointMatrix out(static_cast<Eigen::Index>(n), mean.size());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = rng.normal(mean[j], std);
    }
  }
  return out;
}

PointMatrix sample_mixture(const std::vector<GaussianComponent>& components, const std::vector<double>& weights,
                           std::size_t n, Rng& rng) {
  if (components.empty() || components.size() != weights.size()) {
    throw InvalidArgument("mixture needs one weight per component and at least one component");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw InvalidArgument("mixture weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument(fmt::format("mixture weights sum to {}, expected 1", total));
  }
  const auto d = components.front().mean.size();
  for (const auto& c : components) {
    if (c.mean.size() != d) {
      throw DimensionMismatch("mixture components have different dimensions");
    }
    if (!(c.std > 0.0)) {
      throw InvalidArgument("mixture component std must be positive");
    }
  }
  PointMatrix out(static_cast<Eigen::Index>(n), d);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double u = rng.uniform();
    std::size_t c = 0;
    double acc = weights[0];
    while (u >= acc && c + 1 < components.size()) {
      acc += weights[++c];
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      out(i, j) = rng.normal(components[c].mean[j], components[c].std);
    }
  }
  return out;
}

Sampler gaussian_sampler(Vector mean, double std) {
  return [mean = std::move(mean), std](std::size_t count, Rng& rng) { return sample_gaussian(mean, std, count, rng); };
}

PointMatrix contaminate(const PointMatrix& points, const Sampler& contamination, double eps, Rng& rng) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw InvalidArgument(fmt::format("contamination fraction must lie in [0, 1), got {}", eps));
  }
  const auto n = static_cast<std::size_t>(points.rows());
  const auto count = static_cast<std::size_t>(std::lround(eps * static_cast<double>(n)));
  PointMatrix out = points;
  if (count == 0) {
    return out;
  }
  // Partial Fisher-Yates: the first `count` slots are a uniform subset.
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(idx[i], idx[j]);
  }
  const PointMatrix draws = contamination(count, rng);
  if (draws.rows() != static_cast<Eigen::Index>(count) || draws.cols() != points.cols()) {
    throw DimensionMismatch("contamination sampler returned the wrong shape");
  }
  for (std::size_t i = 0; i < count; ++i) {
    out.row(idx[i]) = draws.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace ktd

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

#include "ktd/experiments.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ktd/errors.hpp"

namespace ktd {
namespace {

DiscreteMeasure uniform_1d(const Vector& values) {
  PointMatrix pts(values.size(), 1);
  pts.col(0) = values;
  return DiscreteMeasure::uniform(std::move(pts));
}

Vector standard_normal(std::size_t n, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = rng.normal();
  return v;
}

SweepResult make_result(std::string parameter, const std::vector<double>& grid, const std::vector<Metric>& metrics) {
  SweepResult out;
  out.parameter = std::move(parameter);
  out.grid = grid;
  out.metrics = metrics;
  out.values.assign(metrics.size(), std::vector<double>(grid.size(), 0.0));
  return out;
}

void check_grid(const std::vector<double>& grid, bool positive) {
  if (grid.empty()) throw InvalidArgument("sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (positive && !(grid[i] > 0.0)) throw InvalidArgument("sweep grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidArgument("sweep grid must be increasing");
  }
}

}  // namespace

const std::vector<double>& SweepResult::series(Metric metric) const {
  const auto it = std::find(metrics.begin(), metrics.end(), metric);
  if (it == metrics.end()) {
    throw InvalidArgument(fmt::format("sweep has no '{}' series", metric_name(metric)));
  }
  return values[static_cast<std::size_t>(it - metrics.begin())];
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) {
    throw InvalidArgument("log grid needs 0 < lo < hi and at least two points");
  }
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

SweepResult bandwidth_sweep(std::size_t n, double mean_gap, const std::vector<double>& sigma_grid,
                            const std::vector<Metric>& metrics, Rng& rng) {
  check_grid(sigma_grid, true);
  const Vector x = standard_normal(n, rng);
  const Vector y = standard_normal(n, rng).array() + mean_gap;
  const DiscreteMeasure mu = uniform_1d(x);
  const DiscreteMeasure nu = uniform_1d(y);
  SweepResult out = make_result("sigma", sigma_grid, metrics);
  for (std::size_t g = 0; g < sigma_grid.size(); ++g) {
    const KernelSpec spec = KernelSpec::gaussian(sigma_grid[g]);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      out.values[m][g] = evaluate_metric(metrics[m], spec, mu, nu);
    }
  }
  return out;
}

SweepResult mean_sweep(std::size_t n, const std::vector<double>& theta_grid, double sigma,
                       const std::vector<Metric>& metrics, Rng& rng) {
  check_grid(theta_grid, false);
  const KernelSpec spec = KernelSpec::gaussian(sigma);
  const DiscreteMeasure mu = uniform_1d(standard_normal(n, rng));
  const Vector base = standard_normal(n, rng);
  SweepResult out = make_result("theta", theta_grid, metrics);
  for (std::size_t g = 0; g < theta_grid.size(); ++g) {
    const DiscreteMeasure nu = uniform_1d(base.array() + theta_grid[g]);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      out.values[m][g] = evaluate_metric(metrics[m], spec, mu, nu);
    }
  }
  return out;
}

SweepResult std_sweep(std::size_t n, const std::vector<double>& std_grid, double sigma,
                      const std::vector<Metric>& metrics, Rng& rng, double offset) {
  check_grid(std_grid, true);
  const KernelSpec spec = KernelSpec::gaussian(sigma);
  const Vector z1 = standard_normal(n, rng);
  const Vector z2 = standard_normal(n, rng);
  SweepResult out = make_result("std", std_grid, metrics);
  for (std::size_t g = 0; g < std_grid.size(); ++g) {
    const double s = std_grid[g];
    const DiscreteMeasure mu = uniform_1d(s * z1);
    const DiscreteMeasure nu = uniform_1d((s * z2).array() + offset);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      out.values[m][g] = evaluate_metric(metrics[m], spec, mu, nu);
    }
  }
  return out;
}

MixtureSplitRecord mixture_split_check(const Vector& shift, const Vector& delta, double sigma, std::size_t n,
                                       Rng& rng) {
  if (shift.size() != delta.size() || shift.size() == 0) {
    throw DimensionMismatch("shift and delta must have the same nonzero dimension");
  }
  const auto d = shift.size();
  const PointMatrix mu1 = sample_gaussian(Vector::Zero(d), 1.0, n, rng);
  const PointMatrix nu1 = sample_gaussian(shift, 1.0, n, rng);
  const PointMatrix mu2 = mu1.rowwise() + delta.transpose();
  const PointMatrix nu2 = nu1.rowwise() + delta.transpose();
  PointMatrix p(2 * mu1.rows(), d);
  p << mu1, mu2;
  PointMatrix q(2 * nu1.rows(), d);
  q << nu1, nu2;

  const KernelSpec spec = KernelSpec::gaussian(sigma);
  const KernelSpec sq = kernel_square(spec);
  const auto m_mu1 = DiscreteMeasure::uniform(mu1);
  const auto m_nu1 = DiscreteMeasure::uniform(nu1);
  const auto m_mu2 = DiscreteMeasure::uniform(mu2);
  const auto m_nu2 = DiscreteMeasure::uniform(nu2);
  const auto m_p = DiscreteMeasure::uniform(p);
  const auto m_q = DiscreteMeasure::uniform(q);

  MixtureSplitRecord out;
  out.kt_pq = kt_distance(spec, m_p, m_q);
  out.kt_11 = kt_distance(spec, m_mu1, m_nu1);
  out.kt_22 = kt_distance(spec, m_mu2, m_nu2);
  out.mmd2_pq = mmd_squared(sq, m_p, m_q);
  out.mmd2_11 = mmd_squared(sq, m_mu1, m_nu1);
  out.mmd2_22 = mmd_squared(sq, m_mu2, m_nu2);
  return out;
}

std::vector<RobustnessRow> robustness_check(const KernelSpec& spec, const DiscreteMeasure& p, const DiscreteMeasure& q,
                                            const Vector& contamination, const std::vector<double>& eps_grid,
                                            const std::vector<Metric>& metrics) {
  if (contamination.size() != p.dim()) {
    throw DimensionMismatch("contamination point has the wrong dimension");
  }
  PointMatrix pts(p.size() + 1, p.dim());
  pts.topRows(p.size()) = p.points();
  pts.row(p.size()) = contamination.transpose();

  std::vector<RobustnessRow> out;
  for (Metric metric : metrics) {
    const double clean = evaluate_metric(metric, spec, p, q);
    for (double eps : eps_grid) {
      if (!(eps >= 0.0 && eps <= 1.0)) {
        throw InvalidArgument(fmt::format("contamination level must lie in [0, 1], got {}", eps));
      }
      Vector w(p.size() + 1);
      w.head(p.size()) = (1.0 - eps) * p.weights();
      w[p.size()] = eps;
      w /= w.sum();
      const DiscreteMeasure p_eps(pts, w);
      const double dirty = evaluate_metric(metric, spec, p_eps, q);
      out.push_back({eps, metric, clean, dirty, std::abs(dirty - clean)});
    }
  }
  return out;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("slope fit needs at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs distinct x values");
  return sxy / sxx;
}

RateStudy rate_study(const Sampler& sampler, const std::vector<std::size_t>& n_grid, std::size_t reps,
                     std::size_t ref_size, const KernelSpec& spec, const std::vector<Metric>& metrics, Rng& rng) {
  if (n_grid.size() < 2 || reps < 1) {
    throw InvalidArgument("rate study needs at least two sample sizes and one repetition");
  }
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw InvalidArgument("rate study sample sizes must increase");
  }
  if (ref_size <= n_grid.back()) {
    throw InvalidArgument("reference sample must be larger than every sample size");
  }
  const PointMatrix ref_points = sampler(ref_size, rng);
  const DiscreteMeasure ref = DiscreteMeasure::uniform(ref_points);

  // The reference self-interaction of the MMD is shared by every evaluation.
  const KernelSpec sq = kernel_square(spec);
  const bool wants_mmd = std::find(metrics.begin(), metrics.end(), Metric::kMmdK2) != metrics.end();
  const double ref_self = wants_mmd ? self_kernel_sum(sq, ref.points(), ref.weights()) : 0.0;

  RateStudy out;
  std::vector<std::vector<double>> means(metrics.size());
  for (std::size_t n : n_grid) {
    std::vector<std::vector<double>> samples(metrics.size());
    for (std::size_t r = 0; r < reps; ++r) {
      const DiscreteMeasure x = DiscreteMeasure::uniform(sampler(n, rng));
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        double value = 0.0;
        if (metrics[m] == Metric::kMmdK2) {
          const double sq_mmd = self_kernel_sum(sq, x.points(), x.weights()) + ref_self -
                                2.0 * weighted_kernel_sum(sq, x.points(), x.weights(), ref.points(), ref.weights());
          value = std::sqrt(std::max(sq_mmd, 0.0));
        } else {
          value = evaluate_metric(metrics[m], spec, x, ref);
        }
        samples[m].push_back(value);
      }
    }
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      double mean = 0.0;
      for (double v : samples[m]) mean += v;
      mean /= static_cast<double>(reps);
      double ss = 0.0;
      for (double v : samples[m]) ss += (v - mean) * (v - mean);
      const double sd = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1)) : 0.0;
      out.rows.push_back({n, metrics[m], mean, sd});
      means[m].push_back(mean);
    }
  }
  std::vector<double> log_n;
  for (std::size_t n : n_grid) log_n.push_back(std::log(static_cast<double>(n)));
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    std::vector<double> log_mean;
    for (double v : means[m]) log_mean.push_back(std::log(v));
    out.slopes[metrics[m]] = ols_slope(log_n, log_mean);
  }
  return out;
}

}  // namespace ktd

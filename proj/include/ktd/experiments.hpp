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

#ifndef KTD_EXPERIMENTS_HPP
#define KTD_EXPERIMENTS_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ktd/distances.hpp"
#include "ktd/measures.hpp"
#include "ktd/rng.hpp"

namespace ktd {

/// One curve per metric over a parameter grid.
struct SweepResult {
  std::string parameter;
  std::vector<double> grid;
  std::vector<Metric> metrics;
  std::vector<std::vector<double>> values;  ///< values[m][g]

  [[nodiscard]] const std::vector<double>& series(Metric metric) const;
};

/// Log-spaced grid of `count` points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// N(0,1) vs N(mean_gap,1), one n-sample pair reused across the bandwidth grid.
SweepResult bandwidth_sweep(std::size_t n, double mean_gap, const std::vector<double>& sigma_grid,
                            const std::vector<Metric>& metrics, Rng& rng);

/// N(0,1) vs N(theta,1) for theta on the grid; the second sample is one
/// standard normal draw shifted by theta.
SweepResult mean_sweep(std::size_t n, const std::vector<double>& theta_grid, double sigma,
                       const std::vector<Metric>& metrics, Rng& rng);

/// N(0,s) vs N(offset,s) for s on the grid; both samples are fixed standard
/// normal draws scaled by s.
SweepResult std_sweep(std::size_t n, const std::vector<double>& std_grid, double sigma,
                      const std::vector<Metric>& metrics, Rng& rng, double offset = 100.0);

struct MixtureSplitRecord {
  double kt_pq = 0.0;
  double kt_11 = 0.0;
  double kt_22 = 0.0;
  double mmd2_pq = 0.0;  ///< squared MMD with the squared kernel
  double mmd2_11 = 0.0;
  double mmd2_22 = 0.0;
};

/// mu1 = N(0, I), nu1 = N(shift, I), n points each in dimension shift.size();
/// mu2, nu2 are the same point sets translated by delta. P = (mu1 + mu2)/2,
/// Q = (nu1 + nu2)/2. Gaussian kernel with bandwidth sigma.
MixtureSplitRecord mixture_split_check(const Vector& shift, const Vector& delta, double sigma, std::size_t n,
                                       Rng& rng);

struct RobustnessRow {
  double eps = 0.0;
  Metric metric = Metric::kKt;
  double clean = 0.0;
  double contaminated = 0.0;
  double deviation = 0.0;
};

/// P_eps = (1 - eps) P + eps delta_c by exact reweighting; reports
/// |d(P_eps, Q) - d(P, Q)| per eps and metric.
std::vector<RobustnessRow> robustness_check(const KernelSpec& spec, const DiscreteMeasure& p, const DiscreteMeasure& q,
                                            const Vector& contamination, const std::vector<double>& eps_grid,
                                            const std::vector<Metric>& metrics);

struct RateRow {
  std::size_t n = 0;
  Metric metric = Metric::kKt;
  double mean = 0.0;
  double std = 0.0;
};

struct RateStudy {
  std::vector<RateRow> rows;
  std::map<Metric, double> slopes;  ///< OLS slope of log(mean) against log(n)
};

/// Distance between an n-sample and one ref_size-sample standing in for the
/// population, averaged over reps, for each n in n_grid.
RateStudy rate_study(const Sampler& sampler, const std::vector<std::size_t>& n_grid, std::size_t reps,
                     std::size_t ref_size, const KernelSpec& spec, const std::vector<Metric>& metrics, Rng& rng);

/// Ordinary least squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ktd

#endif  // KTD_EXPERIMENTS_HPP

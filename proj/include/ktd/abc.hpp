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

#ifndef KTD_ABC_HPP
#define KTD_ABC_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ktd/distances.hpp"
#include "ktd/kernels.hpp"
#include "ktd/rng.hpp"
#include "ktd/types.hpp"

namespace ktd {

/// Rejection ABC for the location model p_theta = N(theta, model_std^2) with
/// prior N(prior_mean, prior_std^2).
struct AbcConfig {
  double prior_mean = 0.0;
  double prior_std = 5.0;
  double model_std = 1.0;
  double tolerance = 0.5;  ///< accept iff distance < tolerance
  std::size_t iterations = 10000;
  std::size_t synthetic_size = 100;
  Metric metric = Metric::kKt;
  KernelSpec kernel = KernelSpec::gaussian(1.0);
  double theta_star = 1.0;  ///< reference parameter for the MSE
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

struct AbcResult {
  std::vector<double> accepted;  ///< in iteration order
  std::size_t accept_count = 0;
  std::optional<double> mse;     ///< absent iff nothing was accepted
};

/// One prior draw and the distance of its synthetic sample to the observations.
struct AbcDraw {
  double theta = 0.0;
  double distance = 0.0;
};

/// All T draws. Iteration i uses the stream Rng(seed, i), so the draws do not
/// depend on the tolerance or on the thread count.
std::vector<AbcDraw> abc_draws(const AbcConfig& config, const Vector& observed);

/// Accept the draws with distance strictly below eps.
AbcResult accept_draws(const std::vector<AbcDraw>& draws, double eps, double theta_star);

AbcResult rejection_abc(const AbcConfig& config, const Vector& observed);

/// Mean of (theta_i - theta_star)^2; nullopt for an empty list.
std::optional<double> mse_to_target(const std::vector<double>& accepted, double theta_star);

/// n draws from N(theta_star, 1) with round(frac * n) of them replaced by
/// draws from N(contamination_mean, 1).
Vector generate_observed(std::size_t n, double theta_star, double contamination_mean, double contamination_frac,
                         Rng& rng);

/// (1/|L|) sum_i N(x; theta_i, model_std^2) on each grid point.
std::vector<double> posterior_density_grid(const std::vector<double>& accepted, const std::vector<double>& grid,
                                           double model_std = 1.0);

struct GaussianPosterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact posterior of theta for N(theta, 1) data under a N(0, prior_std^2) prior.
GaussianPosterior exact_posterior(const Vector& observed, double prior_std);

/// Description of the synthetic observed data of the contaminated-Gaussian study.
struct ObservedModel {
  std::size_t n = 100;
  double theta_star = 1.0;
  double contamination_mean = 20.0;
  double contamination_frac = 0.1;
};

struct AbcStudyRow {
  double eps = 0.0;
  std::vector<std::size_t> accept_counts;  ///< one per replication
  std::vector<double> mses;                ///< replications with at least one acceptance
  double mean_accept = 0.0;
  double std_accept = 0.0;
  std::optional<double> mean_mse;
  std::optional<double> std_mse;
};

/// Repeat the experiment `reps` times with fresh observed and synthetic data.
/// Replication r runs with seed Rng(config.seed, r).next_u64(); one set of
/// draws per replication is thresholded at every eps.
std::vector<AbcStudyRow> abc_study(const AbcConfig& config, const ObservedModel& model, const std::vector<double>& eps,
                                   std::size_t reps);

/// Seed of replication r and the stream index its observed data come from.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t rep);
inline constexpr std::uint64_t kObservedStream = 0x8000000000000000ULL;

}  // namespace ktd

#endif  // KTD_ABC_HPP

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

#include "ktd/abc.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "ktd/errors.hpp"
#include "ktd/measures.hpp"

namespace ktd {
namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

void AbcConfig::validate() const {
  if (!(prior_std > 0.0)) throw InvalidArgument("ABC prior std must be positive");
  if (!(model_std > 0.0)) throw InvalidArgument("ABC model std must be positive");
  if (!(tolerance > 0.0)) throw InvalidArgument("ABC tolerance must be positive");
  if (iterations < 1) throw InvalidArgument("ABC needs at least one iteration");
  if (synthetic_size < 1) throw InvalidArgument("ABC synthetic sample size must be at least 1");
  if (threads < 1) throw InvalidArgument("thread count must be at least 1");
  if (metric == Metric::kKbw && !kernel.unit_diagonal()) {
    throw Unsupported("kbw needs a unit-diagonal kernel");
  }
}

std::vector<AbcDraw> abc_draws(const AbcConfig& config, const Vector& observed) {
  config.validate();
  if (observed.size() == 0) {
    throw InvalidArgument("ABC needs observed data");
  }
  PointMatrix obs_points(observed.size(), 1);
  obs_points.col(0) = observed;
  const DiscreteMeasure obs = DiscreteMeasure::uniform(std::move(obs_points));

  std::vector<AbcDraw> draws(config.iterations);
  auto work = [&](std::size_t begin, std::size_t end) {
    Vector mean(1);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::derive(config.seed, i);
      const double theta = rng.normal(config.prior_mean, config.prior_std);
      mean[0] = theta;
      const DiscreteMeasure synth =
          DiscreteMeasure::uniform(sample_gaussian(mean, config.model_std, config.synthetic_size, rng));
      draws[i] = {theta, evaluate_metric(config.metric, config.kernel, obs, synth)};
    }
  };

  const std::size_t workers = std::min<std::size_t>(config.threads, config.iterations);
  if (workers <= 1) {
    work(0, config.iterations);
    return draws;
  }
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (config.iterations + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(config.iterations, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return draws;
}

AbcResult accept_draws(const std::vector<AbcDraw>& draws, double eps, double theta_star) {
  AbcResult out;
  for (const auto& d : draws) {
    if (d.distance < eps) out.accepted.push_back(d.theta);
  }
  out.accept_count = out.accepted.size();
  out.mse = mse_to_target(out.accepted, theta_star);
  return out;
}

AbcResult rejection_abc(const AbcConfig& config, const Vector& observed) {
  return accept_draws(abc_draws(config, observed), config.tolerance, config.theta_star);
}

std::optional<double> mse_to_target(const std::vector<double>& accepted, double theta_star) {
  if (accepted.empty()) {
    return std::nullopt;
  }
  double total = 0.0;
  for (double t : accepted) total += (t - theta_star) * (t - theta_star);
  return total / static_cast<double>(accepted.size());
}

Vector generate_observed(std::size_t n, double theta_star, double contamination_mean, double contamination_frac,
                         Rng& rng) {
  Vector center(1);
  center[0] = theta_star;
  PointMatrix clean = sample_gaussian(center, 1.0, n, rng);
  Vector cont(1);
  cont[0] = contamination_mean;
  const PointMatrix mixed = contaminate(clean, gaussian_sampler(cont, 1.0), contamination_frac, rng);
  return mixed.col(0);
}

std::vector<double> posterior_density_grid(const std::vector<double>& accepted, const std::vector<double>& grid,
                                           double model_std) {
  if (accepted.empty()) {
    throw InvalidArgument("posterior density needs at least one accepted parameter");
  }
  const double norm = 1.0 / (model_std * std::sqrt(2.0 * std::numbers::pi) * static_cast<double>(accepted.size()));
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double s = 0.0;
    for (double t : accepted) {
      const double z = (grid[g] - t) / model_std;
      s += std::exp(-0.5 * z * z);
    }
    out[g] = norm * s;
  }
  return out;
}

GaussianPosterior exact_posterior(const Vector& observed, double prior_std) {
  if (!(prior_std > 0.0)) throw InvalidArgument("prior std must be positive");
  const double precision = static_cast<double>(observed.size()) + 1.0 / (prior_std * prior_std);
  return {observed.sum() / precision, 1.0 / precision};
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t rep) { return Rng(seed, rep).next_u64(); }

std::vector<AbcStudyRow> abc_study(const AbcConfig& config, const ObservedModel& model, const std::vector<double>& eps,
                                   std::size_t reps) {
  std::vector<AbcStudyRow> rows(eps.size());
  for (std::size_t e = 0; e < eps.size(); ++e) rows[e].eps = eps[e];
  for (std::size_t r = 0; r < reps; ++r) {
    AbcConfig rep_config = config;
    rep_config.seed = replication_seed(config.seed, r);
    Rng obs_rng(rep_config.seed, kObservedStream);
    const Vector observed =
        generate_observed(model.n, model.theta_star, model.contamination_mean, model.contamination_frac, obs_rng);
    const auto draws = abc_draws(rep_config, observed);
    for (auto& row : rows) {
      const AbcResult res = accept_draws(draws, row.eps, config.theta_star);
      row.accept_counts.push_back(res.accept_count);
      if (res.mse) row.mses.push_back(*res.mse);
    }
  }
  for (auto& row : rows) {
    std::vector<double> counts(row.accept_counts.begin(), row.accept_counts.end());
    std::tie(row.mean_accept, row.std_accept) = mean_std(counts);
    if (!row.mses.empty()) {
      const auto [m, s] = mean_std(row.mses);
      row.mean_mse = m;
      row.std_mse = s;
    }
  }
  return rows;
}

}  // namespace ktd

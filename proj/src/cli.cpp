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

#include "ktd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "ktd/abc.hpp"
#include "ktd/distances.hpp"
#include "ktd/errors.hpp"
#include "ktd/experiments.hpp"
#include "ktd/flows.hpp"
#include "ktd/io.hpp"
#include "ktd/selftest.hpp"
#include "ktd/spectral.hpp"

namespace ktd {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
  std::uint64_t seed = 0;
  std::string config;
  unsigned threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed of every random stream of the run")->capture_default_str();
  sub->add_option("--config", c.config, "JSON file of option values; command-line flags take precedence");
  sub->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

struct KernelOpts {
  std::string family = "gaussian";
  double bandwidth = 1.0;
};

void add_kernel(CLI::App* sub, KernelOpts& k, const std::string& family, double bandwidth) {
  k.family = family;
  k.bandwidth = bandwidth;
  sub->add_option("--kernel", k.family, "Kernel family: gaussian, laplacian or energy")
      ->capture_default_str()
      ->check(CLI::IsMember({"gaussian", "laplacian", "energy"}));
  sub->add_option("--bandwidth", k.bandwidth, "Kernel bandwidth sigma, in data units")->capture_default_str();
}

KernelSpec make_kernel(const KernelOpts& k) { return kernel_from_name(k.family, k.bandwidth); }

std::vector<Metric> parse_metrics(const std::vector<std::string>& names) {
  std::vector<Metric> out;
  for (const auto& n : names) out.push_back(metric_from_name(n));
  return out;
}

DiscreteMeasure load_measure(const std::string& path) {
  return DiscreteMeasure::uniform(read_points_csv(path));
}

void ensure_parent(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::string json_scalar_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return fmt::format("{}", v.get<double>());
  throw InvalidArgument(fmt::format("unsupported config value {}", v.dump()));
}

// Options not given on the command line take their value from the JSON file.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open config '{}'", path));
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
  }
  if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") throw InvalidArgument("config files cannot include other config files");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw InvalidArgument(fmt::format("unknown config key '{}' for '{}'", key, sub->get_name()));
    }
    if (opt->count() > 0) continue;
    opt->clear();
    if (key == "kernel" && value.is_object()) {
      // {"family": ..., "bandwidth": ...} form of a kernel spec
      const KernelSpec spec = kernel_from_json(value);
      opt->add_result(value["family"].get<std::string>());
      opt->run_callback();
      if (auto* bw = sub->get_option_no_throw("--bandwidth"); bw != nullptr && bw->count() == 0) {
        bw->clear();
        bw->add_result(fmt::format("{}", spec.bandwidth()));
        bw->run_callback();
      }
      continue;
    }
    if (value.is_array()) {
      for (const auto& v : value) opt->add_result(json_scalar_to_string(v));
    } else {
      opt->add_result(json_scalar_to_string(value));
    }
    opt->run_callback();
  }
}

json resolved_config(const CLI::App* sub) {
  json out = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "help-all") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      out[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

void write_sweep(const SweepResult& sweep, const std::string& path, std::ostream& out) {
  std::vector<std::string> header{sweep.parameter};
  std::vector<std::vector<double>> cols{sweep.grid};
  for (std::size_t m = 0; m < sweep.metrics.size(); ++m) {
    header.push_back(metric_name(sweep.metrics[m]));
    cols.push_back(sweep.values[m]);
  }
  if (path.empty()) {
    out << fmt::format("{}\n", fmt::join(header, ","));
    for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
      for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << fmt::format("{}", cols[c][g]);
      out << '\n';
    }
    return;
  }
  ensure_parent(path);
  write_table_csv(path, header, cols);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel trace distance toolkit: distances, sweeps, particle flows and rejection ABC", "ktdist"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // dist
  Common dist_common;
  KernelOpts dist_kernel;
  std::string dist_metric = "kt";
  std::string dist_x;
  std::string dist_y;
  std::string dist_dump;
  auto* dist = app.add_subcommand("dist", "Distance between two point clouds (CSV, one point per row)");
  add_common(dist, dist_common);
  add_kernel(dist, dist_kernel, "gaussian", 1.0);
  dist->add_option("--metric", dist_metric, "kt, mmd, mmd2 (MMD with squared kernel), mmdn, mmde, kbw, w1, mmd-half-sq")
      ->capture_default_str();
  dist->add_option("--x", dist_x, "CSV file of the first cloud");
  dist->add_option("--y", dist_y, "CSV file of the second cloud");
  dist->add_option("--dump-spectrum", dist_dump, "Directory receiving G.csv, L.csv and eigenvalues.csv");

  // sweep-bandwidth
  Common sb_common;
  std::size_t sb_n = 1000;
  double sb_gap = 5.0;
  double sb_min = 0.05;
  double sb_max = 50.0;
  std::size_t sb_count = 30;
  std::vector<std::string> sb_metrics{"kt", "mmd2", "kbw"};
  std::string sb_out;
  auto* sb = app.add_subcommand("sweep-bandwidth", "N(0,1) vs N(gap,1) over a log grid of gaussian bandwidths");
  add_common(sb, sb_common);
  sb->add_option("--n", sb_n, "Samples per distribution")->capture_default_str();
  sb->add_option("--mean-gap", sb_gap, "Distance between the two means, in data units")->capture_default_str();
  sb->add_option("--sigma-min", sb_min, "Smallest bandwidth, in data units")->capture_default_str();
  sb->add_option("--sigma-max", sb_max, "Largest bandwidth, in data units")->capture_default_str();
  sb->add_option("--count", sb_count, "Number of log-spaced bandwidths")->capture_default_str();
  sb->add_option("--metrics", sb_metrics, "Metrics to evaluate")->delimiter(',')->capture_default_str();
  sb->add_option("--out", sb_out, "Output CSV (stdout if omitted)");

  // sweep-mean
  Common sm_common;
  std::size_t sm_n = 1000;
  double sm_max = 10.0;
  double sm_step = 0.5;
  double sm_sigma = 1.0;
  std::vector<std::string> sm_metrics{"kt", "mmd2", "kbw"};
  std::string sm_out;
  auto* sm = app.add_subcommand("sweep-mean", "N(0,1) vs N(theta,1) for theta = 0, step, ..., max");
  add_common(sm, sm_common);
  sm->add_option("--n", sm_n, "Samples per distribution")->capture_default_str();
  sm->add_option("--theta-max", sm_max, "Largest mean, in data units")->capture_default_str();
  sm->add_option("--theta-step", sm_step, "Mean increment, in data units")->capture_default_str();
  sm->add_option("--bandwidth", sm_sigma, "Gaussian kernel bandwidth, in data units")->capture_default_str();
  sm->add_option("--metrics", sm_metrics, "Metrics to evaluate")->delimiter(',')->capture_default_str();
  sm->add_option("--out", sm_out, "Output CSV (stdout if omitted)");

  // sweep-std
  Common ss_common;
  std::size_t ss_n = 1000;
  std::vector<double> ss_stds{0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
  double ss_offset = 100.0;
  double ss_sigma = 1.0;
  std::vector<std::string> ss_metrics{"kt", "mmd2", "kbw"};
  std::string ss_out;
  auto* ss = app.add_subcommand("sweep-std", "N(0,s) vs N(offset,s) over a list of standard deviations");
  add_common(ss, ss_common);
  ss->add_option("--n", ss_n, "Samples per distribution")->capture_default_str();
  ss->add_option("--stds", ss_stds, "Standard deviations, in data units")->delimiter(',')->capture_default_str();
  ss->add_option("--offset", ss_offset, "Mean of the second distribution, in data units")->capture_default_str();
  ss->add_option("--bandwidth", ss_sigma, "Gaussian kernel bandwidth, in data units")->capture_default_str();
  ss->add_option("--metrics", ss_metrics, "Metrics to evaluate")->delimiter(',')->capture_default_str();
  ss->add_option("--out", ss_out, "Output CSV (stdout if omitted)");

  // mixture-check
  Common mc_common;
  std::size_t mc_n = 100;
  std::vector<double> mc_shift{0.3, 0.3};
  std::vector<double> mc_delta{10.0, 10.0};
  double mc_sigma = 0.5;
  std::string mc_out;
  auto* mc = app.add_subcommand("mixture-check", "Distances between two mixtures of far-apart translated copies");
  add_common(mc, mc_common);
  mc->add_option("--n", mc_n, "Samples per component")->capture_default_str();
  mc->add_option("--shift", mc_shift, "Mean of nu1 (mu1 is centred at 0), in data units")
      ->delimiter(',')
      ->capture_default_str();
  mc->add_option("--delta", mc_delta, "Translation of the second copies, in data units")
      ->delimiter(',')
      ->capture_default_str();
  mc->add_option("--bandwidth", mc_sigma, "Gaussian kernel bandwidth, in data units")->capture_default_str();
  mc->add_option("--out", mc_out, "Output CSV (stdout if omitted)");

  // robustness-check
  Common rc_common;
  KernelOpts rc_kernel;
  std::size_t rc_n = 100;
  std::vector<double> rc_shift{1.0};
  std::vector<double> rc_contamination{50.0};
  std::vector<double> rc_eps{0.05, 0.1, 0.2, 0.5};
  std::vector<std::string> rc_metrics{"kt", "mmd2"};
  std::string rc_out;
  auto* rc = app.add_subcommand("robustness-check", "Effect of mixing a Dirac contamination into P on d(P, Q)");
  add_common(rc, rc_common);
  add_kernel(rc, rc_kernel, "gaussian", 1.0);
  rc->add_option("--n", rc_n, "Samples in P = N(0,I) and Q = N(shift,I)")->capture_default_str();
  rc->add_option("--shift", rc_shift, "Mean of Q; its length sets the dimension")->delimiter(',')->capture_default_str();
  rc->add_option("--contamination", rc_contamination, "Location of the contaminating Dirac, in data units")
      ->delimiter(',')
      ->capture_default_str();
  rc->add_option("--eps", rc_eps, "Contamination masses in [0, 1]")->delimiter(',')->capture_default_str();
  rc->add_option("--metrics", rc_metrics, "Metrics to evaluate")->delimiter(',')->capture_default_str();
  rc->add_option("--out", rc_out, "Output CSV (stdout if omitted)");

  // rate
  Common rt_common;
  KernelOpts rt_kernel;
  std::vector<std::size_t> rt_grid{50, 100, 200, 400, 800};
  std::size_t rt_reps = 20;
  std::size_t rt_ref = 8000;
  std::vector<std::string> rt_metrics{"kt", "mmd2"};
  std::string rt_out;
  std::string rt_summary;
  auto* rt = app.add_subcommand("rate", "Empirical convergence of d(mu, mu_n) for mu = N(0,1)");
  add_common(rt, rt_common);
  add_kernel(rt, rt_kernel, "gaussian", 1.0);
  rt->add_option("--n-grid", rt_grid, "Sample sizes")->delimiter(',')->capture_default_str();
  rt->add_option("--reps", rt_reps, "Repetitions per sample size")->capture_default_str();
  rt->add_option("--ref-size", rt_ref, "Size of the sample standing in for mu")->capture_default_str();
  rt->add_option("--metrics", rt_metrics, "Metrics to evaluate")->delimiter(',')->capture_default_str();
  rt->add_option("--out", rt_out, "Output CSV (stdout if omitted)");
  rt->add_option("--summary", rt_summary, "JSON file receiving the fitted log-log slopes");

  // flow
  Common fl_common;
  KernelOpts fl_kernel;
  std::string fl_init;
  std::string fl_target;
  std::string fl_loss = "kt";
  double fl_lr = 0.005;
  std::size_t fl_steps = 1000;
  std::size_t fl_record = 100;
  std::size_t fl_n = 100;
  std::string fl_rule = "velocity";
  std::string fl_out = "flow_out";
  auto* fl = app.add_subcommand("flow", "Particle gradient descent of a cloud towards a target cloud");
  add_common(fl, fl_common);
  add_kernel(fl, fl_kernel, "laplacian", 1.0);
  fl->add_option("--init", fl_init, "CSV of initial particles (generated if omitted)");
  fl->add_option("--target", fl_target, "CSV of target points (generated if omitted)");
  fl->add_option("--loss", fl_loss, "kt, or mmd (squared MMD with the squared kernel)")
      ->capture_default_str()
      ->check(CLI::IsMember({"kt", "mmd"}));
  fl->add_option("--lr", fl_lr, "Learning rate")->capture_default_str();
  fl->add_option("--steps", fl_steps, "Number of descent steps")->capture_default_str();
  fl->add_option("--record-every", fl_record, "Snapshot period in steps")->capture_default_str();
  fl->add_option("--n", fl_n, "Particles per generated cloud")->capture_default_str();
  fl->add_option("--step-rule", fl_rule, "velocity (witness gradient) or gradient (loss gradient)")
      ->capture_default_str()
      ->check(CLI::IsMember({"velocity", "gradient"}));
  fl->add_option("--out", fl_out, "Output directory")->capture_default_str();

  // abc
  Common ab_common;
  KernelOpts ab_kernel;
  std::string ab_distance = "kt";
  double ab_eps = 0.5;
  std::size_t ab_T = 10000;
  std::size_t ab_m = 100;
  double ab_prior = 5.0;
  std::string ab_observed;
  std::size_t ab_n = 100;
  double ab_theta = 1.0;
  double ab_cmean = 20.0;
  double ab_cfrac = 0.1;
  std::string ab_out;
  std::string ab_grid;
  auto* ab = app.add_subcommand("abc", "Rejection ABC for N(theta,1) with a N(0,prior_std^2) prior");
  add_common(ab, ab_common);
  add_kernel(ab, ab_kernel, "gaussian", 1.0);
  ab->add_option("--distance", ab_distance, "kt, mmd, mmd2, mmdn, mmde, kbw, w1, mmd-half-sq")->capture_default_str();
  ab->add_option("--eps", ab_eps, "Acceptance tolerance, in units of the chosen distance")->capture_default_str();
  ab->add_option("--T", ab_T, "Number of prior draws")->capture_default_str();
  ab->add_option("--m", ab_m, "Synthetic sample size per draw")->capture_default_str();
  ab->add_option("--prior-std", ab_prior, "Prior standard deviation, in data units")->capture_default_str();
  ab->add_option("--observed", ab_observed, "CSV of 1-D observations (generated if omitted)");
  ab->add_option("--n", ab_n, "Size of generated observations")->capture_default_str();
  ab->add_option("--theta-star", ab_theta, "True location of generated observations and MSE target")
      ->capture_default_str();
  ab->add_option("--contamination-mean", ab_cmean, "Mean of the contaminating N(c,1)")->capture_default_str();
  ab->add_option("--contamination-frac", ab_cfrac, "Fraction of generated observations replaced")
      ->capture_default_str();
  ab->add_option("--out", ab_out, "Result JSON (stdout if omitted)");
  ab->add_option("--posterior-grid", ab_grid, "CSV receiving the ABC posterior density on [-10, 15]");

  // selftest
  Common st_common;
  auto* st = app.add_subcommand("selftest", "Analytic two-atom, spectral-route and inequality checks");
  add_common(st, st_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    const std::vector<Common*> commons{&dist_common, &sb_common, &sm_common, &ss_common, &mc_common,
                                       &rc_common,   &rt_common, &fl_common, &ab_common, &st_common};
    const std::vector<CLI::App*> subs{dist, sb, sm, ss, mc, rc, rt, fl, ab, st};
    Common* common = nullptr;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i] == sub) common = commons[i];
    }
    if (!common->config.empty()) {
      apply_config(sub, common->config);
    }
    err << fmt::format("# {} {}\n", sub->get_name(), resolved_config(sub).dump());

    if (sub == dist) {
      if (dist_x.empty() || dist_y.empty()) throw InvalidArgument("dist needs --x and --y");
      const Metric metric = metric_from_name(dist_metric);
      const KernelSpec spec = make_kernel(dist_kernel);
      const DiscreteMeasure mu = load_measure(dist_x);
      const DiscreteMeasure nu = load_measure(dist_y);
      if (metric == Metric::kKt && !spec.unit_diagonal()) {
        err << "warning: kernel does not have a unit diagonal; kt is no longer bounded by 2\n";
      }
      if (!dist_dump.empty()) {
        fs::create_directories(dist_dump);
        const SignedAtomList atoms = merge_difference(mu, nu);
        write_matrix_csv((fs::path(dist_dump) / "G.csv").string(), gram(spec, atoms.atoms));
        write_matrix_csv((fs::path(dist_dump) / "L.csv").string(), difference_operator_matrix(spec, atoms));
        write_matrix_csv((fs::path(dist_dump) / "eigenvalues.csv").string(),
                         signed_operator_spectrum(spec, atoms).eigenvalues);
      }
      out << format_scalar(evaluate_metric(metric, spec, mu, nu)) << '\n';
    } else if (sub == sb) {
      Rng rng(sb_common.seed);
      write_sweep(bandwidth_sweep(sb_n, sb_gap, log_grid(sb_min, sb_max, sb_count), parse_metrics(sb_metrics), rng),
                  sb_out, out);
    } else if (sub == sm) {
      if (!(sm_step > 0.0)) throw InvalidArgument("--theta-step must be positive");
      std::vector<double> grid;
      for (std::size_t i = 0; static_cast<double>(i) * sm_step <= sm_max + 1e-12; ++i) {
        grid.push_back(static_cast<double>(i) * sm_step);
      }
      Rng rng(sm_common.seed);
      write_sweep(mean_sweep(sm_n, grid, sm_sigma, parse_metrics(sm_metrics), rng), sm_out, out);
    } else if (sub == ss) {
      Rng rng(ss_common.seed);
      write_sweep(std_sweep(ss_n, ss_stds, ss_sigma, parse_metrics(ss_metrics), rng, ss_offset), ss_out, out);
    } else if (sub == mc) {
      Rng rng(mc_common.seed);
      const Vector shift = Eigen::Map<const Vector>(mc_shift.data(), static_cast<Eigen::Index>(mc_shift.size()));
      const Vector delta = Eigen::Map<const Vector>(mc_delta.data(), static_cast<Eigen::Index>(mc_delta.size()));
      const MixtureSplitRecord r = mixture_split_check(shift, delta, mc_sigma, mc_n, rng);
      const std::vector<std::string> header{"kt_pq", "kt_11", "kt_22", "mmd2_pq", "mmd2_11", "mmd2_22"};
      const std::vector<std::vector<double>> cols{{r.kt_pq}, {r.kt_11}, {r.kt_22},
                                                  {r.mmd2_pq}, {r.mmd2_11}, {r.mmd2_22}};
      if (mc_out.empty()) {
        out << fmt::format("{}\n", fmt::join(header, ","));
        out << fmt::format("{},{},{},{},{},{}\n", r.kt_pq, r.kt_11, r.kt_22, r.mmd2_pq, r.mmd2_11, r.mmd2_22);
      } else {
        ensure_parent(mc_out);
        write_table_csv(mc_out, header, cols);
      }
    } else if (sub == rc) {
      Rng rng(rc_common.seed);
      const auto d = static_cast<Eigen::Index>(rc_shift.size());
      const Vector shift = Eigen::Map<const Vector>(rc_shift.data(), d);
      Vector cont(d);
      if (rc_contamination.size() == 1) {
        cont.setConstant(rc_contamination.front());
      } else if (static_cast<Eigen::Index>(rc_contamination.size()) == d) {
        cont = Eigen::Map<const Vector>(rc_contamination.data(), d);
      } else {
        throw DimensionMismatch("--contamination needs one value or one per dimension");
      }
      const auto p = DiscreteMeasure::uniform(sample_gaussian(Vector::Zero(d), 1.0, rc_n, rng));
      const auto q = DiscreteMeasure::uniform(sample_gaussian(shift, 1.0, rc_n, rng));
      const auto rows = robustness_check(make_kernel(rc_kernel), p, q, cont, rc_eps, parse_metrics(rc_metrics));
      std::string text = "eps,metric,clean,contaminated,deviation,bound\n";
      for (const auto& row : rows) {
        text += fmt::format("{},{},{},{},{},{}\n", row.eps, metric_name(row.metric), row.clean, row.contaminated,
                            row.deviation, 2.0 * row.eps);
      }
      if (rc_out.empty()) {
        out << text;
      } else {
        ensure_parent(rc_out);
        std::ofstream f(rc_out);
        f << text;
      }
    } else if (sub == rt) {
      Rng rng(rt_common.seed);
      const Vector zero = Vector::Zero(1);
      const RateStudy study = rate_study(gaussian_sampler(zero, 1.0), rt_grid, rt_reps, rt_ref, make_kernel(rt_kernel),
                                         parse_metrics(rt_metrics), rng);
      std::string text = "n,metric,mean,std\n";
      for (const auto& row : study.rows) {
        text += fmt::format("{},{},{},{}\n", row.n, metric_name(row.metric), row.mean, row.std);
      }
      if (rt_out.empty()) {
        out << text;
      } else {
        ensure_parent(rt_out);
        std::ofstream f(rt_out);
        f << text;
      }
      json summary = json::object();
      for (const auto& [metric, slope] : study.slopes) summary["slopes"][metric_name(metric)] = slope;
      if (rt_summary.empty()) {
        err << summary.dump() << '\n';
      } else {
        ensure_parent(rt_summary);
        std::ofstream f(rt_summary);
        f << summary.dump(2) << '\n';
      }
    } else if (sub == fl) {
      Rng rng(fl_common.seed);
      PointMatrix init;
      PointMatrix target;
      if (fl_init.empty() || fl_target.empty()) {
        CloudPair clouds = unit_square_clouds(fl_n, rng);
        init = fl_init.empty() ? std::move(clouds.init) : read_points_csv(fl_init);
        target = fl_target.empty() ? std::move(clouds.target) : read_points_csv(fl_target);
      } else {
        init = read_points_csv(fl_init);
        target = read_points_csv(fl_target);
      }
      FlowConfig config;
      config.kernel = make_kernel(fl_kernel);
      config.loss = fl_loss == "kt" ? FlowLoss::kKt : FlowLoss::kMmdK2Squared;
      config.learning_rate = fl_lr;
      config.steps = fl_steps;
      config.record_every = fl_record;
      config.step_rule = fl_rule == "velocity" ? StepRule::kParticleVelocity : StepRule::kLossGradient;
      config.jitter_seed = fl_common.seed;
      const Trajectory traj = run_flow(config, init, DiscreteMeasure::uniform(target));
      fs::create_directories(fl_out);
      for (const auto& snap : traj.snapshots) {
        write_points_csv((fs::path(fl_out) / fmt::format("snapshot_{}.csv", snap.step)).string(), snap.particles);
      }
      write_points_csv((fs::path(fl_out) / "target.csv").string(), target);
      std::ofstream loss((fs::path(fl_out) / "loss.csv").string());
      loss << "step,loss\n";
      for (std::size_t t = 0; t < traj.losses.size(); ++t) loss << fmt::format("{},{}\n", t, traj.losses[t]);
      out << format_scalar(traj.losses.back()) << '\n';
    } else if (sub == ab) {
      AbcConfig config;
      config.prior_std = ab_prior;
      config.tolerance = ab_eps;
      config.iterations = ab_T;
      config.synthetic_size = ab_m;
      config.metric = metric_from_name(ab_distance);
      config.kernel = make_kernel(ab_kernel);
      config.theta_star = ab_theta;
      config.seed = ab_common.seed;
      config.threads = ab_common.threads;
      Vector observed;
      if (!ab_observed.empty()) {
        const PointMatrix pts = read_points_csv(ab_observed);
        if (pts.cols() != 1) throw InvalidArgument("observed data must be one-dimensional");
        observed = pts.col(0);
      } else {
        Rng obs_rng(ab_common.seed, kObservedStream);
        observed = generate_observed(ab_n, ab_theta, ab_cmean, ab_cfrac, obs_rng);
      }
      const AbcResult res = rejection_abc(config, observed);
      json j;
      j["accept_count"] = res.accept_count;
      j["mse"] = res.mse ? json(*res.mse) : json(nullptr);
      j["accepted"] = res.accepted;
      if (ab_out.empty()) {
        out << j.dump() << '\n';
      } else {
        ensure_parent(ab_out);
        std::ofstream f(ab_out);
        f << j.dump() << '\n';
      }
      if (!ab_grid.empty()) {
        if (res.accepted.empty()) throw InvalidArgument("no accepted parameters: posterior density is undefined (N/A)");
        std::vector<double> grid;
        for (int i = 0; i <= 2500; ++i) grid.push_back(-10.0 + 0.01 * i);
        ensure_parent(ab_grid);
        write_table_csv(ab_grid, {"theta", "density"}, {grid, posterior_density_grid(res.accepted, grid)});
      }
    } else if (sub == st) {
      bool ok = true;
      for (const auto& r : run_selftest(st_common.seed)) {
        out << fmt::format("[{}] {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
        ok = ok && r.passed;
      }
      return ok ? kExitOk : kExitNumerical;
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace ktd

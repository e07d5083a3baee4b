#include "sofsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "sofsim/analysis.hpp"
#include "sofsim/dynamics.hpp"
#include "sofsim/empirical.hpp"
#include "sofsim/errors.hpp"
#include "sofsim/parallel.hpp"
#include "sofsim/rng.hpp"
#include "sofsim/sofic.hpp"
#include "sofsim/spin.hpp"

namespace sofsim {

namespace {

using nlohmann::json;

constexpr int schema_version = 1;

json config_json(const ExperimentConfig& config) {
  return json{{"command", config.command},
              {"n", config.n},
              {"r", config.r},
              {"eps", config.eps},
              {"radius", config.radius},
              {"time", config.time_horizon},
              {"snapshots", config.snapshots},
              {"trials", config.trials},
              {"burn_in", config.burn_in},
              {"eta", config.eta},
              {"restarts", config.restarts},
              {"seed", config.seed},
              {"out", config.out},
              {"format", config.format},
              {"tv_gate", config.tv_gate},
              {"tv_window", config.tv_window},
              {"defect_factor", config.defect_factor}};
}

json make_record(const ExperimentConfig& config, const char* kind) {
  return json{{"record", kind},
              {"schema_version", schema_version},
              {"command", config.command},
              {"config", config_json(config)},
              {"seed", config.seed}};
}

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

void validate_common(const ExperimentConfig& config) {
  require(!config.n.empty(), "config: need at least one n");
  for (auto n : config.n) require(n >= 1, "config: n must be >= 1");
  require(config.r >= 1, "config: r must be >= 1");
  require(config.trials >= 1, "config: trials must be >= 1");
  require(config.format == "json" || config.format == "csv",
          "config: format must be json or csv");
  require(config.time_horizon >= 0.0, "config: time must be >= 0");
}

// A writer that buffers JSON records and also knows how to render the flat
// CSV projection of the trial rows for plotting.
class RecordSink {
 public:
  RecordSink(const ExperimentConfig& config, std::ostream& out,
             std::vector<std::string> csv_columns)
      : config_(config), out_(out), csv_columns_(std::move(csv_columns)) {
    if (csv()) {
      out_ << "# config " << config_json(config_).dump() << '\n';
      for (std::size_t i = 0; i < csv_columns_.size(); ++i) {
        out_ << csv_columns_[i] << (i + 1 == csv_columns_.size() ? '\n' : ',');
      }
    } else {
      out_ << make_record(config_, "header").dump() << '\n';
    }
  }

  bool csv() const { return config_.format == "csv"; }

  // Emits one trial-level record; `flat` maps CSV column -> value.
  void record(const json& body, const json& flat) {
    if (csv()) {
      for (std::size_t i = 0; i < csv_columns_.size(); ++i) {
        const auto& name = csv_columns_[i];
        if (flat.contains(name) && !flat[name].is_null()) {
          if (flat[name].is_string()) {
            out_ << flat[name].get<std::string>();
          } else {
            out_ << flat[name].dump();
          }
        }
        out_ << (i + 1 == csv_columns_.size() ? '\n' : ',');
      }
    } else {
      json line = make_record(config_, "trial");
      line.update(body);
      out_ << line.dump() << '\n';
    }
  }

  void summary(const json& body) {
    json line = make_record(config_, "summary");
    line.update(body);
    if (csv()) {
      out_ << "# summary " << line.dump() << '\n';
    } else {
      out_ << line.dump() << '\n';
    }
  }

 private:
  const ExperimentConfig& config_;
  std::ostream& out_;
  std::vector<std::string> csv_columns_;
};

double sample_stddev(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double mean_of(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  return values.empty() ? 0.0 : mean / static_cast<double>(values.size());
}

// True when the per-group values decrease strictly as n grows, whatever
// order the n list was given in.
bool decreasing_in_n(const std::vector<std::size_t>& sizes, const std::vector<double>& values) {
  std::vector<std::size_t> order(sizes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!(values[order[i]] < values[order[i - 1]])) return false;
  }
  return true;
}

}  // namespace

void run_delta(const ExperimentConfig& config, std::ostream& out) {
  validate_common(config);
  RecordSink sink(config, out,
                  {"n", "trial", "seed", "radius", "delta_r", "delta_estimate",
                   "argmin_radius"});

  json means_by_n = json::object();
  std::vector<double> means;
  for (std::size_t group = 0; group < config.n.size(); ++group) {
    const std::size_t n = config.n[group];
    std::vector<DefectReport> reports(config.trials);
    parallel_for_indexed(config.trials, [&](std::size_t trial) {
      const std::uint64_t trial_seed = config.seed + trial;
      const SoficMap sigma = SoficMap::uniform_random(n, config.r, trial_seed);
      reports[trial] = delta_estimate(sigma, config.radius);
    });

    std::vector<double> estimates;
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      const auto& report = reports[trial];
      const std::uint64_t trial_seed = config.seed + trial;
      if (sink.csv()) {
        for (std::uint32_t radius = 0; radius <= report.r_max; ++radius) {
          sink.record({}, json{{"n", n},
                               {"trial", trial},
                               {"seed", trial_seed},
                               {"radius", radius},
                               {"delta_r", report.delta_by_radius[radius]},
                               {"delta_estimate", report.delta_estimate},
                               {"argmin_radius", report.argmin_radius}});
        }
      } else {
        sink.record(json{{"n", n},
                         {"trial", trial},
                         {"trial_seed", trial_seed},
                         {"delta_by_radius", report.delta_by_radius},
                         {"delta_estimate", report.delta_estimate},
                         {"argmin_radius", report.argmin_radius},
                         {"r_max", report.r_max},
                         {"estimate_is_upper_bound", true}},
                    {});
      }
      estimates.push_back(report.delta_estimate);
    }
    const double mean = mean_of(estimates);
    means_by_n[std::to_string(n)] = mean;
    means.push_back(mean);
  }

  sink.summary(json{{"mean_delta_estimate_by_n", means_by_n},
                    {"strictly_decreasing_in_n",
                     config.n.size() > 1 ? json(decreasing_in_n(config.n, means)) : json()}});
}

namespace {

struct MetastabilityTrial {
  std::uint64_t trial_seed = 0;
  double burn_tv = 0.0;
  double burn_defect = 0.0;
  bool gated = false;
  std::vector<double> times;
  std::vector<double> tvs;
  std::vector<double> defects;
  double max_tv = 0.0;
  double max_defect = 0.0;
};

MetastabilityTrial metastability_trial(const ExperimentConfig& config, std::size_t trial,
                                       const PatternDistribution& reference,
                                       const CayleyBall& ball_tv,
                                       const CayleyBall& ball_defect,
                                       const Interaction& phi) {
  MetastabilityTrial result;
  result.trial_seed = config.seed + trial;
  const std::size_t n = config.n.front();
  const SoficMap sigma = SoficMap::uniform_random(n, config.r, derive_seed(result.trial_seed, 0));

  Rng burn_rng(derive_seed(result.trial_seed, 1));
  Microstate x = random_microstate(n, phi.alphabet_size(), burn_rng);
  advance_state(x, sigma, phi, 0.0, config.burn_in, burn_rng);

  result.burn_tv = tv_distance(empirical_marginal(x, sigma, ball_tv), reference);
  result.burn_defect = gibbs_defect(empirical_marginal(x, sigma, ball_defect), phi);
  result.gated = result.burn_tv <= config.tv_gate;

  Rng window_rng(derive_seed(result.trial_seed, 2));
  double t = 0.0;
  for (std::size_t k = 1; k <= config.snapshots; ++k) {
    const double target = config.time_horizon * static_cast<double>(k) /
                          static_cast<double>(config.snapshots);
    advance_state(x, sigma, phi, t, target, window_rng);
    t = target;
    const double tv = tv_distance(empirical_marginal(x, sigma, ball_tv), reference);
    const double defect = gibbs_defect(empirical_marginal(x, sigma, ball_defect), phi);
    result.times.push_back(target);
    result.tvs.push_back(tv);
    result.defects.push_back(defect);
    result.max_tv = std::max(result.max_tv, tv);
    result.max_defect = std::max(result.max_defect, defect);
  }
  return result;
}

}  // namespace

void run_metastability(const ExperimentConfig& config, std::ostream& out) {
  validate_common(config);
  require(config.n.size() == 1, "metastability: exactly one n expected");
  require(config.snapshots >= 1, "metastability: snapshots must be >= 1");
  require(config.burn_in > 0.0, "metastability: burn_in must be > 0");
  const Interaction phi = ising_from_epsilon(config.eps);
  const PatternDistribution reference =
      markov_tree_marginal(config.eps, config.r, config.radius);
  const CayleyBall ball_tv(config.r, config.radius);
  const CayleyBall ball_defect(config.r, config.radius + 1);

  std::vector<MetastabilityTrial> trials(config.trials);
  parallel_for_indexed(config.trials, [&](std::size_t trial) {
    trials[trial] =
        metastability_trial(config, trial, reference, ball_tv, ball_defect, phi);
  });

  RecordSink sink(config, out, {"trial", "seed", "gated", "t", "tv", "defect"});
  std::size_t gated = 0;
  std::size_t stable = 0;
  std::size_t within_window = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& trial = trials[i];
    const bool tv_ok = trial.max_tv <= config.tv_window;
    const bool defect_ok = trial.max_defect <= config.defect_factor * trial.burn_defect;
    within_window += tv_ok ? 1 : 0;
    if (trial.gated) {
      ++gated;
      if (tv_ok && defect_ok) ++stable;
    }
    if (sink.csv()) {
      sink.record({}, json{{"trial", i},
                           {"seed", trial.trial_seed},
                           {"gated", trial.gated},
                           {"t", 0.0},
                           {"tv", trial.burn_tv},
                           {"defect", trial.burn_defect}});
      for (std::size_t k = 0; k < trial.times.size(); ++k) {
        sink.record({}, json{{"trial", i},
                             {"seed", trial.trial_seed},
                             {"gated", trial.gated},
                             {"t", trial.times[k]},
                             {"tv", trial.tvs[k]},
                             {"defect", trial.defects[k]}});
      }
    } else {
      json snapshots = json::array();
      snapshots.push_back(json{{"t", 0.0}, {"tv", trial.burn_tv}, {"defect", trial.burn_defect}});
      for (std::size_t k = 0; k < trial.times.size(); ++k) {
        snapshots.push_back(json{
            {"t", trial.times[k]}, {"tv", trial.tvs[k]}, {"defect", trial.defects[k]}});
      }
      sink.record(json{{"trial", i},
                       {"trial_seed", trial.trial_seed},
                       {"burn_in_tv", trial.burn_tv},
                       {"burn_in_defect", trial.burn_defect},
                       {"gated", trial.gated},
                       {"burn_in_failed", !trial.gated},
                       {"snapshots", snapshots},
                       {"max_tv", trial.max_tv},
                       {"max_defect", trial.max_defect},
                       {"tv_within_window", tv_ok},
                       {"defect_within_factor", defect_ok}},
                  {});
    }
  }
  sink.summary(json{
      {"gated_trials", gated},
      {"stable_trials", stable},
      {"stable_fraction", gated > 0 ? json(static_cast<double>(stable) / gated) : json()},
      {"window_tv_fraction",
       static_cast<double>(within_window) / static_cast<double>(trials.size())},
      {"tv_gate", config.tv_gate},
      {"tv_window", config.tv_window},
      {"defect_factor", config.defect_factor}});
}

void run_drift(const ExperimentConfig& config, std::ostream& out) {
  validate_common(config);
  require(config.burn_in > 0.0, "drift: burn_in must be > 0");
  const Interaction phi = ising_from_epsilon(config.eps);
  const PatternDistribution reference =
      markov_tree_marginal(config.eps, config.r, config.radius);
  const CayleyBall ball(config.r, config.radius);

  RecordSink sink(config, out, {"n", "trial", "seed", "tv"});
  std::vector<double> means;
  json means_by_n = json::object();
  for (std::size_t group = 0; group < config.n.size(); ++group) {
    const std::size_t n = config.n[group];
    const std::uint64_t group_seed = derive_seed(config.seed, group);
    const SoficMap sigma = SoficMap::uniform_random(n, config.r, derive_seed(group_seed, 0));
    const Microstate x0 =
        burn_in_sample(sigma, phi, config.burn_in, derive_seed(group_seed, 1));
    const double tv_initial = tv_distance(empirical_marginal(x0, sigma, ball), reference);

    std::vector<double> tvs(config.trials);
    parallel_for_indexed(config.trials, [&](std::size_t trial) {
      Microstate x = x0;
      Rng rng(derive_seed(group_seed, 2 + trial));
      advance_state(x, sigma, phi, 0.0, config.time_horizon, rng);
      tvs[trial] = tv_distance(empirical_marginal(x, sigma, ball), reference);
    });

    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      sink.record(json{{"n", n},
                       {"trial", trial},
                       {"group_seed", group_seed},
                       {"tv_initial", tv_initial},
                       {"tv", tvs[trial]}},
                  json{{"n", n}, {"trial", trial}, {"seed", group_seed}, {"tv", tvs[trial]}});
    }
    const double mean = mean_of(tvs);
    means.push_back(mean);
    means_by_n[std::to_string(n)] = json{{"mean_tv", mean}, {"tv_initial", tv_initial}};
  }

  sink.summary(json{{"by_n", means_by_n},
                    {"mean_tv_strictly_decreasing_in_n",
                     config.n.size() > 1 ? json(decreasing_in_n(config.n, means)) : json()}});
}

namespace {

struct McutTrial {
  std::uint64_t trial_seed = 0;
  std::uint64_t cut = 0;
  double cut_norm = 0.0;
  bool has_brute = false;
  std::uint64_t brute = 0;
  bool has_good_model = false;
  double good_cut_norm = 0.0;
  std::size_t balance_flips = 0;
  bool bound_ok = false;
};

}  // namespace

void run_mcut(const ExperimentConfig& config, std::ostream& out) {
  validate_common(config);
  require(config.n.size() == 1, "mcut: exactly one n expected");
  const std::size_t n = config.n.front();
  const bool good_model = config.burn_in > 0.0;
  const Interaction phi = good_model ? ising_from_epsilon(config.eps)
                                     : Interaction(2, {0, 0, 0, 0}, {0, 0});
  constexpr double cut_slack = 0.05;

  std::vector<McutTrial> trials(config.trials);
  parallel_for_indexed(config.trials, [&](std::size_t trial) {
    McutTrial& result = trials[trial];
    result.trial_seed = config.seed + trial;
    const SoficMap sigma =
        SoficMap::uniform_random(n, config.r, derive_seed(result.trial_seed, 0));
    const auto search =
        local_search_mcut(sigma, config.restarts, derive_seed(result.trial_seed, 1));
    result.cut = search.cut;
    result.cut_norm =
        static_cast<double>(search.cut) / (static_cast<double>(n) * config.r);
    if (n <= 16) {
      result.has_brute = true;
      result.brute = brute_force_mcut(sigma);
    }
    if (good_model) {
      const Microstate x =
          burn_in_sample(sigma, phi, config.burn_in, derive_seed(result.trial_seed, 2));
      const auto balanced = bisect_from_microstate(x);
      const std::uint64_t cut = cut_size(sigma, balanced.bisection);
      result.has_good_model = true;
      result.good_cut_norm =
          static_cast<double>(cut) / (static_cast<double>(n) * config.r);
      result.balance_flips = balanced.flips;
      result.bound_ok = result.good_cut_norm <= config.eps + cut_slack;
    }
  });

  RecordSink sink(config, out,
                  {"trial", "seed", "n", "mcut", "mcut_norm", "brute_mcut",
                   "good_cut_norm", "bound_ok"});
  std::vector<double> norms;
  std::size_t brute_checked = 0;
  std::size_t brute_matched = 0;
  std::size_t bound_checked = 0;
  std::size_t bound_ok = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& trial = trials[i];
    norms.push_back(trial.cut_norm);
    if (trial.has_brute) {
      ++brute_checked;
      brute_matched += (trial.brute == trial.cut) ? 1 : 0;
    }
    if (trial.has_good_model) {
      ++bound_checked;
      bound_ok += trial.bound_ok ? 1 : 0;
    }
    json body{{"trial", i},
              {"trial_seed", trial.trial_seed},
              {"n", n},
              {"mcut", trial.cut},
              {"mcut_norm", trial.cut_norm}};
    json flat{{"trial", i},       {"seed", trial.trial_seed},
              {"n", n},           {"mcut", trial.cut},
              {"mcut_norm", trial.cut_norm}};
    if (trial.has_brute) {
      body["brute_mcut"] = trial.brute;
      body["matches_brute"] = trial.brute == trial.cut;
      flat["brute_mcut"] = trial.brute;
    }
    if (trial.has_good_model) {
      body["good_model_cut_norm"] = trial.good_cut_norm;
      body["balance_flips"] = trial.balance_flips;
      body["cut_bound"] = config.eps + cut_slack;
      body["bound_ok"] = trial.bound_ok;
      flat["good_cut_norm"] = trial.good_cut_norm;
      flat["bound_ok"] = trial.bound_ok;
    }
    sink.record(body, flat);
  }
  json summary{{"stddev_mcut_norm", sample_stddev(norms)},
               {"mean_mcut_norm", mean_of(norms)}};
  if (brute_checked > 0) {
    summary["brute_checked"] = brute_checked;
    summary["brute_matched"] = brute_matched;
  }
  if (bound_checked > 0) {
    summary["good_model_trials"] = bound_checked;
    summary["good_model_bound_ok"] = bound_ok;
    summary["good_model_bound_fraction"] =
        static_cast<double>(bound_ok) / static_cast<double>(bound_checked);
  }
  sink.summary(summary);
}

void run_finv(const ExperimentConfig& config, std::ostream& out) {
  validate_common(config);
  RecordSink sink(config, out,
                  {"kind", "r", "eps", "f", "eps_f", "eps_f_asymptote", "eps_c_asymptote"});

  for (int i = 1; i <= 25; ++i) {
    const double eps = 0.02 * i;
    const double value = f_ising(std::min(eps, 0.5), config.r);
    sink.record(json{{"kind", "fgrid"}, {"r", config.r}, {"eps", eps}, {"f", value}},
                json{{"kind", "fgrid"}, {"r", config.r}, {"eps", eps}, {"f", value}});
  }

  json thresholds = json::array();
  for (std::uint32_t rank : {2u, 5u, 10u, 20u, 50u, 100u, 200u}) {
    const ThresholdReport report = threshold_report(rank);
    const json body{{"kind", "threshold"},
                    {"r", rank},
                    {"eps_f", report.eps_f},
                    {"eps_f_asymptote", report.eps_f_asymptote},
                    {"eps_c_asymptote", report.eps_c_asymptote},
                    {"p_star", report.p_star},
                    {"eps_f_below_eps_c_asymptote", report.eps_f < report.eps_c_asymptote}};
    sink.record(body, body);
    thresholds.push_back(body);
  }

  const ThresholdReport main_report = threshold_report(config.r);
  sink.summary(json{{"r", config.r},
                    {"eps_f", main_report.eps_f},
                    {"eps_f_asymptote", main_report.eps_f_asymptote},
                    {"eps_c_asymptote", main_report.eps_c_asymptote},
                    {"p_star", main_report.p_star},
                    {"sqrt_log2", std::sqrt(std::log(2.0))},
                    {"sqrt_log2_exceeds_p_star",
                     std::sqrt(std::log(2.0)) > sk_ground_state_density}});
}

void run_experiment(const ExperimentConfig& config, std::ostream& out) {
  if (config.command == "delta") {
    run_delta(config, out);
  } else if (config.command == "metastability") {
    run_metastability(config, out);
  } else if (config.command == "drift") {
    run_drift(config, out);
  } else if (config.command == "mcut") {
    run_mcut(config, out);
  } else if (config.command == "finv") {
    run_finv(config, out);
  } else {
    throw std::invalid_argument("unknown command: " + config.command);
  }
}

std::string run_experiment_to_string(const ExperimentConfig& config) {
  std::ostringstream out;
  run_experiment(config, out);
  return out.str();
}

namespace {

void apply_config_file(const std::string& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json values = json::parse(in, nullptr, true, true);
  if (values.contains("n")) {
    config.n.clear();
    if (values["n"].is_array()) {
      for (const auto& v : values["n"]) config.n.push_back(v.get<std::size_t>());
    } else {
      config.n.push_back(values["n"].get<std::size_t>());
    }
  }
  if (values.contains("r")) config.r = values["r"].get<std::uint32_t>();
  if (values.contains("eps")) config.eps = values["eps"].get<double>();
  if (values.contains("radius")) config.radius = values["radius"].get<std::uint32_t>();
  if (values.contains("time")) config.time_horizon = values["time"].get<double>();
  if (values.contains("snapshots")) config.snapshots = values["snapshots"].get<std::size_t>();
  if (values.contains("trials")) config.trials = values["trials"].get<std::size_t>();
  if (values.contains("burn_in")) config.burn_in = values["burn_in"].get<double>();
  if (values.contains("eta")) config.eta = values["eta"].get<double>();
  if (values.contains("restarts")) config.restarts = values["restarts"].get<std::size_t>();
  if (values.contains("seed")) config.seed = values["seed"].get<std::uint64_t>();
  if (values.contains("out")) config.out = values["out"].get<std::string>();
  if (values.contains("format")) config.format = values["format"].get<std::string>();
  if (values.contains("tv_gate")) config.tv_gate = values["tv_gate"].get<double>();
  if (values.contains("tv_window")) config.tv_window = values["tv_window"].get<double>();
  if (values.contains("defect_factor")) {
    config.defect_factor = values["defect_factor"].get<double>();
  }
}

void add_common_options(CLI::App* sub, ExperimentConfig& config, std::string& config_path) {
  sub->add_option("--config", config_path, "JSON config file mirroring the flags");
  sub->add_option("--n", config.n, "vertex count(s)");
  sub->add_option("--r", config.r, "free group rank");
  sub->add_option("--eps", config.eps, "Ising transition probability in (0, 1/2]");
  sub->add_option("--radius", config.radius, "pattern radius R");
  sub->add_option("--time", config.time_horizon, "time horizon");
  sub->add_option("--snapshots", config.snapshots, "snapshots across the window");
  sub->add_option("--trials", config.trials, "number of trials");
  sub->add_option("--burn-in", config.burn_in, "burn-in time");
  sub->add_option("--eta", config.eta, "TV tolerance for good-model sets");
  sub->add_option("--restarts", config.restarts, "local search restarts");
  sub->add_option("--seed", config.seed, "base RNG seed");
  sub->add_option("--out", config.out, "output path (default stdout)");
  sub->add_option("--format", config.format, "json or csv");
  sub->add_option("--tv-gate", config.tv_gate, "burn-in TV gate");
  sub->add_option("--tv-window", config.tv_window, "window TV threshold");
  sub->add_option("--defect-factor", config.defect_factor,
                  "allowed Gibbs-defect growth over the window");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Glauber dynamics and good-model experiments on sofic approximations "
               "of free groups"};
  app.require_subcommand(1);

  struct SubcommandSpec {
    const char* name;
    const char* help;
    std::uint32_t default_radius;
  };
  const SubcommandSpec specs[] = {
      {"delta", "defect profiles of uniformly random homomorphisms", 6},
      {"metastability", "good-model stability across a time window", 2},
      {"drift", "TV drift at a fixed time across vertex counts", 2},
      {"mcut", "local-search min bisection and good-model cuts", 2},
      {"finv", "f-invariant grid and thresholds", 2},
  };

  std::vector<ExperimentConfig> configs(std::size(specs));
  std::vector<std::string> config_paths(std::size(specs));
  for (std::size_t i = 0; i < std::size(specs); ++i) {
    configs[i].command = specs[i].name;
    configs[i].radius = specs[i].default_radius;
    CLI::App* sub = app.add_subcommand(specs[i].name, specs[i].help);
    add_common_options(sub, configs[i], config_paths[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (std::size_t i = 0; i < std::size(specs); ++i) {
      CLI::App* sub = app.get_subcommand(specs[i].name);
      if (!sub->parsed()) continue;
      ExperimentConfig& config = configs[i];
      if (!config_paths[i].empty()) {
        // File values override defaults; explicit flags override the file.
        ExperimentConfig from_file = config;
        apply_config_file(config_paths[i], from_file);
        ExperimentConfig merged = from_file;
        if (sub->count("--n") > 0) merged.n = config.n;
        if (sub->count("--r") > 0) merged.r = config.r;
        if (sub->count("--eps") > 0) merged.eps = config.eps;
        if (sub->count("--radius") > 0) merged.radius = config.radius;
        if (sub->count("--time") > 0) merged.time_horizon = config.time_horizon;
        if (sub->count("--snapshots") > 0) merged.snapshots = config.snapshots;
        if (sub->count("--trials") > 0) merged.trials = config.trials;
        if (sub->count("--burn-in") > 0) merged.burn_in = config.burn_in;
        if (sub->count("--eta") > 0) merged.eta = config.eta;
        if (sub->count("--restarts") > 0) merged.restarts = config.restarts;
        if (sub->count("--seed") > 0) merged.seed = config.seed;
        if (sub->count("--out") > 0) merged.out = config.out;
        if (sub->count("--format") > 0) merged.format = config.format;
        if (sub->count("--tv-gate") > 0) merged.tv_gate = config.tv_gate;
        if (sub->count("--tv-window") > 0) merged.tv_window = config.tv_window;
        if (sub->count("--defect-factor") > 0) merged.defect_factor = config.defect_factor;
        config = merged;
      }
      if (config.out.empty()) {
        run_experiment(config, std::cout);
      } else {
        std::ofstream out(config.out);
        if (!out) throw std::invalid_argument("cannot open output file: " + config.out);
        run_experiment(config, out);
      }
    }
  } catch (const resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sofsim

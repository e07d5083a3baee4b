#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sofsim {

// Shared configuration for the experiment drivers. Every emitted record
// carries a copy plus the trial seed, so outputs are self-describing.
struct ExperimentConfig {
  std::string command;
  std::vector<std::size_t> n = {1000};
  std::uint32_t r = 2;
  double eps = 0.45;
  std::uint32_t radius = 2;
  double time_horizon = 1.0;
  std::size_t snapshots = 10;
  std::size_t trials = 20;
  double burn_in = 50.0;
  double eta = 0.1;
  std::size_t restarts = 20;
  std::uint64_t seed = 1;
  std::string out;             // empty writes to stdout
  std::string format = "json"; // "json" (JSON Lines) or "csv"

  // Metastability acceptance thresholds (config defaults, pilot-calibrated).
  double tv_gate = 0.05;
  double tv_window = 0.10;
  double defect_factor = 2.0;
};

// Per-seed defect reports for uniformly random homomorphisms.
void run_delta(const ExperimentConfig& config, std::ostream& out);

// Burn-in to a good model, then track TV to the Markov marginal and the
// one-site Gibbs defect across a time window.
void run_metastability(const ExperimentConfig& config, std::ostream& out);

// Mean TV to the Markov marginal at a fixed time, across the configured
// vertex counts; the summary flags whether the mean shrinks with n.
void run_drift(const ExperimentConfig& config, std::ostream& out);

// Local-search min bisection per seed, with brute-force comparison at small
// n and an optional Ising good-model cut (enabled when burn_in > 0).
void run_mcut(const ExperimentConfig& config, std::ostream& out);

// f-invariant grid, thresholds, and asymptote comparisons.
void run_finv(const ExperimentConfig& config, std::ostream& out);

// Dispatches on config.command.
void run_experiment(const ExperimentConfig& config, std::ostream& out);
std::string run_experiment_to_string(const ExperimentConfig& config);

// Full command-line entry point (argument parsing, config file, output
// file, exit codes: 0 success, 1 invalid config, 2 resource limit).
int cli_main(int argc, const char* const* argv);

}  // namespace sofsim

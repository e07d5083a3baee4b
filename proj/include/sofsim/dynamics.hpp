#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sofsim/rng.hpp"
#include "sofsim/spin.hpp"

namespace sofsim {

struct DynamicsEvent {
  double time = 0.0;
  std::uint32_t vertex = 0;
  std::uint8_t symbol = 0;
};

struct TrajectorySnapshot {
  double time = 0.0;
  Microstate state;
};

// One realization of the Glauber process: the update events on [0, t] and
// the state at each requested snapshot time. Replaying the events from the
// initial state reproduces every snapshot.
struct Trajectory {
  Microstate initial;
  std::vector<DynamicsEvent> events;
  std::vector<TrajectorySnapshot> snapshots;
  std::uint64_t total_events = 0;
};

// Runs the heat-bath dynamics: a global Poisson clock of rate n, each event
// choosing a uniform vertex and resampling its symbol from c_v (no-change
// outcomes included, so the event count on [0,t] is Poisson(t*n)).
// Deterministic given the seed.
Trajectory simulate(const Microstate& x0, const SoficMap& sigma, const Interaction& phi,
                    double horizon, std::vector<double> snapshot_times, std::uint64_t seed);

// Advances a state in place from time t0 to t1, returning the event count.
// This is the simulation core; `simulate` and `burn_in_sample` wrap it.
std::uint64_t advance_state(Microstate& x, const SoficMap& sigma, const Interaction& phi,
                            double t0, double t1, Rng& rng);

Microstate random_microstate(std::size_t n, std::size_t q, Rng& rng);

// Uniform random initial state evolved for t_burn; returns the final state.
Microstate burn_in_sample(const SoficMap& sigma, const Interaction& phi, double t_burn,
                          std::uint64_t seed);

// Action of the generator on a state: (zeta Omega)(y) = inflow - outflow,
// as a signed vector over all q^n microstates. Requires q^n within cap.
std::vector<double> generator_apply(const StateTable& zeta, const SoficMap& sigma,
                                    const Interaction& phi,
                                    std::size_t state_cap = std::size_t{1} << 16);

// l1 norm of zeta Omega; zero exactly at stationary states.
double stationarity_residual(const StateTable& zeta, const SoficMap& sigma,
                             const Interaction& phi,
                             std::size_t state_cap = std::size_t{1} << 16);

// JSON Lines: a header record with seed, n, r, eps, then one record
// {"t": ..., "spins": [...]} per snapshot.
void export_trajectory_jsonl(std::ostream& out, const Trajectory& trajectory,
                             const SoficMap& sigma, std::uint64_t seed, double epsilon);

}  // namespace sofsim

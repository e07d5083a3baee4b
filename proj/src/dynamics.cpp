#include "sofsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "sofsim/errors.hpp"

namespace sofsim {

namespace {

// Shared event loop. on_event is called after each applied update.
template <typename OnEvent>
std::uint64_t run_events(Microstate& x, const SoficMap& sigma, const Interaction& phi,
                         double t0, double t1, Rng& rng, OnEvent&& on_event) {
  const std::size_t n = sigma.vertex_count();
  const std::size_t q = phi.alphabet_size();
  std::vector<double> rates(q);
  std::uint64_t count = 0;
  double t = t0;
  for (;;) {
    t += rng.next_exponential(static_cast<double>(n));
    if (t > t1) break;
    const auto v = static_cast<std::uint32_t>(rng.next_below(n));
    glauber_rates(phi, sigma, x, v, rates);
    const auto symbol = static_cast<std::uint8_t>(rng.sample_discrete(rates));
    x[v] = symbol;
    ++count;
    on_event(t, v, symbol);
  }
  return count;
}

}  // namespace

std::uint64_t advance_state(Microstate& x, const SoficMap& sigma, const Interaction& phi,
                            double t0, double t1, Rng& rng) {
  if (x.size() != sigma.vertex_count()) {
    throw std::invalid_argument("advance_state: state does not match vertex count");
  }
  return run_events(x, sigma, phi, t0, t1, rng, [](double, std::uint32_t, std::uint8_t) {});
}

Trajectory simulate(const Microstate& x0, const SoficMap& sigma, const Interaction& phi,
                    double horizon, std::vector<double> snapshot_times, std::uint64_t seed) {
  if (x0.size() != sigma.vertex_count()) {
    throw std::invalid_argument("simulate: initial state does not match vertex count");
  }
  if (horizon < 0.0) throw std::invalid_argument("simulate: horizon must be >= 0");
  std::sort(snapshot_times.begin(), snapshot_times.end());
  if (!snapshot_times.empty() &&
      (snapshot_times.front() < 0.0 || snapshot_times.back() > horizon)) {
    throw std::invalid_argument("simulate: snapshot times must lie in [0, horizon]");
  }

  Trajectory trajectory;
  trajectory.initial = x0;
  Microstate x = x0;
  Rng rng(seed);
  std::size_t next_snapshot = 0;

  auto capture_until = [&](double time) {
    while (next_snapshot < snapshot_times.size() && snapshot_times[next_snapshot] < time) {
      trajectory.snapshots.push_back({snapshot_times[next_snapshot], x});
      ++next_snapshot;
    }
  };

  // Snapshots at time s report the state just before any event at time > s;
  // capture before applying each event, using the pre-event state.
  const std::size_t n = sigma.vertex_count();
  const std::size_t q = phi.alphabet_size();
  std::vector<double> rates(q);
  double t = 0.0;
  for (;;) {
    const double dt = rng.next_exponential(static_cast<double>(n));
    if (t + dt > horizon) break;
    t += dt;
    capture_until(t);
    const auto v = static_cast<std::uint32_t>(rng.next_below(n));
    glauber_rates(phi, sigma, x, v, rates);
    const auto symbol = static_cast<std::uint8_t>(rng.sample_discrete(rates));
    x[v] = symbol;
    trajectory.events.push_back({t, v, symbol});
  }
  capture_until(horizon + 1.0);
  trajectory.total_events = trajectory.events.size();
  return trajectory;
}

Microstate random_microstate(std::size_t n, std::size_t q, Rng& rng) {
  Microstate x(n);
  for (auto& symbol : x) symbol = static_cast<std::uint8_t>(rng.next_below(q));
  return x;
}

Microstate burn_in_sample(const SoficMap& sigma, const Interaction& phi, double t_burn,
                          std::uint64_t seed) {
  if (!(t_burn > 0.0)) throw std::invalid_argument("burn_in_sample: time must be > 0");
  Rng rng(seed);
  Microstate x = random_microstate(sigma.vertex_count(), phi.alphabet_size(), rng);
  advance_state(x, sigma, phi, 0.0, t_burn, rng);
  return x;
}

std::vector<double> generator_apply(const StateTable& zeta, const SoficMap& sigma,
                                    const Interaction& phi, std::size_t state_cap) {
  if (zeta.n != sigma.vertex_count() || zeta.q != phi.alphabet_size()) {
    throw std::invalid_argument("generator_apply: state table does not match system");
  }
  if (zeta.size() > state_cap) {
    throw resource_limit_error("generator_apply: q^n exceeds state cap");
  }
  double mass = 0.0;
  for (double p : zeta.probabilities) {
    if (p < 0.0) throw std::invalid_argument("generator_apply: negative probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-12) {
    throw std::invalid_argument("generator_apply: probabilities must sum to 1");
  }
  const std::size_t n = zeta.n;
  const std::size_t q = zeta.q;
  std::vector<double> out(zeta.size(), 0.0);
  Microstate x;
  std::vector<double> rates(q);
  std::size_t power = 1;
  std::vector<std::size_t> vertex_stride(n);
  for (std::size_t v = 0; v < n; ++v) {
    vertex_stride[v] = power;
    power *= q;
  }
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    const double mass = zeta.probabilities[k];
    if (mass == 0.0) continue;
    zeta.decode(k, x);
    for (std::uint32_t v = 0; v < n; ++v) {
      glauber_rates(phi, sigma, x, v, rates);
      const std::size_t base = k - x[v] * vertex_stride[v];
      for (std::size_t a = 0; a < q; ++a) {
        out[base + a * vertex_stride[v]] += mass * rates[a];
      }
      out[k] -= mass;  // sum_a c_v(x,a) = 1
    }
  }
  return out;
}

double stationarity_residual(const StateTable& zeta, const SoficMap& sigma,
                             const Interaction& phi, std::size_t state_cap) {
  double norm = 0.0;
  for (double value : generator_apply(zeta, sigma, phi, state_cap)) {
    norm += std::abs(value);
  }
  return norm;
}

void export_trajectory_jsonl(std::ostream& out, const Trajectory& trajectory,
                             const SoficMap& sigma, std::uint64_t seed, double epsilon) {
  nlohmann::json header = {{"record", "header"},
                           {"seed", seed},
                           {"n", sigma.vertex_count()},
                           {"r", sigma.rank()},
                           {"eps", epsilon},
                           {"total_events", trajectory.total_events}};
  out << header.dump() << '\n';
  for (const auto& snapshot : trajectory.snapshots) {
    nlohmann::json record = {{"t", snapshot.time}, {"spins", snapshot.state}};
    out << record.dump() << '\n';
  }
}

}  // namespace sofsim

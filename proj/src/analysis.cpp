#include "sofsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sofsim/errors.hpp"
#include "sofsim/rng.hpp"

namespace sofsim {

void validate_bisection(const Bisection& b, std::size_t n) {
  if (b.side.size() != n) throw std::invalid_argument("bisection: wrong length");
  std::size_t ones = 0;
  for (auto s : b.side) {
    if (s > 1) throw std::invalid_argument("bisection: sides must be 0 or 1");
    ones += s;
  }
  const std::size_t zeros = n - ones;
  const std::size_t diff = ones > zeros ? ones - zeros : zeros - ones;
  if (diff > 1) throw std::invalid_argument("bisection: sides must be balanced");
}

double binary_entropy(double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("binary_entropy: argument must lie in (0, 1)");
  }
  return -(epsilon * std::log(epsilon) + (1.0 - epsilon) * std::log(1.0 - epsilon));
}

double f_ising(double epsilon, std::uint32_t rank) {
  if (rank < 1) throw std::invalid_argument("f_ising: rank must be >= 1");
  if (!(epsilon > 0.0) || epsilon > 0.5) {
    throw std::invalid_argument("f_ising: epsilon must lie in (0, 1/2]");
  }
  return std::log(2.0) + rank * (binary_entropy(epsilon) - std::log(2.0));
}

double eps_f(std::uint32_t rank) {
  if (rank < 2) {
    throw std::domain_error("eps_f: no root in (0, 1/2) for rank < 2");
  }
  // H is strictly increasing on (0, 1/2), so f has a unique sign change.
  double lo = 1e-15;
  double hi = 0.5;
  for (int iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f_ising(mid, rank) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double eps_f_asymptote(std::uint32_t rank) {
  return 0.5 - std::sqrt(std::log(2.0) / (2.0 * rank));
}

double eps_c_asymptotic(std::uint32_t rank) {
  if (rank < 1) throw std::invalid_argument("eps_c_asymptotic: rank must be >= 1");
  return 0.5 - sk_ground_state_density / std::sqrt(2.0 * rank);
}

ThresholdReport threshold_report(std::uint32_t rank) {
  ThresholdReport report;
  report.rank = rank;
  report.eps_f = eps_f(rank);
  report.eps_f_asymptote = eps_f_asymptote(rank);
  report.eps_c_asymptote = eps_c_asymptotic(rank);
  return report;
}

PatternDistribution joining_marginal(JoiningKind kind, double epsilon, std::uint32_t rank,
                                     std::uint32_t radius, std::size_t pattern_cap) {
  const PatternDistribution base = markov_tree_marginal(epsilon, rank, radius);
  PatternDistribution out(rank, radius);
  if (kind == JoiningKind::diagonal) {
    for (const auto& [labels, weight] : base.weights()) {
      std::string paired = labels;
      for (char& symbol : paired) symbol = static_cast<char>(3 * symbol);
      out.add(paired, weight);
    }
    return out;
  }
  const std::size_t support = base.weights().size();
  if (support > 0 && support * support > pattern_cap) {
    throw resource_limit_error("joining_marginal: product support exceeds cap");
  }
  std::string paired;
  for (const auto& [labels_a, weight_a] : base.weights()) {
    for (const auto& [labels_b, weight_b] : base.weights()) {
      paired.resize(labels_a.size());
      for (std::size_t j = 0; j < labels_a.size(); ++j) {
        paired[j] = static_cast<char>(2 * labels_a[j] + labels_b[j]);
      }
      out.add(paired, weight_a * weight_b);
    }
  }
  return out;
}

std::uint64_t enumerate_good_models(const SoficMap& sigma, const PatternDistribution& target,
                                    double eta, std::size_t q, std::size_t state_cap) {
  const std::size_t n = sigma.vertex_count();
  const double states = std::pow(static_cast<double>(q), static_cast<double>(n));
  if (states > static_cast<double>(state_cap)) {
    throw resource_limit_error("enumerate_good_models: q^n exceeds state cap");
  }
  const auto count = static_cast<std::uint64_t>(states + 0.5);
  const CayleyBall ball(sigma.rank(), target.radius());

  std::uint64_t good = 0;
  Microstate x(n, 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t index = k;
    for (std::size_t v = 0; v < n; ++v) {
      x[v] = static_cast<std::uint8_t>(index % q);
      index /= q;
    }
    if (tv_distance(empirical_marginal(x, sigma, ball), target) < eta) ++good;
  }
  return good;
}

std::uint64_t cut_size(const SoficMap& sigma, const Bisection& b) {
  validate_bisection(b, sigma.vertex_count());
  std::uint64_t crossing = 0;
  for (std::size_t v = 0; v < sigma.vertex_count(); ++v) {
    for (std::uint32_t i = 0; i < sigma.rank(); ++i) {
      crossing += (b.side[v] != b.side[sigma.forward(i)[v]]) ? 1 : 0;
    }
  }
  return crossing;
}

namespace {

// Generator edges as vertex pairs, self-loops dropped (they never cross).
std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list(const SoficMap& sigma) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(sigma.vertex_count() * sigma.rank());
  for (std::uint32_t v = 0; v < sigma.vertex_count(); ++v) {
    for (std::uint32_t i = 0; i < sigma.rank(); ++i) {
      const std::uint32_t w = sigma.forward(i)[v];
      if (w != v) edges.emplace_back(v, w);
    }
  }
  return edges;
}

}  // namespace

std::uint64_t brute_force_mcut(const SoficMap& sigma, std::size_t vertex_cap) {
  const std::size_t n = sigma.vertex_count();
  if (n > vertex_cap || n >= 63) {
    throw resource_limit_error("brute_force_mcut: vertex count exceeds cap");
  }
  const auto edges = edge_list(sigma);
  const std::size_t half = n / 2;
  if (half == 0) return 0;  // n = 1: the empty side is the convention-free case

  // Enumerate one representative per unordered bisection: subsets of size
  // floor(n/2); for even n fix vertex 0 outside the subset.
  std::uint64_t best = UINT64_MAX;
  std::uint64_t mask = (std::uint64_t{1} << half) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (mask < limit) {
    if (!(n % 2 == 0 && (mask & 1u))) {
      std::uint64_t crossing = 0;
      for (const auto& [v, w] : edges) {
        crossing += (((mask >> v) ^ (mask >> w)) & 1u);
      }
      best = std::min(best, crossing);
    }
    // Gosper's hack: next subset of the same size.
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return best;
}

namespace {

struct SwapSearch {
  const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& adjacency;
  std::vector<std::uint8_t>& side;
  std::vector<std::int64_t> move_gain;  // cut reduction if the vertex alone switched sides

  void rebuild_gains() {
    for (std::size_t v = 0; v < side.size(); ++v) recompute(v);
  }

  void recompute(std::size_t v) {
    std::int64_t external = 0;
    std::int64_t internal = 0;
    for (const auto& [w, multiplicity] : adjacency[v]) {
      (side[v] != side[w] ? external : internal) += multiplicity;
    }
    move_gain[v] = external - internal;
  }

  std::int64_t pair_multiplicity(std::uint32_t u, std::uint32_t w) const {
    for (const auto& [z, multiplicity] : adjacency[u]) {
      if (z == w) return multiplicity;
    }
    return 0;
  }
};

}  // namespace

LocalSearchResult local_search_mcut(const SoficMap& sigma, std::size_t restarts,
                                    std::uint64_t seed) {
  const std::size_t n = sigma.vertex_count();
  // Undirected adjacency with edge multiplicities, self-loops dropped.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adjacency(n);
  for (const auto& [v, w] : edge_list(sigma)) {
    for (auto [a, b] : {std::pair{v, w}, std::pair{w, v}}) {
      bool found = false;
      for (auto& [z, multiplicity] : adjacency[a]) {
        if (z == b) {
          ++multiplicity;
          found = true;
          break;
        }
      }
      if (!found) adjacency[a].emplace_back(b, 1);
    }
  }

  LocalSearchResult best;
  best.cut = UINT64_MAX;
  std::vector<std::uint32_t> order(n);
  std::vector<std::uint8_t> side(n);
  std::vector<std::uint32_t> side_vertices[2];
  SwapSearch search{adjacency, side, std::vector<std::int64_t>(n)};

  for (std::size_t restart = 0; restart < std::max<std::size_t>(restarts, 1); ++restart) {
    Rng rng(derive_seed(seed, restart));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t v = n; v > 1; --v) {
      std::swap(order[v - 1], order[rng.next_below(v)]);
    }
    for (std::size_t k = 0; k < n; ++k) side[order[k]] = (k < n / 2) ? 0 : 1;

    std::uint64_t cut = 0;
    for (std::size_t v = 0; v < n; ++v) {
      for (std::uint32_t i = 0; i < sigma.rank(); ++i) {
        const std::uint32_t w = sigma.forward(i)[v];
        cut += (w != v && side[v] != side[w]) ? 1 : 0;
      }
    }
    search.rebuild_gains();

    for (;;) {
      // Sort both sides by single-move gain; since a swap gains at most
      // move_gain[u] + move_gain[w], scanning in decreasing order allows
      // early cutoff once no pair can beat the current best.
      for (auto& bucket : side_vertices) bucket.clear();
      for (std::uint32_t v = 0; v < n; ++v) side_vertices[side[v]].push_back(v);
      for (auto& bucket : side_vertices) {
        std::sort(bucket.begin(), bucket.end(), [&](std::uint32_t a, std::uint32_t b) {
          return search.move_gain[a] != search.move_gain[b]
                     ? search.move_gain[a] > search.move_gain[b]
                     : a < b;
        });
      }

      std::int64_t best_gain = 0;
      std::uint32_t best_u = 0;
      std::uint32_t best_w = 0;
      for (std::uint32_t u : side_vertices[0]) {
        if (side_vertices[1].empty() ||
            search.move_gain[u] + search.move_gain[side_vertices[1].front()] <= best_gain) {
          break;
        }
        for (std::uint32_t w : side_vertices[1]) {
          if (search.move_gain[u] + search.move_gain[w] <= best_gain) break;
          const std::int64_t gain =
              search.move_gain[u] + search.move_gain[w] - 2 * search.pair_multiplicity(u, w);
          if (gain > best_gain) {
            best_gain = gain;
            best_u = u;
            best_w = w;
          }
        }
      }
      if (best_gain <= 0) break;  // ties never move

      side[best_u] = 1;
      side[best_w] = 0;
      cut -= static_cast<std::uint64_t>(best_gain);
      search.recompute(best_u);
      search.recompute(best_w);
      for (const auto& entry : adjacency[best_u]) search.recompute(entry.first);
      for (const auto& entry : adjacency[best_w]) search.recompute(entry.first);
    }

    if (cut < best.cut) {
      best.cut = cut;
      best.bisection.side = side;
    }
  }
  return best;
}

BalanceResult bisect_from_microstate(const Microstate& x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("bisect_from_microstate: empty microstate");
  for (auto symbol : x) {
    if (symbol > 1) throw std::invalid_argument("bisect_from_microstate: symbols must be binary");
  }
  std::size_t ones = 0;
  for (auto symbol : x) ones += symbol;
  const std::size_t lo = n / 2;
  const std::size_t hi = (n + 1) / 2;

  BalanceResult result;
  result.bisection.side.assign(x.begin(), x.end());
  auto flip = [&](std::uint8_t from, std::size_t count) {
    for (std::size_t v = 0; v < n && count > 0; ++v) {
      if (result.bisection.side[v] == from) {
        result.bisection.side[v] = static_cast<std::uint8_t>(1 - from);
        ++result.flips;
        --count;
      }
    }
  };
  if (ones > hi) {
    flip(1, ones - hi);
  } else if (ones < lo) {
    flip(0, lo - ones);
  }
  return result;
}

std::uint64_t switching_effect_max(const SoficMap& sigma, std::size_t trials,
                                   std::uint64_t seed, std::size_t vertex_cap) {
  if (sigma.vertex_count() < 2) {
    throw std::invalid_argument("switching_effect_max: need at least two vertices");
  }
  const std::uint64_t base = brute_force_mcut(sigma, vertex_cap);
  Rng rng(seed);
  std::uint64_t max_change = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto generator = static_cast<std::uint32_t>(rng.next_below(sigma.rank()));
    const auto j = static_cast<std::uint32_t>(rng.next_below(sigma.vertex_count()));
    auto k = static_cast<std::uint32_t>(rng.next_below(sigma.vertex_count() - 1));
    if (k >= j) ++k;
    const std::uint64_t switched = brute_force_mcut(sigma.switching(generator, j, k), vertex_cap);
    const std::uint64_t change = switched > base ? switched - base : base - switched;
    max_change = std::max(max_change, change);
  }
  return max_change;
}

}  // namespace sofsim

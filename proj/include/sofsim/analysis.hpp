#pragma once

#include <cstdint>
#include <vector>

#include "sofsim/empirical.hpp"
#include "sofsim/spin.hpp"

namespace sofsim {

// Balanced bipartition: side sizes equal for even n, differing by one for
// odd n.
struct Bisection {
  std::vector<std::uint8_t> side;
};

// Throws std::invalid_argument unless b is a valid bisection of n vertices.
void validate_bisection(const Bisection& b, std::size_t n);

// Binary entropy with natural logarithm.
double binary_entropy(double epsilon);

// f-invariant of the Ising Markov measure: log 2 + r*(H(eps) - log 2).
double f_ising(double epsilon, std::uint32_t rank);

// The smaller root of f_ising(., r) = 0 in (0, 1/2), solved by bisection to
// absolute tolerance 1e-10. Requires r >= 2 (for r = 1, f > 0 throughout).
double eps_f(std::uint32_t rank);

// Large-r expansion of eps_f: 1/2 - sqrt(log(2)/(2r)).
double eps_f_asymptote(std::uint32_t rank);

// Ground-state energy density of the Sherrington-Kirkpatrick model, to the
// published precision used here.
inline constexpr double sk_ground_state_density = 0.7632;

// Large-r asymptote 1/2 - P*/sqrt(2r) of the min-bisection threshold; not
// an exact finite-r value.
double eps_c_asymptotic(std::uint32_t rank);

struct ThresholdReport {
  std::uint32_t rank = 0;
  double eps_f = 0.0;
  double eps_f_asymptote = 0.0;
  double eps_c_asymptote = 0.0;
  double p_star = sk_ground_state_density;
};

ThresholdReport threshold_report(std::uint32_t rank);

enum class JoiningKind { product, diagonal };

// Radius-R marginal of a self-joining of the Ising measure, over the
// 4-symbol paired alphabet with (a,b) encoded as a*2+b. The product joining
// multiplies two Markov marginals; the diagonal is supported on equal pairs.
PatternDistribution joining_marginal(JoiningKind kind, double epsilon, std::uint32_t rank,
                                     std::uint32_t radius,
                                     std::size_t pattern_cap = std::size_t{1} << 24);

// Exact count of microstates whose radius-R empirical marginal lies within
// total variation eta of the target. Enumerates all q^n microstates.
std::uint64_t enumerate_good_models(const SoficMap& sigma, const PatternDistribution& target,
                                    double eta, std::size_t q,
                                    std::size_t state_cap = std::size_t{1} << 24);

// Number of generator edges (v, sigma^{s_i} v) whose endpoints lie on
// different sides; self-loops never cross.
std::uint64_t cut_size(const SoficMap& sigma, const Bisection& b);

// Exact minimum cut over all bisections; n is capped (default 24).
std::uint64_t brute_force_mcut(const SoficMap& sigma, std::size_t vertex_cap = 24);

struct LocalSearchResult {
  std::uint64_t cut = 0;
  Bisection bisection;
};

// Best-of-restarts pairwise swap descent: repeatedly exchanges the pair of
// opposite-side vertices with the strictly largest cut reduction; ties never
// move. Returns an upper bound on mcut. Deterministic given the seed.
LocalSearchResult local_search_mcut(const SoficMap& sigma, std::size_t restarts,
                                    std::uint64_t seed);

struct BalanceResult {
  Bisection bisection;
  std::size_t flips = 0;  // symbols changed to reach balance
};

// Balances a two-symbol microstate by flipping the minimum number of
// majority-side symbols, lowest vertex indices first.
BalanceResult bisect_from_microstate(const Microstate& x);

// Applies `trials` random switchings to sigma and returns the largest
// absolute change of the exact mcut; bounded by 2 for any single switching.
std::uint64_t switching_effect_max(const SoficMap& sigma, std::size_t trials,
                                   std::uint64_t seed, std::size_t vertex_cap = 24);

}  // namespace sofsim

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sofsim/analysis.hpp"
#include "sofsim/dynamics.hpp"
#include "sofsim/errors.hpp"
#include "sofsim/rng.hpp"

using namespace sofsim;

namespace {

SoficMap four_cycle() {
  return SoficMap(1, {{1, 2, 3, 0}});
}

// Independent threshold oracle: coarse grid scan for the sign change of
// f_ising, then local refinement.
double eps_f_grid_oracle(std::uint32_t rank) {
  double previous = f_ising(1e-9, rank);
  double at = 1e-9;
  for (int i = 1; i <= 500000; ++i) {
    const double eps = 0.5 * i / 500000.0;
    const double value = f_ising(eps, rank);
    if (previous < 0.0 && value >= 0.0) {
      return at + (eps - at) * (0.0 - previous) / (value - previous);
    }
    previous = value;
    at = eps;
  }
  return 0.5;
}

}  // namespace

TEST_CASE("f-invariant formula values") {
  CHECK(f_ising(0.5, 1) == std::log(2.0));
  CHECK(f_ising(0.5, 2) == std::log(2.0));
  CHECK(f_ising(0.5, 7) == std::log(2.0));
  CHECK(f_ising(0.1, 2) == doctest::Approx(-0.0429810).epsilon(1e-4));
  CHECK(f_ising(0.05, 2) < 0.0);
  CHECK_THROWS_AS(f_ising(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(f_ising(0.51, 2), std::invalid_argument);
}

TEST_CASE("f-invariant is strictly concave in eps with maximum at one half") {
  for (std::uint32_t rank : {1u, 2u, 5u}) {
    std::vector<double> values;
    for (int i = 5; i <= 50; ++i) {
      values.push_back(f_ising(std::min(0.01 * i, 0.5), rank));
    }
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
      CHECK(values[i + 1] - 2.0 * values[i] + values[i - 1] < 0.0);
      CHECK(values[i] < values.back() + 1e-15);
    }
  }
}

TEST_CASE("eps_f root of the f-invariant") {
  CHECK(std::abs(eps_f(2) - 0.1101) < 1e-3);
  CHECK(std::abs(eps_f(2) - eps_f_grid_oracle(2)) < 1e-3);
  for (std::uint32_t rank : {2u, 5u, 10u}) {
    CHECK(std::abs(f_ising(eps_f(rank), rank)) < 1e-9);
  }
  CHECK_THROWS_AS(eps_f(1), std::domain_error);
}

TEST_CASE("eps_f approaches its large-rank asymptote") {
  for (std::uint32_t rank : {50u, 100u, 200u}) {
    const double gap = std::abs(eps_f(rank) - eps_f_asymptote(rank));
    CHECK(std::sqrt(2.0 * rank) * gap <= 0.05);
  }
}

TEST_CASE("min-bisection threshold asymptote") {
  CHECK(std::abs(eps_c_asymptotic(2) - 0.1184) < 5e-5);
  double previous = 0.0;
  for (std::uint32_t rank = 1; rank <= 400; rank *= 2) {
    const double value = eps_c_asymptotic(rank);
    CHECK(value < 0.5);
    if (rank > 1) CHECK(value > previous);
    previous = value;
  }
  // sqrt(log 2) = 0.8326 > 0.7632 = P*, so the f-threshold sits below the
  // cut threshold for large rank.
  for (std::uint32_t rank : {50u, 100u, 200u}) {
    CHECK(eps_f_asymptote(rank) < eps_c_asymptotic(rank));
    CHECK(eps_f(rank) < eps_c_asymptotic(rank));
  }
  const ThresholdReport report = threshold_report(2);
  CHECK(report.rank == 2);
  CHECK(report.eps_f == eps_f(2));
  CHECK(report.p_star == 0.7632);
}

TEST_CASE("joining marginals") {
  SUBCASE("diagonal support carries only equal pairs") {
    const PatternDistribution diag = joining_marginal(JoiningKind::diagonal, 0.3, 2, 1);
    for (const auto& [labels, weight] : diag.weights()) {
      for (char symbol : labels) CHECK((symbol == 0 || symbol == 3));
      CHECK(weight > 0.0);
    }
    CHECK(std::abs(diag.weight_sum() - 1.0) <= 1e-12);
  }
  SUBCASE("product at radius zero is uniform on pair symbols") {
    const PatternDistribution prod = joining_marginal(JoiningKind::product, 0.2, 2, 0);
    REQUIRE(prod.weights().size() == 4);
    for (const auto& [labels, weight] : prod.weights()) CHECK(weight == doctest::Approx(0.25));
  }
  SUBCASE("layer marginals recover the markov marginal") {
    for (auto kind : {JoiningKind::product, JoiningKind::diagonal}) {
      const PatternDistribution joint = joining_marginal(kind, 0.3, 2, 1);
      CHECK(std::abs(joint.weight_sum() - 1.0) <= 1e-12);
      PatternDistribution layer_a(2, 1);
      PatternDistribution layer_b(2, 1);
      for (const auto& [labels, weight] : joint.weights()) {
        std::string a(labels.size(), 0);
        std::string b(labels.size(), 0);
        for (std::size_t j = 0; j < labels.size(); ++j) {
          a[j] = static_cast<char>(labels[j] >> 1);
          b[j] = static_cast<char>(labels[j] & 1);
        }
        layer_a.add(a, weight);
        layer_b.add(b, weight);
      }
      const PatternDistribution reference = markov_tree_marginal(0.3, 2, 1);
      CHECK(tv_distance(layer_a, reference) <= 1e-12);
      CHECK(tv_distance(layer_b, reference) <= 1e-12);
    }
  }
}

TEST_CASE("only the product joining is invariant under the paired kernel") {
  // The product of two independent Ising layers satisfies the one-site
  // re-randomization of the sum interaction exactly; the diagonal coupling
  // does not (the paired kernel resamples the layers independently).
  for (double eps : {0.1, 0.3, 0.45}) {
    const Interaction phi = ising_from_epsilon(eps);
    const Interaction paired = sum_interaction(phi, phi);
    const double product_defect =
        gibbs_defect(joining_marginal(JoiningKind::product, eps, 2, 1), paired);
    const double diagonal_defect =
        gibbs_defect(joining_marginal(JoiningKind::diagonal, eps, 2, 1), paired);
    CHECK(product_defect <= 1e-12);
    CHECK(diagonal_defect >= 0.01);
  }
}

TEST_CASE("good-model counting") {
  const SoficMap sigma = SoficMap::uniform_random(10, 2, 1234);
  const PatternDistribution target = markov_tree_marginal(0.3, 2, 1);
  SUBCASE("every microstate qualifies at eta >= 1") {
    CHECK(enumerate_good_models(sigma, target, 1.0 + 1e-9, 2) == 1024);
  }
  SUBCASE("vanishing tolerance around an unattainable target gives zero") {
    CHECK(enumerate_good_models(sigma, target, 1e-6, 2) == 0);
  }
  SUBCASE("counts are monotone in the tolerance") {
    std::uint64_t previous = 0;
    for (double eta : {0.05, 0.2, 0.4, 0.6, 0.8, 1.01}) {
      const std::uint64_t count = enumerate_good_models(sigma, target, eta, 2);
      CHECK(count >= previous);
      previous = count;
    }
    CHECK(previous == 1024);
  }
  SUBCASE("the state cap is enforced") {
    const SoficMap big = SoficMap::uniform_random(30, 2, 5);
    CHECK_THROWS_AS(enumerate_good_models(big, target, 0.5, 2), resource_limit_error);
  }
}

TEST_CASE("cut sizes on small graphs") {
  SUBCASE("two vertices with a swap edge") {
    const SoficMap sigma(1, {{1, 0}});
    CHECK(cut_size(sigma, Bisection{{0, 1}}) == 2);
  }
  SUBCASE("four-cycle cuts") {
    const SoficMap sigma = four_cycle();
    CHECK(cut_size(sigma, Bisection{{0, 1, 0, 1}}) == 4);
    CHECK(cut_size(sigma, Bisection{{0, 0, 1, 1}}) == 2);
  }
  SUBCASE("unbalanced sides are rejected") {
    const SoficMap sigma = four_cycle();
    CHECK_THROWS_AS(cut_size(sigma, Bisection{{0, 0, 0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(cut_size(sigma, Bisection{{0, 0, 0, 1}}), std::invalid_argument);
  }
  SUBCASE("self-loops never cross") {
    const SoficMap sigma(1, {{0, 1, 3, 2}});
    CHECK(cut_size(sigma, Bisection{{0, 1, 0, 1}}) == 2);
  }
}

TEST_CASE("brute-force mcut") {
  SUBCASE("identity maps have only self-loops") {
    std::vector<std::uint32_t> id = {0, 1, 2, 3};
    CHECK(brute_force_mcut(SoficMap(2, {id, id})) == 0);
  }
  SUBCASE("two swapped vertices") {
    CHECK(brute_force_mcut(SoficMap(1, {{1, 0}})) == 2);
  }
  SUBCASE("four-cycle") { CHECK(brute_force_mcut(four_cycle()) == 2); }
  SUBCASE("the vertex cap is enforced") {
    CHECK_THROWS_AS(brute_force_mcut(SoficMap::uniform_random(30, 2, 1)), resource_limit_error);
  }
}

TEST_CASE("local search agrees with brute force on small instances") {
  Rng rng(60601);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 8 + rng.next_below(5);
    const SoficMap sigma = SoficMap::uniform_random(n, 2, rng.next_u64());
    const auto result = local_search_mcut(sigma, 20, rng.next_u64());
    CHECK(result.cut == brute_force_mcut(sigma));
    CHECK(result.cut <= 2 * n);
    CHECK(cut_size(sigma, result.bisection) == result.cut);
  }
}

TEST_CASE("local search never worsens with more restarts") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const SoficMap sigma = SoficMap::uniform_random(40, 2, rng.next_u64());
    const std::uint64_t seed = rng.next_u64();
    std::uint64_t previous = UINT64_MAX;
    for (std::size_t restarts : {1, 5, 20}) {
      const auto result = local_search_mcut(sigma, restarts, seed);
      CHECK(result.cut <= previous);
      previous = result.cut;
    }
  }
}

TEST_CASE("balancing a binary microstate") {
  SUBCASE("balanced states are unchanged") {
    const Microstate x = {1, 0, 1, 0, 1};
    const BalanceResult result = bisect_from_microstate(x);
    CHECK(result.flips == 0);
    CHECK(result.bisection.side == std::vector<std::uint8_t>(x.begin(), x.end()));
  }
  SUBCASE("all-plus flips the two lowest indices") {
    const BalanceResult result = bisect_from_microstate(Microstate{1, 1, 1, 1});
    CHECK(result.flips == 2);
    CHECK(result.bisection.side == std::vector<std::uint8_t>{0, 0, 1, 1});
  }
  SUBCASE("flip counts are minimal against exhaustive search") {
    Rng rng(88);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 2 + rng.next_below(9);
      Microstate x(n);
      for (auto& s : x) s = static_cast<std::uint8_t>(rng.next_below(2));
      const BalanceResult result = bisect_from_microstate(x);
      validate_bisection(result.bisection, n);
      std::size_t best = n + 1;
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::size_t ones = 0;
        std::size_t distance = 0;
        for (std::size_t v = 0; v < n; ++v) {
          const std::size_t bit = (mask >> v) & 1;
          ones += bit;
          distance += (bit != x[v]) ? 1 : 0;
        }
        const std::size_t zeros = n - ones;
        if ((ones > zeros ? ones - zeros : zeros - ones) <= 1) best = std::min(best, distance);
      }
      CHECK(result.flips == best);
    }
  }
}

TEST_CASE("switchings move mcut by at most two") {
  SUBCASE("identity graph") {
    std::vector<std::uint32_t> id = {0, 1, 2, 3};
    const SoficMap sigma(2, {id, id});
    CHECK(switching_effect_max(sigma, 20, 7) <= 2);
  }
  SUBCASE("random instances") {
    Rng rng(505);
    for (int instance = 0; instance < 5; ++instance) {
      const SoficMap sigma = SoficMap::uniform_random(12, 2, rng.next_u64());
      CHECK(switching_effect_max(sigma, 20, rng.next_u64()) <= 2);
    }
  }
  SUBCASE("applying the same switching twice restores the cut") {
    const SoficMap sigma = SoficMap::uniform_random(12, 2, 11);
    const std::uint64_t base = brute_force_mcut(sigma);
    const SoficMap once = sigma.switching(0, 2, 9);
    const SoficMap twice = once.switching(0, 2, 9);
    CHECK(brute_force_mcut(twice) == base);
  }
}

TEST_CASE("good models induce cheap bisections") {
  // Sampled near-Gibbs states at high temperature: the balanced partition
  // obtained from the state cuts at most rn(eps + rho) + 2r*flips edges,
  // where rho is the radius-1 TV to the Markov marginal, and also satisfies
  // the looser rn(eps + (2r+1)rho) + r*flips form.
  const double eps = 0.45;
  const std::size_t n = 400;
  const SoficMap sigma = SoficMap::uniform_random(n, 2, 31007);
  const Interaction phi = ising_from_epsilon(eps);
  const PatternDistribution reference = markov_tree_marginal(eps, 2, 1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Microstate x = burn_in_sample(sigma, phi, 30.0, 1000 + seed);
    const double rho = tv_distance(empirical_marginal(x, sigma, 1), reference);
    const BalanceResult balanced = bisect_from_microstate(x);
    const auto cut = static_cast<double>(cut_size(sigma, balanced.bisection));
    const double rn = 2.0 * static_cast<double>(n);
    CHECK(cut <= rn * (eps + rho) + 2.0 * 2.0 * balanced.flips + 1e-9);
    CHECK(cut <= rn * (eps + 5.0 * rho) + 2.0 * balanced.flips + 1e-9);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "sofsim/dynamics.hpp"
#include "sofsim/errors.hpp"
#include "sofsim/rng.hpp"
#include "sofsim/spin.hpp"

using namespace sofsim;

namespace {

SoficMap swap_map(std::size_t n) {
  // Pairs (0 1)(2 3)...; n must be even.
  std::vector<std::uint32_t> perm(n);
  for (std::size_t v = 0; v < n; ++v) perm[v] = static_cast<std::uint32_t>(v ^ 1u);
  return SoficMap(1, {perm});
}

Microstate random_state(std::size_t n, std::size_t q, Rng& rng) {
  Microstate x(n);
  for (auto& s : x) s = static_cast<std::uint8_t>(rng.next_below(q));
  return x;
}

double beta_of(const Interaction& phi) { return -phi.coupling(1, 1); }

}  // namespace

TEST_CASE("ising interaction from the transition probability") {
  const Interaction flat = ising_from_epsilon(0.5);
  CHECK(beta_of(flat) == 0.0);
  for (std::size_t a = 0; a < 2; ++a) {
    CHECK(flat.field(a) == 0.0);
    for (std::size_t b = 0; b < 2; ++b) CHECK(flat.coupling(a, b) == 0.0);
  }

  // Independent root solve of eps/(1-eps) = exp(-2*beta) at eps = 1/(1+e^2).
  const double eps = 1.0 / (1.0 + std::exp(2.0));
  double lo = 0.0;
  double hi = 10.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::exp(-2.0 * mid) > eps / (1.0 - eps) ? lo : hi) = mid;
  }
  CHECK(ising_beta(eps) == doctest::Approx(lo).epsilon(1e-10));
  CHECK(ising_beta(eps) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(ising_from_epsilon(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ising_from_epsilon(0.6), std::invalid_argument);
  CHECK_THROWS_AS(ising_from_epsilon(-0.1), std::invalid_argument);
}

TEST_CASE("interaction validation") {
  CHECK_THROWS_AS(Interaction(2, {0.0, 1.0, 2.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Interaction(2, {0.0, 1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Interaction(1, {inf}, {0.0}), std::invalid_argument);
}

TEST_CASE("sum with a one-symbol neutral interaction changes nothing") {
  const Interaction phi = ising_from_epsilon(0.3);
  const Interaction neutral(1, {0.0}, {0.0});
  const Interaction sum = sum_interaction(phi, neutral);
  CHECK(sum.alphabet_size() == 2);
  for (std::size_t a = 0; a < 2; ++a) {
    CHECK(sum.field(a) == phi.field(a));
    for (std::size_t b = 0; b < 2; ++b) CHECK(sum.coupling(a, b) == phi.coupling(a, b));
  }
}

TEST_CASE("ising sum couples the two layers independently") {
  const Interaction phi = ising_from_epsilon(0.2);
  const double beta = beta_of(phi);
  const Interaction sum = sum_interaction(phi, phi);
  REQUIRE(sum.alphabet_size() == 4);
  const auto spin = [](std::size_t a) { return a == 0 ? -1.0 : 1.0; };
  for (std::size_t a1 = 0; a1 < 2; ++a1) {
    for (std::size_t b1 = 0; b1 < 2; ++b1) {
      for (std::size_t a2 = 0; a2 < 2; ++a2) {
        for (std::size_t b2 = 0; b2 < 2; ++b2) {
          const double expected = -beta * (spin(a1) * spin(a2) + spin(b1) * spin(b2));
          CHECK(sum.coupling(a1 * 2 + b1, a2 * 2 + b2) == doctest::Approx(expected));
        }
      }
    }
  }
}

TEST_CASE("sum energies split into layer energies") {
  const Interaction a = ising_from_epsilon(0.2);
  const Interaction b = ising_from_epsilon(0.45);
  const Interaction sum = sum_interaction(a, b);
  Rng rng(606);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.next_below(5);
    const SoficMap sigma = SoficMap::uniform_random(n, 2, rng.next_u64());
    const Microstate x = random_state(n, 4, rng);
    Microstate xa(n);
    Microstate xb(n);
    for (std::size_t v = 0; v < n; ++v) {
      xa[v] = x[v] >> 1;
      xb[v] = x[v] & 1;
    }
    CHECK(total_energy(sum, sigma, x) ==
          doctest::Approx(total_energy(a, sigma, xa) + total_energy(b, sigma, xb)));
  }
}

TEST_CASE("local hamiltonian sums couplings over all 2r letters") {
  SUBCASE("zero coupling leaves only the field") {
    const Interaction phi(2, {0, 0, 0, 0}, {0.25, -1.5});
    const SoficMap sigma = SoficMap::uniform_random(6, 2, 99);
    Rng rng(1);
    const Microstate x = random_state(6, 2, rng);
    for (std::uint32_t v = 0; v < 6; ++v) {
      CHECK(local_hamiltonian(phi, sigma, x, v) == phi.field(x[v]));
    }
  }
  SUBCASE("all-plus ising is -2 r beta at loop-free vertices") {
    const Interaction phi = ising_from_epsilon(0.1);
    const SoficMap sigma = SoficMap::uniform_random(40, 2, 12);
    const Microstate x(40, 1);
    for (std::uint32_t v = 0; v < 40; ++v) {
      if (sigma.has_self_loop(v)) continue;
      CHECK(local_hamiltonian(phi, sigma, x, v) ==
            doctest::Approx(-2.0 * 2 * beta_of(phi)));
    }
  }
  SUBCASE("random instances match an edge-list oracle") {
    Rng rng(77);
    const Interaction phi(3, {0.3, -0.2, 1.0, -0.2, 0.0, 0.5, 1.0, 0.5, -0.7},
                          {0.1, 0.0, -0.4});
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 3 + rng.next_below(6);
      const SoficMap sigma = SoficMap::uniform_random(n, 2, rng.next_u64());
      const Microstate x = random_state(n, 3, rng);
      for (std::uint32_t v = 0; v < n; ++v) {
        double expected = phi.field(x[v]);
        for (std::uint32_t i = 0; i < 2; ++i) {
          expected += phi.coupling(x[v], x[sigma.forward(i)[v]]);
          expected += phi.coupling(x[v], x[sigma.inverse(i)[v]]);
        }
        CHECK(local_hamiltonian(phi, sigma, x, v) == doctest::Approx(expected));
      }
    }
  }
}

TEST_CASE("total energy on ising instances") {
  const std::size_t n = 30;
  const SoficMap sigma = SoficMap::uniform_random(n, 2, 5150);
  SUBCASE("all-plus state has energy -beta r n") {
    const Interaction phi = ising_from_epsilon(0.25);
    const Microstate x(n, 1);
    CHECK(total_energy(phi, sigma, x) == doctest::Approx(-beta_of(phi) * 2 * n));
  }
  SUBCASE("infinite temperature is flat") {
    const Interaction phi = ising_from_epsilon(0.5);
    Rng rng(3);
    const Microstate x = random_state(n, 2, rng);
    CHECK(total_energy(phi, sigma, x) == 0.0);
  }
  SUBCASE("vertex energies sum to the total on loop-free graphs") {
    // Seed chosen so both generator permutations are derangements.
    const SoficMap loop_free = SoficMap::uniform_random(8, 2, 18);
    for (std::uint32_t v = 0; v < 8; ++v) REQUIRE(!loop_free.has_self_loop(v));
    const Interaction phi = ising_from_epsilon(0.2);
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      const Microstate x = random_state(8, 2, rng);
      double sum = 0.0;
      for (std::uint32_t v = 0; v < 8; ++v) sum += vertex_energy(phi, loop_free, x, v);
      CHECK(sum == doctest::Approx(total_energy(phi, loop_free, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("glauber rates") {
  SUBCASE("free dynamics resample uniformly") {
    const Interaction phi(3, std::vector<double>(9, 0.0), {0.0, 0.0, 0.0});
    const SoficMap sigma = SoficMap::uniform_random(5, 1, 8);
    const Microstate x(5, 2);
    const auto rates = glauber_rates(phi, sigma, x, 0);
    for (double rate : rates) CHECK(rate == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("aligned neighborhood tilts by exp(4 r beta)") {
    const Interaction phi = ising_from_epsilon(0.2);
    const SoficMap sigma = SoficMap::uniform_random(50, 2, 21);
    const Microstate x(50, 1);
    for (std::uint32_t v = 0; v < 50; ++v) {
      if (sigma.has_self_loop(v)) continue;
      const auto rates = glauber_rates(phi, sigma, x, v);
      CHECK(rates[1] / rates[0] == doctest::Approx(std::exp(4.0 * 2 * beta_of(phi))));
      CHECK(rates[0] + rates[1] == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  SUBCASE("rates only read the neighborhood of v") {
    const Interaction phi = ising_from_epsilon(0.15);
    const SoficMap sigma = SoficMap::uniform_random(30, 2, 303);
    Rng rng(44);
    for (int trial = 0; trial < 50; ++trial) {
      Microstate x = random_state(30, 2, rng);
      const auto v = static_cast<std::uint32_t>(rng.next_below(30));
      std::vector<bool> neighborhood(30, false);
      neighborhood[v] = true;
      for (Letter g = 0; g < 4; ++g) neighborhood[sigma.apply_letter(g, v)] = true;
      const auto before = glauber_rates(phi, sigma, x, v);
      auto w = static_cast<std::uint32_t>(rng.next_below(30));
      bool found = false;
      for (std::uint32_t probe = 0; probe < 30; ++probe) {
        const std::uint32_t candidate = (w + probe) % 30;
        if (!neighborhood[candidate]) {
          w = candidate;
          found = true;
          break;
        }
      }
      REQUIRE(found);
      x[w] ^= 1u;
      CHECK(glauber_rates(phi, sigma, x, v) == before);
    }
  }
}

TEST_CASE("finite gibbs measures at tiny n") {
  SUBCASE("infinite temperature is uniform") {
    const Interaction phi = ising_from_epsilon(0.5);
    const SoficMap sigma = SoficMap::uniform_random(4, 2, 2);
    const GibbsResult gibbs = finite_gibbs(phi, sigma);
    for (double p : gibbs.state.probabilities) CHECK(p == doctest::Approx(1.0 / 16));
    CHECK(gibbs.log_partition == doctest::Approx(std::log(16.0)));
  }
  SUBCASE("one vertex with a self-loop is symmetric") {
    const SoficMap sigma(1, {{0u}});
    const Interaction phi = ising_from_epsilon(0.2);
    const GibbsResult gibbs = finite_gibbs(phi, sigma);
    CHECK(gibbs.state.probabilities[0] == doctest::Approx(0.5));
    CHECK(gibbs.state.probabilities[1] == doctest::Approx(0.5));
  }
  SUBCASE("two vertices joined by parallel edges") {
    const SoficMap sigma = swap_map(2);
    const Interaction phi = ising_from_epsilon(0.1);
    const double beta = beta_of(phi);
    const GibbsResult gibbs = finite_gibbs(phi, sigma);
    const double z = 2.0 * std::exp(2.0 * beta) + 2.0 * std::exp(-2.0 * beta);
    const double aligned = std::exp(2.0 * beta) / z;
    // States (--) = 0, (+-) = 1, (-+) = 2, (++) = 3.
    CHECK(gibbs.state.probabilities[0] == doctest::Approx(aligned));
    CHECK(gibbs.state.probabilities[3] == doctest::Approx(aligned));
    CHECK(gibbs.log_partition == doctest::Approx(std::log(z)));
  }
}

TEST_CASE("free energy and the variational principle") {
  const SoficMap sigma = SoficMap::uniform_random(4, 2, 64);
  const Interaction phi = ising_from_epsilon(0.3);
  const GibbsResult gibbs = finite_gibbs(phi, sigma);

  SUBCASE("point masses have zero entropy") {
    Rng rng(10);
    for (int trial = 0; trial < 10; ++trial) {
      StateTable point;
      point.n = 4;
      point.q = 2;
      point.probabilities.assign(16, 0.0);
      const std::size_t k = rng.next_below(16);
      point.probabilities[k] = 1.0;
      Microstate x;
      point.decode(k, x);
      CHECK(free_energy(point, phi, sigma) == doctest::Approx(total_energy(phi, sigma, x)));
    }
  }
  SUBCASE("the gibbs state attains -log Z") {
    CHECK(free_energy(gibbs.state, phi, sigma) == doctest::Approx(-gibbs.log_partition));
  }
  SUBCASE("random competitors never beat it") {
    Rng rng(2029);
    const double best = free_energy(gibbs.state, phi, sigma);
    for (int trial = 0; trial < 100; ++trial) {
      StateTable zeta;
      zeta.n = 4;
      zeta.q = 2;
      zeta.probabilities.resize(16);
      double norm = 0.0;
      for (double& p : zeta.probabilities) {
        p = -std::log(1.0 - rng.next_unit());
        norm += p;
      }
      for (double& p : zeta.probabilities) p /= norm;
      CHECK(free_energy(zeta, phi, sigma) >= best - 1e-12);
    }
  }
}

TEST_CASE("detailed balance at loop-free vertices") {
  // xi(x) c_v(x,a) = xi(x^{v->a}) c_v(x^{v->a}, x(v)) for every state, vertex
  // without self-loops, and symbol.
  const SoficMap sigma = SoficMap::uniform_random(6, 2, 40);
  for (double eps : {0.1, 0.3, 0.5}) {
    const Interaction phi = ising_from_epsilon(eps);
    const GibbsResult gibbs = finite_gibbs(phi, sigma);
    Microstate x;
    for (std::size_t k = 0; k < gibbs.state.size(); ++k) {
      gibbs.state.decode(k, x);
      for (std::uint32_t v = 0; v < 6; ++v) {
        if (sigma.has_self_loop(v)) continue;
        const auto rates = glauber_rates(phi, sigma, x, v);
        for (std::uint8_t a = 0; a < 2; ++a) {
          Microstate y = x;  // x^{v->a}
          y[v] = a;
          const auto back = glauber_rates(phi, sigma, y, v);
          const double lhs = gibbs.state.probabilities[k] * rates[a];
          const double rhs =
              gibbs.state.probabilities[gibbs.state.encode(y)] * back[x[v]];
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("sum interaction rates factorize") {
  const Interaction a = ising_from_epsilon(0.15);
  const Interaction b = ising_from_epsilon(0.4);
  const Interaction sum = sum_interaction(a, b);
  Rng rng(8088);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.next_below(5);
    const SoficMap sigma = SoficMap::uniform_random(n, 2, rng.next_u64());
    const Microstate x = random_state(n, 4, rng);
    Microstate xa(n);
    Microstate xb(n);
    for (std::size_t v = 0; v < n; ++v) {
      xa[v] = x[v] >> 1;
      xb[v] = x[v] & 1;
    }
    const auto v = static_cast<std::uint32_t>(rng.next_below(n));
    const auto paired = glauber_rates(sum, sigma, x, v);
    const auto rates_a = glauber_rates(a, sigma, xa, v);
    const auto rates_b = glauber_rates(b, sigma, xb, v);
    for (std::size_t sa = 0; sa < 2; ++sa) {
      for (std::size_t sb = 0; sb < 2; ++sb) {
        CHECK(paired[sa * 2 + sb] == doctest::Approx(rates_a[sa] * rates_b[sb]));
      }
    }
  }
}

TEST_CASE("fano inequality") {
  SUBCASE("uniform distribution with the full set") {
    const std::vector<double> p(8, 1.0 / 8);
    const FanoResult result = fano_check(p, {0, 1, 2, 3, 4, 5, 6, 7}, 0.0);
    CHECK(result.holds);
    CHECK(result.lhs == doctest::Approx(std::log(8.0)));
    CHECK(result.rhs == doctest::Approx(std::log(8.0) - std::log(2.0)));
  }
  SUBCASE("point mass") {
    const std::vector<double> p = {1.0, 0.0};
    const FanoResult result = fano_check(p, {0}, 0.0);
    CHECK(result.holds);
    CHECK(result.lhs == doctest::Approx(0.0));
    CHECK(result.rhs == doctest::Approx(-std::log(2.0)));
  }
  SUBCASE("violated precondition is rejected") {
    const std::vector<double> p = {0.5, 0.5};
    CHECK_THROWS_AS(fano_check(p, {0}, 0.1), std::invalid_argument);
  }
  SUBCASE("holds on random triples") {
    Rng rng(515);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t size = 2 + rng.next_below(40);
      std::vector<double> p(size);
      double norm = 0.0;
      for (double& value : p) {
        value = -std::log(1.0 - rng.next_unit());
        norm += value;
      }
      for (double& value : p) value /= norm;
      std::vector<std::size_t> event;
      for (std::size_t i = 0; i < size; ++i) {
        if (rng.next_below(3) != 0) event.push_back(i);
      }
      if (event.empty()) event.push_back(rng.next_below(size));
      double mass = 0.0;
      for (std::size_t i : event) mass += p[i];
      const double eps = std::min(1.0, 1.0 - mass + rng.next_unit() * 0.2);
      CHECK(fano_check(p, event, eps).holds);
    }
  }
}

TEST_CASE("state enumeration caps are enforced") {
  const Interaction phi = ising_from_epsilon(0.3);
  const SoficMap big = SoficMap::uniform_random(30, 2, 4);
  CHECK_THROWS_AS(finite_gibbs(phi, big), resource_limit_error);
  const SoficMap small = SoficMap::uniform_random(10, 2, 4);
  CHECK_THROWS_AS(finite_gibbs(phi, small, 512), resource_limit_error);
}

TEST_CASE("interaction serialization round-trips") {
  const Interaction phi = sum_interaction(ising_from_epsilon(0.3), ising_from_epsilon(0.45));
  std::stringstream stream;
  phi.save(stream);
  const Interaction loaded = Interaction::load(stream);
  CHECK(loaded.alphabet_size() == phi.alphabet_size());
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(loaded.field(a) == phi.field(a));
    for (std::size_t b = 0; b < 4; ++b) CHECK(loaded.coupling(a, b) == phi.coupling(a, b));
  }
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sofsim/sofic.hpp"

namespace sofsim {

// A microstate assigns one of q symbols to each vertex. For Ising,
// symbol 0 is spin -1 and symbol 1 is spin +1.
using Microstate = std::vector<std::uint8_t>;

// Nearest-neighbor interaction: a symmetric coupling table J on pairs of
// symbols and a field table h on symbols.
class Interaction {
 public:
  Interaction(std::size_t q, std::vector<double> coupling_row_major, std::vector<double> field);

  std::size_t alphabet_size() const { return q_; }
  double coupling(std::size_t a, std::size_t b) const { return coupling_[a * q_ + b]; }
  double field(std::size_t a) const { return field_[a]; }

  // Text format: one line "q", q lines of q reals (J rows), one line of q reals (h).
  void save(std::ostream& out) const;
  static Interaction load(std::istream& in);

 private:
  std::size_t q_;
  std::vector<double> coupling_;
  std::vector<double> field_;
};

// Inverse temperature determined by eps/(1-eps) = exp(-2*beta).
double ising_beta(double epsilon);

// Two-symbol interaction with h = 0 and J(a,b) = -beta*s(a)*s(b), where
// s(0) = -1 and s(1) = +1. Requires 0 < eps <= 1/2.
Interaction ising_from_epsilon(double epsilon);

// Interaction on the product alphabet; the pair (a,b) is encoded as
// a*q_B + b. Couplings and fields add coordinatewise.
Interaction sum_interaction(const Interaction& a, const Interaction& b);

// Phi_v(x) = h(x(v)) + sum over all 2r letters s of J(x(v), x(sigma^s v)).
// A self-loop at v contributes twice (once for s, once for s^{-1}).
double local_hamiltonian(const Interaction& phi, const SoficMap& sigma, const Microstate& x,
                         std::uint32_t v);

// U(x) = sum_v h(x(v)) + sum_v sum_{i in [r]} J(x(v), x(sigma^{s_i} v));
// each self-loop counts once per generator here.
double total_energy(const Interaction& phi, const SoficMap& sigma, const Microstate& x);

// U_v(x) = h(x(v)) + (1/2) sum over the 2r letters; sums to U(x) exactly
// when no vertex has a self-loop.
double vertex_energy(const Interaction& phi, const SoficMap& sigma, const Microstate& x,
                     std::uint32_t v);

// Heat-bath rates c_v(x,a) proportional to exp(-Phi_v(x^{v->a})),
// normalized over a. Writes q strictly positive entries summing to 1.
void glauber_rates(const Interaction& phi, const SoficMap& sigma, const Microstate& x,
                   std::uint32_t v, std::span<double> out);
std::vector<double> glauber_rates(const Interaction& phi, const SoficMap& sigma,
                                  const Microstate& x, std::uint32_t v);

// Explicit distribution over all q^n microstates; the symbol of vertex v in
// state index k is (k / q^v) mod q.
struct StateTable {
  std::size_t n = 0;
  std::size_t q = 0;
  std::vector<double> probabilities;

  std::size_t size() const { return probabilities.size(); }
  void decode(std::size_t index, Microstate& out) const;
  std::size_t encode(const Microstate& x) const;
};

inline constexpr std::size_t default_state_cap = std::size_t{1} << 24;

struct GibbsResult {
  StateTable state;
  double log_partition = 0.0;
};

// Exact finite-volume Gibbs measure xi_V{x} = exp(-U(x)) / Z_V, with ln Z_V.
GibbsResult finite_gibbs(const Interaction& phi, const SoficMap& sigma,
                         std::size_t state_cap = default_state_cap);

// Shannon entropy with natural logarithm; 0*log(0) = 0.
double shannon_entropy(std::span<const double> probabilities);

// Free energy A(zeta) = E_zeta[U] - H(zeta). Minimized by the Gibbs measure.
double free_energy(const StateTable& zeta, const Interaction& phi, const SoficMap& sigma);

struct FanoResult {
  double lhs = 0.0;  // log |E|
  double rhs = 0.0;  // H(p) - [log 2 + eps*log |F|]
  bool holds = false;
};

// Checks log|E| >= H(p) - [log 2 + eps*log|F|] for a distribution p on a
// finite set F and an event E with p(E) >= 1 - eps.
FanoResult fano_check(std::span<const double> p, const std::vector<std::size_t>& event,
                      double eps);

}  // namespace sofsim

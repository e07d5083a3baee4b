#include "sofsim/spin.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sofsim/errors.hpp"

namespace sofsim {

Interaction::Interaction(std::size_t q, std::vector<double> coupling_row_major,
                         std::vector<double> field)
    : q_(q), coupling_(std::move(coupling_row_major)), field_(std::move(field)) {
  if (q == 0) throw std::invalid_argument("Interaction: alphabet must be nonempty");
  if (coupling_.size() != q * q || field_.size() != q) {
    throw std::invalid_argument("Interaction: table sizes do not match alphabet");
  }
  for (double value : coupling_) {
    if (!std::isfinite(value)) throw std::invalid_argument("Interaction: J must be finite");
  }
  for (double value : field_) {
    if (!std::isfinite(value)) throw std::invalid_argument("Interaction: h must be finite");
  }
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = a + 1; b < q; ++b) {
      if (coupling_[a * q + b] != coupling_[b * q + a]) {
        throw std::invalid_argument("Interaction: J must be symmetric");
      }
    }
  }
}

void Interaction::save(std::ostream& out) const {
  const auto flags = out.flags();
  const auto precision = out.precision(17);
  out << q_ << '\n';
  for (std::size_t a = 0; a < q_; ++a) {
    for (std::size_t b = 0; b < q_; ++b) {
      out << coupling_[a * q_ + b] << (b + 1 == q_ ? '\n' : ' ');
    }
  }
  for (std::size_t a = 0; a < q_; ++a) {
    out << field_[a] << (a + 1 == q_ ? '\n' : ' ');
  }
  out.flags(flags);
  out.precision(precision);
}

Interaction Interaction::load(std::istream& in) {
  std::size_t q = 0;
  if (!(in >> q)) throw std::invalid_argument("Interaction::load: bad header");
  std::vector<double> coupling(q * q);
  std::vector<double> field(q);
  for (auto& value : coupling) {
    if (!(in >> value)) throw std::invalid_argument("Interaction::load: truncated J");
  }
  for (auto& value : field) {
    if (!(in >> value)) throw std::invalid_argument("Interaction::load: truncated h");
  }
  return Interaction(q, std::move(coupling), std::move(field));
}

double ising_beta(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 0.5) {
    throw std::invalid_argument("ising: epsilon must lie in (0, 1/2]");
  }
  return -0.5 * std::log(epsilon / (1.0 - epsilon));
}

Interaction ising_from_epsilon(double epsilon) {
  const double beta = ising_beta(epsilon);
  const std::vector<double> coupling = {-beta, beta, beta, -beta};
  return Interaction(2, coupling, {0.0, 0.0});
}

Interaction sum_interaction(const Interaction& a, const Interaction& b) {
  const std::size_t qa = a.alphabet_size();
  const std::size_t qb = b.alphabet_size();
  const std::size_t q = qa * qb;
  std::vector<double> coupling(q * q);
  std::vector<double> field(q);
  for (std::size_t a1 = 0; a1 < qa; ++a1) {
    for (std::size_t b1 = 0; b1 < qb; ++b1) {
      const std::size_t s1 = a1 * qb + b1;
      field[s1] = a.field(a1) + b.field(b1);
      for (std::size_t a2 = 0; a2 < qa; ++a2) {
        for (std::size_t b2 = 0; b2 < qb; ++b2) {
          const std::size_t s2 = a2 * qb + b2;
          coupling[s1 * q + s2] = a.coupling(a1, a2) + b.coupling(b1, b2);
        }
      }
    }
  }
  return Interaction(q, std::move(coupling), std::move(field));
}

namespace {

void check_pairing(const Interaction& phi, const SoficMap& sigma, const Microstate& x) {
  if (x.size() != sigma.vertex_count()) {
    throw std::invalid_argument("microstate length does not match vertex count");
  }
  for (auto symbol : x) {
    if (symbol >= phi.alphabet_size()) {
      throw std::invalid_argument("microstate symbol outside alphabet");
    }
  }
}

// Phi_v with the symbol at v replaced by a; neighbors through self-loops
// see the replacement too.
double local_hamiltonian_with(const Interaction& phi, const SoficMap& sigma,
                              const Microstate& x, std::uint32_t v, std::uint8_t a) {
  double energy = phi.field(a);
  for (Letter g = 0; g < 2 * sigma.rank(); ++g) {
    const std::uint32_t w = sigma.apply_letter(g, v);
    const std::uint8_t neighbor = (w == v) ? a : x[w];
    energy += phi.coupling(a, neighbor);
  }
  return energy;
}

}  // namespace

double local_hamiltonian(const Interaction& phi, const SoficMap& sigma, const Microstate& x,
                         std::uint32_t v) {
  check_pairing(phi, sigma, x);
  return local_hamiltonian_with(phi, sigma, x, v, x[v]);
}

double total_energy(const Interaction& phi, const SoficMap& sigma, const Microstate& x) {
  check_pairing(phi, sigma, x);
  double energy = 0.0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    energy += phi.field(x[v]);
    for (std::uint32_t i = 0; i < sigma.rank(); ++i) {
      energy += phi.coupling(x[v], x[sigma.forward(i)[v]]);
    }
  }
  return energy;
}

double vertex_energy(const Interaction& phi, const SoficMap& sigma, const Microstate& x,
                     std::uint32_t v) {
  check_pairing(phi, sigma, x);
  double pair = 0.0;
  for (Letter g = 0; g < 2 * sigma.rank(); ++g) {
    pair += phi.coupling(x[v], x[sigma.apply_letter(g, v)]);
  }
  return phi.field(x[v]) + 0.5 * pair;
}

void glauber_rates(const Interaction& phi, const SoficMap& sigma, const Microstate& x,
                   std::uint32_t v, std::span<double> out) {
  const std::size_t q = phi.alphabet_size();
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < q; ++a) {
    out[a] = local_hamiltonian_with(phi, sigma, x, v, static_cast<std::uint8_t>(a));
    lowest = std::min(lowest, out[a]);
  }
  double norm = 0.0;
  for (std::size_t a = 0; a < q; ++a) {
    out[a] = std::exp(lowest - out[a]);
    norm += out[a];
  }
  for (std::size_t a = 0; a < q; ++a) out[a] /= norm;
}

std::vector<double> glauber_rates(const Interaction& phi, const SoficMap& sigma,
                                  const Microstate& x, std::uint32_t v) {
  check_pairing(phi, sigma, x);
  std::vector<double> rates(phi.alphabet_size());
  glauber_rates(phi, sigma, x, v, rates);
  return rates;
}

void StateTable::decode(std::size_t index, Microstate& out) const {
  out.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    out[v] = static_cast<std::uint8_t>(index % q);
    index /= q;
  }
}

std::size_t StateTable::encode(const Microstate& x) const {
  std::size_t index = 0;
  for (std::size_t v = n; v > 0; --v) index = index * q + x[v - 1];
  return index;
}

GibbsResult finite_gibbs(const Interaction& phi, const SoficMap& sigma, std::size_t state_cap) {
  const std::size_t n = sigma.vertex_count();
  const std::size_t q = phi.alphabet_size();
  double states_needed = std::pow(static_cast<double>(q), static_cast<double>(n));
  if (states_needed > static_cast<double>(state_cap)) {
    throw resource_limit_error("finite_gibbs: q^n exceeds state cap");
  }
  const auto count = static_cast<std::size_t>(states_needed + 0.5);

  GibbsResult result;
  result.state.n = n;
  result.state.q = q;
  auto& table = result.state.probabilities;
  table.resize(count);

  Microstate x;
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    result.state.decode(k, x);
    table[k] = total_energy(phi, sigma, x);
    lowest = std::min(lowest, table[k]);
  }
  double norm = 0.0;
  for (double& value : table) {
    value = std::exp(lowest - value);
    norm += value;
  }
  for (double& value : table) value /= norm;
  result.log_partition = std::log(norm) - lowest;
  return result;
}

double shannon_entropy(std::span<const double> probabilities) {
  double entropy = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return entropy;
}

double free_energy(const StateTable& zeta, const Interaction& phi, const SoficMap& sigma) {
  if (zeta.n != sigma.vertex_count() || zeta.q != phi.alphabet_size()) {
    throw std::invalid_argument("free_energy: state table does not match system");
  }
  double mass = 0.0;
  for (double p : zeta.probabilities) {
    if (p < 0.0) throw std::invalid_argument("free_energy: negative probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-12) {
    throw std::invalid_argument("free_energy: probabilities must sum to 1");
  }
  Microstate x;
  double expected = 0.0;
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    if (zeta.probabilities[k] == 0.0) continue;
    zeta.decode(k, x);
    expected += zeta.probabilities[k] * total_energy(phi, sigma, x);
  }
  return expected - shannon_entropy(zeta.probabilities);
}

FanoResult fano_check(std::span<const double> p, const std::vector<std::size_t>& event,
                      double eps) {
  if (event.empty()) throw std::invalid_argument("fano_check: event must be nonempty");
  double mass = 0.0;
  for (std::size_t index : event) {
    if (index >= p.size()) throw std::invalid_argument("fano_check: event index out of range");
    mass += p[index];
  }
  if (mass < 1.0 - eps - 1e-12) {
    throw std::invalid_argument("fano_check: event mass below 1 - eps");
  }
  FanoResult result;
  result.lhs = std::log(static_cast<double>(event.size()));
  result.rhs = shannon_entropy(p) -
               (std::log(2.0) + eps * std::log(static_cast<double>(p.size())));
  result.holds = result.lhs >= result.rhs - 1e-12;
  return result;
}

}  // namespace sofsim

#include "sofsim/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "sofsim/errors.hpp"

namespace sofsim {

double PatternDistribution::weight_sum() const {
  double sum = 0.0;
  for (const auto& [labels, weight] : weights_) sum += weight;
  return sum;
}

Pattern pullback_pattern(const Microstate& x, const SoficMap& sigma, std::uint32_t v,
                         const CayleyBall& ball) {
  if (ball.rank() != sigma.rank()) {
    throw std::invalid_argument("pullback_pattern: ball rank does not match sigma");
  }
  if (v >= sigma.vertex_count()) throw std::invalid_argument("pullback_pattern: bad vertex");
  Pattern pattern;
  pattern.radius = ball.radius();
  pattern.labels.resize(ball.size());
  // Walk the ball tree: the vertex of element g*w is the letter g applied
  // to the vertex of w, so parents resolve before children in BFS order.
  std::vector<std::uint32_t> vertex_of(ball.size());
  vertex_of[0] = v;
  pattern.labels[0] = static_cast<char>(x[v]);
  for (std::size_t j = 1; j < ball.size(); ++j) {
    vertex_of[j] = sigma.apply_letter(ball.leading_letter(j),
                                      vertex_of[static_cast<std::size_t>(ball.parent(j))]);
    pattern.labels[j] = static_cast<char>(x[vertex_of[j]]);
  }
  return pattern;
}

PatternDistribution empirical_marginal(const Microstate& x, const SoficMap& sigma,
                                       const CayleyBall& ball) {
  if (x.size() != sigma.vertex_count()) {
    throw std::invalid_argument("empirical_marginal: microstate does not match sigma");
  }
  const std::size_t n = sigma.vertex_count();
  std::map<std::string, std::size_t> counts;
  std::vector<std::uint32_t> vertex_of(ball.size());
  std::string labels(ball.size(), '\0');
  for (std::uint32_t v = 0; v < n; ++v) {
    vertex_of[0] = v;
    labels[0] = static_cast<char>(x[v]);
    for (std::size_t j = 1; j < ball.size(); ++j) {
      vertex_of[j] = sigma.apply_letter(ball.leading_letter(j),
                                        vertex_of[static_cast<std::size_t>(ball.parent(j))]);
      labels[j] = static_cast<char>(x[vertex_of[j]]);
    }
    ++counts[labels];
  }
  PatternDistribution dist(sigma.rank(), ball.radius());
  for (const auto& [key, count] : counts) {
    dist.add(key, static_cast<double>(count) / static_cast<double>(n));
  }
  return dist;
}

PatternDistribution empirical_marginal(const Microstate& x, const SoficMap& sigma,
                                       std::uint32_t radius, std::size_t ball_cap) {
  return empirical_marginal(x, sigma, CayleyBall(sigma.rank(), radius, ball_cap));
}

PatternDistribution markov_tree_marginal(double epsilon, std::uint32_t rank,
                                         std::uint32_t radius, std::size_t pattern_cap) {
  if (!(epsilon > 0.0) || epsilon > 0.5) {
    throw std::invalid_argument("markov_tree_marginal: epsilon must lie in (0, 1/2]");
  }
  const CayleyBall ball(rank, radius);
  if (ball.size() >= 63 || (std::size_t{1} << ball.size()) > pattern_cap) {
    throw resource_limit_error("markov_tree_marginal: 2^|B| exceeds pattern cap");
  }
  const std::size_t count = std::size_t{1} << ball.size();

  PatternDistribution dist(rank, radius);
  std::string labels(ball.size(), '\0');
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (std::size_t j = 0; j < ball.size(); ++j) {
      labels[j] = static_cast<char>((mask >> j) & 1u);
    }
    double weight = 0.5;
    for (std::size_t j = 1; j < ball.size(); ++j) {
      weight *= (labels[j] == labels[static_cast<std::size_t>(ball.parent(j))])
                    ? (1.0 - epsilon)
                    : epsilon;
    }
    dist.add(labels, weight);
  }
  return dist;
}

double tv_distance(const PatternDistribution& p, const PatternDistribution& q) {
  if (p.radius() != q.radius() || p.rank() != q.rank()) {
    throw std::invalid_argument("tv_distance: distributions live on different balls");
  }
  double sum = 0.0;
  auto it_p = p.weights().begin();
  auto it_q = q.weights().begin();
  while (it_p != p.weights().end() && it_q != q.weights().end()) {
    if (it_p->first < it_q->first) {
      sum += std::abs(it_p->second);
      ++it_p;
    } else if (it_q->first < it_p->first) {
      sum += std::abs(it_q->second);
      ++it_q;
    } else {
      sum += std::abs(it_p->second - it_q->second);
      ++it_p;
      ++it_q;
    }
  }
  for (; it_p != p.weights().end(); ++it_p) sum += std::abs(it_p->second);
  for (; it_q != q.weights().end(); ++it_q) sum += std::abs(it_q->second);
  return 0.5 * sum;
}

PatternDistribution truncate_marginal(const PatternDistribution& p, std::uint32_t k) {
  if (k > p.radius()) throw std::invalid_argument("truncate_marginal: radius too large");
  if (k == p.radius()) return p;
  const std::size_t prefix = ball_size(p.rank(), k);
  PatternDistribution out(p.rank(), k);
  for (const auto& [labels, weight] : p.weights()) {
    out.add(labels.substr(0, prefix), weight);
  }
  return out;
}

double metric_tail(std::uint32_t rank, std::uint32_t radius) {
  // sum_{s>R} 2r(2r-1)^{s-1}(3r)^{-s} with ratio rho = (2r-1)/(3r) < 1.
  const double r = static_cast<double>(rank);
  const double rho = (2.0 * r - 1.0) / (3.0 * r);
  return (2.0 * r) / (2.0 * r - 1.0) * std::pow(rho, radius + 1.0) / (1.0 - rho);
}

std::pair<double, double> dbar_bounds(const PatternDistribution& p,
                                      const PatternDistribution& q) {
  const double tv = tv_distance(p, q);
  const double scale = std::pow(3.0 * static_cast<double>(p.rank()),
                                -static_cast<double>(p.radius()));
  const double lower = scale * tv;
  const double upper = std::min(3.0, 3.0 * tv + metric_tail(p.rank(), p.radius()));
  return {lower, upper};
}

double gibbs_defect(const PatternDistribution& p, const Interaction& phi) {
  if (p.radius() == 0) throw std::invalid_argument("gibbs_defect: radius must be >= 1");
  const std::uint32_t rank = p.rank();
  const std::size_t degree = 2 * static_cast<std::size_t>(rank);
  const std::size_t q = phi.alphabet_size();
  const std::size_t prefix = ball_size(rank, p.radius() - 1);

  PatternDistribution truncated(rank, p.radius() - 1);
  PatternDistribution resampled(rank, p.radius() - 1);
  std::vector<double> rates(q);
  for (const auto& [labels, weight] : p.weights()) {
    // Heat-bath kernel at the root, determined by the distance-1 labels.
    double lowest = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
      double energy = phi.field(a);
      for (std::size_t s = 0; s < degree; ++s) {
        energy += phi.coupling(a, static_cast<std::uint8_t>(labels[1 + s]));
      }
      rates[a] = energy;
      if (a == 0 || energy < lowest) lowest = energy;
    }
    double norm = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
      rates[a] = std::exp(lowest - rates[a]);
      norm += rates[a];
    }

    std::string head = labels.substr(0, prefix);
    truncated.add(head, weight);
    for (std::size_t a = 0; a < q; ++a) {
      head[0] = static_cast<char>(a);
      resampled.add(head, weight * rates[a] / norm);
    }
  }
  return tv_distance(truncated, resampled);
}

void export_pattern_distribution_json(std::ostream& out, const PatternDistribution& p) {
  nlohmann::json weights = nlohmann::json::object();
  std::string key;
  for (const auto& [labels, weight] : p.weights()) {
    key.clear();
    for (char symbol : labels) key.push_back(static_cast<char>('0' + symbol));
    weights[key] = weight;
  }
  nlohmann::json object = {{"rank", p.rank()}, {"radius", p.radius()}, {"weights", weights}};
  out << object.dump();
}

}  // namespace sofsim

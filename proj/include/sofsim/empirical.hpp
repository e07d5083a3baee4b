#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>

#include "sofsim/spin.hpp"

namespace sofsim {

// A labeling of the Cayley ball B(e,R) in the ball's breadth-first order,
// one byte per element. Index 0 is the root; indices 1..2r are the
// distance-1 elements in generator order.
struct Pattern {
  std::uint32_t radius = 0;
  std::string labels;
};

// Sparse probability assignment over radius-R patterns for a fixed rank.
// Keys are the label strings in canonical ball order, so iteration order is
// deterministic.
class PatternDistribution {
 public:
  PatternDistribution(std::uint32_t rank, std::uint32_t radius)
      : rank_(rank), radius_(radius) {}

  std::uint32_t rank() const { return rank_; }
  std::uint32_t radius() const { return radius_; }

  void add(const std::string& labels, double weight) { weights_[labels] += weight; }
  const std::map<std::string, double>& weights() const { return weights_; }

  double weight_sum() const;

  friend bool operator==(const PatternDistribution&, const PatternDistribution&) = default;

 private:
  std::uint32_t rank_;
  std::uint32_t radius_;
  std::map<std::string, double> weights_;
};

// The pullback name of x at basepoint v, truncated to the given ball.
Pattern pullback_pattern(const Microstate& x, const SoficMap& sigma, std::uint32_t v,
                         const CayleyBall& ball);

// Uniform average of pullback patterns over all basepoints; weights are
// basepoint counts over n.
PatternDistribution empirical_marginal(const Microstate& x, const SoficMap& sigma,
                                       const CayleyBall& ball);
PatternDistribution empirical_marginal(const Microstate& x, const SoficMap& sigma,
                                       std::uint32_t radius,
                                       std::size_t ball_cap = default_ball_cap);

// Exact B(e,R)-marginal of the Ising Markov measure with transition
// probability eps: weight (1/2) * prod over tree edges of (1-eps) or eps
// according to whether the endpoint labels agree. Dense over all 2^|B|
// patterns, so |B| is capped.
PatternDistribution markov_tree_marginal(double epsilon, std::uint32_t rank,
                                         std::uint32_t radius,
                                         std::size_t pattern_cap = std::size_t{1} << 24);

// Total variation distance (1/2) sum |P - Q| over the union of supports.
double tv_distance(const PatternDistribution& p, const PatternDistribution& q);

// Restriction of every pattern to the radius-k sub-ball (a prefix in
// breadth-first order), merging weights.
PatternDistribution truncate_marginal(const PatternDistribution& p, std::uint32_t k);

// Mass of the metric tail sum_{s>R} 2r(2r-1)^{s-1} (3r)^{-s}, in closed form.
double metric_tail(std::uint32_t rank, std::uint32_t radius);

// Bounds lower <= dbar(mu, nu) <= upper valid for any extensions mu, nu of
// the two radius-R marginals to the full shift space:
//   lower = (3r)^{-R} * TV_R       witness: f = (3r)^{-R} * sum of indicators
//                                  of the patterns where P > Q; configurations
//                                  with different ball patterns are at least
//                                  (3r)^{-R} apart, so f is 1-Lipschitz and
//                                  mu f - nu f = (3r)^{-R} * TV_R
//   upper = min(3, 3*TV_R + tail)  couple the ball patterns optimally: equal
//                                  patterns can only disagree outside the
//                                  ball (cost <= the metric tail), unequal
//                                  ones cost at most diam = 3
std::pair<double, double> dbar_bounds(const PatternDistribution& p,
                                      const PatternDistribution& q);

// One-site re-randomization residual: resamples the root symbol of each
// pattern from the heat-bath kernel determined by the 2r distance-1 labels,
// then compares the radius-(R-1) truncations in total variation. Zero is
// necessary for any extension of P to be Gibbs for phi.
double gibbs_defect(const PatternDistribution& p, const Interaction& phi);

// JSON object {"rank": r, "radius": R, "weights": {"0110...": w, ...}} with
// patterns encoded as symbol strings in canonical ball order.
void export_pattern_distribution_json(std::ostream& out, const PatternDistribution& p);

}  // namespace sofsim

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sofsim/freegroup.hpp"

namespace sofsim {

// A homomorphism from the rank-r free group into Sym({0..n-1}), stored as
// one forward and one inverse permutation per generator. Its graph (one
// s_i-edge (v, forward[i][v]) per vertex and generator) is the simulation
// substrate. Immutable after construction.
class SoficMap {
 public:
  // Validates that every table is a permutation and precomputes inverses.
  SoficMap(std::uint32_t rank, std::vector<std::vector<std::uint32_t>> forward);

  // Each generator permutation independently uniform, via seeded Fisher-Yates.
  static SoficMap uniform_random(std::size_t n, std::uint32_t rank, std::uint64_t seed);

  std::size_t vertex_count() const { return n_; }
  std::uint32_t rank() const { return rank_; }

  const std::vector<std::uint32_t>& forward(std::uint32_t i) const { return forward_[i]; }
  const std::vector<std::uint32_t>& inverse(std::uint32_t i) const { return inverse_[i]; }

  // Image of v under one letter (generator or inverse).
  std::uint32_t apply_letter(Letter g, std::uint32_t v) const {
    const auto& table = letter_is_inverse(g) ? inverse_[letter_generator(g)]
                                             : forward_[letter_generator(g)];
    return table[v];
  }

  // sigma^gamma v; letters act right to left. Throws if v is out of range.
  std::uint32_t act(const GroupWord& gamma, std::uint32_t v) const;

  // True if some generator or inverse fixes v (self-loop in the graph).
  bool has_self_loop(std::uint32_t v) const;

  // Exchanges the images of vertices j and k under one generator; the
  // result differs from *this at exactly two points of that permutation.
  SoficMap switching(std::uint32_t generator, std::uint32_t j, std::uint32_t k) const;

  // Text format: one line "n r", then r lines of n space-separated images.
  void save(std::ostream& out) const;
  static SoficMap load(std::istream& in);

 private:
  std::size_t n_;
  std::uint32_t rank_;
  std::vector<std::vector<std::uint32_t>> forward_;
  std::vector<std::vector<std::uint32_t>> inverse_;
};

struct DefectReport {
  std::vector<double> delta_by_radius;  // delta_R for R = 0..r_max
  double delta_estimate = 0.0;          // min over R of 9*(2/3)^R + 6*delta_R
  std::uint32_t argmin_radius = 0;
  std::uint32_t r_max = 0;              // upper bound on the true infimum
};

// Fraction of vertices whose radius-R ball in the graph of sigma is not
// isomorphic (as an edge-labeled directed graph) to the Cayley ball.
double local_defect(const SoficMap& sigma, std::uint32_t radius,
                    std::size_t ball_cap = default_ball_cap);

// Evaluates 9*(2/3)^R + 6*delta_R for R = 0..r_max and returns the minimum
// with the full profile. Minimizing over finitely many R can only
// overestimate the infimum, so the estimate is an upper bound.
DefectReport delta_estimate(const SoficMap& sigma, std::uint32_t r_max,
                            std::size_t ball_cap = default_ball_cap);

// For each vertex, the smallest R <= ball.radius() at which the radius-R
// ball fails the isomorphism test, or UINT32_MAX if none does. delta_R is
// the fraction of vertices with failure radius <= R.
std::vector<std::uint32_t> defect_failure_radii(const SoficMap& sigma, const CayleyBall& ball);

}  // namespace sofsim

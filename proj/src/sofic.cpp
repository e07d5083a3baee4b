#include "sofsim/sofic.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sofsim/errors.hpp"
#include "sofsim/rng.hpp"

namespace sofsim {

SoficMap::SoficMap(std::uint32_t rank, std::vector<std::vector<std::uint32_t>> forward)
    : rank_(rank), forward_(std::move(forward)) {
  if (rank == 0) throw std::invalid_argument("SoficMap: rank must be >= 1");
  if (forward_.size() != rank) {
    throw std::invalid_argument("SoficMap: expected one permutation per generator");
  }
  n_ = forward_.empty() ? 0 : forward_[0].size();
  if (n_ == 0) throw std::invalid_argument("SoficMap: vertex count must be >= 1");

  inverse_.assign(rank, std::vector<std::uint32_t>(n_, n_));
  for (std::uint32_t i = 0; i < rank; ++i) {
    if (forward_[i].size() != n_) {
      throw std::invalid_argument("SoficMap: permutations must share length");
    }
    for (std::size_t v = 0; v < n_; ++v) {
      const std::uint32_t w = forward_[i][v];
      if (w >= n_ || inverse_[i][w] != n_) {
        throw std::invalid_argument("SoficMap: table " + std::to_string(i) +
                                    " is not a permutation");
      }
      inverse_[i][w] = static_cast<std::uint32_t>(v);
    }
  }
}

SoficMap SoficMap::uniform_random(std::size_t n, std::uint32_t rank, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> forward(rank);
  for (std::uint32_t i = 0; i < rank; ++i) {
    auto& perm = forward[i];
    perm.resize(n);
    for (std::size_t v = 0; v < n; ++v) perm[v] = static_cast<std::uint32_t>(v);
    for (std::size_t v = n; v > 1; --v) {
      const std::size_t j = rng.next_below(v);
      std::swap(perm[v - 1], perm[j]);
    }
  }
  return SoficMap(rank, std::move(forward));
}

std::uint32_t SoficMap::act(const GroupWord& gamma, std::uint32_t v) const {
  if (v >= n_) throw std::invalid_argument("act: vertex out of range");
  const auto& letters = gamma.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    if (*it >= 2 * rank_) throw std::invalid_argument("act: word letter outside alphabet");
    v = apply_letter(*it, v);
  }
  return v;
}

bool SoficMap::has_self_loop(std::uint32_t v) const {
  for (std::uint32_t i = 0; i < rank_; ++i) {
    if (forward_[i][v] == v) return true;
  }
  return false;
}

SoficMap SoficMap::switching(std::uint32_t generator, std::uint32_t j, std::uint32_t k) const {
  if (generator >= rank_) throw std::invalid_argument("switching: generator out of range");
  if (j >= n_ || k >= n_) throw std::invalid_argument("switching: vertex out of range");
  if (j == k) throw std::invalid_argument("switching: vertices must differ");
  std::vector<std::vector<std::uint32_t>> forward = forward_;
  std::swap(forward[generator][j], forward[generator][k]);
  return SoficMap(rank_, std::move(forward));
}

void SoficMap::save(std::ostream& out) const {
  out << n_ << ' ' << rank_ << '\n';
  for (std::uint32_t i = 0; i < rank_; ++i) {
    for (std::size_t v = 0; v < n_; ++v) {
      out << forward_[i][v] << (v + 1 == n_ ? '\n' : ' ');
    }
  }
}

SoficMap SoficMap::load(std::istream& in) {
  std::size_t n = 0;
  std::uint32_t rank = 0;
  if (!(in >> n >> rank)) throw std::invalid_argument("SoficMap::load: bad header");
  std::vector<std::vector<std::uint32_t>> forward(rank, std::vector<std::uint32_t>(n));
  for (std::uint32_t i = 0; i < rank; ++i) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!(in >> forward[i][v])) throw std::invalid_argument("SoficMap::load: truncated table");
    }
  }
  return SoficMap(rank, std::move(forward));
}

namespace {

// Per-vertex ball test, incremental in the radius. Level by level we map
// ball elements to graph vertices through the spanning tree; a repeated
// vertex breaks injectivity at the level where it appears, and an outward
// edge from the current sphere that lands back inside the mapped set is an
// edge the Cayley ball does not have. Both checks together are exact
// because edge labels force uniqueness of any candidate isomorphism.
class BallMatcher {
 public:
  BallMatcher(const SoficMap& sigma, const CayleyBall& ball)
      : sigma_(sigma),
        ball_(ball),
        image_(ball.size(), 0),
        seen_epoch_(sigma.vertex_count(), 0) {}

  std::uint32_t failure_radius(std::uint32_t root) {
    ++epoch_;
    const std::uint32_t letters = 2 * sigma_.rank();
    image_[0] = root;
    mark(root);
    std::size_t level_begin = 0;
    for (std::uint32_t level = 0;; ++level) {
      const std::size_t level_end = ball_.prefix_size(level);
      // Outward edges from the sphere of this level must leave the image.
      for (std::size_t j = level_begin; j < level_end; ++j) {
        for (Letter g = 0; g < letters; ++g) {
          if (ball_.step(j, g) >= 0 &&
              static_cast<std::size_t>(ball_.step(j, g)) < level_end) {
            continue;  // tree edge inside the prefix, holds by construction
          }
          if (is_marked(sigma_.apply_letter(g, image_[j]))) return level;
        }
      }
      if (level == ball_.radius()) break;
      // Extend the map to the next sphere and check injectivity.
      level_begin = level_end;
      const std::size_t next_end = ball_.prefix_size(level + 1);
      for (std::size_t j = level_begin; j < next_end; ++j) {
        const std::uint32_t v =
            sigma_.apply_letter(ball_.leading_letter(j), image_[ball_.parent(j)]);
        if (is_marked(v)) return level + 1;
        image_[j] = v;
        mark(v);
      }
    }
    return UINT32_MAX;
  }

 private:
  void mark(std::uint32_t v) { seen_epoch_[v] = epoch_; }
  bool is_marked(std::uint32_t v) const { return seen_epoch_[v] == epoch_; }

  const SoficMap& sigma_;
  const CayleyBall& ball_;
  std::vector<std::uint32_t> image_;
  std::vector<std::uint64_t> seen_epoch_;
  std::uint64_t epoch_ = 0;
};

}  // namespace

std::vector<std::uint32_t> defect_failure_radii(const SoficMap& sigma, const CayleyBall& ball) {
  BallMatcher matcher(sigma, ball);
  std::vector<std::uint32_t> fail(sigma.vertex_count());
  for (std::size_t v = 0; v < sigma.vertex_count(); ++v) {
    fail[v] = matcher.failure_radius(static_cast<std::uint32_t>(v));
  }
  return fail;
}

double local_defect(const SoficMap& sigma, std::uint32_t radius, std::size_t ball_cap) {
  const CayleyBall ball(sigma.rank(), radius, ball_cap);
  const auto fail = defect_failure_radii(sigma, ball);
  std::size_t bad = 0;
  for (auto f : fail) bad += (f <= radius) ? 1 : 0;
  return static_cast<double>(bad) / static_cast<double>(sigma.vertex_count());
}

DefectReport delta_estimate(const SoficMap& sigma, std::uint32_t r_max, std::size_t ball_cap) {
  const CayleyBall ball(sigma.rank(), r_max, ball_cap);
  const auto fail = defect_failure_radii(sigma, ball);

  std::vector<std::size_t> bad_by_radius(r_max + 1, 0);
  for (auto f : fail) {
    if (f <= r_max) ++bad_by_radius[f];
  }

  DefectReport report;
  report.r_max = r_max;
  report.delta_by_radius.resize(r_max + 1);
  std::size_t bad = 0;
  double best = 0.0;
  for (std::uint32_t radius = 0; radius <= r_max; ++radius) {
    bad += bad_by_radius[radius];
    const double delta = static_cast<double>(bad) / static_cast<double>(sigma.vertex_count());
    report.delta_by_radius[radius] = delta;
    const double value = 9.0 * std::pow(2.0 / 3.0, radius) + 6.0 * delta;
    if (radius == 0 || value < best) {
      best = value;
      report.argmin_radius = radius;
    }
  }
  report.delta_estimate = best;
  return report;
}

}  // namespace sofsim

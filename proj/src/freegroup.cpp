#include "sofsim/freegroup.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "sofsim/errors.hpp"

namespace sofsim {

GroupWord GroupWord::reduce(std::span<const Letter> letters, std::uint32_t rank) {
  if (rank == 0) throw std::invalid_argument("reduce: rank must be >= 1");
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter g : letters) {
    if (g >= 2 * rank) {
      throw std::invalid_argument("reduce: letter " + std::to_string(g) +
                                  " outside alphabet of rank " + std::to_string(rank));
    }
    if (!out.empty() && out.back() == inverse_letter(g)) {
      out.pop_back();
    } else {
      out.push_back(g);
    }
  }
  return GroupWord(std::move(out));
}

GroupWord concat(const GroupWord& a, const GroupWord& b, std::uint32_t rank) {
  std::vector<Letter> joined = a.letters_;
  joined.insert(joined.end(), b.letters_.begin(), b.letters_.end());
  return GroupWord::reduce(joined, rank);
}

std::size_t ball_size(std::uint32_t rank, std::uint32_t radius) {
  constexpr std::size_t saturate = std::numeric_limits<std::size_t>::max() / 2;
  std::size_t total = 1;
  std::size_t sphere = 1;
  for (std::uint32_t s = 1; s <= radius; ++s) {
    sphere = (s == 1) ? 2 * static_cast<std::size_t>(rank) : sphere * (2 * rank - 1);
    if (sphere > saturate || total > saturate - sphere) return saturate;
    total += sphere;
  }
  return total;
}

CayleyBall::CayleyBall(std::uint32_t rank, std::uint32_t radius, std::size_t element_cap)
    : rank_(rank), radius_(radius) {
  if (rank == 0) throw std::invalid_argument("CayleyBall: rank must be >= 1");
  const std::size_t count = ball_size(rank, radius);
  if (count > element_cap) {
    throw resource_limit_error("CayleyBall: " + std::to_string(count) +
                               " elements exceed cap " + std::to_string(element_cap));
  }
  const std::size_t letters = 2 * static_cast<std::size_t>(rank);
  parent_.reserve(count);
  leading_.reserve(count);
  length_.reserve(count);
  step_.assign(count * letters, -1);
  prefix_size_.assign(radius + 1, 0);

  parent_.push_back(-1);
  leading_.push_back(0);
  length_.push_back(0);
  prefix_size_[0] = 1;

  // Breadth-first: children of w are the reduced words g*w, skipping the
  // letter that cancels the leading letter of w.
  std::size_t next = 0;
  for (std::uint32_t level = 0; level < radius; ++level) {
    const std::size_t level_end = parent_.size();
    for (; next < level_end; ++next) {
      for (Letter g = 0; g < letters; ++g) {
        if (length_[next] > 0 && g == inverse_letter(leading_[next])) continue;
        const auto child = static_cast<std::int32_t>(parent_.size());
        parent_.push_back(static_cast<std::int32_t>(next));
        leading_.push_back(g);
        length_.push_back(level + 1);
        step_[next * letters + g] = child;
        step_[child * letters + inverse_letter(g)] = static_cast<std::int32_t>(next);
      }
    }
    prefix_size_[level + 1] = parent_.size();
  }
}

GroupWord CayleyBall::word(std::size_t idx) const {
  std::vector<Letter> letters;
  letters.reserve(length_[idx]);
  for (std::int32_t at = static_cast<std::int32_t>(idx); parent_[at] >= 0; at = parent_[at]) {
    letters.push_back(leading_[at]);
  }
  return GroupWord::reduce(letters, rank_);
}

}  // namespace sofsim

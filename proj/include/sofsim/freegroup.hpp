#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sofsim {

// Generator letters of the rank-r free group are encoded as integers
// 0..2r-1: letter 2i is the generator s_{i+1}, letter 2i+1 its inverse.
// This fixes the enumeration order s_1, s_1^{-1}, s_2, s_2^{-1}, ...
using Letter = std::uint32_t;

inline constexpr Letter inverse_letter(Letter g) { return g ^ 1u; }
inline constexpr std::uint32_t letter_generator(Letter g) { return g >> 1; }
inline constexpr bool letter_is_inverse(Letter g) { return (g & 1u) != 0; }

// A reduced word: no adjacent pair of mutually inverse letters.
// letters()[0] is the leftmost letter of the word.
class GroupWord {
 public:
  GroupWord() = default;

  // Reduces an arbitrary letter sequence by stack cancellation.
  // Throws std::invalid_argument if a letter is outside the 2r-symbol alphabet.
  static GroupWord reduce(std::span<const Letter> letters, std::uint32_t rank);

  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }

  friend bool operator==(const GroupWord&, const GroupWord&) = default;

 private:
  explicit GroupWord(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}
  std::vector<Letter> letters_;

  friend GroupWord concat(const GroupWord&, const GroupWord&, std::uint32_t);
  friend class CayleyBall;
};

// Product of two reduced words, reduced again.
GroupWord concat(const GroupWord& a, const GroupWord& b, std::uint32_t rank);

inline constexpr std::size_t default_ball_cap = 10'000'000;

// Number of reduced words of length <= radius: 1 + sum_s 2r(2r-1)^{s-1}.
// Saturates instead of overflowing.
std::size_t ball_size(std::uint32_t rank, std::uint32_t radius);

// The ball B(e,R) in the Cayley graph, enumerated breadth-first with the
// fixed letter order above, so element indices are stable across runs.
//
// Each non-identity element g*w is stored with a link to its parent w (the
// word with the leading letter removed) and the connecting letter g; the
// parent-child pairs are exactly the Cayley edges inside the ball, so the
// links form the ball's spanning tree rooted at the identity.
class CayleyBall {
 public:
  CayleyBall(std::uint32_t rank, std::uint32_t radius, std::size_t element_cap = default_ball_cap);

  std::uint32_t rank() const { return rank_; }
  std::uint32_t radius() const { return radius_; }
  std::size_t size() const { return parent_.size(); }

  std::int32_t parent(std::size_t idx) const { return parent_[idx]; }
  Letter leading_letter(std::size_t idx) const { return leading_[idx]; }
  std::uint32_t length(std::size_t idx) const { return length_[idx]; }

  // Number of elements of length <= k (elements are sorted by length, so
  // the radius-k sub-ball is a prefix).
  std::size_t prefix_size(std::uint32_t k) const { return prefix_size_[k]; }

  // Index of the reduced word g*element(idx), or -1 if it leaves the ball.
  std::int32_t step(std::size_t idx, Letter g) const {
    return step_[idx * 2 * rank_ + g];
  }

  // Materializes the reduced word for an element.
  GroupWord word(std::size_t idx) const;

 private:
  std::uint32_t rank_;
  std::uint32_t radius_;
  std::vector<std::int32_t> parent_;
  std::vector<Letter> leading_;
  std::vector<std::uint32_t> length_;
  std::vector<std::size_t> prefix_size_;
  std::vector<std::int32_t> step_;
};

}  // namespace sofsim

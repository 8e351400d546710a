#pragma once

// Reduced words in the free group on {a, b}, integer-valued functions on its
// Gromov boundary that are constant on cylinders of a fixed word length, and
// the left-multiplication action of the generators on such functions.
//
// Letters are serialized as ASCII: 'a', 'A' (= a^-1), 'b', 'B' (= b^-1).
// Cylinders of one length are ordered lexicographically with a < A < b < B.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crossk/common.hpp"

namespace crossk::freeboundary {

inline constexpr std::string_view kAlphabet = "aAbB";

bool is_letter(char c);
char inverse(char letter);  // throws PreconditionError on a non-letter

class ReducedWord {
 public:
  ReducedWord() = default;

  const std::string& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  char first() const { return letters_.front(); }
  char last() const { return letters_.back(); }

  ReducedWord inverse() const;
  ReducedWord prefix(std::size_t n) const;
  bool starts_with(const ReducedWord& w) const;

  // Exponent sums of a and of b.
  long exponent_sum_a() const;
  long exponent_sum_b() const;

  friend ReducedWord operator*(const ReducedWord& x, const ReducedWord& y);
  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend auto operator<=>(const ReducedWord&, const ReducedWord&) = default;

 private:
  friend ReducedWord reduce(std::string_view raw);
  std::string letters_;
};

// Free reduction. Throws PreconditionError on a character outside "aAbB".
ReducedWord reduce(std::string_view raw);

// a^n (or A^|n| for negative n); same for b.
ReducedWord power(char letter, long n);

std::size_t cylinder_count(std::size_t level);  // 4 * 3^(level-1)
const std::vector<ReducedWord>& cylinders(std::size_t level);
std::size_t cylinder_index(const ReducedWord& w);

class BoundaryVector {
 public:
  using Coeff = std::int64_t;

  explicit BoundaryVector(std::size_t level);
  BoundaryVector(std::size_t level, std::vector<Coeff> coeffs);

  // Characteristic function p_w of the cylinder of w, at level |w|.
  static BoundaryVector cylinder(const ReducedWord& w);
  static BoundaryVector cylinder(const ReducedWord& w, std::size_t level);
  static BoundaryVector ones(std::size_t level);

  std::size_t level() const { return level_; }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }
  // w must have length level().
  Coeff operator[](const ReducedWord& w) const { return coeffs_[slot(w)]; }
  Coeff& operator[](const ReducedWord& w) { return coeffs_[slot(w)]; }

  // Value at any boundary point whose first `level()` letters are `prefix`'s.
  Coeff evaluate(const ReducedWord& prefix) const;
  Coeff total() const;
  bool is_zero() const;

  BoundaryVector& operator+=(const BoundaryVector& o);
  BoundaryVector& operator-=(const BoundaryVector& o);
  friend BoundaryVector operator+(BoundaryVector x, const BoundaryVector& y) { return x += y; }
  friend BoundaryVector operator-(BoundaryVector x, const BoundaryVector& y) { return x -= y; }
  friend BoundaryVector operator*(BoundaryVector::Coeff k, BoundaryVector x);
  friend bool operator==(const BoundaryVector&, const BoundaryVector&) = default;

 private:
  std::size_t slot(const ReducedWord& w) const;

  std::size_t level_;
  std::vector<Coeff> coeffs_;
};

// Same function, one level finer: p_w = sum of p_{w s} over letters s with w s
// reduced.
BoundaryVector refine(const BoundaryVector& v);
BoundaryVector refine_to(const BoundaryVector& v, std::size_t level);

// Image of v under left multiplication by a single letter g. Always one level
// finer than v.
BoundaryVector act_generator(char g, const BoundaryVector& v);

// g = prefix * s1 * b * a^N * b * s2, with s1 the first letter (in a, A, b, B
// order) that keeps prefix*s1*b reduced and s2 the first letter that keeps
// b*s2*target reduced, where target starts with `target_first`.
ReducedWord minimality_witness(const ReducedWord& prefix, char target_first, long N);

// g = omega * s1 * b * a^N * b^M * a * s2 with zero exponent sums in a and b.
// s1 keeps omega*s1*b reduced, s2 keeps a*s2*omega reduced; the first
// admissible pair giving N != 0 and M != 0 is used.
ReducedWord infiniteness_witness(const ReducedWord& omega);

// Same construction with caller-chosen letters; throws PreconditionError when
// s1 or s2 is inadmissible or a solved exponent vanishes.
ReducedWord infiniteness_witness(const ReducedWord& omega, char s1, char s2);

}  // namespace crossk::freeboundary

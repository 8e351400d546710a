#pragma once

// Two-sided sequences over {1, 2} on a finite symmetric window, the
// Fibonacci word and the factor statistics used for Sturmian sequences.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crossk/common.hpp"

namespace crossk::symdyn {

// x_i for i in [-W, W]. Symbols are stored as the characters '1' and '2'.
class BiSequence {
 public:
  BiSequence() = default;
  // `symbols` has length 2W+1; symbols[0] is index -W.
  BiSequence(std::string symbols, std::size_t half_width);

  static BiSequence constant(char symbol, std::size_t half_width);

  std::size_t half_width() const { return half_width_; }
  std::size_t size() const { return symbols_.size(); }
  long lo() const { return -static_cast<long>(half_width_); }
  long hi() const { return static_cast<long>(half_width_); }

  // Throws PreconditionError outside the window.
  int operator[](long i) const;
  char symbol(long i) const { return symbols_[offset(i)]; }

  // Symbols from index -W to W, no separator.
  const std::string& symbols() const { return symbols_; }

  // Same sequence on the smaller window [-w, w].
  BiSequence restricted(std::size_t w) const;

  friend bool operator==(const BiSequence&, const BiSequence&) = default;

 private:
  std::size_t offset(long i) const;

  std::string symbols_;
  std::size_t half_width_ = 0;
};

// f_0 = "1", f_1 = "21", f_{n+1} = f_n f_{n-1}.
std::string fibonacci_word(std::size_t n);

// Stage k, k >= 1: f_{3k-2} . stage(k-1) . f_{3k-2}, starting from the single
// symbol 1 at index 0. Its symbols read left to right are f_{3k}.
BiSequence two_sided_fibonacci(std::size_t stage);

// Distinct length-k factors inside the window. Requires 2W+1 >= 8k.
std::set<std::string> language(const BiSequence& x, std::size_t k);
std::size_t block_complexity(const BiSequence& x, std::size_t k);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};
std::ostream& operator<<(std::ostream& os, const Rational& r);

// Number of 2s in [-N, N] over 2N+1, reduced. Requires 1 <= N <= W.
Rational slope_estimate(const BiSequence& x, std::size_t N);

// Longest block of consecutive `symbol` ('1' or '2') inside the window.
std::size_t longest_run(const BiSequence& x, char symbol);

// Text format: one line of 1/2 characters with '|' immediately before index 0.
// An asymmetric line is trimmed to the largest symmetric window it contains.
BiSequence parse_sequence(std::string_view text);
std::string format_sequence(const BiSequence& x);
BiSequence read_sequence_file(const std::string& path);

}  // namespace crossk::symdyn

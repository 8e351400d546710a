#include "crossk/symdyn.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace crossk::symdyn {

BiSequence::BiSequence(std::string symbols, std::size_t half_width)
    : symbols_(std::move(symbols)), half_width_(half_width) {
  if (symbols_.size() != 2 * half_width_ + 1)
    throw PreconditionError("BiSequence: expected " + std::to_string(2 * half_width_ + 1) + " symbols");
  for (char c : symbols_)
    if (c != '1' && c != '2') throw PreconditionError(std::string("BiSequence: bad symbol '") + c + "'");
}

BiSequence BiSequence::constant(char symbol, std::size_t half_width) {
  return BiSequence(std::string(2 * half_width + 1, symbol), half_width);
}

std::size_t BiSequence::offset(long i) const {
  if (i < lo() || i > hi())
    throw PreconditionError("BiSequence: index " + std::to_string(i) + " outside window");
  return static_cast<std::size_t>(i + static_cast<long>(half_width_));
}

int BiSequence::operator[](long i) const { return symbols_[offset(i)] - '0'; }

BiSequence BiSequence::restricted(std::size_t w) const {
  if (w > half_width_) throw PreconditionError("BiSequence::restricted: window grows");
  return BiSequence(symbols_.substr(half_width_ - w, 2 * w + 1), w);
}

std::string fibonacci_word(std::size_t n) {
  std::string prev = "1", cur = "21";
  if (n == 0) return prev;
  for (std::size_t i = 1; i < n; ++i) {
    std::string next = cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

BiSequence two_sided_fibonacci(std::size_t stage) {
  if (stage == 0) throw PreconditionError("two_sided_fibonacci: stage must be >= 1");
  std::string word = "1";
  std::size_t w = 0;
  for (std::size_t k = 1; k <= stage; ++k) {
    const std::string block = fibonacci_word(3 * k - 2);
    word = block + word + block;
    w += block.size();
  }
  return BiSequence(std::move(word), w);
}

std::set<std::string> language(const BiSequence& x, std::size_t k) {
  if (k == 0) throw PreconditionError("language: k must be >= 1");
  if (x.size() < 8 * k)
    throw PreconditionError("language: window of " + std::to_string(x.size()) +
                            " symbols is too small for k = " + std::to_string(k) + " (need 8k)");
  std::set<std::string> out;
  const std::string& s = x.symbols();
  for (std::size_t i = 0; i + k <= s.size(); ++i) out.insert(s.substr(i, k));
  return out;
}

std::size_t block_complexity(const BiSequence& x, std::size_t k) { return language(x, k).size(); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.num << '/' << r.den; }

Rational slope_estimate(const BiSequence& x, std::size_t N) {
  if (N == 0) throw PreconditionError("slope_estimate: N must be >= 1");
  if (N > x.half_width()) throw PreconditionError("slope_estimate: N exceeds the window");
  const long n = static_cast<long>(N);
  std::int64_t twos = 0;
  for (long i = -n; i <= n; ++i) twos += x.symbol(i) == '2';
  const std::int64_t den = 2 * n + 1;
  const std::int64_t g = std::gcd(twos, den);
  return {twos / g, den / g};
}

std::size_t longest_run(const BiSequence& x, char symbol) {
  std::size_t best = 0, cur = 0;
  for (char c : x.symbols()) {
    cur = c == symbol ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return best;
}

BiSequence parse_sequence(std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
    text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  const auto bar = text.find('|');
  if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos)
    throw FormatError("sequence: expected exactly one '|' before index 0");
  const std::string_view left = text.substr(0, bar), right = text.substr(bar + 1);
  for (std::string_view part : {left, right})
    for (char c : part)
      if (c != '1' && c != '2') throw FormatError(std::string("sequence: unexpected character '") + c + "'");
  if (right.empty()) throw FormatError("sequence: no symbol at index 0");
  const std::size_t w = std::min(left.size(), right.size() - 1);
  std::string symbols(left.substr(left.size() - w));
  symbols.append(right.substr(0, w + 1));
  return BiSequence(std::move(symbols), w);
}

std::string format_sequence(const BiSequence& x) {
  std::string out = x.symbols();
  out.insert(x.half_width(), 1, '|');
  return out;
}

BiSequence read_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open sequence file '" + path + "'");
  std::string line;
  std::getline(in, line);
  std::string rest;
  while (std::getline(in, rest))
    if (rest.find_first_not_of(" \r\t") != std::string::npos)
      throw FormatError("sequence file must hold a single line");
  return parse_sequence(line);
}

}  // namespace crossk::symdyn

#include "crossk/freeboundary.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace crossk::freeboundary {

namespace {

int code(char c) {
  switch (c) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
    default: throw PreconditionError(std::string("unknown letter '") + c + "'");
  }
}

}  // namespace

bool is_letter(char c) { return kAlphabet.find(c) != std::string_view::npos; }

char inverse(char letter) { return kAlphabet[static_cast<std::size_t>(code(letter) ^ 1)]; }

ReducedWord reduce(std::string_view raw) {
  ReducedWord w;
  for (char c : raw) {
    code(c);
    if (!w.letters_.empty() && w.letters_.back() == inverse(c))
      w.letters_.pop_back();
    else
      w.letters_.push_back(c);
  }
  return w;
}

ReducedWord operator*(const ReducedWord& x, const ReducedWord& y) {
  return reduce(x.letters_ + y.letters_);
}

ReducedWord ReducedWord::inverse() const {
  std::string s;
  s.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) s.push_back(freeboundary::inverse(*it));
  return reduce(s);
}

ReducedWord ReducedWord::prefix(std::size_t n) const {
  return reduce(std::string_view(letters_).substr(0, n));
}

bool ReducedWord::starts_with(const ReducedWord& w) const {
  return letters_.compare(0, w.letters_.size(), w.letters_) == 0 && w.size() <= size();
}

long ReducedWord::exponent_sum_a() const {
  return std::accumulate(letters_.begin(), letters_.end(), 0L,
                         [](long s, char c) { return s + (c == 'a') - (c == 'A'); });
}

long ReducedWord::exponent_sum_b() const {
  return std::accumulate(letters_.begin(), letters_.end(), 0L,
                         [](long s, char c) { return s + (c == 'b') - (c == 'B'); });
}

ReducedWord power(char letter, long n) {
  const char c = n >= 0 ? letter : inverse(letter);
  return reduce(std::string(static_cast<std::size_t>(n >= 0 ? n : -n), c));
}

std::size_t cylinder_count(std::size_t level) {
  if (level == 0) return 1;
  std::size_t n = 4;
  for (std::size_t i = 1; i < level; ++i) n *= 3;
  return n;
}

const std::vector<ReducedWord>& cylinders(std::size_t level) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<ReducedWord>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;

  std::vector<std::string> words{""};
  for (std::size_t l = 0; l < level; ++l) {
    std::vector<std::string> next;
    next.reserve(words.size() * 4);
    for (const auto& w : words)
      for (char c : kAlphabet)
        if (w.empty() || w.back() != inverse(c)) next.push_back(w + c);
    words = std::move(next);
  }
  std::vector<ReducedWord> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(reduce(w));
  return cache.emplace(level, std::move(out)).first->second;
}

std::size_t cylinder_index(const ReducedWord& w) {
  if (w.empty()) return 0;
  const std::string& s = w.letters();
  std::size_t idx = static_cast<std::size_t>(code(s[0]));
  for (std::size_t k = 1; k < s.size(); ++k) {
    const int forbidden = code(s[k - 1]) ^ 1;
    const int c = code(s[k]);
    idx = idx * 3 + static_cast<std::size_t>(c - (c > forbidden ? 1 : 0));
  }
  return idx;
}

BoundaryVector::BoundaryVector(std::size_t level)
    : level_(level), coeffs_(cylinder_count(level), 0) {
  if (level == 0) throw PreconditionError("BoundaryVector: level must be >= 1");
}

BoundaryVector::BoundaryVector(std::size_t level, std::vector<Coeff> coeffs)
    : level_(level), coeffs_(std::move(coeffs)) {
  if (level == 0) throw PreconditionError("BoundaryVector: level must be >= 1");
  if (coeffs_.size() != cylinder_count(level))
    throw PreconditionError("BoundaryVector: expected " + std::to_string(cylinder_count(level)) +
                            " coefficients at level " + std::to_string(level));
}

std::size_t BoundaryVector::slot(const ReducedWord& w) const {
  if (w.size() != level_)
    throw PreconditionError("BoundaryVector: word '" + w.letters() + "' is not at level " +
                            std::to_string(level_));
  return cylinder_index(w);
}

BoundaryVector BoundaryVector::cylinder(const ReducedWord& w) {
  if (w.empty()) throw PreconditionError("BoundaryVector::cylinder: empty word");
  BoundaryVector v(w.size());
  v[w] = 1;
  return v;
}

BoundaryVector BoundaryVector::cylinder(const ReducedWord& w, std::size_t level) {
  if (level < w.size()) throw PreconditionError("BoundaryVector::cylinder: level below word length");
  if (w.empty()) return ones(level);
  return refine_to(cylinder(w), level);
}

BoundaryVector BoundaryVector::ones(std::size_t level) {
  return BoundaryVector(level, std::vector<Coeff>(cylinder_count(level), 1));
}

BoundaryVector::Coeff BoundaryVector::evaluate(const ReducedWord& prefix) const {
  if (prefix.size() < level_) throw PreconditionError("BoundaryVector::evaluate: prefix too short");
  return coeffs_[cylinder_index(prefix.prefix(level_))];
}

BoundaryVector::Coeff BoundaryVector::total() const {
  return std::accumulate(coeffs_.begin(), coeffs_.end(), Coeff{0});
}

bool BoundaryVector::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Coeff c) { return c == 0; });
}

BoundaryVector& BoundaryVector::operator+=(const BoundaryVector& o) {
  if (o.level_ != level_) throw PreconditionError("BoundaryVector: level mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

BoundaryVector& BoundaryVector::operator-=(const BoundaryVector& o) {
  if (o.level_ != level_) throw PreconditionError("BoundaryVector: level mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

BoundaryVector operator*(BoundaryVector::Coeff k, BoundaryVector x) {
  for (auto& c : x.coeffs_) c *= k;
  return x;
}

BoundaryVector refine(const BoundaryVector& v) {
  BoundaryVector out(v.level() + 1);
  const auto& words = cylinders(v.level());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto c = v.coeffs()[i];
    if (c == 0) continue;
    for (char s : kAlphabet)
      if (words[i].last() != inverse(s)) out[reduce(words[i].letters() + s)] += c;
  }
  return out;
}

BoundaryVector refine_to(const BoundaryVector& v, std::size_t level) {
  if (level < v.level()) throw PreconditionError("refine_to: target level below source level");
  BoundaryVector out = v;
  while (out.level() < level) out = refine(out);
  return out;
}

BoundaryVector act_generator(char g, const BoundaryVector& v) {
  const char ginv = inverse(g);
  const std::size_t target = v.level() + 1;
  BoundaryVector out(target);
  const auto& words = cylinders(v.level());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto c = v.coeffs()[i];
    if (c == 0) continue;
    const ReducedWord& w = words[i];
    if (w.first() != ginv) {
      out[reduce(std::string(1, g) + w.letters())] += c;
      continue;
    }
    // g cancels the first letter: g * (g^-1 w') = w'.
    const ReducedWord rest = reduce(std::string_view(w.letters()).substr(1));
    if (!rest.empty()) {
      out += c * BoundaryVector::cylinder(rest, target);
      continue;
    }
    // Single letter g^-1: image is every infinite word not starting with g.
    BoundaryVector img(1);
    for (char s : kAlphabet)
      if (s != g) img[reduce(std::string(1, s))] = 1;
    out += c * refine_to(img, target);
  }
  return out;
}

ReducedWord minimality_witness(const ReducedWord& prefix, char target_first, long N) {
  if (N == 0) throw PreconditionError("minimality_witness: N must be nonzero");
  const char tinv = inverse(target_first);
  char s1 = 0, s2 = 0;
  for (char c : kAlphabet)
    if ((prefix.empty() || c != inverse(prefix.last())) && c != 'B') {
      s1 = c;
      break;
    }
  for (char c : kAlphabet)
    if (c != 'B' && c != tinv) {
      s2 = c;
      break;
    }
  // At most two letters are excluded in each slot, so both always exist.
  if (!s1 || !s2) throw std::logic_error("minimality_witness: no admissible letter");
  const std::string raw = prefix.letters() + s1 + 'b' + power('a', N).letters() + 'b' + s2;
  ReducedWord g = reduce(raw);
  if (g.size() != raw.size()) throw std::logic_error("minimality_witness: construction reduced");
  return g;
}

ReducedWord infiniteness_witness(const ReducedWord& omega, char s1, char s2) {
  if (omega.empty()) throw PreconditionError("infiniteness_witness: omega must be nonempty");
  if (s1 == inverse(omega.last()) || s1 == 'B')
    throw PreconditionError("infiniteness_witness: s1 reduces against omega or b");
  if (s2 == 'A' || s2 == inverse(omega.first()))
    throw PreconditionError("infiniteness_witness: s2 reduces against a or omega");
  const ReducedWord head = reduce(omega.letters() + s1 + 'b');
  const ReducedWord tail = reduce(std::string("a") + s2);
  const long N = -(head.exponent_sum_a() + tail.exponent_sum_a());
  const long M = -(head.exponent_sum_b() + tail.exponent_sum_b());
  if (N == 0 || M == 0)
    throw PreconditionError("infiniteness_witness: solved exponent vanishes for this letter pair");
  const std::string raw = head.letters() + power('a', N).letters() + power('b', M).letters() + tail.letters();
  ReducedWord g = reduce(raw);
  if (g.size() != raw.size()) throw std::logic_error("infiniteness_witness: construction reduced");
  return g;
}

ReducedWord infiniteness_witness(const ReducedWord& omega) {
  if (omega.empty()) throw PreconditionError("infiniteness_witness: omega must be nonempty");
  for (char s1 : kAlphabet) {
    if (s1 == inverse(omega.last()) || s1 == 'B') continue;
    for (char s2 : kAlphabet) {
      if (s2 == 'A' || s2 == inverse(omega.first())) continue;
      const ReducedWord head = reduce(omega.letters() + s1 + 'b');
      const ReducedWord tail = reduce(std::string("a") + s2);
      if (head.exponent_sum_a() + tail.exponent_sum_a() == 0) continue;
      if (head.exponent_sum_b() + tail.exponent_sum_b() == 0) continue;
      return infiniteness_witness(omega, s1, s2);
    }
  }
  throw std::logic_error("infiniteness_witness: no admissible letter pair");
}

}  // namespace crossk::freeboundary

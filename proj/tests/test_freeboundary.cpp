#include <doctest.h>

#include <random>
#include <string>

#include "crossk/freeboundary.hpp"

using namespace crossk;
using namespace crossk::freeboundary;

namespace {

std::string random_reduced(std::mt19937& rng, std::size_t len) {
  const std::string alpha = "aAbB";
  std::string s;
  while (s.size() < len) {
    const char c = alpha[rng() % 4];
    if (!s.empty() && inverse(s.back()) == c) continue;
    s.push_back(c);
  }
  return s;
}

bool is_reduced_string(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    const char x = s[i - 1], y = s[i];
    if (x != y && (x | 0x20) == (y | 0x20)) return false;
  }
  return true;
}

long count_exponent(const std::string& s, char lower) {
  long n = 0;
  for (char c : s) {
    if (c == lower) ++n;
    if (c == static_cast<char>(lower - 32)) --n;
  }
  return n;
}

}  // namespace

TEST_CASE("free reduction") {
  CHECK(reduce("aA").empty());
  CHECK(reduce("abBa").letters() == "aa");
  CHECK(reduce("abBAb").letters() == "b");
  CHECK(reduce("").empty());
  CHECK_THROWS_AS(reduce("abx"), PreconditionError);
  CHECK(power('a', 3).letters() == "aaa");
  CHECK(power('b', -2).letters() == "BB");
  CHECK(power('a', 0).empty());

  std::mt19937 rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto x = reduce(random_reduced(rng, 1 + rng() % 8));
    const auto y = reduce(random_reduced(rng, 1 + rng() % 8));
    CHECK(is_reduced_string((x * y).letters()));
    CHECK((x * x.inverse()).empty());
    CHECK(((x * y) * y.inverse()) == x);
  }
}

TEST_CASE("cylinders") {
  CHECK(cylinder_count(1) == 4);
  CHECK(cylinder_count(2) == 12);
  CHECK(cylinder_count(3) == 36);
  const auto& c2 = cylinders(2);
  REQUIRE(c2.size() == 12);
  CHECK(c2.front().letters() == "aa");
  for (std::size_t i = 0; i < c2.size(); ++i) {
    CHECK(cylinder_index(c2[i]) == i);
    CHECK(is_reduced_string(c2[i].letters()));
    if (i > 0) CHECK(c2[i - 1] != c2[i]);
  }
}

TEST_CASE("refinement preserves values") {
  std::mt19937 rng(2);
  for (int t = 0; t < 20; ++t) {
    BoundaryVector v(2);
    for (const auto& w : cylinders(2)) v[w] = static_cast<long>(rng() % 7) - 3;
    const auto r = refine_to(v, 4);
    CHECK(r.level() == 4);
    for (int s = 0; s < 30; ++s) {
      const auto xi = reduce(random_reduced(rng, 6));
      CHECK(r.evaluate(xi) == v.evaluate(xi));
    }
  }
  CHECK(refine(BoundaryVector::ones(1)) == BoundaryVector::ones(2));
  CHECK(BoundaryVector::ones(3).total() == 36);
}

TEST_CASE("generator action matches evaluation at translated boundary points") {
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t level = 1 + rng() % 3;
    BoundaryVector v(level);
    for (const auto& w : cylinders(level)) v[w] = static_cast<long>(rng() % 9) - 4;
    for (char g : std::string("aAbB")) {
      const auto gv = act_generator(g, v);
      CHECK(gv.level() == level + 1);
      for (int s = 0; s < 40; ++s) {
        const auto xi = reduce(random_reduced(rng, 10));
        const auto moved = reduce(std::string(1, inverse(g)) + xi.letters());
        CHECK(gv.evaluate(xi) == v.evaluate(moved));
      }
    }
  }
}

TEST_CASE("cylinder translation examples") {
  // a * p_b = p_{ab}, a * p_A = 1 - p_a.
  CHECK(act_generator('a', BoundaryVector::cylinder(reduce("b"))) == BoundaryVector::cylinder(reduce("ab")));
  const auto img = act_generator('a', BoundaryVector::cylinder(reduce("A")));
  CHECK(img == refine(BoundaryVector::ones(1) - BoundaryVector::cylinder(reduce("a"))));
  CHECK(act_generator('A', act_generator('a', BoundaryVector::cylinder(reduce("ab")))) ==
        refine_to(BoundaryVector::cylinder(reduce("ab")), 4));
}

TEST_CASE("minimality witness") {
  const auto g = minimality_witness(reduce("ab"), 'a', 3);
  CHECK(g.starts_with(reduce("ab")));
  CHECK(is_reduced_string(g.letters()));
  CHECK_THROWS_AS(minimality_witness(reduce("ab"), 'a', 0), PreconditionError);
  // g moves the cylinder of the target into the cylinder of the prefix.
  const auto moved = g * reduce("aab");
  CHECK(moved.starts_with(reduce("ab")));
}

TEST_CASE("infiniteness witness example") {
  CHECK(infiniteness_witness(reduce("a"), 'b', 'b').letters() == "abbAABBBab");
  CHECK_THROWS_AS(infiniteness_witness(reduce("a"), 'A', 'b'), PreconditionError);
}

TEST_CASE("infiniteness witness properties") {
  std::mt19937 rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto omega = reduce(random_reduced(rng, 1 + rng() % 8));
    const auto g = infiniteness_witness(omega);
    CHECK(is_reduced_string(g.letters()));
    CHECK(count_exponent(g.letters(), 'a') == 0);
    CHECK(count_exponent(g.letters(), 'b') == 0);
    CHECK(g.letters().rfind(omega.letters(), 0) == 0);
    const auto gw = g * omega;
    CHECK(gw.size() == g.size() + omega.size());
    CHECK(gw.size() > omega.size());
    CHECK(gw.starts_with(omega));
  }
}

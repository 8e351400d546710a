#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "crossk/denjoy.hpp"
#include "crossk/symdyn.hpp"

using namespace crossk;
using namespace crossk::denjoy;

namespace {

// Cut circle laid out on a line of length 2pi + sum of inserted lengths.
struct Unrolled {
  std::vector<double> angle;  // index j + n
  std::vector<double> len;
  double total = 0.0;
  long n = 0;

  explicit Unrolled(const DenjoySystem& sys) : n(static_cast<long>(sys.depth())) {
    total = 2 * std::numbers::pi;
    for (long j = -n; j <= n; ++j) {
      angle.push_back(sys.orbit_angle(j));
      len.push_back(std::pow(0.5, std::abs(j)));
      total += len.back();
    }
  }
  double before(double t) const {
    double s = t;
    for (std::size_t k = 0; k < angle.size(); ++k)
      if (angle[k] < t) s += len[k];
    return s;
  }
  double pos(const CutPoint& p) const {
    if (const auto* o = std::get_if<OrbitPoint>(&p)) {
      const std::size_t k = static_cast<std::size_t>(o->index + n);
      const double left = before(angle[k]);
      return o->side == Side::left ? left : left + len[k];
    }
    return before(std::get<GenericPoint>(p).angle);
  }
  double dist(const CutPoint& x, const CutPoint& y) const {
    double d = std::fmod(pos(y) - pos(x), total);
    if (d < 0) d += total;
    return std::min(d, total - d);
  }
};

}  // namespace

TEST_CASE("angle parsing") {
  CHECK(parse_rotation_angle("golden") == doctest::Approx(2 * std::numbers::pi / (std::numbers::phi * std::numbers::phi)));
  CHECK(parse_rotation_angle("2pi/phi^2") == doctest::Approx(golden_angle()));
  CHECK(parse_rotation_angle("pi/3") == doctest::Approx(std::numbers::pi / 3));
  CHECK(parse_rotation_angle("2*pi") == doctest::Approx(2 * std::numbers::pi));
  CHECK(parse_rotation_angle("0.75") == doctest::Approx(0.75));
  CHECK_THROWS_AS(parse_rotation_angle("tau"), PreconditionError);
  CHECK_THROWS_AS(parse_rotation_angle("pi/0"), PreconditionError);
}

TEST_CASE("rational rotations are rejected") {
  CHECK_THROWS_AS(DenjoySystem(std::numbers::pi / 3, 0.0, 4), PreconditionError);
  CHECK_THROWS_AS(DenjoySystem(std::numbers::pi * 7 / 997, 0.0, 4), PreconditionError);
  CHECK_THROWS_AS(DenjoySystem(4.0, 0.0, 4), PreconditionError);
  CHECK_NOTHROW(DenjoySystem(golden_angle() / 2, 0.0, 4));
}

TEST_CASE("distance across one inserted interval") {
  const DenjoySystem sys(golden_angle() / 2, 0.3, 6);
  const auto d = denjoy_distance(OrbitPoint{0, Side::left}, OrbitPoint{0, Side::right}, sys);
  CHECK(d.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.bound == doctest::Approx(2.0 / 64));
  CHECK(denjoy_distance(OrbitPoint{2, Side::left}, OrbitPoint{2, Side::right}, sys).value == doctest::Approx(0.25));
  CHECK(denjoy_distance(OrbitPoint{3, Side::right}, OrbitPoint{3, Side::right}, sys).value == 0.0);
  CHECK_THROWS_AS(denjoy_distance(OrbitPoint{7, Side::left}, OrbitPoint{0, Side::left}, sys), PreconditionError);
  CHECK_THROWS_AS(denjoy_distance(GenericPoint{sys.orbit_angle(1)}, OrbitPoint{0, Side::left}, sys),
                  PreconditionError);
}

TEST_CASE("distance agrees with the unrolled line") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  for (double lambda : {golden_angle() / 2, std::sqrt(2.0), 1.0}) {
    const DenjoySystem sys(lambda, 0.7, 5);
    const Unrolled line(sys);
    auto random_point = [&]() -> CutPoint {
      if (rng() % 2) return OrbitPoint{static_cast<long>(rng() % 11) - 5, rng() % 2 ? Side::left : Side::right};
      return GenericPoint{u(rng)};
    };
    for (int t = 0; t < 300; ++t) {
      const CutPoint x = random_point(), y = random_point();
      const auto d = denjoy_distance(x, y, sys);
      CHECK(d.value == doctest::Approx(line.dist(x, y)).epsilon(1e-12));
      CHECK(d.value == doctest::Approx(denjoy_distance(y, x, sys).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("triangle inequality") {
  const DenjoySystem sys(golden_angle() / 2, 0.0, 6);
  std::mt19937 rng(22);
  std::vector<CutPoint> pts;
  for (long j = -6; j <= 6; ++j) {
    pts.push_back(OrbitPoint{j, Side::left});
    pts.push_back(OrbitPoint{j, Side::right});
  }
  for (int i = 0; i < 10; ++i) pts.push_back(GenericPoint{0.05 + 0.6 * i});
  for (int t = 0; t < 500; ++t) {
    const auto& x = pts[rng() % pts.size()];
    const auto& y = pts[rng() % pts.size()];
    const auto& z = pts[rng() % pts.size()];
    CHECK(denjoy_distance(x, z, sys).value <=
          denjoy_distance(x, y, sys).value + denjoy_distance(y, z, sys).value + 1e-12);
  }
}

TEST_CASE("clopen vectors and the induced action") {
  const DenjoySystem sys(golden_angle() / 2, 0.0, 3);
  const auto x0 = ClopenVector::arc(3, 0);
  CHECK(x0.evaluate(OrbitPoint{0, Side::right}, sys) == 1);
  CHECK(x0.evaluate(OrbitPoint{0, Side::left}, sys) == 0);
  CHECK(x0.evaluate(OrbitPoint{1, Side::left}, sys) == 1);
  CHECK(x0.evaluate(OrbitPoint{1, Side::right}, sys) == 0);
  CHECK(induced_action(x0, 2) == ClopenVector::arc(3, 2));
  CHECK(induced_action(ClopenVector::unit(3), 5) == ClopenVector::unit(3));
  CHECK_THROWS_AS(induced_action(ClopenVector::arc(3, 3), 1), WindowOverflow);
  CHECK(measure_functional(ClopenVector::unit(3), sys) == doctest::Approx(2 * std::numbers::pi));
  CHECK(measure_functional(x0 + 2 * ClopenVector::arc(3, -1), sys) == doctest::Approx(3 * sys.lambda()));
}

TEST_CASE("the induced action is rotation of the evaluation") {
  const DenjoySystem sys(std::sqrt(2.0), 0.4, 6);
  std::mt19937 rng(23);
  for (int t = 0; t < 20; ++t) {
    ClopenVector v(6);
    for (long j = -3; j <= 3; ++j) v.arc_coeff(j) = static_cast<long>(rng() % 5) - 2;
    v.unit_coeff() = 1;
    const auto w = induced_action(v, 1);
    for (long j = -4; j <= 3; ++j)
      for (Side s : {Side::left, Side::right})
        CHECK(w.evaluate(OrbitPoint{j + 1, s}, sys) == v.evaluate(OrbitPoint{j, s}, sys));
  }
}

TEST_CASE("basis independence") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const DenjoySystem sys(golden_angle() / 2, 0.0, n);
    CHECK(basis_evaluation_rank(sys) == 2 * n + 2);
  }
}

TEST_CASE("disjoint orbit neighborhoods") {
  for (std::size_t m = 1; m <= 5; ++m) {
    const DenjoySystem sys(golden_angle() / 2, 0.0, 8);
    const auto arcs = disjoint_orbit_neighborhoods(sys, m);
    REQUIRE(arcs.size() == m + 1);
    CHECK(arcs_pairwise_disjoint(arcs, sys));
    for (std::size_t j = 0; j <= m; ++j)
      CHECK(in_arc(GenericPoint{sys.orbit_angle(static_cast<long>(j))}, arcs[j].from, arcs[j].to, sys));
    CHECK(neighborhood_epimorphism_rank(arcs, sys) == m);
  }
  const DenjoySystem small(golden_angle() / 2, 0.0, 2);
  CHECK_THROWS_AS(disjoint_orbit_neighborhoods(small, 3), PreconditionError);
}

TEST_CASE("golden rotation coding has Fibonacci factors") {
  const DenjoySystem sys(golden_angle(), 0.0, 4);
  const std::string word = rotation_coding(sys, 0.1234, 3000);
  const std::string fib = symdyn::fibonacci_word(20);
  for (std::size_t k = 1; k <= 7; ++k) {
    std::set<std::string> a, b;
    for (std::size_t i = 0; i + k <= word.size(); ++i) a.insert(word.substr(i, k));
    for (std::size_t i = 0; i + k <= fib.size(); ++i) b.insert(fib.substr(i, k));
    CHECK(a == b);
    CHECK(a.size() == k + 1);
  }
  CHECK(rotation_coding(sys, 0.0, 10).size() == 10);
}

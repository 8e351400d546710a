#pragma once

// Finite model of the Denjoy Cantor set: a circle rotation by lambda whose
// orbit {a_j} is cut open, each a_j replaced by an interval of length
// 2^-|j|. Only orbit indices |j| <= depth are tracked explicitly.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crossk/common.hpp"

namespace crossk::denjoy {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

class DenjoySystem {
 public:
  // Throws PreconditionError unless 0 < lambda < pi and lambda/pi is not a
  // rational with denominator <= 1000 (to within 1e-12).
  DenjoySystem(double lambda, double base_point, std::size_t depth);

  double lambda() const { return lambda_; }
  double base_point() const { return base_; }
  std::size_t depth() const { return depth_; }

  // a_j = a_0 + j*lambda, reduced into [0, 2pi).
  double orbit_angle(long j) const;

 private:
  double lambda_;
  double base_;
  std::size_t depth_;
};

// The golden rotation 2pi/phi^2.
double golden_angle();

// Accepts "golden", "2pi/phi^2", "<p>pi/<q>", "<p>*pi", "pi/<q>", "<x>pi" and
// plain decimals (radians). Throws PreconditionError on anything else.
double parse_rotation_angle(std::string_view text);

enum class Side { left, right };

// Endpoint of an inserted interval: `left` is the end reached from smaller
// angles, `right` the end facing larger angles.
struct OrbitPoint {
  long index = 0;
  Side side = Side::left;
  friend bool operator==(const OrbitPoint&, const OrbitPoint&) = default;
};

// A point of the circle off the orbit.
struct GenericPoint {
  double angle = 0.0;
  friend bool operator==(const GenericPoint&, const GenericPoint&) = default;
};

using CutPoint = std::variant<OrbitPoint, GenericPoint>;

// Metric value with the truncation uncertainty of the orbit sum.
struct Measured {
  double value = 0.0;
  double bound = 0.0;
};

// rho(x, y) = min(m(x, y), m(y, x)) where m adds the forward arc length and
// the lengths of inserted intervals crossed on the way. The orbit sum runs
// over |j| <= depth; `bound` is the neglected tail 2 * 2^-depth.
Measured denjoy_distance(const CutPoint& x, const CutPoint& y, const DenjoySystem& sys);

// Integer combination of 1 and the arcs x_j = [a_j, a_{j+1}], |j| <= depth.
// Coefficient layout: [unit, x_{-n}, ..., x_n].
class ClopenVector {
 public:
  using Coeff = std::int64_t;

  explicit ClopenVector(std::size_t depth);
  ClopenVector(std::size_t depth, std::vector<Coeff> coeffs);

  static ClopenVector unit(std::size_t depth);
  static ClopenVector arc(std::size_t depth, long j);

  std::size_t depth() const { return depth_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }

  Coeff unit_coeff() const { return coeffs_[0]; }
  Coeff& unit_coeff() { return coeffs_[0]; }
  Coeff arc_coeff(long j) const { return coeffs_[slot(j)]; }
  Coeff& arc_coeff(long j) { return coeffs_[slot(j)]; }

  // Value of the function at a cut point.
  Coeff evaluate(const CutPoint& p, const DenjoySystem& sys) const;

  ClopenVector& operator+=(const ClopenVector& o);
  friend ClopenVector operator+(ClopenVector x, const ClopenVector& y) { return x += y; }
  friend ClopenVector operator*(Coeff k, ClopenVector x);
  friend bool operator==(const ClopenVector&, const ClopenVector&) = default;

 private:
  std::size_t slot(long j) const;

  std::size_t depth_;
  std::vector<Coeff> coeffs_;
};

// Indicator of the arc [a_p, a_q] (forward from a_p to a_q) at a cut point.
bool in_arc(const CutPoint& p, long from, long to, const DenjoySystem& sys);

// alpha^power: 1 -> 1, x_j -> x_{j+power}. Throws WindowOverflow when a
// nonzero coefficient would leave the window.
ClopenVector induced_action(const ClopenVector& v, long power);

// Integral against Lebesgue measure restricted to the Cantor set:
// 2pi * unit + lambda * sum of arc coefficients.
double measure_functional(const ClopenVector& v, const DenjoySystem& sys);

// Symbol k is 2 when start + k*lambda (measured from a_0) lies in [0, lambda),
// else 1. A start whose orbit hits a partition endpoint within `length`
// steps is nudged by 1e-9 first.
std::string rotation_coding(const DenjoySystem& sys, double start, std::size_t length);

// Clopen arc [a_from, a_to] in the cut circle.
struct OrbitArc {
  long from = 0;
  long to = 0;
};

// Arcs U_0..U_m with U_j = rotation^j(U_0), a_j inside U_j, pairwise disjoint.
// Throws PreconditionError when m exceeds the depth.
std::vector<OrbitArc> disjoint_orbit_neighborhoods(const DenjoySystem& sys, std::size_t m);

bool arcs_pairwise_disjoint(const std::vector<OrbitArc>& arcs, const DenjoySystem& sys);

// Rank of f -> (f(a_0), ..., f(a_{m-1})) on the span of chi_{U_j} - chi_{U_{j-1}},
// j = 1..m. Equals m when the neighborhoods give an epimorphism onto Z^m.
std::size_t neighborhood_epimorphism_rank(const std::vector<OrbitArc>& arcs, const DenjoySystem& sys);

// Rank of the evaluation matrix of {1, x_{-n}, ..., x_n} on both sides of every
// cut a_{-n}..a_{n+1} plus one interior point. Full rank (2n+2) certifies the
// basis is linearly independent.
std::size_t basis_evaluation_rank(const DenjoySystem& sys);

}  // namespace crossk::denjoy

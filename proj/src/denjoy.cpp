#include "crossk/denjoy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "crossk/zlattice.hpp"

namespace crossk::denjoy {

namespace {

double wrap(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

// Forward (increasing-angle) distance from `from` to `to`, in [0, 2pi).
double forward(double from, double to) { return wrap(to - from); }

double position(const CutPoint& p, const DenjoySystem& sys) {
  if (const auto* o = std::get_if<OrbitPoint>(&p)) return sys.orbit_angle(o->index);
  return wrap(std::get<GenericPoint>(p).angle);
}

void require_representable(const CutPoint& p, const DenjoySystem& sys) {
  const long n = static_cast<long>(sys.depth());
  if (const auto* o = std::get_if<OrbitPoint>(&p)) {
    if (o->index < -n || o->index > n)
      throw PreconditionError("denjoy: orbit index " + std::to_string(o->index) +
                              " beyond depth " + std::to_string(n));
    return;
  }
  const double t = wrap(std::get<GenericPoint>(p).angle);
  for (long j = -n; j <= n; ++j) {
    const double d = forward(t, sys.orbit_angle(j));
    if (std::min(d, kTwoPi - d) < 1e-12)
      throw PreconditionError("denjoy: generic point coincides with orbit point a_" + std::to_string(j));
  }
}

double interval_length(long j) { return std::ldexp(1.0, -static_cast<int>(std::labs(j))); }

// m(x, y): forward arc length plus inserted intervals crossed, |j| <= depth.
double directed_length(const CutPoint& x, const CutPoint& y, const DenjoySystem& sys) {
  if (x == y) return 0.0;
  const long n = static_cast<long>(sys.depth());
  const auto* ox = std::get_if<OrbitPoint>(&x);
  const auto* oy = std::get_if<OrbitPoint>(&y);
  const double px = position(x, sys);

  double len = forward(px, position(y, sys));
  if (ox && oy && ox->index == oy->index) len = ox->side == Side::left ? 0.0 : kTwoPi;

  double crossed = 0.0;
  for (long k = -n; k <= n; ++k) {
    bool counted;
    if (ox && ox->index == k)
      counted = ox->side == Side::left;
    else if (oy && oy->index == k)
      counted = oy->side == Side::right;
    else {
      const double d = forward(px, sys.orbit_angle(k));
      counted = d > 0.0 && d < len;
    }
    if (counted) crossed += interval_length(k);
  }
  return len + crossed;
}

}  // namespace

DenjoySystem::DenjoySystem(double lambda, double base_point, std::size_t depth)
    : lambda_(lambda), base_(wrap(base_point)), depth_(depth) {
  if (!(lambda > 0.0 && lambda < std::numbers::pi))
    throw PreconditionError("DenjoySystem: lambda must lie in (0, pi)");
  const double r = lambda / std::numbers::pi;
  for (int q = 1; q <= 1000; ++q) {
    const double x = q * r;
    if (std::fabs(x - std::round(x)) <= 1e-12 * q)
      throw PreconditionError("DenjoySystem: lambda/pi is (numerically) rational with denominator " +
                              std::to_string(q));
  }
}

double DenjoySystem::orbit_angle(long j) const {
  return wrap(base_ + static_cast<double>(j) * lambda_);
}

double golden_angle() {
  const double phi = std::numbers::phi;
  return kTwoPi / (phi * phi);
}

double parse_rotation_angle(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(c)));
  if (s == "golden" || s == "2pi/phi^2") return golden_angle();

  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size() || !std::isfinite(v))
      throw PreconditionError("cannot parse angle '" + std::string(text) + "'");
    return v;
  };

  const auto at = s.find("pi");
  if (at == std::string::npos) return number(s);

  std::string coef = s.substr(0, at);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  const double c = coef.empty() ? 1.0 : number(coef);
  const std::string rest = s.substr(at + 2);
  double q = 1.0;
  if (rest == "/phi^2")
    q = std::numbers::phi * std::numbers::phi;
  else if (!rest.empty()) {
    if (rest.front() != '/') throw PreconditionError("cannot parse angle '" + std::string(text) + "'");
    q = number(rest.substr(1));
    if (q == 0.0) throw PreconditionError("angle denominator is zero");
  }
  return c * std::numbers::pi / q;
}

Measured denjoy_distance(const CutPoint& x, const CutPoint& y, const DenjoySystem& sys) {
  require_representable(x, sys);
  require_representable(y, sys);
  const double v = std::min(directed_length(x, y, sys), directed_length(y, x, sys));
  return {v, 2.0 * interval_length(static_cast<long>(sys.depth()))};
}

ClopenVector::ClopenVector(std::size_t depth) : depth_(depth), coeffs_(2 * depth + 2, 0) {}

ClopenVector::ClopenVector(std::size_t depth, std::vector<Coeff> coeffs)
    : depth_(depth), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != 2 * depth_ + 2)
    throw PreconditionError("ClopenVector: expected " + std::to_string(2 * depth_ + 2) + " coefficients");
}

ClopenVector ClopenVector::unit(std::size_t depth) {
  ClopenVector v(depth);
  v.coeffs_[0] = 1;
  return v;
}

ClopenVector ClopenVector::arc(std::size_t depth, long j) {
  ClopenVector v(depth);
  v.arc_coeff(j) = 1;
  return v;
}

std::size_t ClopenVector::slot(long j) const {
  const long n = static_cast<long>(depth_);
  if (j < -n || j > n)
    throw WindowOverflow("ClopenVector: arc index " + std::to_string(j) + " outside [-" +
                         std::to_string(n) + ", " + std::to_string(n) + "]");
  return static_cast<std::size_t>(j + n + 1);
}

bool in_arc(const CutPoint& p, long from, long to, const DenjoySystem& sys) {
  if (const auto* o = std::get_if<OrbitPoint>(&p)) {
    if (o->index == from) return o->side == Side::right;
    if (o->index == to) return o->side == Side::left;
  }
  const double start = sys.orbit_angle(from);
  const double len = forward(start, sys.orbit_angle(to));
  const double d = forward(start, position(p, sys));
  return d > 0.0 && d < len;
}

ClopenVector::Coeff ClopenVector::evaluate(const CutPoint& p, const DenjoySystem& sys) const {
  Coeff v = coeffs_[0];
  const long n = static_cast<long>(depth_);
  for (long j = -n; j <= n; ++j)
    if (Coeff c = arc_coeff(j); c != 0 && in_arc(p, j, j + 1, sys)) v += c;
  return v;
}

ClopenVector& ClopenVector::operator+=(const ClopenVector& o) {
  if (o.depth_ != depth_) throw PreconditionError("ClopenVector: depth mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

ClopenVector operator*(ClopenVector::Coeff k, ClopenVector x) {
  for (auto& c : x.coeffs_) c *= k;
  return x;
}

ClopenVector induced_action(const ClopenVector& v, long power) {
  ClopenVector out(v.depth());
  out.unit_coeff() = v.unit_coeff();
  const long n = static_cast<long>(v.depth());
  for (long j = -n; j <= n; ++j) {
    const auto c = v.arc_coeff(j);
    if (c == 0) continue;
    out.arc_coeff(j + power) += c;  // throws WindowOverflow past the edge
  }
  return out;
}

double measure_functional(const ClopenVector& v, const DenjoySystem& sys) {
  const long n = static_cast<long>(v.depth());
  ClopenVector::Coeff arcs = 0;
  for (long j = -n; j <= n; ++j) arcs += v.arc_coeff(j);
  return kTwoPi * static_cast<double>(v.unit_coeff()) + sys.lambda() * static_cast<double>(arcs);
}

std::string rotation_coding(const DenjoySystem& sys, double start, std::size_t length) {
  const double lambda = sys.lambda();
  auto offset = [&](double s, std::size_t k) { return wrap(s - sys.base_point() + static_cast<double>(k) * lambda); };
  auto near = [](double a, double b) {
    const double d = forward(a, b);
    return std::min(d, kTwoPi - d) < 1e-12;
  };

  double s = start;
  for (int attempt = 0; attempt < 100; ++attempt) {
    bool hit = false;
    for (std::size_t k = 0; k < length && !hit; ++k) {
      const double t = offset(s, k);
      hit = near(t, 0.0) || near(t, lambda);
    }
    if (!hit) break;
    s += 1e-9;
  }

  std::string word(length, '1');
  for (std::size_t k = 0; k < length; ++k)
    if (offset(s, k) < lambda) word[k] = '2';
  return word;
}

std::vector<OrbitArc> disjoint_orbit_neighborhoods(const DenjoySystem& sys, std::size_t m) {
  if (m > sys.depth())
    throw PreconditionError("disjoint_orbit_neighborhoods: m exceeds depth");
  double gap = kTwoPi;
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) {
      const double d = forward(sys.orbit_angle(static_cast<long>(i)), sys.orbit_angle(static_cast<long>(j)));
      gap = std::min({gap, d, kTwoPi - d});
    }
  const double reach = gap / 3.0;
  const double a0 = sys.orbit_angle(0);

  // Nearest orbit points strictly before and after a_0, within reach.
  long before = 0, after = 0;
  constexpr long kSearch = 10'000'000;
  for (long k = 1; k <= kSearch && (before == 0 || after == 0); ++k) {
    for (long j : {k, -k}) {
      const double ahead = forward(a0, sys.orbit_angle(j));
      if (after == 0 && ahead > 0.0 && ahead < reach) after = j;
      const double behind = forward(sys.orbit_angle(j), a0);
      if (before == 0 && behind > 0.0 && behind < reach) before = j;
    }
  }
  if (before == 0 || after == 0)
    throw PreconditionError("disjoint_orbit_neighborhoods: orbit too sparse near a_0");

  std::vector<OrbitArc> arcs;
  for (long j = 0; j <= static_cast<long>(m); ++j) arcs.push_back({before + j, after + j});
  return arcs;
}

bool arcs_pairwise_disjoint(const std::vector<OrbitArc>& arcs, const DenjoySystem& sys) {
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const double si = sys.orbit_angle(arcs[i].from);
    const double li = forward(si, sys.orbit_angle(arcs[i].to));
    for (std::size_t j = i + 1; j < arcs.size(); ++j) {
      const double sj = sys.orbit_angle(arcs[j].from);
      const double lj = forward(sj, sys.orbit_angle(arcs[j].to));
      if (forward(si, sj) <= li || forward(sj, si) <= lj) return false;
    }
  }
  return true;
}

std::size_t neighborhood_epimorphism_rank(const std::vector<OrbitArc>& arcs, const DenjoySystem& sys) {
  if (arcs.size() < 2) return 0;
  const std::size_t m = arcs.size() - 1;
  zlattice::IntMatrix eval(m, m);
  for (std::size_t j = 1; j <= m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const CutPoint p = OrbitPoint{static_cast<long>(i), Side::left};
      eval(j - 1, i) = static_cast<long>(in_arc(p, arcs[j].from, arcs[j].to, sys)) -
                       static_cast<long>(in_arc(p, arcs[j - 1].from, arcs[j - 1].to, sys));
    }
  return zlattice::rank(eval);
}

std::size_t basis_evaluation_rank(const DenjoySystem& sys) {
  const long n = static_cast<long>(sys.depth());
  std::vector<CutPoint> points;
  for (long j = -n; j <= n + 1; ++j) {
    points.push_back(OrbitPoint{j, Side::left});
    points.push_back(OrbitPoint{j, Side::right});
  }
  points.push_back(GenericPoint{sys.orbit_angle(0) + 0.5 * sys.lambda()});

  const std::size_t cols = 2 * sys.depth() + 2;
  zlattice::IntMatrix eval(points.size(), cols);
  for (std::size_t r = 0; r < points.size(); ++r) {
    eval(r, 0) = 1;
    for (long j = -n; j <= n; ++j)
      eval(r, static_cast<std::size_t>(j + n + 1)) = static_cast<long>(in_arc(points[r], j, j + 1, sys));
  }
  return zlattice::rank(eval);
}

}  // namespace crossk::denjoy

#include "crossk/shiftspec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace crossk::shiftspec {

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

// Offsets j such that i + j is in the window for every i in gamma.
std::pair<long, long> offset_range(const WeightSequence& x, const std::vector<long>& gamma) {
  if (gamma.empty()) throw PreconditionError("joint spectrum: index set is empty");
  const auto [mn, mx] = std::minmax_element(gamma.begin(), gamma.end());
  const long from = x.lo() - *mn, to = x.hi() - *mx;
  if (from > to) throw PreconditionError("joint spectrum: index set does not fit in the window");
  return {from, to};
}

}  // namespace

WeightSequence::WeightSequence(std::vector<Complex> values, std::size_t half_width)
    : values_(std::move(values)), half_width_(half_width) {
  if (values_.size() != 2 * half_width_ + 1)
    throw PreconditionError("WeightSequence: expected " + std::to_string(2 * half_width_ + 1) + " values");
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw PreconditionError("WeightSequence: non-finite weight");
}

WeightSequence WeightSequence::from_symbols(const symdyn::BiSequence& x) {
  std::vector<Complex> v;
  v.reserve(x.size());
  for (char c : x.symbols()) v.emplace_back(c - '0', 0.0);
  return WeightSequence(std::move(v), x.half_width());
}

WeightSequence WeightSequence::constant(Complex value, std::size_t half_width) {
  return WeightSequence(std::vector<Complex>(2 * half_width + 1, value), half_width);
}

const Complex& WeightSequence::operator[](long i) const {
  if (!contains(i)) throw PreconditionError("WeightSequence: index " + std::to_string(i) + " outside window");
  return values_[static_cast<std::size_t>(i - lo())];
}

TruncOp shift_operator(std::size_t half_width) {
  return weighted_shift(WeightSequence::constant(1.0, half_width));
}

TruncOp weighted_shift(const WeightSequence& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  TruncOp op{x.half_width(), Eigen::MatrixXcd::Zero(n, n)};
  for (Eigen::Index i = 0; i + 1 < n; ++i) op.matrix(i + 1, i) = x.values()[static_cast<std::size_t>(i)];
  return op;
}

TruncOp diagonal_operator(const WeightSequence& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  TruncOp op{x.half_width(), Eigen::MatrixXcd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) op.matrix(i, i) = x.values()[static_cast<std::size_t>(i)];
  return op;
}

double interior_residual(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("interior_residual: shape mismatch");
  const Eigen::Index n = a.rows();
  if (n < 3) return 0.0;
  return (a - b).block(1, 1, n - 2, n - 2).cwiseAbs().maxCoeff();
}

PolarResidual polar_identity_check(const WeightSequence& x) {
  for (const auto& v : x.values())
    if (v.imag() != 0.0 || v.real() < 1.0 || v.real() > 2.0)
      throw PreconditionError("polar_identity_check: weights must be real and lie in [1, 2]");
  const Eigen::MatrixXcd tx = weighted_shift(x).matrix;
  const Eigen::MatrixXcd t = shift_operator(x.half_width()).matrix;
  const Eigen::MatrixXcd x0 = diagonal_operator(x).matrix;
  return {interior_residual(tx, t * x0), interior_residual(x0, psd_sqrt(tx.adjoint() * tx))};
}

double joint_spectrum_score(const WeightSequence& x, const std::vector<long>& gamma,
                            const std::vector<Complex>& point) {
  if (point.size() != gamma.size()) throw PreconditionError("joint spectrum: point and index set differ in size");
  const auto [from, to] = offset_range(x, gamma);
  double best = std::numeric_limits<double>::infinity();
  for (long j = from; j <= to; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < gamma.size(); ++k) s += std::norm(x[gamma[k] + j] - point[k]);
    best = std::min(best, s);
  }
  return best;
}

double b_gamma_bottom(const WeightSequence& x, const std::vector<long>& gamma, const std::vector<Complex>& point) {
  if (point.size() != gamma.size()) throw PreconditionError("joint spectrum: point and index set differ in size");
  const auto [from, to] = offset_range(x, gamma);
  const auto n = static_cast<Eigen::Index>(to - from + 1);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) xi(r, r) = x[gamma[k] + from + r] - point[k];
    b += xi * xi.adjoint() + xi.adjoint() * xi;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() / 2.0;
}

std::vector<GridPoint> joint_grid(const WeightSequence& x, const std::vector<long>& gamma, double lo, double hi,
                                  std::size_t steps, Execution exec) {
  if (gamma.size() != 1 && gamma.size() != 2) throw PreconditionError("joint_grid: index set must have 1 or 2 entries");
  if (steps < 2 || !(hi > lo)) throw PreconditionError("joint_grid: need steps >= 2 and lo < hi");
  offset_range(x, gamma);
  const std::size_t total = steps * steps;
  std::vector<GridPoint> out(total);
  auto coord = [&](std::size_t m) {
    return lo + (hi - lo) * static_cast<double>(m) / static_cast<double>(steps - 1);
  };
  auto fill = [&](std::size_t idx) {
    const double u = coord(idx / steps), v = coord(idx % steps);
    const std::vector<Complex> point =
        gamma.size() == 1 ? std::vector<Complex>{{u, v}} : std::vector<Complex>{{u, 0.0}, {v, 0.0}};
    out[idx] = {u, v, joint_spectrum_score(x, gamma, point)};
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t idx = 0; idx < total; ++idx) fill(idx);
  } else {
    for (std::size_t idx = 0; idx < total; ++idx) fill(idx);
  }
  return out;
}

double unimodular_witness(const WeightSequence& x, Complex lambda, std::size_t n) {
  constexpr double kUnitTol = 1e-12;
  if (std::abs(std::abs(lambda) - 1.0) > kUnitTol) throw PreconditionError("unimodular_witness: |lambda| must be 1");
  const long top = static_cast<long>(n);
  if (!x.contains(top + 1)) throw PreconditionError("unimodular_witness: n + 1 lies outside the window");
  for (long j = 0; j <= top; ++j)
    if (std::abs(std::abs(x[j]) - 1.0) > kUnitTol) throw PreconditionError("unimodular_witness: weights must be unimodular");

  // (T_x - lambda) chi has coefficient alpha_{j-1} x_{j-1} - lambda alpha_j at e_j.
  std::vector<Complex> alpha(n + 1);
  alpha[0] = 1.0;
  for (std::size_t j = 0; j < n; ++j) alpha[j + 1] = alpha[j] * x[static_cast<long>(j)] / lambda;
  double residual = 0.0, norm = 0.0;
  for (std::size_t j = 0; j <= n + 1; ++j) {
    Complex c = 0.0;
    if (j > 0) c += alpha[j - 1] * x[static_cast<long>(j) - 1];
    if (j <= n) c -= lambda * alpha[j];
    residual += std::norm(c);
  }
  for (const auto& a : alpha) norm += std::norm(a);
  return std::sqrt(residual / norm);
}

std::vector<double> witness_sweep(const std::vector<WeightSequence>& weights, const std::vector<WitnessCase>& cases,
                                  Execution exec) {
  std::vector<double> out(cases.size());
  for (const auto& c : cases)
    if (c.sequence >= weights.size()) throw PreconditionError("witness_sweep: sequence index out of range");
  if (exec == Execution::parallel) {
    // Preconditions are checked inside; the first exception is rethrown here.
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < cases.size(); ++i) {
      try {
        out[i] = unimodular_witness(weights[cases[i].sequence], cases[i].lambda, cases[i].n);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::size_t i = 0; i < cases.size(); ++i)
      out[i] = unimodular_witness(weights[cases[i].sequence], cases[i].lambda, cases[i].n);
  }
  return out;
}

WeightSequence random_unimodular(std::size_t half_width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> v(2 * half_width + 1);
  for (auto& z : v) z = std::polar(1.0, angle(rng));
  return WeightSequence(std::move(v), half_width);
}

PeriodicSpectrum periodic_spectrum(const std::vector<double>& period, std::size_t repeats) {
  if (period.empty() || repeats == 0) throw PreconditionError("periodic_spectrum: empty period or zero repeats");
  double log_product = 0.0;
  for (double w : period) {
    if (!(w > 0.0)) throw PreconditionError("periodic_spectrum: weights must be positive");
    log_product += std::log(w);
  }
  const std::size_t p = period.size();
  const auto n = static_cast<Eigen::Index>(p * repeats);
  Eigen::MatrixXcd cyc = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) cyc((i + 1) % n, i) = period[static_cast<std::size_t>(i) % p];

  PeriodicSpectrum out;
  out.radius = std::exp(log_product / static_cast<double>(p));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(cyc, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("periodic_spectrum: eigen solver failed");
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues.push_back(es.eigenvalues()(i));
    out.max_deviation = std::max(out.max_deviation, std::abs(std::abs(es.eigenvalues()(i)) - out.radius));
  }
  return out;
}

PeriodicSpectrum periodic_spectrum(const WeightSequence& x, std::size_t period, std::size_t repeats) {
  const long p = static_cast<long>(period);
  if (p == 0 || !x.contains(p - 1)) throw PreconditionError("periodic_spectrum: period does not fit in the window");
  for (long i = x.lo(); i + p <= x.hi(); ++i)
    if (x[i] != x[i + p])
      throw PreconditionError("periodic_spectrum: sequence is not periodic with period " + std::to_string(period));
  std::vector<double> weights;
  for (long j = 0; j < p; ++j) {
    const Complex w = x[j];
    if (w.imag() != 0.0) throw PreconditionError("periodic_spectrum: weights must be real");
    weights.push_back(w.real());
  }
  return periodic_spectrum(weights, repeats);
}

WeightSequence rotation_weights(double theta, std::size_t half_width) {
  std::vector<Complex> v;
  const long w = static_cast<long>(half_width);
  for (long n = -w; n <= w; ++n) v.emplace_back(2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) * theta) + 3.0, 0.0);
  return WeightSequence(std::move(v), half_width);
}

RotationResidual rotation_weight_check(double theta, std::size_t half_width) {
  if (!(theta > 0.0 && theta < 1.0)) throw PreconditionError("rotation_weight_check: theta must lie in (0, 1)");
  const WeightSequence x = rotation_weights(theta, half_width);
  const Eigen::MatrixXcd tx = weighted_shift(x).matrix;
  const Eigen::MatrixXcd t = shift_operator(half_width).matrix;
  const auto n = static_cast<Eigen::Index>(x.size());
  const long w = static_cast<long>(half_width);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    d(r, r) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r - w) * theta);
  const Eigen::MatrixXcd lhs = psd_sqrt(tx.adjoint() * tx) - 3.0 * Eigen::MatrixXcd::Identity(n, n);
  const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * theta);
  return {interior_residual(lhs, d + d.adjoint()), interior_residual(d * t, phase * t * d)};
}

NonsimplicityReport nonsimplicity_scan(const symdyn::BiSequence& x) {
  NonsimplicityReport report;
  std::vector<std::size_t> widths;
  for (std::size_t w = x.half_width(); w >= 1; w /= 2) widths.push_back(w);
  std::reverse(widths.begin(), widths.end());
  for (std::size_t w : widths) {
    const auto sub = x.restricted(w);
    report.rows.push_back({w, symdyn::longest_run(sub, '1'), symdyn::longest_run(sub, '2')});
  }

  const auto& s = x.symbols();
  if (s.find_first_not_of(s.front()) == std::string::npos) {
    report.not_simple = true;
    report.verdict = "constant sequence: its own orbit closure holds a fixed point, crossed product not simple";
    return report;
  }
  // Still growing across each of the last two quadruplings of the window.
  auto growing = [&](std::size_t RunRow::*field) {
    const auto& r = report.rows;
    const std::size_t m = r.size();
    if (m < 5) return false;
    return r[m - 5].*field < r[m - 3].*field && r[m - 3].*field < r[m - 1].*field;
  };
  if (growing(&RunRow::run1) || growing(&RunRow::run2)) {
    report.not_simple = true;
    report.verdict = "runs grow with the window: a constant sequence lies in the orbit closure, crossed product not simple";
  } else {
    report.verdict = "runs bounded: criterion inconclusive";
  }
  return report;
}

}  // namespace crossk::shiftspec

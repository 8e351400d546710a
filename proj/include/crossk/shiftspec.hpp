#pragma once

// Truncated weighted shifts T_x e_i = x_i e_{i+1} on a symmetric window and
// the finite-dimensional checks behind their spectral properties.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crossk/common.hpp"
#include "crossk/symdyn.hpp"

namespace crossk::shiftspec {

using Complex = std::complex<double>;

// Weights x_i, i in [-W, W].
class WeightSequence {
 public:
  WeightSequence() = default;
  WeightSequence(std::vector<Complex> values, std::size_t half_width);

  static WeightSequence from_symbols(const symdyn::BiSequence& x);
  static WeightSequence constant(Complex value, std::size_t half_width);

  std::size_t half_width() const { return half_width_; }
  std::size_t size() const { return values_.size(); }
  long lo() const { return -static_cast<long>(half_width_); }
  long hi() const { return static_cast<long>(half_width_); }
  bool contains(long i) const { return i >= lo() && i <= hi(); }
  const Complex& operator[](long i) const;
  const std::vector<Complex>& values() const { return values_; }

 private:
  std::vector<Complex> values_;
  std::size_t half_width_ = 0;
};

// Complex matrix over the window; row/column r corresponds to index r - W.
struct TruncOp {
  std::size_t half_width = 0;
  Eigen::MatrixXcd matrix;

  std::size_t slot(long i) const { return static_cast<std::size_t>(i + static_cast<long>(half_width)); }
};

TruncOp shift_operator(std::size_t half_width);
TruncOp weighted_shift(const WeightSequence& x);
// X_0 = diag(x_j).
TruncOp diagonal_operator(const WeightSequence& x);

// Largest entry of |A - B| over rows/columns 1..size-2.
double interior_residual(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct PolarResidual {
  double shift = 0.0;  // || T_x - T X_0 ||
  double sqrt = 0.0;   // || X_0 - sqrt(T_x^* T_x) ||
  double max() const { return shift > sqrt ? shift : sqrt; }
};

// Requires real weights in [1, 2].
PolarResidual polar_identity_check(const WeightSequence& x);

// min over j of sum_{i in gamma} |x_{i+j} - lambda_i|^2, j ranging over the
// positions with every i+j inside the window.
double joint_spectrum_score(const WeightSequence& x, const std::vector<long>& gamma,
                            const std::vector<Complex>& point);

// Half the bottom eigenvalue of the assembled
// B = sum_i (X_i - l_i)(X_i - l_i)^* + (X_i - l_i)^*(X_i - l_i).
double b_gamma_bottom(const WeightSequence& x, const std::vector<long>& gamma, const std::vector<Complex>& point);

struct GridPoint {
  double u = 0.0;
  double v = 0.0;
  double score = 0.0;
};

// Scores on a steps x steps grid over [lo, hi]^2. With one index the grid is
// the complex plane (u + iv); with two indices it is the real pair (u, v).
std::vector<GridPoint> joint_grid(const WeightSequence& x, const std::vector<long>& gamma, double lo, double hi,
                                  std::size_t steps, Execution exec = Execution::serial);

// alpha_0 = 1, alpha_{j+1} = alpha_j x_j / lambda, chi = sum_{j=0}^{n} alpha_j e_j;
// returns || (T_x - lambda) chi || / || chi ||. Requires |x_j| = 1 for
// j = 0..n, |lambda| = 1 and n + 1 inside the window.
double unimodular_witness(const WeightSequence& x, Complex lambda, std::size_t n);

struct WitnessCase {
  std::size_t sequence = 0;  // index into the weight list
  Complex lambda;
  std::size_t n = 0;
};

std::vector<double> witness_sweep(const std::vector<WeightSequence>& weights, const std::vector<WitnessCase>& cases,
                                  Execution exec = Execution::serial);

// Random weights e^{i t}, t uniform in [0, 2pi), on [-W, W].
WeightSequence random_unimodular(std::size_t half_width, std::uint64_t seed);

struct PeriodicSpectrum {
  double radius = 0.0;
  std::vector<Complex> eigenvalues;
  double max_deviation = 0.0;  // max | |mu| - radius |
};

// Cyclic p*m truncation of the shift with period weights (x_0..x_{p-1}).
PeriodicSpectrum periodic_spectrum(const std::vector<double>& period, std::size_t repeats);
// Same, after checking that x has period p on its window.
PeriodicSpectrum periodic_spectrum(const WeightSequence& x, std::size_t period, std::size_t repeats);

struct RotationResidual {
  double sqrt_identity = 0.0;  // sqrt(T_x^* T_x) - 3 = D + D^*
  double commutation = 0.0;    // D T = e^{2 pi i theta} T D
  double max() const { return sqrt_identity > commutation ? sqrt_identity : commutation; }
};

// x_n = 2 cos(2 pi n theta) + 3 and D e_n = e^{2 pi i n theta} e_n on [-W, W].
WeightSequence rotation_weights(double theta, std::size_t half_width);
RotationResidual rotation_weight_check(double theta, std::size_t half_width);

struct RunRow {
  std::size_t half_width = 0;
  std::size_t run1 = 0;
  std::size_t run2 = 0;
};

struct NonsimplicityReport {
  std::vector<RunRow> rows;
  bool not_simple = false;
  std::string verdict;
};

// Longest runs on the sub-windows ..., W/4, W/2, W. The sequence is flagged
// not simple when it is constant or a run keeps growing over the last two
// quadruplings of the window; otherwise the scan is inconclusive.
NonsimplicityReport nonsimplicity_scan(const symdyn::BiSequence& x);

}  // namespace crossk::shiftspec

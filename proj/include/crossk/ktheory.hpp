#pragma once

// Truncated presentations of K_0 and K_1 for crossed products of C(K x dF_2)
// by the diagonal action phi_a = alpha x d_a, phi_b = beta x d_b, where alpha,
// beta act on a finite basis of C(K, Z) and d_g is the boundary action.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crossk/common.hpp"
#include "crossk/freeboundary.hpp"
#include "crossk/zlattice.hpp"

namespace crossk::ktheory {

using zlattice::AbGroupInvariants;
using zlattice::IntMatrix;
using KVector = std::vector<std::int64_t>;

// Linear map on Z^k given on basis vectors; an image may be undefined (the
// basis vector leaves the window).
class PartialMap {
 public:
  PartialMap() = default;
  explicit PartialMap(std::vector<std::optional<KVector>> images);

  static PartialMap identity(std::size_t k);

  std::size_t dim() const { return images_.size(); }
  bool defined(std::size_t e) const { return images_[e].has_value(); }
  const std::optional<KVector>& image(std::size_t e) const { return images_[e]; }

  // Undefined as soon as one basis vector with a nonzero coefficient is.
  std::optional<KVector> apply(const KVector& v) const;

 private:
  std::vector<std::optional<KVector>> images_;
};

class DiagonalActionModel {
 public:
  // Throws PreconditionError when the maps are not mutually inverse or alpha
  // and beta fail to commute where both composites are defined.
  DiagonalActionModel(std::string name, std::size_t depth, std::size_t level, PartialMap alpha,
                      PartialMap alpha_inv, PartialMap beta, PartialMap beta_inv);

  // K a point: alpha = beta = id on Z.
  static DiagonalActionModel point(std::size_t level);
  // Denjoy arcs {1, x_-n..x_n}; alpha(x_j) = x_{j+1}, beta = id.
  static DiagonalActionModel denjoy_alpha(std::size_t depth, std::size_t level);
  // alpha = beta = the Denjoy shift.
  static DiagonalActionModel denjoy_both(std::size_t depth, std::size_t level);
  // Same basis as the Denjoy models with alpha = beta = id.
  static DiagonalActionModel identity(std::size_t depth, std::size_t level);
  // Two points, alpha the swap, beta = id.
  static DiagonalActionModel swap(std::size_t level);

  const std::string& name() const { return name_; }
  std::size_t depth() const { return depth_; }
  std::size_t level() const { return level_; }
  std::size_t k() const { return alpha_.dim(); }

  // K-part of a letter of "aAbB".
  const PartialMap& letter_map(char letter) const;
  const PartialMap& alpha() const { return alpha_; }
  const PartialMap& beta() const { return beta_; }

 private:
  std::string name_;
  std::size_t depth_;
  std::size_t level_;
  PartialMap alpha_, alpha_inv_, beta_, beta_inv_;
};

KVector basis_vector(std::size_t k, std::size_t e);

// Element of C(K, Z) (x) C(dF_2, Z) at boundary level L, coefficient of
// e (x) p_w stored at e * |cylinders(L)| + cylinder_index(w).
struct TensorVector {
  std::size_t k = 0;
  std::size_t level = 1;
  KVector coeffs;

  TensorVector(std::size_t k, std::size_t level);
  std::int64_t& at(std::size_t e, const freeboundary::ReducedWord& w);
  std::int64_t at(std::size_t e, const freeboundary::ReducedWord& w) const;
};

// Components f_a, f_A, f_b, f_B (in that order).
struct QuadVector {
  std::array<KVector, 4> parts;

  explicit QuadVector(std::size_t k);
  KVector& operator[](char letter);
  const KVector& operator[](char letter) const;
  KVector flat() const;
  friend bool operator==(const QuadVector&, const QuadVector&) = default;
};

struct PairVector {
  std::array<KVector, 2> parts;

  explicit PairVector(std::size_t k);
  KVector flat() const;
  friend bool operator==(const PairVector&, const PairVector&) = default;
};

// Rows e (x) p_w - g(e) (x) d_g p_w at level L+1, for every basis e, level-L
// cylinder w and g in {a, b} with g(e) defined.
IntMatrix direct_relation_matrix(const DiagonalActionModel& model);

// Classes of e (x) p_a and e (x) p_b at level L+1, for every basis e.
IntMatrix direct_generator_matrix(const DiagonalActionModel& model);

// Subgroup of the level-(L+1) cokernel generated by direct_generator_matrix.
AbGroupInvariants pv_k0_direct(const DiagonalActionModel& model, Execution exec = Execution::serial);

// Z^{2k} modulo ((2 - a - a^-1) f, (a^-1 - 1)(b - 1) f) and
// ((b^-1 - 1)(a - 1) f, (2 - b - b^-1) f) for every basis f where defined.
IntMatrix reduced_relation_matrix(const DiagonalActionModel& model);
AbGroupInvariants pv_k0_reduced(const DiagonalActionModel& model, Execution exec = Execution::serial);

// span{1, x_-n..x_n} modulo (alpha - 1)^2 x_j, j = -n..n-2.
IntMatrix example16_relation_matrix(std::size_t depth);
AbGroupInvariants example16_quotient(std::size_t depth, Execution exec = Execution::serial);

// (x h)_x = h_x + h_y + h_{y^-1}, y the other generator, for every letter x
// and basis h with x(h) defined. Columns follow QuadVector::flat.
IntMatrix quad_relation_matrix(const DiagonalActionModel& model);

// f (x) p_w  ->  ((w_1 ... w_{L-1})^-1 f) in the component of the last letter
// w_L. Throws WindowOverflow when the K-part leaves the window.
QuadVector phi_map(const KVector& f, const freeboundary::ReducedWord& omega, const DiagonalActionModel& model);
QuadVector phi_map(const TensorVector& v, const DiagonalActionModel& model);

// f_x -> f (x) p_x at level 1.
TensorVector psi_map(const QuadVector& q);

// Gamma(f_a) = (f, 0), Gamma(f_b) = (0, f), Gamma(f_A) = (-f, (beta - 1) f),
// Gamma(f_B) = ((alpha - 1) f, -f). Throws WindowOverflow.
PairVector gamma_map(const QuadVector& q, const DiagonalActionModel& model);
// Theta(f, g) = f_a + g_b.
QuadVector theta_map(const PairVector& p);

struct CheckResult {
  std::string name;
  std::size_t total = 0;
  std::size_t failed = 0;
  bool passed() const { return total > 0 && failed == 0; }
};

struct ReductionReport {
  std::vector<CheckResult> checks;
  std::size_t samples = 0;
  std::size_t candidates = 0;
  std::size_t out_of_window = 0;  // candidates excluded because Phi leaves the window
  bool all_passed() const;
};

struct VerifyOptions {
  std::size_t samples = 50;
  std::uint64_t seed = 0;
  // Negative control: every quad relation is doubled before membership tests.
  bool corrupt_relations = false;
};

// Samples (e (x) p_w, g) pairs and checks that Phi of the relation
// e (x) p_w - phi_g(e (x) p_w) lies in the quad relation lattice; also checks
// Phi o Psi = id, Gamma o Theta = id, Theta o Gamma = id modulo quad
// relations and that Gamma carries quad relations into the reduced ones.
ReductionReport verify_reduction(const DiagonalActionModel& model, const VerifyOptions& options);

// zeta(F, G) = (1 - phi_a) F + (1 - phi_b) G from level L into level L+1. A
// domain column e (x) p_w is present only when the relevant action on e is
// defined; `columns` lists (generator, e, cylinder index) per column.
struct ZetaMatrix {
  IntMatrix matrix;
  struct Column {
    char generator;
    std::size_t e;
    std::size_t cylinder;
  };
  std::vector<Column> columns;
};
ZetaMatrix zeta_matrix(const DiagonalActionModel& model);

struct K1Result {
  std::size_t rank = 0;
  std::vector<zlattice::IntVector> basis;  // in ZetaMatrix column coordinates
};
K1Result pv_k1_kernel(const DiagonalActionModel& model, Execution exec = Execution::serial);

// (1 (x) (f - beta f), 1 (x) (alpha f - f)) for every basis f where both maps
// are defined and the pair is nonzero, in ZetaMatrix column coordinates.
// Vectors needing a missing column are skipped.
std::vector<zlattice::IntVector> m_vectors(const DiagonalActionModel& model, const ZetaMatrix& zeta);

struct SweepRow {
  std::size_t parameter = 0;
  AbGroupInvariants invariants;
  std::optional<bool> matches_prediction;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  // First parameter from which every later row matches the prediction.
  std::optional<std::size_t> stable_from;
  bool free_rank_strictly_increasing = false;
};

SweepTable stabilization_sweep(const std::vector<std::size_t>& parameters,
                               const std::function<AbGroupInvariants(std::size_t)>& compute,
                               const std::function<std::optional<AbGroupInvariants>(std::size_t)>& prediction = {});

}  // namespace crossk::ktheory

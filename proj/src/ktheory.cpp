#include "crossk/ktheory.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "crossk/denjoy.hpp"

namespace crossk::ktheory {

namespace fb = crossk::freeboundary;
using zlattice::Integer;
using zlattice::IntVector;

namespace {

std::size_t component(char letter) {
  switch (letter) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
    default: throw PreconditionError(std::string("unknown letter '") + letter + "'");
  }
}

void add_scaled(KVector& dst, const KVector& src, std::int64_t c) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
}

KVector minus(KVector x, const KVector& y) {
  add_scaled(x, y, -1);
  return x;
}

KVector require(const std::optional<KVector>& v, const char* what) {
  if (!v) throw WindowOverflow(std::string(what) + " leaves the window");
  return *v;
}

IntVector to_integers(const KVector& v) {
  IntVector out;
  out.reserve(v.size());
  for (auto c : v) out.emplace_back(static_cast<long>(c));
  return out;
}

void append(IntMatrix& m, const KVector& row) {
  const IntVector r = to_integers(row);
  m.append_row(r);
}

PartialMap denjoy_shift(std::size_t depth, long power) {
  const std::size_t k = 2 * depth + 2;
  std::vector<std::optional<KVector>> images(k);
  for (std::size_t e = 0; e < k; ++e) {
    KVector coeffs(k, 0);
    coeffs[e] = 1;
    try {
      images[e] = denjoy::induced_action(denjoy::ClopenVector(depth, coeffs), power).coeffs();
    } catch (const WindowOverflow&) {
    }
  }
  return PartialMap(std::move(images));
}

// e (x) refine(p_w) - g(e) (x) d_g(p_w) at level L+1, or nothing when g(e) is
// undefined.
std::optional<KVector> relation_tensor(const DiagonalActionModel& model, std::size_t e,
                                       const fb::ReducedWord& w, char g) {
  const auto& image = model.letter_map(g).image(e);
  if (!image) return std::nullopt;
  const std::size_t n1 = fb::cylinder_count(model.level() + 1);
  const fb::BoundaryVector cyl = fb::BoundaryVector::cylinder(w);
  const fb::BoundaryVector ref = fb::refine(cyl);
  const fb::BoundaryVector moved = fb::act_generator(g, cyl);
  KVector row(model.k() * n1, 0);
  for (std::size_t c = 0; c < n1; ++c) row[e * n1 + c] += ref.coeffs()[c];
  for (std::size_t e2 = 0; e2 < model.k(); ++e2) {
    const auto s = (*image)[e2];
    if (s == 0) continue;
    for (std::size_t c = 0; c < n1; ++c) row[e2 * n1 + c] -= s * moved.coeffs()[c];
  }
  return row;
}

}  // namespace

PartialMap::PartialMap(std::vector<std::optional<KVector>> images) : images_(std::move(images)) {
  for (const auto& im : images_)
    if (im && im->size() != images_.size()) throw PreconditionError("PartialMap: image has wrong dimension");
}

PartialMap PartialMap::identity(std::size_t k) {
  std::vector<std::optional<KVector>> images(k);
  for (std::size_t e = 0; e < k; ++e) images[e] = basis_vector(k, e);
  return PartialMap(std::move(images));
}

std::optional<KVector> PartialMap::apply(const KVector& v) const {
  if (v.size() != dim()) throw PreconditionError("PartialMap::apply: dimension mismatch");
  KVector out(dim(), 0);
  for (std::size_t e = 0; e < dim(); ++e) {
    if (v[e] == 0) continue;
    if (!images_[e]) return std::nullopt;
    add_scaled(out, *images_[e], v[e]);
  }
  return out;
}

KVector basis_vector(std::size_t k, std::size_t e) {
  KVector v(k, 0);
  v.at(e) = 1;
  return v;
}

DiagonalActionModel::DiagonalActionModel(std::string name, std::size_t depth, std::size_t level, PartialMap alpha,
                                         PartialMap alpha_inv, PartialMap beta, PartialMap beta_inv)
    : name_(std::move(name)),
      depth_(depth),
      level_(level),
      alpha_(std::move(alpha)),
      alpha_inv_(std::move(alpha_inv)),
      beta_(std::move(beta)),
      beta_inv_(std::move(beta_inv)) {
  if (level_ == 0) throw PreconditionError("DiagonalActionModel: boundary level must be >= 1");
  const std::size_t k = alpha_.dim();
  if (k == 0 || alpha_inv_.dim() != k || beta_.dim() != k || beta_inv_.dim() != k)
    throw PreconditionError("DiagonalActionModel: maps must share a nonzero dimension");

  auto check_inverse = [&](const PartialMap& f, const PartialMap& g, const char* what) {
    for (std::size_t e = 0; e < k; ++e) {
      if (!f.defined(e)) continue;
      const auto back = g.apply(*f.image(e));
      if (back && *back != basis_vector(k, e))
        throw PreconditionError(std::string("DiagonalActionModel: ") + what + " are not inverse");
    }
  };
  check_inverse(alpha_, alpha_inv_, "alpha and alpha^-1");
  check_inverse(alpha_inv_, alpha_, "alpha^-1 and alpha");
  check_inverse(beta_, beta_inv_, "beta and beta^-1");
  check_inverse(beta_inv_, beta_, "beta^-1 and beta");

  for (std::size_t e = 0; e < k; ++e) {
    if (!alpha_.defined(e) || !beta_.defined(e)) continue;
    const auto ab = alpha_.apply(*beta_.image(e));
    const auto ba = beta_.apply(*alpha_.image(e));
    if (ab && ba && *ab != *ba)
      throw PreconditionError("DiagonalActionModel: alpha and beta do not commute");
  }
}

DiagonalActionModel DiagonalActionModel::point(std::size_t level) {
  const auto id = PartialMap::identity(1);
  return DiagonalActionModel("point", 0, level, id, id, id, id);
}

DiagonalActionModel DiagonalActionModel::denjoy_alpha(std::size_t depth, std::size_t level) {
  if (depth == 0) throw PreconditionError("denjoy model: depth must be >= 1");
  const auto id = PartialMap::identity(2 * depth + 2);
  return DiagonalActionModel("denjoy-alpha", depth, level, denjoy_shift(depth, 1), denjoy_shift(depth, -1), id, id);
}

DiagonalActionModel DiagonalActionModel::denjoy_both(std::size_t depth, std::size_t level) {
  if (depth == 0) throw PreconditionError("denjoy model: depth must be >= 1");
  auto fwd = denjoy_shift(depth, 1);
  auto back = denjoy_shift(depth, -1);
  return DiagonalActionModel("denjoy-both", depth, level, fwd, back, fwd, back);
}

DiagonalActionModel DiagonalActionModel::identity(std::size_t depth, std::size_t level) {
  const auto id = PartialMap::identity(2 * depth + 2);
  return DiagonalActionModel("identity", depth, level, id, id, id, id);
}

DiagonalActionModel DiagonalActionModel::swap(std::size_t level) {
  const PartialMap s({KVector{0, 1}, KVector{1, 0}});
  const auto id = PartialMap::identity(2);
  return DiagonalActionModel("swap", 0, level, s, s, id, id);
}

const PartialMap& DiagonalActionModel::letter_map(char letter) const {
  switch (letter) {
    case 'a': return alpha_;
    case 'A': return alpha_inv_;
    case 'b': return beta_;
    case 'B': return beta_inv_;
    default: throw PreconditionError(std::string("unknown letter '") + letter + "'");
  }
}

TensorVector::TensorVector(std::size_t k_, std::size_t level_)
    : k(k_), level(level_), coeffs(k_ * fb::cylinder_count(level_), 0) {}

std::int64_t& TensorVector::at(std::size_t e, const fb::ReducedWord& w) {
  if (w.size() != level) throw PreconditionError("TensorVector: word not at this level");
  return coeffs.at(e * fb::cylinder_count(level) + fb::cylinder_index(w));
}

std::int64_t TensorVector::at(std::size_t e, const fb::ReducedWord& w) const {
  return const_cast<TensorVector*>(this)->at(e, w);
}

QuadVector::QuadVector(std::size_t k) { parts.fill(KVector(k, 0)); }
KVector& QuadVector::operator[](char letter) { return parts[component(letter)]; }
const KVector& QuadVector::operator[](char letter) const { return parts[component(letter)]; }

KVector QuadVector::flat() const {
  KVector out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

PairVector::PairVector(std::size_t k) { parts.fill(KVector(k, 0)); }

KVector PairVector::flat() const {
  KVector out = parts[0];
  out.insert(out.end(), parts[1].begin(), parts[1].end());
  return out;
}

IntMatrix direct_relation_matrix(const DiagonalActionModel& model) {
  const std::size_t n1 = fb::cylinder_count(model.level() + 1);
  IntMatrix m(0, model.k() * n1);
  for (std::size_t e = 0; e < model.k(); ++e)
    for (const auto& w : fb::cylinders(model.level()))
      for (char g : {'a', 'b'})
        if (auto row = relation_tensor(model, e, w, g)) append(m, *row);
  return m;
}

IntMatrix direct_generator_matrix(const DiagonalActionModel& model) {
  const std::size_t n1 = fb::cylinder_count(model.level() + 1);
  IntMatrix m(0, model.k() * n1);
  for (std::size_t e = 0; e < model.k(); ++e)
    for (char x : {'a', 'b'}) {
      const auto v = fb::BoundaryVector::cylinder(fb::reduce(std::string(1, x)), model.level() + 1);
      KVector row(model.k() * n1, 0);
      std::copy(v.coeffs().begin(), v.coeffs().end(), row.begin() + static_cast<std::ptrdiff_t>(e * n1));
      append(m, row);
    }
  return m;
}

AbGroupInvariants pv_k0_direct(const DiagonalActionModel& model, Execution exec) {
  return zlattice::image_in_cokernel(direct_relation_matrix(model), direct_generator_matrix(model), exec);
}

IntMatrix reduced_relation_matrix(const DiagonalActionModel& model) {
  const std::size_t k = model.k();
  IntMatrix m(0, 2 * k);
  for (std::size_t e = 0; e < k; ++e) {
    const KVector f = basis_vector(k, e);
    const auto a = model.alpha().apply(f), ai = model.letter_map('A').apply(f);
    const auto b = model.beta().apply(f), bi = model.letter_map('B').apply(f);
    if (!a || !ai || !b || !bi) continue;
    const KVector am1 = minus(*a, f), bm1 = minus(*b, f);
    const auto x = model.letter_map('A').apply(bm1);
    const auto y = model.letter_map('B').apply(am1);
    if (!x || !y) continue;

    KVector first = f;
    add_scaled(first, f, 1);
    add_scaled(first, *a, -1);
    add_scaled(first, *ai, -1);
    KVector second = minus(*x, bm1);
    first.insert(first.end(), second.begin(), second.end());
    append(m, first);

    KVector third = minus(*y, am1);
    KVector fourth = f;
    add_scaled(fourth, f, 1);
    add_scaled(fourth, *b, -1);
    add_scaled(fourth, *bi, -1);
    third.insert(third.end(), fourth.begin(), fourth.end());
    append(m, third);
  }
  return m;
}

AbGroupInvariants pv_k0_reduced(const DiagonalActionModel& model, Execution exec) {
  return zlattice::cokernel_invariants({2 * model.k(), reduced_relation_matrix(model)}, exec);
}

IntMatrix example16_relation_matrix(std::size_t depth) {
  if (depth == 0) throw PreconditionError("example16: depth must be >= 1");
  const long n = static_cast<long>(depth);
  const std::size_t k = 2 * depth + 2;
  IntMatrix m(0, k);
  auto slot = [n](long j) { return static_cast<std::size_t>(j + n + 1); };
  for (long j = -n; j <= n - 2; ++j) {
    KVector row(k, 0);
    row[slot(j + 2)] = 1;
    row[slot(j + 1)] = -2;
    row[slot(j)] = 1;
    append(m, row);
  }
  return m;
}

AbGroupInvariants example16_quotient(std::size_t depth, Execution exec) {
  return zlattice::cokernel_invariants({2 * depth + 2, example16_relation_matrix(depth)}, exec);
}

IntMatrix quad_relation_matrix(const DiagonalActionModel& model) {
  const std::size_t k = model.k();
  IntMatrix m(0, 4 * k);
  for (char x : fb::kAlphabet) {
    const bool on_a = x == 'a' || x == 'A';
    const char y = on_a ? 'b' : 'a';
    const char yi = on_a ? 'B' : 'A';
    for (std::size_t h = 0; h < k; ++h) {
      const auto& image = model.letter_map(x).image(h);
      if (!image) continue;
      QuadVector q(k);
      q[x] = *image;
      q[x][h] -= 1;
      q[y][h] -= 1;
      q[yi][h] -= 1;
      append(m, q.flat());
    }
  }
  return m;
}

QuadVector phi_map(const KVector& f, const fb::ReducedWord& omega, const DiagonalActionModel& model) {
  if (omega.empty()) throw PreconditionError("phi_map: omega must be nonempty");
  KVector h = f;
  const std::string& s = omega.letters();
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    h = require(model.letter_map(fb::inverse(s[i])).apply(h), "phi_map");
  QuadVector q(model.k());
  q[omega.last()] = std::move(h);
  return q;
}

QuadVector phi_map(const TensorVector& v, const DiagonalActionModel& model) {
  if (v.k != model.k()) throw PreconditionError("phi_map: dimension mismatch");
  const auto& words = fb::cylinders(v.level);
  QuadVector q(model.k());
  for (std::size_t e = 0; e < v.k; ++e)
    for (std::size_t c = 0; c < words.size(); ++c) {
      const auto coeff = v.coeffs[e * words.size() + c];
      if (coeff == 0) continue;
      const QuadVector part = phi_map(basis_vector(v.k, e), words[c], model);
      for (std::size_t i = 0; i < 4; ++i) add_scaled(q.parts[i], part.parts[i], coeff);
    }
  return q;
}

TensorVector psi_map(const QuadVector& q) {
  const std::size_t k = q.parts[0].size();
  TensorVector t(k, 1);
  for (char x : fb::kAlphabet) {
    const fb::ReducedWord w = fb::reduce(std::string(1, x));
    for (std::size_t e = 0; e < k; ++e) t.at(e, w) += q[x][e];
  }
  return t;
}

PairVector gamma_map(const QuadVector& q, const DiagonalActionModel& model) {
  const std::size_t k = model.k();
  PairVector out(k);
  add_scaled(out.parts[0], q['a'], 1);
  add_scaled(out.parts[1], q['b'], 1);

  const KVector& fA = q['A'];
  add_scaled(out.parts[0], fA, -1);
  add_scaled(out.parts[1], minus(require(model.beta().apply(fA), "gamma_map"), fA), 1);

  const KVector& fB = q['B'];
  add_scaled(out.parts[0], minus(require(model.alpha().apply(fB), "gamma_map"), fB), 1);
  add_scaled(out.parts[1], fB, -1);
  return out;
}

QuadVector theta_map(const PairVector& p) {
  QuadVector q(p.parts[0].size());
  q['a'] = p.parts[0];
  q['b'] = p.parts[1];
  return q;
}

bool ReductionReport::all_passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

ReductionReport verify_reduction(const DiagonalActionModel& model, const VerifyOptions& options) {
  const std::size_t k = model.k();
  const std::size_t L = model.level();
  ReductionReport report;

  IntMatrix quad = quad_relation_matrix(model);
  if (options.corrupt_relations)
    for (std::size_t r = 0; r < quad.rows(); ++r)
      for (auto& x : quad.row(r)) x *= 2;
  const zlattice::RowLattice quad_lattice(quad);
  const zlattice::RowLattice reduced_lattice(reduced_relation_matrix(model));
  auto in_quad = [&](const KVector& v) { return quad_lattice.contains(to_integers(v)); };

  // Phi of sampled relations.
  std::vector<KVector> images;
  for (std::size_t e = 0; e < k; ++e)
    for (const auto& w : fb::cylinders(L))
      for (char g : {'a', 'b'}) {
        auto row = relation_tensor(model, e, w, g);
        if (!row) continue;
        ++report.candidates;
        TensorVector t(k, L + 1);
        t.coeffs = std::move(*row);
        try {
          images.push_back(phi_map(t, model).flat());
        } catch (const WindowOverflow&) {
          ++report.out_of_window;
        }
      }
  std::vector<std::size_t> order(images.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  const std::size_t take = std::min(options.samples, order.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  report.samples = take;
  CheckResult relation{"phi_relation_membership"};
  for (std::size_t i = 0; i < take; ++i) {
    ++relation.total;
    if (!in_quad(images[order[i]])) ++relation.failed;
  }
  report.checks.push_back(relation);

  CheckResult phi_psi{"phi_psi_identity"};
  CheckResult theta_gamma{"theta_gamma_modulo_relations"};
  for (char x : fb::kAlphabet)
    for (std::size_t e = 0; e < k; ++e) {
      QuadVector q(k);
      q[x][e] = 1;
      ++phi_psi.total;
      try {
        if (phi_map(psi_map(q), model) != q) ++phi_psi.failed;
      } catch (const WindowOverflow&) {
        ++phi_psi.failed;
      }
      try {
        const QuadVector back = theta_map(gamma_map(q, model));
        ++theta_gamma.total;
        if (!in_quad(minus(back.flat(), q.flat()))) ++theta_gamma.failed;
      } catch (const WindowOverflow&) {
      }
    }

  CheckResult gamma_theta{"gamma_theta_identity"};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t e = 0; e < k; ++e) {
      PairVector p(k);
      p.parts[i][e] = 1;
      ++gamma_theta.total;
      if (gamma_map(theta_map(p), model) != p) ++gamma_theta.failed;
    }

  CheckResult gamma_relations{"gamma_relation_image"};
  for (std::size_t r = 0; r < quad.rows(); ++r) {
    QuadVector q(k);
    for (std::size_t c = 0; c < 4 * k; ++c) q.parts[c / k][c % k] = quad(r, c).get_si();
    try {
      const PairVector image = gamma_map(q, model);
      ++gamma_relations.total;
      if (!reduced_lattice.contains(to_integers(image.flat()))) ++gamma_relations.failed;
    } catch (const WindowOverflow&) {
    }
  }

  report.checks.push_back(phi_psi);
  report.checks.push_back(gamma_theta);
  report.checks.push_back(theta_gamma);
  report.checks.push_back(gamma_relations);
  return report;
}

ZetaMatrix zeta_matrix(const DiagonalActionModel& model) {
  const std::size_t n1 = fb::cylinder_count(model.level() + 1);
  const auto& words = fb::cylinders(model.level());
  std::vector<KVector> cols;
  ZetaMatrix z;
  for (char g : {'a', 'b'})
    for (std::size_t e = 0; e < model.k(); ++e)
      for (std::size_t c = 0; c < words.size(); ++c)
        if (auto col = relation_tensor(model, e, words[c], g)) {
          cols.push_back(std::move(*col));
          z.columns.push_back({g, e, c});
        }
  z.matrix = IntMatrix(model.k() * n1, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i)
      if (cols[j][i] != 0) z.matrix(i, j) = static_cast<long>(cols[j][i]);
  return z;
}

K1Result pv_k1_kernel(const DiagonalActionModel& model, Execution exec) {
  const ZetaMatrix z = zeta_matrix(model);
  K1Result out;
  out.basis = zlattice::kernel_basis(z.matrix, exec);
  out.rank = out.basis.size();
  return out;
}

std::vector<IntVector> m_vectors(const DiagonalActionModel& model, const ZetaMatrix& zeta) {
  const std::size_t k = model.k();
  const std::size_t ncyl = fb::cylinder_count(model.level());
  auto column_of = [&](char g, std::size_t e, std::size_t c) -> std::optional<std::size_t> {
    for (std::size_t j = 0; j < zeta.columns.size(); ++j) {
      const auto& col = zeta.columns[j];
      if (col.generator == g && col.e == e && col.cylinder == c) return j;
    }
    return std::nullopt;
  };

  std::vector<IntVector> out;
  for (std::size_t e = 0; e < k; ++e) {
    const KVector f = basis_vector(k, e);
    const auto a = model.alpha().apply(f), b = model.beta().apply(f);
    if (!a || !b) continue;
    const KVector first = minus(f, *b), second = minus(*a, f);
    if (std::all_of(first.begin(), first.end(), [](auto c) { return c == 0; }) &&
        std::all_of(second.begin(), second.end(), [](auto c) { return c == 0; }))
      continue;

    IntVector v(zeta.columns.size(), 0);
    bool complete = true;
    for (auto [g, part] : {std::pair{'a', &first}, std::pair{'b', &second}})
      for (std::size_t e2 = 0; e2 < k && complete; ++e2) {
        if ((*part)[e2] == 0) continue;
        for (std::size_t c = 0; c < ncyl; ++c) {
          const auto j = column_of(g, e2, c);
          if (!j) {
            complete = false;
            break;
          }
          v[*j] += static_cast<long>((*part)[e2]);
        }
      }
    if (complete) out.push_back(std::move(v));
  }
  return out;
}

SweepTable stabilization_sweep(const std::vector<std::size_t>& parameters,
                               const std::function<AbGroupInvariants(std::size_t)>& compute,
                               const std::function<std::optional<AbGroupInvariants>(std::size_t)>& prediction) {
  SweepTable table;
  for (std::size_t p : parameters) {
    SweepRow row{p, compute(p), std::nullopt};
    if (prediction)
      if (auto expected = prediction(p)) row.matches_prediction = *expected == row.invariants;
    table.rows.push_back(std::move(row));
  }
  for (std::size_t i = table.rows.size(); i-- > 0;) {
    if (table.rows[i].matches_prediction != std::optional<bool>(true)) break;
    table.stable_from = table.rows[i].parameter;
  }
  table.free_rank_strictly_increasing = table.rows.size() >= 2;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].invariants.free_rank <= table.rows[i - 1].invariants.free_rank)
      table.free_rank_strictly_increasing = false;
  return table;
}

}  // namespace crossk::ktheory

#include <doctest.h>

#include <random>

#include "crossk/ktheory.hpp"

using namespace crossk;
using namespace crossk::ktheory;
using zlattice::IntVector;
namespace fb = crossk::freeboundary;

namespace {

AbGroupInvariants free_group(std::size_t r) { return {r, {}}; }

// Basis slot of the arc x_j in the Denjoy models.
std::size_t arc_slot(std::size_t n, long j) { return static_cast<std::size_t>(j + static_cast<long>(n) + 1); }

}  // namespace

TEST_CASE("model validation") {
  const PartialMap s({KVector{0, 1}, KVector{1, 0}});
  const PartialMap flip({KVector{1, 0}, KVector{0, -1}});
  CHECK_THROWS_AS(DiagonalActionModel("bad", 0, 1, s, s, flip, flip), PreconditionError);
  CHECK_THROWS_AS(DiagonalActionModel("bad", 0, 1, s, PartialMap::identity(2), PartialMap::identity(2),
                                      PartialMap::identity(2)),
                  PreconditionError);
  CHECK_THROWS_AS(DiagonalActionModel::point(0), PreconditionError);
  CHECK_NOTHROW(DiagonalActionModel("ok", 0, 1, s, s, s, s));

  const auto m = DiagonalActionModel::denjoy_alpha(2, 1);
  CHECK(m.k() == 6);
  CHECK(m.alpha().image(arc_slot(2, 0)) == basis_vector(6, arc_slot(2, 1)));
  CHECK_FALSE(m.alpha().defined(arc_slot(2, 2)));
  CHECK(m.alpha().image(0) == basis_vector(6, 0));
  CHECK(m.beta().image(arc_slot(2, 2)) == basis_vector(6, arc_slot(2, 2)));
}

TEST_CASE("example 16 quotient") {
  for (std::size_t n = 1; n <= 12; ++n) {
    // Rows x_{j+2} - 2 x_{j+1} + x_j, j = -n..n-2, over {1, x_-n..x_n}.
    IntMatrix hand(2 * n - 1, 2 * n + 2);
    for (std::size_t r = 0; r + 1 < 2 * n; ++r) {
      hand(r, r + 1) = 1;
      hand(r, r + 2) = -2;
      hand(r, r + 3) = 1;
    }
    CHECK(zlattice::cokernel_invariants({2 * n + 2, example16_relation_matrix(n)}) ==
          zlattice::cokernel_invariants({2 * n + 2, hand}));
    CHECK(example16_quotient(n) == free_group(3));
  }
}

TEST_CASE("reduced presentations, hand computed") {
  for (std::size_t L = 1; L <= 3; ++L) {
    CHECK(pv_k0_reduced(DiagonalActionModel::point(L)) == free_group(2));
    CHECK(pv_k0_reduced(DiagonalActionModel::swap(L)) == AbGroupInvariants{3, {2}});
  }
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(pv_k0_reduced(DiagonalActionModel::identity(n, 1)) == free_group(2 * (2 * n + 2)));
    CHECK(pv_k0_reduced(DiagonalActionModel::denjoy_alpha(n, 1)) == free_group(2 * n + 5));
  }
}

TEST_CASE("direct and reduced presentations agree") {
  for (std::size_t L = 1; L <= 3; ++L) {
    CHECK(pv_k0_direct(DiagonalActionModel::point(L)) == pv_k0_reduced(DiagonalActionModel::point(L)));
    CHECK(pv_k0_direct(DiagonalActionModel::swap(L)) == pv_k0_reduced(DiagonalActionModel::swap(L)));
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& m : {DiagonalActionModel::denjoy_alpha(n, L), DiagonalActionModel::denjoy_both(n, L),
                            DiagonalActionModel::identity(n, L)})
        CHECK(pv_k0_direct(m) == pv_k0_reduced(m));
    }
  }
}

TEST_CASE("direct presentation shapes") {
  const auto m = DiagonalActionModel::point(2);
  const IntMatrix rel = direct_relation_matrix(m);
  CHECK(rel.cols() == fb::cylinder_count(3));
  CHECK(rel.rows() == 2 * fb::cylinder_count(2));
  const IntMatrix gens = direct_generator_matrix(m);
  CHECK(gens.rows() == 2);
}

TEST_CASE("phi uses the last letter") {
  const std::size_t n = 3;
  const auto m = DiagonalActionModel::denjoy_alpha(n, 2);
  const KVector f = basis_vector(m.k(), arc_slot(n, 0));
  const auto q = phi_map(f, fb::reduce("ab"), m);
  CHECK(q['b'] == basis_vector(m.k(), arc_slot(n, -1)));
  CHECK(q['a'] == KVector(m.k(), 0));
  const auto q2 = phi_map(f, fb::reduce("Ba"), m);
  CHECK(q2['a'] == f);
  const auto q3 = phi_map(basis_vector(m.k(), arc_slot(n, -3)), fb::reduce("Ab"), m);
  CHECK(q3['b'] == basis_vector(m.k(), arc_slot(n, -2)));
  CHECK_THROWS_AS(phi_map(basis_vector(m.k(), arc_slot(n, -3)), fb::reduce("ab"), m), WindowOverflow);

  // babba: beta^-2 alpha^-1 beta^-1 f in the a-component.
  const auto both = DiagonalActionModel::denjoy_both(4, 5);
  const auto q4 = phi_map(basis_vector(both.k(), arc_slot(4, 0)), fb::reduce("babba"), both);
  CHECK(q4['a'] == basis_vector(both.k(), arc_slot(4, -4)));
  CHECK(q4['b'] == KVector(both.k(), 0));
}

TEST_CASE("psi, gamma and theta identities") {
  const auto m = DiagonalActionModel::denjoy_both(3, 1);
  std::mt19937 rng(31);
  for (int t = 0; t < 30; ++t) {
    QuadVector q(m.k());
    for (auto& part : q.parts)
      for (std::size_t e = 1; e + 1 < m.k(); ++e) part[e] = static_cast<long>(rng() % 7) - 3;
    CHECK(phi_map(psi_map(q), m) == q);

    PairVector p(m.k());
    for (auto& part : p.parts)
      for (auto& c : part) c = static_cast<long>(rng() % 7) - 3;
    CHECK(gamma_map(theta_map(p), m) == p);
  }
  QuadVector edge(m.k());
  edge['A'] = basis_vector(m.k(), m.k() - 1);
  CHECK_THROWS_AS(gamma_map(edge, m), WindowOverflow);
}

TEST_CASE("reduction verification") {
  VerifyOptions opt;
  opt.samples = 60;
  opt.seed = 1;
  const auto good = verify_reduction(DiagonalActionModel::denjoy_alpha(4, 2), opt);
  CHECK(good.all_passed());
  CHECK(good.samples == 60);
  for (const auto& c : good.checks) CHECK(c.passed());
  CHECK(verify_reduction(DiagonalActionModel::swap(2), opt).all_passed());
  CHECK(verify_reduction(DiagonalActionModel::denjoy_both(3, 2), opt).all_passed());

  opt.corrupt_relations = true;
  const auto bad = verify_reduction(DiagonalActionModel::denjoy_alpha(4, 2), opt);
  CHECK_FALSE(bad.all_passed());

  VerifyOptions same;
  same.samples = 40;
  same.seed = 9;
  const auto r1 = verify_reduction(DiagonalActionModel::denjoy_alpha(3, 2), same);
  const auto r2 = verify_reduction(DiagonalActionModel::denjoy_alpha(3, 2), same);
  CHECK(r1.candidates == r2.candidates);
  CHECK(r1.out_of_window == r2.out_of_window);
}

TEST_CASE("K1 kernel and the M-vectors") {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto m = DiagonalActionModel::denjoy_alpha(n, 1);
    const auto zeta = zeta_matrix(m);
    const auto k1 = pv_k1_kernel(m);
    CHECK(k1.rank >= 2 * n);
    CHECK(k1.rank == k1.basis.size());
    CHECK(k1.rank + zlattice::rank(zeta.matrix) == zeta.matrix.cols());
    for (const auto& v : k1.basis)
      for (const auto& c : zeta.matrix * v) CHECK(c == 0);
    const auto mv = m_vectors(m, zeta);
    CHECK(mv.size() == 2 * n);
    for (const auto& v : mv) {
      for (const auto& c : zeta.matrix * v) CHECK(c == 0);
      CHECK(zlattice::subgroup_membership(IntMatrix::from_rows(k1.basis, zeta.matrix.cols()), v));
    }
  }
  CHECK(pv_k1_kernel(DiagonalActionModel::point(1)).rank >= 1);
}

TEST_CASE("stabilization sweep") {
  const auto table = stabilization_sweep(
      {1, 2, 3, 4}, [](std::size_t n) { return example16_quotient(n); },
      [](std::size_t) -> std::optional<AbGroupInvariants> { return free_group(3); });
  CHECK(table.stable_from == std::optional<std::size_t>(1));
  CHECK_FALSE(table.free_rank_strictly_increasing);
  for (const auto& r : table.rows) CHECK(r.matches_prediction == std::optional<bool>(true));

  const auto growing = stabilization_sweep({1, 2, 3}, [](std::size_t n) {
    return pv_k0_reduced(DiagonalActionModel::denjoy_alpha(n, 1));
  });
  CHECK(growing.free_rank_strictly_increasing);
  CHECK_FALSE(growing.stable_from.has_value());
  CHECK_FALSE(growing.rows[0].matches_prediction.has_value());
}

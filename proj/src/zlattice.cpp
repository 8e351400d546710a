#include "crossk/zlattice.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <utility>

namespace crossk::zlattice {

namespace {

int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }
int cmpabs(const Integer& a, unsigned long b) { return mpz_cmpabs_ui(a.get_mpz_t(), b); }

}  // namespace

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw PreconditionError("IntMatrix: ragged initializer");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void IntMatrix::append_row(std::span<const Integer> values) {
  if (values.size() != cols_) throw PreconditionError("IntMatrix::append_row: length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(a, c).swap((*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, a).swap((*this)(r, b));
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return sgn(v) == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("IntMatrix product: dimension mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(k, j)) != 0) out(i, j) += aik * b(k, j);
    }
  return out;
}

IntVector operator*(const IntMatrix& a, std::span<const Integer> v) {
  if (a.cols() != v.size()) throw PreconditionError("IntMatrix-vector product: dimension mismatch");
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (sgn(v[k]) != 0 && sgn(a(i, k)) != 0) out[i] += a(i, k) * v[k];
  return out;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ",[" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? "," : "") << m(r, c);
    os << ']';
  }
  return os << ']';
}

std::ostream& operator<<(std::ostream& os, const AbGroupInvariants& g) {
  os << "Z^" << g.free_rank;
  for (const auto& t : g.torsion) os << " + Z/" << t;
  return os;
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = std::move(t);
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

namespace {

// Column operations applied to A are mirrored onto V (its columns) and onto
// the shadow rows W; row operations are mirrored onto U (its rows).
struct Tracking {
  IntMatrix* U = nullptr;
  IntMatrix* V = nullptr;
  IntMatrix* W = nullptr;
};

void mirror_swap_cols(const Tracking& tr, std::size_t a, std::size_t b) {
  if (tr.V) tr.V->swap_cols(a, b);
  if (tr.W) tr.W->swap_cols(a, b);
}

std::vector<std::size_t> nonzero_cols(const IntMatrix& m, std::size_t r, std::size_t from) {
  std::vector<std::size_t> nz;
  for (std::size_t c = from; c < m.cols(); ++c)
    if (sgn(m(r, c)) != 0) nz.push_back(c);
  return nz;
}

std::vector<std::size_t> nonzero_rows(const IntMatrix& m, std::size_t c) {
  std::vector<std::size_t> nz;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (sgn(m(r, c)) != 0) nz.push_back(r);
  return nz;
}

// row[dst] -= q * row[src] restricted to the columns listed in `support`.
void axpy_row(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q,
              const std::vector<std::size_t>& support) {
  for (std::size_t c : support) mpz_submul(m(dst, c).get_mpz_t(), q.get_mpz_t(), m(src, c).get_mpz_t());
}

// col[dst] -= q * col[src] restricted to the rows listed in `support`.
void axpy_col(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q,
              const std::vector<std::size_t>& support) {
  for (std::size_t r : support) mpz_submul(m(r, dst).get_mpz_t(), q.get_mpz_t(), m(r, src).get_mpz_t());
}

// Clears column t below the pivot with row operations. Returns true when a
// nonzero remainder was left behind.
bool clear_column(IntMatrix& a, std::size_t t, std::size_t active_rows, const Tracking& tr,
                  Execution exec) {
  std::vector<std::size_t> targets;
  for (std::size_t i = t + 1; i < active_rows; ++i)
    if (sgn(a(i, t)) != 0) targets.push_back(i);
  if (targets.empty()) return false;

  const auto a_support = nonzero_cols(a, t, t);
  std::vector<std::size_t> u_support;
  if (tr.U) u_support = nonzero_cols(*tr.U, t, 0);

  bool dirty = false;
  const auto n = static_cast<std::ptrdiff_t>(targets.size());
#pragma omp parallel for schedule(static) reduction(|| : dirty) if (exec == Execution::parallel && n > 8)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::size_t i = targets[static_cast<std::size_t>(k)];
    Integer q;
    mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
    if (sgn(q) != 0) {
      axpy_row(a, i, t, q, a_support);
      if (tr.U) axpy_row(*tr.U, i, t, q, u_support);
    }
    if (sgn(a(i, t)) != 0) dirty = true;
  }
  return dirty;
}

// Clears row t right of the pivot with column operations. Assumes column t of
// A is already clear below the pivot, so in A only row t changes.
bool clear_row(IntMatrix& a, std::size_t t, const Tracking& tr, Execution exec) {
  std::vector<std::size_t> targets = nonzero_cols(a, t, t + 1);
  if (targets.empty()) return false;

  std::vector<std::size_t> v_support, w_support;
  if (tr.V) v_support = nonzero_rows(*tr.V, t);
  if (tr.W) w_support = nonzero_rows(*tr.W, t);

  bool dirty = false;
  const auto n = static_cast<std::ptrdiff_t>(targets.size());
#pragma omp parallel for schedule(static) reduction(|| : dirty) if (exec == Execution::parallel && n > 8)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::size_t j = targets[static_cast<std::size_t>(k)];
    Integer q;
    mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
    if (sgn(q) != 0) {
      mpz_submul(a(t, j).get_mpz_t(), q.get_mpz_t(), a(t, t).get_mpz_t());
      if (tr.V) axpy_col(*tr.V, j, t, q, v_support);
      if (tr.W) axpy_col(*tr.W, j, t, q, w_support);
    }
    if (sgn(a(t, j)) != 0) dirty = true;
  }
  return dirty;
}

// Finds the pivot for step t: the first unit entry in row-major order, or the
// entry of smallest magnitude. All-zero rows met on the way are parked below
// `active_rows`. Returns false when the trailing block is zero.
bool select_pivot(IntMatrix& a, std::size_t t, std::size_t& active_rows, const Tracking& tr,
                  std::size_t& pr, std::size_t& pc) {
  bool found = false;
  std::size_t i = t;
  while (i < active_rows) {
    bool row_zero = true;
    for (std::size_t j = t; j < a.cols(); ++j) {
      const Integer& v = a(i, j);
      if (sgn(v) == 0) continue;
      row_zero = false;
      if (!found || cmpabs(v, a(pr, pc)) < 0) {
        found = true;
        pr = i;
        pc = j;
        if (v == 1 || v == -1) return true;
      }
    }
    if (row_zero) {
      --active_rows;
      a.swap_rows(i, active_rows);
      if (tr.U) tr.U->swap_rows(i, active_rows);
      if (found && pr == active_rows) pr = i;
      continue;
    }
    ++i;
  }
  return found;
}

// Reduces A to a diagonal matrix with nonzero entries A(0,0)..A(r-1,r-1).
std::size_t diagonalize(IntMatrix& a, const Tracking& tr, Execution exec) {
  std::size_t active_rows = a.rows();
  const std::size_t limit = std::min(a.rows(), a.cols());
  std::size_t t = 0;
  for (; t < limit; ++t) {
    std::size_t pr = 0, pc = 0;
    if (!select_pivot(a, t, active_rows, tr, pr, pc)) break;
    a.swap_rows(t, pr);
    if (tr.U) tr.U->swap_rows(t, pr);
    a.swap_cols(t, pc);
    mirror_swap_cols(tr, t, pc);

    for (;;) {
      if (clear_column(a, t, active_rows, tr, exec)) {
        std::size_t best = t;
        for (std::size_t i = t + 1; i < active_rows; ++i)
          if (sgn(a(i, t)) != 0 && cmpabs(a(i, t), a(best, t)) < 0) best = i;
        a.swap_rows(t, best);
        if (tr.U) tr.U->swap_rows(t, best);
        continue;
      }
      if (clear_row(a, t, tr, exec)) {
        std::size_t best = t;
        for (std::size_t j = t + 1; j < a.cols(); ++j)
          if (sgn(a(t, j)) != 0 && cmpabs(a(t, j), a(t, best)) < 0) best = j;
        a.swap_cols(t, best);
        mirror_swap_cols(tr, t, best);
        continue;
      }
      break;
    }
  }
  return t;
}

void row_combine(IntMatrix& m, std::size_t i, std::size_t j, const Integer& a, const Integer& b,
                 const Integer& c, const Integer& d) {
  // [row i; row j] <- [[a, b], [c, d]] * [row i; row j]
  for (std::size_t k = 0; k < m.cols(); ++k) {
    Integer x = m(i, k), y = m(j, k);
    m(i, k) = a * x + b * y;
    m(j, k) = c * x + d * y;
  }
}

void col_combine(IntMatrix& m, std::size_t i, std::size_t j, const Integer& a, const Integer& b,
                 const Integer& c, const Integer& d) {
  // [col i, col j] <- [col i, col j] * [[a, b], [c, d]]
  for (std::size_t k = 0; k < m.rows(); ++k) {
    Integer x = m(k, i), y = m(k, j);
    m(k, i) = a * x + c * y;
    m(k, j) = b * x + d * y;
  }
}

// Turns diag(d_0..d_{r-1}) into a divisibility chain with positive entries,
// realizing every step as a unimodular transformation on U and V.
void normalize_chain(IntMatrix& a, std::size_t r, const Tracking& tr) {
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      const Integer di = a(i, i), dj = a(j, j);
      if (mpz_divisible_p(dj.get_mpz_t(), di.get_mpz_t())) continue;
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), di.get_mpz_t(), dj.get_mpz_t());
      const Integer dig = di / g, djg = dj / g;
      // [[s, t], [-dj/g, di/g]] diag(di, dj) [[1, -t dj/g], [1, s di/g]] = diag(g, di dj / g)
      if (tr.U) row_combine(*tr.U, i, j, s, t, -djg, dig);
      if (tr.V) col_combine(*tr.V, i, j, Integer(1), Integer(-t * djg), Integer(1), Integer(s * dig));
      if (tr.W) col_combine(*tr.W, i, j, Integer(1), Integer(-t * djg), Integer(1), Integer(s * dig));
      a(i, i) = g;
      a(j, j) = di * djg;
    }
    if (sgn(a(i, i)) < 0) {
      a(i, i) = -a(i, i);
      if (tr.U)
        for (std::size_t k = 0; k < tr.U->cols(); ++k) (*tr.U)(i, k) = -(*tr.U)(i, k);
    }
  }
}

IntVector chain_from_diagonal(const IntMatrix& a, std::size_t r) {
  IntVector d(r);
  for (std::size_t i = 0; i < r; ++i) d[i] = abs(a(i, i));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      if (mpz_divisible_p(d[j].get_mpz_t(), d[i].get_mpz_t())) continue;
      Integer g = gcd(d[i], d[j]);
      d[j] = d[i] / g * d[j];
      d[i] = g;
    }
  return d;
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& m, Execution exec) {
  SnfResult out;
  out.S = m;
  out.U = IntMatrix::identity(m.rows());
  out.V = IntMatrix::identity(m.cols());
  Tracking tr{&out.U, &out.V, nullptr};
  const std::size_t r = diagonalize(out.S, tr, exec);
  normalize_chain(out.S, r, tr);
  out.invariant_factors.reserve(r);
  for (std::size_t i = 0; i < r; ++i) out.invariant_factors.push_back(out.S(i, i));
  return out;
}

IntVector invariant_factors(const IntMatrix& m, Execution exec) {
  IntMatrix a = m;
  const std::size_t r = diagonalize(a, Tracking{}, exec);
  return chain_from_diagonal(a, r);
}

std::size_t rank(const IntMatrix& m, Execution exec) {
  IntMatrix a = m;
  return diagonalize(a, Tracking{}, exec);
}

AbGroupInvariants cokernel_invariants(const AbGroupPresentation& p, Execution exec) {
  if (p.relations.rows() > 0 && p.relations.cols() != p.num_generators)
    throw PreconditionError("cokernel_invariants: relation width differs from generator count");
  AbGroupInvariants g;
  if (p.relations.rows() == 0 || p.num_generators == 0) {
    g.free_rank = p.num_generators;
    return g;
  }
  const IntVector d = invariant_factors(p.relations, exec);
  g.free_rank = p.num_generators - d.size();
  for (const auto& f : d)
    if (f > 1) g.torsion.push_back(f);
  return g;
}

std::vector<IntVector> kernel_basis(const IntMatrix& m, Execution exec) {
  std::vector<IntVector> basis;
  if (m.cols() == 0) return basis;
  IntMatrix a = m;
  IntMatrix V = IntMatrix::identity(m.cols());
  const std::size_t r = diagonalize(a, Tracking{nullptr, &V, nullptr}, exec);
  for (std::size_t c = r; c < m.cols(); ++c) {
    IntVector v(m.cols());
    for (std::size_t i = 0; i < m.cols(); ++i) v[i] = V(i, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

AbGroupInvariants image_in_cokernel(const IntMatrix& relations, const IntMatrix& generators,
                                    Execution exec) {
  const std::size_t c = generators.cols();
  if (relations.rows() > 0 && relations.cols() != c)
    throw PreconditionError("image_in_cokernel: column count mismatch");
  const std::size_t m = generators.rows();

  IntMatrix a = relations.rows() > 0 ? relations : IntMatrix(0, c);
  IntMatrix w = generators;
  const std::size_t r = diagonalize(a, Tracking{nullptr, nullptr, &w}, exec);

  // In the transformed coordinates the cokernel is (+)_{i<r} Z/|d_i| (+) Z^{c-r}.
  std::vector<std::size_t> torsion_cols, free_cols;
  for (std::size_t i = 0; i < r; ++i)
    if (cmpabs(a(i, i), 1) != 0) torsion_cols.push_back(i);
  for (std::size_t i = r; i < c; ++i) free_cols.push_back(i);

  const std::size_t width = torsion_cols.size() + free_cols.size();
  IntMatrix stacked(m + torsion_cols.size(), width);
  for (std::size_t g = 0; g < m; ++g) {
    std::size_t k = 0;
    for (std::size_t col : torsion_cols) stacked(g, k++) = w(g, col);
    for (std::size_t col : free_cols) stacked(g, k++) = w(g, col);
  }
  for (std::size_t k = 0; k < torsion_cols.size(); ++k)
    stacked(m + k, k) = abs(a(torsion_cols[k], torsion_cols[k]));

  // Coefficient vectors y with y * W == 0 in the cokernel: the left kernel of
  // `stacked`, projected onto the generator coordinates.
  AbGroupPresentation p{m, IntMatrix(0, m)};
  if (width == 0) {
    for (std::size_t g = 0; g < m; ++g) {
      IntVector e(m);
      e[g] = 1;
      p.relations.append_row(e);
    }
    return cokernel_invariants(p, exec);
  }
  for (auto& v : kernel_basis(stacked.transposed(), exec)) {
    IntVector y(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    p.relations.append_row(y);
  }
  return cokernel_invariants(p, exec);
}

IntMatrix hermite_normal_form(const IntMatrix& m) {
  IntMatrix a = m;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    for (;;) {
      std::size_t best = a.rows();
      for (std::size_t i = row; i < a.rows(); ++i)
        if (sgn(a(i, col)) != 0 && (best == a.rows() || cmpabs(a(i, col), a(best, col)) < 0))
          best = i;
      if (best == a.rows()) break;
      a.swap_rows(row, best);
      bool done = true;
      for (std::size_t i = row + 1; i < a.rows(); ++i) {
        if (sgn(a(i, col)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, col).get_mpz_t(), a(row, col).get_mpz_t());
        for (std::size_t k = col; k < a.cols(); ++k) a(i, k) -= q * a(row, k);
        if (sgn(a(i, col)) != 0) done = false;
      }
      if (done) break;
    }
    if (row < a.rows() && sgn(a(row, col)) != 0) {
      if (sgn(a(row, col)) < 0)
        for (std::size_t k = col; k < a.cols(); ++k) a(row, k) = -a(row, k);
      for (std::size_t i = 0; i < row; ++i) {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, col).get_mpz_t(), a(row, col).get_mpz_t());
        if (sgn(q) == 0) continue;
        for (std::size_t k = col; k < a.cols(); ++k) a(i, k) -= q * a(row, k);
      }
      ++row;
    }
  }
  IntMatrix h(0, a.cols());
  for (std::size_t i = 0; i < row; ++i) h.append_row(a.row(i));
  return h;
}

RowLattice::RowLattice(const IntMatrix& generators)
    : cols_(generators.cols()), basis_(hermite_normal_form(generators)) {
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    std::size_t c = 0;
    while (sgn(basis_(i, c)) == 0) ++c;
    pivots_.push_back(c);
  }
}

bool RowLattice::contains(std::span<const Integer> v) const {
  if (v.size() != cols_) throw PreconditionError("RowLattice::contains: length mismatch");
  IntVector x(v.begin(), v.end());
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    const std::size_t c = pivots_[i];
    for (std::size_t k = (i ? pivots_[i - 1] + 1 : 0); k < c; ++k)
      if (sgn(x[k]) != 0) return false;
    if (!mpz_divisible_p(x[c].get_mpz_t(), basis_(i, c).get_mpz_t())) return false;
    const Integer q = x[c] / basis_(i, c);
    if (sgn(q) == 0) continue;
    for (std::size_t k = c; k < cols_; ++k) x[k] -= q * basis_(i, k);
  }
  return std::all_of(x.begin(), x.end(), [](const Integer& e) { return sgn(e) == 0; });
}

bool subgroup_membership(const IntMatrix& R, std::span<const Integer> v) {
  if (R.rows() > 0 && R.cols() != v.size())
    throw PreconditionError("subgroup_membership: vector length differs from relation width");
  if (R.rows() == 0)
    return std::all_of(v.begin(), v.end(), [](const Integer& e) { return sgn(e) == 0; });
  return RowLattice(R).contains(v);
}

}  // namespace crossk::zlattice

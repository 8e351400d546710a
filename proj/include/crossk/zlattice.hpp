#pragma once

// Exact integer lattice algebra: Smith and Hermite forms, integer kernels,
// cokernels of relation matrices and row-span membership.
//
// Every entry is an arbitrary-precision integer; nothing here ever rounds.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "crossk/common.hpp"

namespace crossk::zlattice {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Integer> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Integer> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Integer> values);
  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  IntMatrix transposed() const;
  bool is_zero() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, std::span<const Integer> v);
std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

// Determinant by fraction-free (Bareiss) elimination; square input only.
Integer determinant(const IntMatrix& m);

struct SnfResult {
  IntMatrix S;  // diagonal form, d1 | d2 | ... | dr, then zeros
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix V;  // cols x cols, unimodular
  IntVector invariant_factors;  // nonzero diagonal of S, all positive
};

// U * M * V == S. Deterministic for a fixed input.
SnfResult smith_normal_form(const IntMatrix& m, Execution exec = Execution::serial);

// Same invariant factors as smith_normal_form, without materializing U, V.
IntVector invariant_factors(const IntMatrix& m, Execution exec = Execution::serial);

std::size_t rank(const IntMatrix& m, Execution exec = Execution::serial);

struct AbGroupPresentation {
  std::size_t num_generators = 0;
  IntMatrix relations;  // one relation per row, one column per generator
};

struct AbGroupInvariants {
  std::size_t free_rank = 0;
  IntVector torsion;  // every entry > 1, each dividing the next

  friend bool operator==(const AbGroupInvariants&, const AbGroupInvariants&) = default;
};

std::ostream& operator<<(std::ostream& os, const AbGroupInvariants& g);

// Z^n / rowspan(relations).
AbGroupInvariants cokernel_invariants(const AbGroupPresentation& p,
                                      Execution exec = Execution::serial);

// Isomorphism class of the subgroup of Z^c / rowspan(relations) generated by
// the classes of the rows of `generators` (both matrices have c columns).
AbGroupInvariants image_in_cokernel(const IntMatrix& relations, const IntMatrix& generators,
                                    Execution exec = Execution::serial);

// Basis of {v in Z^cols : M v = 0}. Each vector is primitive.
std::vector<IntVector> kernel_basis(const IntMatrix& m, Execution exec = Execution::serial);

// Row-style Hermite normal form: nonzero rows first, strictly increasing pivot
// columns, positive pivots, entries above each pivot reduced into [0, pivot).
IntMatrix hermite_normal_form(const IntMatrix& m);

// Precomputed echelon form of a row lattice for repeated membership queries.
class RowLattice {
 public:
  explicit RowLattice(const IntMatrix& generators);

  std::size_t ambient_dim() const { return cols_; }
  std::size_t rank() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }

  bool contains(std::span<const Integer> v) const;

 private:
  std::size_t cols_;
  IntMatrix basis_;
  std::vector<std::size_t> pivots_;
};

// True iff v lies in the integer row span of R. Throws PreconditionError on a
// length mismatch.
bool subgroup_membership(const IntMatrix& R, std::span<const Integer> v);

}  // namespace crossk::zlattice

#pragma once

#include "limtower/int_matrix.hpp"

#include <optional>

namespace limtower {

/// U * M * V = D with U, V unimodular and D diagonal with d1 | d2 | ...,
/// all diagonal entries >= 0 and zeros trailing.
struct SnfResult {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;
  std::size_t rank = 0;

  IntVec diagonal() const;
};

SnfResult snf(const IntMatrix& m);

/// Column-style Hermite normal form of the lattice generated by the columns
/// of M: staircase by pivot row, pivots positive, entries to the left of a
/// pivot (in its row) reduced into [0, pivot), zero columns dropped.
/// Canonical: two matrices generate the same column lattice iff their HNFs
/// are equal.
IntMatrix hnf_cols(const IntMatrix& m);

/// hnf_cols together with a transform T (cols(M) x cols(H)) with M*T = H.
struct HnfResult {
  IntMatrix h;
  IntMatrix t;
};
HnfResult hnf_cols_transform(const IntMatrix& m);

/// Certificate that M x = b has no solution: a row vector u (a row of the
/// SNF transform U) and a modulus d such that u*M is divisible by d entrywise
/// (d = 0 meaning u*M = 0) while u*b is not (u*b != 0 when d = 0).
struct UnsolvableCert {
  IntVec u_row;
  Int modulus;

  bool verify(const IntMatrix& m, const IntVec& b) const;
};

/// Solution of M x = b over Z (modulus = 0) or Z/m (modulus = m > 0):
/// a particular solution plus a basis of the solution lattice of M x = 0.
/// Over Z/m the kernel basis columns generate all solutions mod m (the
/// columns m*e_i are included implicitly; callers work modulo m).
struct SolveResult {
  IntVec particular;
  IntMatrix kernel; // columns form the kernel basis
};

struct SolveOutcome {
  std::optional<SolveResult> solution;
  std::optional<UnsolvableCert> certificate; // set when no solution over Z
};

SolveOutcome solve(const IntMatrix& m, const IntVec& b, const Int& modulus = 0);

/// Kernel of M over Z (or Z/m): columns generate {x : M x = 0 (mod m)}.
/// Over Z the result is a basis (full column rank); over Z/m a generating set.
IntMatrix kernel_lattice(const IntMatrix& m, const Int& modulus = 0);

/// Is v in the column lattice of M (mod m)?
bool lattice_contains(const IntMatrix& m, const IntVec& v, const Int& modulus = 0);

/// Columns of the result generate col(A) ∩ col(B); Hermite normal form.
IntMatrix lattice_intersect(const IntMatrix& a, const IntMatrix& b);

/// col(A) + col(B) in Hermite normal form.
IntMatrix lattice_sum(const IntMatrix& a, const IntMatrix& b);

/// Lattice equality col(A) == col(B) via HNF comparison.
bool lattice_equal(const IntMatrix& a, const IntMatrix& b);

/// {x : M x in col(L) (mod m)} — preimage of a column lattice. Generating
/// columns (includes kernel of M).
IntMatrix preimage_lattice(const IntMatrix& m, const IntMatrix& l,
                           const Int& modulus = 0);

/// Saturation of the column lattice of M in Z^rows: the smallest pure
/// sublattice containing it, i.e. {x : k*x in col(M) for some k >= 1}.
IntMatrix saturate_lattice(const IntMatrix& m);

/// Inverse of a unimodular square matrix (|det| = 1), exact.
IntMatrix inverse_unimodular(const IntMatrix& u);

/// Reduce v to the canonical representative modulo the column lattice of H,
/// where H must be in hnf_cols form. Representative entries at pivot rows lie
/// in [0, pivot).
IntVec reduce_mod_lattice(const IntMatrix& hnf, const IntVec& v);

/// Index [Z^n : col(M)] when finite (matrix of full row rank); 0 otherwise.
Int lattice_index(const IntMatrix& m);

} // namespace limtower

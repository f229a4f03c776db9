#pragma once

#include "limtower/int_matrix.hpp"

#include <optional>
#include <vector>

namespace limtower {

/// Integer polynomial, coefficients ascending (c[i] is the coefficient of
/// t^i). Normalized: no trailing zeros; the zero polynomial has empty c.
struct IntPoly {
  std::vector<Int> c;

  static IntPoly from_coeffs(std::vector<Int> coeffs);
  static IntPoly one() { return from_coeffs({Int(1)}); }

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Int& leading() const { return c.back(); }
  Int constant() const { return c.empty() ? Int(0) : c.front(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }

  Int eval(const Int& x) const;
  IntMatrix eval(const IntMatrix& a) const;

  bool operator==(const IntPoly&) const = default;
  std::string to_string() const;
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);

/// Quotient when g is monic and divides f exactly; nullopt otherwise.
std::optional<IntPoly> divide_exact(const IntPoly& f, const IntPoly& g);

/// Characteristic polynomial det(t*I - A), monic, by the division-free
/// Berkowitz algorithm.
IntPoly char_poly(const IntMatrix& a);

/// Complete factorization of a monic integer polynomial into monic
/// irreducible factors (with multiplicity), by rational roots plus the
/// Kronecker interpolation method. Throws std::runtime_error if the divisor
/// search exceeds its budget (does not happen at the scales this library
/// targets).
std::vector<IntPoly> factor_monic(const IntPoly& f);

/// Splits char_poly(E) = unit * rest where `unit` collects the monic
/// irreducible factors with constant term +-1 (the part of the spectrum on
/// which E acts with determinant +-1) and `rest` collects everything else.
struct UnitSplit {
  IntPoly unit;
  IntPoly rest;
};
UnitSplit unit_split(const IntPoly& monic);

/// The eventual image of a square integer matrix: the intersection of the
/// column lattices of E^k over all k >= 0, i.e. the largest sublattice U of
/// Z^n with E(U) = U. Equals the integer kernel of u(E) for u the unit part
/// of char_poly(E). Result columns form a basis in Hermite normal form; E
/// restricted to it is unimodular.
IntMatrix eventual_image_lattice(const IntMatrix& e);

} // namespace limtower

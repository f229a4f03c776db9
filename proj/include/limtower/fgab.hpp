#pragma once

#include "limtower/int_matrix.hpp"
#include "limtower/normal_form.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace limtower {

/// Coefficient ring: Z when modulus == 0, Z/m when modulus == m > 0.
struct Ring {
  Int modulus;

  bool is_z() const { return modulus == 0; }
  bool operator==(const Ring&) const = default;
  std::string to_string() const {
    return is_z() ? "Z" : "Z/" + modulus.str();
  }
};

inline Ring ring_z() { return Ring{0}; }
inline Ring ring_zmod(Int m) { return Ring{std::move(m)}; }

/// Finitely generated abelian group (Z/m-module when the ring has a modulus)
/// presented by generators and relations; columns of the relation matrix are
/// relators in Z^gens. Elements are generator-coordinate vectors; equality
/// is congruence modulo the effective relation lattice, decided by HNF
/// reduction. The presentation is kept verbatim; the canonical decomposition
/// is cached alongside.
class FgAbGroup {
public:
  FgAbGroup() : FgAbGroup(ring_z(), 0, IntMatrix(0, 0)) {}
  FgAbGroup(Ring ring, std::size_t gens, IntMatrix relations);

  static FgAbGroup trivial(Ring r) { return FgAbGroup(r, 0, IntMatrix(0, 0)); }
  /// R^rank (free module over the ring).
  static FgAbGroup free_module(Ring r, std::size_t rank);
  /// Z/order as a Z-group (order 0 gives Z); ring must be Z or divide.
  static FgAbGroup cyclic(Ring r, const Int& order);
  /// Z^free_rank + sum of Z/d for the given torsion entries.
  static FgAbGroup from_invariants(Ring r, std::size_t free_rank,
                                   const IntVec& torsion);

  const Ring& ring() const { return ring_; }
  std::size_t gens() const { return gens_; }
  const IntMatrix& relations() const { return relations_; }
  /// HNF of the relation lattice together with m*I for ring Z/m.
  const IntMatrix& relation_lattice() const { return eff_; }

  /// Structural equality: same ring, same generator count, same effective
  /// relation lattice. (Not isomorphism; see same_canonical_form.)
  bool operator==(const FgAbGroup& o) const {
    return ring_ == o.ring_ && gens_ == o.gens_ && eff_ == o.eff_;
  }

  std::size_t free_rank() const { return free_rank_; }
  const IntVec& invariant_factors() const { return invariants_; }
  bool is_trivial() const { return free_rank_ == 0 && invariants_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }
  /// Group order; 0 when infinite.
  Int order() const;
  bool same_canonical_form(const FgAbGroup& o) const {
    return free_rank_ == o.free_rank_ && invariants_ == o.invariants_;
  }
  /// Free as a module over the coefficient ring (Z^k, resp. (Z/m)^k).
  bool is_free_over_ring() const;
  std::size_t ring_rank() const; // rank when free over the ring
  std::string canonical_string() const;

  /// Canonical coset representative of v modulo the relation lattice.
  IntVec reduce(const IntVec& v) const;
  bool is_zero_element(const IntVec& v) const;
  bool elements_equal(const IntVec& a, const IntVec& b) const;
  IntVec zero_element() const { return IntVec(gens_, Int(0)); }
  /// Order of v in the group; 0 when infinite.
  Int element_order(const IntVec& v) const;
  /// All canonical representatives; group must be finite with order <= cap.
  std::vector<IntVec> elements(std::size_t cap = 1 << 20) const;

  /// Coordinates in the canonical decomposition Z^f + sum Z/d_i:
  /// first free_rank() free coordinates, then one coordinate mod each
  /// invariant factor.
  IntVec to_canonical_coords(const IntVec& v) const;
  IntVec from_canonical_coords(const IntVec& c) const;

  /// The canonically presented group Z^f + sum Z/d_i and the mutually
  /// inverse isos realizing the decomposition.
  FgAbGroup canonical_group() const;
  IntMatrix to_canonical_matrix() const;
  IntMatrix from_canonical_matrix() const;

private:
  Ring ring_;
  std::size_t gens_ = 0;
  IntMatrix relations_;
  IntMatrix eff_; // HNF of [relations | m*I]
  std::size_t free_rank_ = 0;
  IntVec invariants_;      // d > 1, ascending divisibility
  IntMatrix basis_;        // unimodular: y = basis_ * x puts lattice diagonal
  IntMatrix basis_inv_;
  IntVec diag_;            // diagonal of the lattice in the y-coordinates
  std::vector<std::size_t> torsion_pos_; // positions of invariants in diag_
  std::vector<std::size_t> free_pos_;    // positions of free coords
};

/// Homomorphism between presented groups, a matrix on generators
/// (target-gens x source-gens acting on column coordinate vectors).
class GroupHom {
public:
  GroupHom(FgAbGroup source, FgAbGroup target, IntMatrix matrix);

  static GroupHom identity(const FgAbGroup& g);
  static GroupHom zero(const FgAbGroup& src, const FgAbGroup& tgt);

  const FgAbGroup& source() const { return *source_; }
  const FgAbGroup& target() const { return *target_; }
  const IntMatrix& matrix() const { return matrix_; }

  /// matrix maps the source relation lattice into the target lattice.
  bool is_well_defined() const;
  void require_well_defined(const char* what) const;

  IntVec apply(const IntVec& v) const;
  /// this ∘ f
  GroupHom compose(const GroupHom& f) const;
  /// g ∘ this
  GroupHom then(const GroupHom& g) const { return g.compose(*this); }

  GroupHom operator+(const GroupHom& o) const;
  GroupHom operator-(const GroupHom& o) const;
  GroupHom operator-() const;

  /// Equal as maps (matrices congruent modulo the target lattice).
  bool equals(const GroupHom& o) const;
  bool is_zero_map() const;
  bool is_injective() const;
  bool is_surjective() const;
  bool is_bijective() const { return is_injective() && is_surjective(); }

  /// Some x with this(x) = y, via deterministic HNF-based solve.
  std::optional<IntVec> preimage(const IntVec& y) const;
  /// Inverse of a bijective hom.
  GroupHom inverse() const;

  /// Lattice of the image in target coordinates (image + target relations).
  IntMatrix image_lattice() const;
  /// Lattice {x : this(x) = 0} in source coordinates (includes source
  /// relations).
  IntMatrix kernel_lattice_in_source() const;

private:
  std::shared_ptr<const FgAbGroup> source_;
  std::shared_ptr<const FgAbGroup> target_;
  IntMatrix matrix_;
};

struct Subgroup {
  FgAbGroup group;
  GroupHom inclusion; // group -> ambient
};

struct Quotient {
  FgAbGroup group;
  GroupHom projection; // ambient -> group
};

/// Subgroup of g generated by the columns of gens_lattice.
Subgroup subgroup_from_lattice(const FgAbGroup& g, const IntMatrix& gens_lattice);

Subgroup kernel(const GroupHom& f);
Quotient cokernel(const GroupHom& f);
/// Quotient of g by the subgroup generated by the given lattice columns.
Quotient quotient_by_lattice(const FgAbGroup& g, const IntMatrix& lattice);
/// Image of f presented as a subgroup of the target.
Subgroup image(const GroupHom& f);

struct DirectSum {
  FgAbGroup group;
  GroupHom in1, in2;   // injections
  GroupHom pr1, pr2;   // projections
};
DirectSum direct_sum(const FgAbGroup& a, const FgAbGroup& b);

struct Pushout {
  FgAbGroup group;
  GroupHom in1; // from the target of f
  GroupHom in2; // from the target of g
};
/// Pushout of f: K -> A and g: K -> B over the shared source K, computed as
/// coker of (f, -g): K -> A + B. The square commutes: in1∘f = in2∘g; pushing
/// out a mono along any map yields a mono.
Pushout pushout(const GroupHom& f, const GroupHom& g);

/// Mediating hom for a cocone h1: A -> T, h2: B -> T with h1∘f = h2∘g.
GroupHom pushout_mediator(const Pushout& p, const GroupHom& h1,
                          const GroupHom& h2);

struct ExactnessReport {
  bool exact = false;
  /// Interior node index (0-based into the chain's middle groups) at which
  /// exactness fails.
  std::size_t failed_at = 0;
  std::string reason;
  /// Element of the failing middle group witnessing ker ⊄ im, or a nonzero
  /// composite image.
  std::optional<IntVec> witness;
};

/// Verdict for im(chain[i]) = ker(chain[i+1]) at every interior node.
ExactnessReport is_exact(const std::vector<GroupHom>& chain);

struct ShortExact {
  GroupHom inject;  // A -> B
  GroupHom project; // B -> C
};

/// Verifies 0 -> A -> B -> C -> 0 is exact.
ExactnessReport is_short_exact(const ShortExact& s);

struct SnakeInput {
  ShortExact top;    // 0 -> A  -> B  -> C  -> 0
  ShortExact bottom; // 0 -> A' -> B' -> C' -> 0
  GroupHom va, vb, vc;
};

struct SnakeResult {
  Subgroup ker_a, ker_b, ker_c;
  Quotient cok_a, cok_b, cok_c;
  GroupHom ker_ab, ker_bc; // induced maps on kernels
  GroupHom connecting;     // ker c -> coker a
  GroupHom cok_ab, cok_bc; // induced maps on cokernels
  /// 0 -> ker a -> ker b -> ker c -> cok a -> cok b -> cok c -> 0
  std::vector<GroupHom> six_term() const;
};

/// Snake lemma; throws std::invalid_argument when the rows are not exact or
/// the squares do not commute.
SnakeResult snake(const SnakeInput& in);

} // namespace limtower

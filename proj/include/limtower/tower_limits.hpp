#pragma once

#include "limtower/tower.hpp"

#include <optional>
#include <string>
#include <vector>

namespace limtower {

/// Truncated shift-difference map on the product of the first `depth`
/// levels: (y_n) -> (y_n - s_{n+1}(y_{n+1})) with the last component left
/// alone. Its kernel/cokernel compute depth-truncated lim/lim1 data.
struct TruncatedShift {
  FgAbGroup product; // direct sum of levels 0..depth-1
  GroupHom map;      // product -> product
  std::vector<std::size_t> offsets; // generator offset of each level block
};
TruncatedShift one_minus_shift(const Tower& x, std::size_t depth);

/// Analysis of the iterated-image chain of an endomorphism e of a f.g.
/// group: the chain im(e^k) either becomes stationary (certificate: an index
/// with im(e^k) = im(e^{k+1})) or strictly descends forever (certificate:
/// index growth by the determinant of e on the stable rational image). In
/// both cases `core` is the eventual image, the largest subgroup on which e
/// restricts to an automorphism.
struct EndoCore {
  Subgroup core;
  GroupHom core_auto;     // e restricted to the core
  GroupHom core_auto_inv; // its inverse
  bool chain_stabilizes = false;
  std::size_t stabilization_index = 0; // im(e^k) = core for k >= this (when stabilizing)
  std::size_t kernel_stabilization = 0;
  Int descent_factor = 1; // index growth per step when not stabilizing (>= 2)
};
EndoCore endo_core(const FgAbGroup& g, const GroupHom& e);

/// Exact inverse limit of a representable tower. The limit is a f.g. group;
/// canonical maps to every level are produced on demand (stem levels by
/// composing down, tail levels by inverting the period composite on the
/// stable core).
class LimResult {
public:
  LimResult(Tower x, std::size_t ref_level, EndoCore core);

  const FgAbGroup& group() const { return core_.core.group; }
  const Tower& tower() const { return tower_; }
  /// limit -> X_level
  GroupHom canonical_map(std::size_t level) const;
  const EndoCore& core() const { return core_; }
  std::size_t reference_level() const { return ref_level_; }

private:
  Tower tower_;
  std::size_t ref_level_; // first tail level (class 0)
  EndoCore core_;
};
LimResult lim(const Tower& x);

/// Mittag-Leffler analysis. `holds` is total for representable towers. When
/// the condition holds every reported level gets a stabilization index m(n)
/// with im(X_m -> X_n) constant for m >= m(n). When it fails, `descent`
/// names a tail class whose image chain drops with index growth factor
/// `det` >= 2 per period; stem levels may still stabilize (squeeze against
/// the stable-core image) and otherwise report nullopt.
struct MlDescentCert {
  std::size_t tail_class = 0;
  Int det = 1;
};
struct MlResult {
  bool holds = false;
  std::vector<std::optional<std::size_t>> stabilization_index; // per level
  std::size_t reported_levels = 0;
  std::optional<MlDescentCert> descent;
};
MlResult mittag_leffler(const Tower& x);

enum class Verdict { Zero, Nonzero, Unknown };
std::string to_string(Verdict v);

/// Certificate that an obstruction class is nonzero: after folding one
/// y-period into the reference tail group G and splitting off the stable
/// core U (on which the period composite is an automorphism and every class
/// dies), the cyclic equation (1 - f^q) x = W has no solution in G/U. The
/// periodicity of the system makes this single unsolvability stable under
/// every depth extension.
struct Lim1NonzeroCert {
  std::size_t ref_level = 0;
  std::size_t fold_period = 1; // q, in tower-period units
  IntVec folded_rhs;           // W, in reference-group coordinates
  IntMatrix core_lattice;      // U inside the reference group
  UnsolvableCert solve_cert;   // for the quotient equation
  /// For free reference groups: the exact rational solution of
  /// (1 - f^q) x = W, whose non-integrality is the readable obstruction
  /// (numerators over a common denominator).
  std::optional<std::pair<IntVec, Int>> rational_witness;
};

struct Lim1ClassResult {
  Verdict verdict = Verdict::Unknown;
  /// Eventually periodic preimage when one exists.
  std::optional<ProElement> periodic_preimage;
  /// Values x_0..x_k satisfying x_n = y_n + s(x_{n+1}) on a verification
  /// window (always present for Zero; the window covers the stem plus two
  /// full periods).
  std::vector<IntVec> window_preimage;
  std::optional<Lim1NonzeroCert> certificate;
};

/// Decides whether the class of y in the cokernel of 1 - shift vanishes,
/// i.e. whether x_n - s_{n+1}(x_{n+1}) = y_n admits any solution in the full
/// product of levels.
Lim1ClassResult lim1_class(const Tower& x, const ProElement& y);

struct Lim1Verdict {
  Verdict verdict = Verdict::Unknown;
  MlResult ml;
  std::optional<ProElement> witness; // nonzero class when verdict == Nonzero
  std::optional<Lim1NonzeroCert> witness_cert;
};
Lim1Verdict lim1_is_zero(const Tower& x);

/// Levelwise operations; representable towers are closed under all of them.
struct TowerWithMorphism {
  Tower tower;
  TowerMorphism morphism;
};
struct TowerSum {
  Tower tower;
  TowerMorphism in1, in2, pr1, pr2;
};
TowerSum tower_direct_sum(const Tower& a, const Tower& b);
/// Kernel tower with its levelwise inclusion.
TowerWithMorphism tower_kernel(const TowerMorphism& f);
/// Cokernel tower with its levelwise projection.
TowerWithMorphism tower_cokernel(const TowerMorphism& f);
struct TowerPushout {
  Tower tower;
  TowerMorphism in1, in2;
};
TowerPushout tower_pushout(const TowerMorphism& f, const TowerMorphism& g);

/// Exactness report for 0 -> X' -> X -> X'' -> 0 and the induced six-term
/// lim/lim1 sequence.
struct SixTermReport {
  bool levelwise_exact = false;
  std::size_t checked_levels = 0;
  std::string failure;

  FgAbGroup lim_sub, lim_mid, lim_quot;
  GroupHom lim_inject;  // lim X' -> lim X
  GroupHom lim_project; // lim X -> lim X''
  bool lim_part_exact = false;

  Verdict lim1_sub = Verdict::Unknown;
  Verdict lim1_mid = Verdict::Unknown;
  Verdict lim1_quot = Verdict::Unknown;
  bool verdicts_consistent = false;

  /// Connecting data: per checked element of lim X'', the class in lim1 X'
  /// of the shifted lift, with its verdict.
  std::vector<std::pair<ProElement, Verdict>> connecting_classes;
  bool connecting_kernel_matches_image = false;
  /// False when the quotient limit's canonical families are not eventually
  /// periodic (infinite-order core automorphism), in which case the
  /// element-level connecting checks cover only the periodic part.
  bool connecting_complete = true;

  bool ok() const {
    return levelwise_exact && lim_part_exact && verdicts_consistent &&
           connecting_kernel_matches_image;
  }
};
SixTermReport six_term(const TowerMorphism& inject,
                       const TowerMorphism& project);

/// Map induced on limits by a tower morphism.
GroupHom lim_induced(const TowerMorphism& f, const LimResult& src,
                     const LimResult& tgt);

} // namespace limtower

#pragma once

#include "limtower/fgab.hpp"

#include <optional>
#include <string>
#include <vector>

namespace limtower {

/// Inverse sequence X_0 <- X_1 <- X_2 <- ... of f.g. groups with structure
/// maps s_n : X_n -> X_{n-1}, represented by a finite stem X_0..X_{N-1}
/// followed by a periodic tail: level N+i carries tail group (i mod p) and
/// the tail maps repeat with period p. Every level and map is total via
/// unrolling; the representation is closed under the levelwise operations
/// used here.
class Tower {
public:
  /// stem_maps[n-1] is s_n : stem[n] -> stem[n-1]; tail_maps[j] maps tail
  /// group (j+1 mod p) to tail group j; junction is s_N from tail group 0
  /// into the last stem level (required iff the stem is nonempty).
  Tower(Ring ring, std::vector<FgAbGroup> stem, std::vector<GroupHom> stem_maps,
        std::vector<FgAbGroup> tail_groups, std::vector<GroupHom> tail_maps,
        std::optional<GroupHom> junction);

  /// Stem followed by the zero tail.
  static Tower zero_tailed(Ring ring, std::vector<FgAbGroup> stem,
                           std::vector<GroupHom> stem_maps);
  /// Constant tower: every level g, every map endo.
  static Tower constant(const FgAbGroup& g, const GroupHom& endo);
  static Tower constant_identity(const FgAbGroup& g);
  static Tower zero(Ring ring);

  const Ring& ring() const { return ring_; }
  std::size_t stem_length() const { return stem_.size(); }
  std::size_t period() const { return tail_groups_.size(); }
  std::size_t tail_start() const { return stem_.size(); }

  const FgAbGroup& level(std::size_t n) const;
  /// s_n : X_n -> X_{n-1}; n >= 1.
  const GroupHom& map(std::size_t n) const;
  /// Composite X_m -> X_n of structure maps (identity when m == n).
  GroupHom composite(std::size_t m, std::size_t n) const;

  std::size_t tail_class(std::size_t n) const;
  const std::vector<FgAbGroup>& tail_groups() const { return tail_groups_; }
  const std::vector<GroupHom>& tail_maps() const { return tail_maps_; }
  const std::vector<FgAbGroup>& stem() const { return stem_; }

  /// The same tower with `extra` tail levels peeled into the stem.
  Tower unrolled(std::size_t extra) const;
  /// The same tower with the tail period repeated `factor` times.
  Tower period_multiplied(std::size_t factor) const;

  /// Structure maps well defined, junction compatible; reason on failure.
  bool check_well_formed(std::string* why = nullptr) const;

  /// All levels finite groups.
  bool all_levels_finite() const;

  std::string describe() const;

private:
  Ring ring_;
  std::vector<FgAbGroup> stem_;
  std::vector<GroupHom> stem_maps_;
  std::vector<FgAbGroup> tail_groups_;
  std::vector<GroupHom> tail_maps_;
  std::optional<GroupHom> junction_;
};

/// Align two towers on a common stem length and tail period.
std::pair<Tower, Tower> align(const Tower& a, const Tower& b);

/// Levelwise morphism of towers with its own stem + periodic tail of homs.
/// level_hom(n) is f_n : X_n -> Y_n; naturality is finitely checkable on the
/// stem plus one common tail period.
class TowerMorphism {
public:
  TowerMorphism(Tower source, Tower target, std::vector<GroupHom> stem_homs,
                std::vector<GroupHom> tail_homs);

  static TowerMorphism identity(const Tower& x);
  static TowerMorphism zero(const Tower& src, const Tower& tgt);
  /// Constant levelwise hom on aligned towers (tail period 1 morphism).
  static TowerMorphism levelwise_constant(const Tower& src, const Tower& tgt,
                                          const GroupHom& h);

  const Tower& source() const { return source_; }
  const Tower& target() const { return target_; }
  std::size_t stem_length() const { return stem_homs_.size(); }
  std::size_t period() const { return tail_homs_.size(); }

  const GroupHom& level_hom(std::size_t n) const;

  /// Naturality squares commute on the stem and one full period window.
  bool check_natural(std::string* why = nullptr) const;

  TowerMorphism compose(const TowerMorphism& f) const;
  TowerMorphism operator+(const TowerMorphism& o) const;
  TowerMorphism operator-() const;

private:
  Tower source_;
  Tower target_;
  std::vector<GroupHom> stem_homs_; // levels 0..stem-1
  std::vector<GroupHom> tail_homs_; // level stem+i uses i mod period
};

/// Eventually periodic element of the product of levels: explicit stem
/// values then a repeating tail pattern.
class ProElement {
public:
  ProElement(std::vector<IntVec> stem_values, std::vector<IntVec> tail_pattern);

  static ProElement zero(const Tower& x);

  std::size_t stem_length() const { return stem_values_.size(); }
  std::size_t period() const { return tail_pattern_.size(); }
  const IntVec& value(std::size_t n) const;

  /// Coordinate counts match the tower's levels at every level (finite
  /// check over the alignment window).
  bool valid_for(const Tower& x, std::string* why = nullptr) const;

  /// Same element re-sliced with a longer stem and/or repeated pattern.
  ProElement resliced(std::size_t stem_len, std::size_t period) const;

  bool equals_on(const Tower& x, const ProElement& other) const;

  std::string describe() const;

private:
  std::vector<IntVec> stem_values_;
  std::vector<IntVec> tail_pattern_;
};

} // namespace limtower

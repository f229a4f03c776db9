#include "limtower/tower.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace limtower {

Tower::Tower(Ring ring, std::vector<FgAbGroup> stem,
             std::vector<GroupHom> stem_maps,
             std::vector<FgAbGroup> tail_groups,
             std::vector<GroupHom> tail_maps, std::optional<GroupHom> junction)
    : ring_(std::move(ring)),
      stem_(std::move(stem)),
      stem_maps_(std::move(stem_maps)),
      tail_groups_(std::move(tail_groups)),
      tail_maps_(std::move(tail_maps)),
      junction_(std::move(junction)) {
  if (tail_groups_.empty())
    throw std::invalid_argument("tower tail must have period >= 1");
  if (tail_maps_.size() != tail_groups_.size())
    throw std::invalid_argument("tower tail needs one map per tail group");
  if (!stem_.empty() && stem_maps_.size() + 1 != stem_.size())
    throw std::invalid_argument("tower stem needs one map per adjacent pair");
  if (!stem_.empty() && !junction_)
    throw std::invalid_argument("tower with a stem needs a junction map");
  std::string why;
  if (!check_well_formed(&why)) throw std::invalid_argument("tower: " + why);
}

Tower Tower::zero_tailed(Ring ring, std::vector<FgAbGroup> stem,
                         std::vector<GroupHom> stem_maps) {
  FgAbGroup z = FgAbGroup::trivial(ring);
  std::optional<GroupHom> junction;
  if (!stem.empty()) junction = GroupHom::zero(z, stem.back());
  return Tower(ring, std::move(stem), std::move(stem_maps), {z},
               {GroupHom::identity(z)}, junction);
}

Tower Tower::constant(const FgAbGroup& g, const GroupHom& endo) {
  return Tower(g.ring(), {}, {}, {g}, {endo}, std::nullopt);
}

Tower Tower::constant_identity(const FgAbGroup& g) {
  return constant(g, GroupHom::identity(g));
}

Tower Tower::zero(Ring ring) {
  return constant_identity(FgAbGroup::trivial(ring));
}

const FgAbGroup& Tower::level(std::size_t n) const {
  if (n < stem_.size()) return stem_[n];
  return tail_groups_[(n - stem_.size()) % tail_groups_.size()];
}

const GroupHom& Tower::map(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("map index starts at 1");
  if (n < stem_.size()) return stem_maps_[n - 1];
  // n == stem length only happens with a nonempty stem, so the junction
  // exists; past it the tail maps repeat.
  if (n == stem_.size()) return *junction_;
  return tail_maps_[(n - stem_.size() - 1) % tail_maps_.size()];
}

GroupHom Tower::composite(std::size_t m, std::size_t n) const {
  if (m < n) throw std::invalid_argument("composite needs m >= n");
  GroupHom h = GroupHom::identity(level(m));
  for (std::size_t k = m; k > n; --k) h = map(k).compose(h);
  return h;
}

std::size_t Tower::tail_class(std::size_t n) const {
  if (n < stem_.size())
    throw std::invalid_argument("tail_class of a stem level");
  return (n - stem_.size()) % tail_groups_.size();
}

Tower Tower::unrolled(std::size_t extra) const {
  if (extra == 0) return *this;
  std::vector<FgAbGroup> stem = stem_;
  std::vector<GroupHom> maps = stem_maps_;
  std::vector<FgAbGroup> tg = tail_groups_;
  std::vector<GroupHom> tm = tail_maps_;
  Tower cur = *this;
  for (std::size_t i = 0; i < extra; ++i) {
    std::size_t n = stem.size();
    stem.push_back(cur.level(n));
    if (n > 0) maps.push_back(cur.map(n));
    std::rotate(tg.begin(), tg.begin() + 1, tg.end());
    std::rotate(tm.begin(), tm.begin() + 1, tm.end());
  }
  GroupHom junction = cur.map(stem.size());
  return Tower(ring_, std::move(stem), std::move(maps), std::move(tg),
               std::move(tm), std::move(junction));
}

Tower Tower::period_multiplied(std::size_t factor) const {
  if (factor == 0) throw std::invalid_argument("period factor must be >= 1");
  if (factor == 1) return *this;
  std::vector<FgAbGroup> tg;
  std::vector<GroupHom> tm;
  for (std::size_t r = 0; r < factor; ++r)
    for (std::size_t j = 0; j < tail_groups_.size(); ++j) {
      tg.push_back(tail_groups_[j]);
      tm.push_back(tail_maps_[j]);
    }
  return Tower(ring_, stem_, stem_maps_, std::move(tg), std::move(tm),
               junction_);
}

bool Tower::check_well_formed(std::string* why) const {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (const auto& g : stem_)
    if (!(g.ring() == ring_)) return fail("stem group over the wrong ring");
  for (const auto& g : tail_groups_)
    if (!(g.ring() == ring_)) return fail("tail group over the wrong ring");
  std::size_t p = tail_groups_.size();
  for (std::size_t n = 1; n < stem_.size(); ++n) {
    const GroupHom& s = stem_maps_[n - 1];
    if (!(s.source() == stem_[n]) || !(s.target() == stem_[n - 1]))
      return fail("structure map at level " + std::to_string(n) +
                  " has wrong endpoints");
    if (!s.is_well_defined())
      return fail("structure map at level " + std::to_string(n) +
                  " is ill-formed");
  }
  if (!stem_.empty()) {
    if (!(junction_->source() == tail_groups_[0]) ||
        !(junction_->target() == stem_.back()))
      return fail("junction map has wrong endpoints");
    if (!junction_->is_well_defined())
      return fail("junction map is ill-formed");
  }
  for (std::size_t j = 0; j < p; ++j) {
    const GroupHom& m = tail_maps_[j];
    if (!(m.source() == tail_groups_[(j + 1) % p]) ||
        !(m.target() == tail_groups_[j]))
      return fail("tail map " + std::to_string(j) + " has wrong endpoints");
    if (!m.is_well_defined())
      return fail("tail map " + std::to_string(j) + " is ill-formed");
  }
  return true;
}

bool Tower::all_levels_finite() const {
  for (const auto& g : stem_)
    if (!g.is_finite()) return false;
  for (const auto& g : tail_groups_)
    if (!g.is_finite()) return false;
  return true;
}

std::string Tower::describe() const {
  std::ostringstream os;
  os << "ring " << ring_.to_string() << "; stem [";
  for (std::size_t i = 0; i < stem_.size(); ++i) {
    os << stem_[i].canonical_string();
    if (i + 1 < stem_.size()) os << ", ";
  }
  os << "]; tail period " << period() << " [";
  for (std::size_t i = 0; i < tail_groups_.size(); ++i) {
    os << tail_groups_[i].canonical_string();
    if (i + 1 < tail_groups_.size()) os << ", ";
  }
  os << "]";
  return os.str();
}

std::pair<Tower, Tower> align(const Tower& a, const Tower& b) {
  std::size_t stem = std::max(a.stem_length(), b.stem_length());
  std::size_t p = std::lcm(a.period(), b.period());
  Tower ua = a.unrolled(stem - a.stem_length());
  Tower ub = b.unrolled(stem - b.stem_length());
  return {ua.period_multiplied(p / ua.period()),
          ub.period_multiplied(p / ub.period())};
}

TowerMorphism::TowerMorphism(Tower source, Tower target,
                             std::vector<GroupHom> stem_homs,
                             std::vector<GroupHom> tail_homs)
    : source_(std::move(source)),
      target_(std::move(target)),
      stem_homs_(std::move(stem_homs)),
      tail_homs_(std::move(tail_homs)) {
  if (tail_homs_.empty())
    throw std::invalid_argument("tower morphism tail must have period >= 1");
  if (stem_homs_.size() <
      std::max(source_.stem_length(), target_.stem_length()))
    throw std::invalid_argument("tower morphism stem too short for its towers");
  if (tail_homs_.size() % std::lcm(source_.period(), target_.period()) != 0)
    throw std::invalid_argument(
        "tower morphism period must be a multiple of the towers' periods");
  for (std::size_t n = 0; n < stem_homs_.size() + tail_homs_.size(); ++n) {
    const GroupHom& h = level_hom(n);
    if (!(h.source() == source_.level(n)) ||
        !(h.target() == target_.level(n)))
      throw std::invalid_argument("tower morphism level " + std::to_string(n) +
                                  " has wrong endpoints");
  }
}

TowerMorphism TowerMorphism::identity(const Tower& x) {
  std::vector<GroupHom> stem;
  for (std::size_t n = 0; n < x.stem_length(); ++n)
    stem.push_back(GroupHom::identity(x.level(n)));
  std::vector<GroupHom> tail;
  for (std::size_t j = 0; j < x.period(); ++j)
    tail.push_back(GroupHom::identity(x.tail_groups()[j]));
  return TowerMorphism(x, x, std::move(stem), std::move(tail));
}

TowerMorphism TowerMorphism::zero(const Tower& src, const Tower& tgt) {
  auto [a, b] = align(src, tgt);
  std::vector<GroupHom> stem;
  for (std::size_t n = 0; n < a.stem_length(); ++n)
    stem.push_back(GroupHom::zero(a.level(n), b.level(n)));
  std::vector<GroupHom> tail;
  for (std::size_t j = 0; j < a.period(); ++j)
    tail.push_back(GroupHom::zero(a.level(a.stem_length() + j),
                                  b.level(b.stem_length() + j)));
  return TowerMorphism(a, b, std::move(stem), std::move(tail));
}

TowerMorphism TowerMorphism::levelwise_constant(const Tower& src,
                                                const Tower& tgt,
                                                const GroupHom& h) {
  auto [a, b] = align(src, tgt);
  std::vector<GroupHom> stem(a.stem_length(), h);
  std::vector<GroupHom> tail(a.period(), h);
  return TowerMorphism(a, b, std::move(stem), std::move(tail));
}

const GroupHom& TowerMorphism::level_hom(std::size_t n) const {
  if (n < stem_homs_.size()) return stem_homs_[n];
  return tail_homs_[(n - stem_homs_.size()) % tail_homs_.size()];
}

bool TowerMorphism::check_natural(std::string* why) const {
  std::size_t window =
      stem_homs_.size() +
      std::lcm(tail_homs_.size(),
               std::lcm(source_.period(), target_.period())) +
      1;
  for (std::size_t n = 1; n <= window; ++n) {
    GroupHom left = level_hom(n - 1).compose(source_.map(n));
    GroupHom right = target_.map(n).compose(level_hom(n));
    if (!left.equals(right)) {
      if (why) *why = "naturality square fails at level " + std::to_string(n);
      return false;
    }
  }
  return true;
}

TowerMorphism TowerMorphism::compose(const TowerMorphism& f) const {
  std::size_t stem = std::max(stem_homs_.size(), f.stem_homs_.size());
  std::size_t p = std::lcm(tail_homs_.size(), f.tail_homs_.size());
  std::vector<GroupHom> s, t;
  for (std::size_t n = 0; n < stem; ++n)
    s.push_back(level_hom(n).compose(f.level_hom(n)));
  for (std::size_t j = 0; j < p; ++j)
    t.push_back(level_hom(stem + j).compose(f.level_hom(stem + j)));
  return TowerMorphism(f.source_, target_, std::move(s), std::move(t));
}

TowerMorphism TowerMorphism::operator+(const TowerMorphism& o) const {
  std::size_t stem = std::max(stem_homs_.size(), o.stem_homs_.size());
  std::size_t p = std::lcm(tail_homs_.size(), o.tail_homs_.size());
  std::vector<GroupHom> s, t;
  for (std::size_t n = 0; n < stem; ++n)
    s.push_back(level_hom(n) + o.level_hom(n));
  for (std::size_t j = 0; j < p; ++j)
    t.push_back(level_hom(stem + j) + o.level_hom(stem + j));
  return TowerMorphism(source_, target_, std::move(s), std::move(t));
}

TowerMorphism TowerMorphism::operator-() const {
  std::vector<GroupHom> s, t;
  for (const auto& h : stem_homs_) s.push_back(-h);
  for (const auto& h : tail_homs_) t.push_back(-h);
  return TowerMorphism(source_, target_, std::move(s), std::move(t));
}

ProElement::ProElement(std::vector<IntVec> stem_values,
                       std::vector<IntVec> tail_pattern)
    : stem_values_(std::move(stem_values)),
      tail_pattern_(std::move(tail_pattern)) {
  if (tail_pattern_.empty())
    throw std::invalid_argument("pro-element needs a nonempty tail pattern");
}

ProElement ProElement::zero(const Tower& x) {
  std::vector<IntVec> stem;
  for (std::size_t n = 0; n < x.stem_length(); ++n)
    stem.push_back(x.level(n).zero_element());
  std::vector<IntVec> tail;
  for (std::size_t j = 0; j < x.period(); ++j)
    tail.push_back(x.tail_groups()[j].zero_element());
  return ProElement(std::move(stem), std::move(tail));
}

const IntVec& ProElement::value(std::size_t n) const {
  if (n < stem_values_.size()) return stem_values_[n];
  return tail_pattern_[(n - stem_values_.size()) % tail_pattern_.size()];
}

bool ProElement::valid_for(const Tower& x, std::string* why) const {
  std::size_t window = std::max(stem_values_.size(), x.stem_length()) +
                       std::lcm(tail_pattern_.size(), x.period());
  for (std::size_t n = 0; n < window; ++n) {
    if (value(n).size() != x.level(n).gens()) {
      if (why)
        *why = "value at level " + std::to_string(n) +
               " has wrong coordinate count";
      return false;
    }
  }
  return true;
}

ProElement ProElement::resliced(std::size_t stem_len,
                                std::size_t period) const {
  if (stem_len < stem_values_.size() || period % tail_pattern_.size() != 0)
    throw std::invalid_argument("reslice must refine the current slicing");
  std::vector<IntVec> stem, tail;
  for (std::size_t n = 0; n < stem_len; ++n) stem.push_back(value(n));
  for (std::size_t j = 0; j < period; ++j) tail.push_back(value(stem_len + j));
  return ProElement(std::move(stem), std::move(tail));
}

bool ProElement::equals_on(const Tower& x, const ProElement& other) const {
  std::size_t window =
      std::max({stem_values_.size(), other.stem_values_.size(),
                x.stem_length()}) +
      std::lcm(std::lcm(tail_pattern_.size(), other.tail_pattern_.size()),
               x.period());
  for (std::size_t n = 0; n < window; ++n)
    if (!x.level(n).elements_equal(value(n), other.value(n))) return false;
  return true;
}

std::string ProElement::describe() const {
  std::ostringstream os;
  os << "stem";
  for (const auto& v : stem_values_) os << " " << to_string(v);
  os << " | pattern";
  for (const auto& v : tail_pattern_) os << " " << to_string(v);
  return os.str();
}

} // namespace limtower

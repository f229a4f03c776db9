#include "limtower/fgab.hpp"

#include <sstream>
#include <stdexcept>

namespace limtower {

FgAbGroup::FgAbGroup(Ring ring, std::size_t gens, IntMatrix relations)
    : ring_(std::move(ring)), gens_(gens), relations_(std::move(relations)) {
  if (relations_.rows() != gens_) {
    if (relations_.rows() == 0 && relations_.cols() == 0)
      relations_ = IntMatrix(gens_, 0);
    else
      throw std::invalid_argument(
          "relation matrix must have one row per generator");
  }
  if (!ring_.is_z() && ring_.modulus <= 0)
    throw std::invalid_argument("modulus must be positive");
  IntMatrix full = relations_;
  if (!ring_.is_z())
    full = IntMatrix::hstack(full, IntMatrix::identity(gens_) * ring_.modulus);
  eff_ = hnf_cols(full);

  SnfResult s = snf(eff_);
  basis_ = s.u;
  basis_inv_ = inverse_unimodular(s.u);
  diag_.assign(gens_, Int(0));
  std::size_t nmin = std::min(eff_.rows(), eff_.cols());
  for (std::size_t i = 0; i < nmin; ++i) diag_[i] = s.d(i, i);
  for (std::size_t i = 0; i < gens_; ++i) {
    if (diag_[i] == 0)
      free_pos_.push_back(i);
    else if (diag_[i] > 1) {
      torsion_pos_.push_back(i);
      invariants_.push_back(diag_[i]);
    }
  }
  free_rank_ = free_pos_.size();
}

FgAbGroup FgAbGroup::free_module(Ring r, std::size_t rank) {
  return FgAbGroup(std::move(r), rank, IntMatrix(rank, 0));
}

FgAbGroup FgAbGroup::cyclic(Ring r, const Int& order) {
  if (order == 0) return FgAbGroup(std::move(r), 1, IntMatrix(1, 0));
  IntMatrix rel(1, 1);
  rel(0, 0) = order;
  return FgAbGroup(std::move(r), 1, rel);
}

FgAbGroup FgAbGroup::from_invariants(Ring r, std::size_t free_rank,
                                     const IntVec& torsion) {
  std::size_t g = free_rank + torsion.size();
  IntMatrix rel(g, torsion.size());
  for (std::size_t i = 0; i < torsion.size(); ++i)
    rel(free_rank + i, i) = torsion[i];
  return FgAbGroup(std::move(r), g, rel);
}

Int FgAbGroup::order() const {
  if (free_rank_ > 0) return 0;
  Int o = 1;
  for (const auto& d : invariants_) o *= d;
  return o;
}

bool FgAbGroup::is_free_over_ring() const {
  if (ring_.is_z()) return invariants_.empty();
  for (const auto& d : invariants_)
    if (d != ring_.modulus) return false;
  return true;
}

std::size_t FgAbGroup::ring_rank() const {
  if (!is_free_over_ring())
    throw std::logic_error("ring_rank of a non-free module");
  return ring_.is_z() ? free_rank_ : invariants_.size();
}

std::string FgAbGroup::canonical_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank_ > 0) {
    os << "Z";
    if (free_rank_ > 1) os << "^" << free_rank_;
    first = false;
  }
  for (const auto& d : invariants_) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

IntVec FgAbGroup::reduce(const IntVec& v) const {
  if (v.size() != gens_)
    throw std::invalid_argument("element has wrong coordinate count");
  return reduce_mod_lattice(eff_, v);
}

bool FgAbGroup::is_zero_element(const IntVec& v) const {
  return is_zero_vec(reduce(v));
}

bool FgAbGroup::elements_equal(const IntVec& a, const IntVec& b) const {
  return reduce(a) == reduce(b);
}

Int FgAbGroup::element_order(const IntVec& v) const {
  IntVec c = to_canonical_coords(v);
  for (std::size_t i = 0; i < free_rank_; ++i)
    if (c[i] != 0) return 0;
  Int o = 1;
  for (std::size_t i = 0; i < invariants_.size(); ++i) {
    const Int& d = invariants_[i];
    const Int& x = c[free_rank_ + i];
    if (x != 0) o = lcm(o, d / gcd(d, x));
  }
  return o;
}

std::vector<IntVec> FgAbGroup::elements(std::size_t cap) const {
  Int o = order();
  if (o == 0 || o > cap)
    throw std::invalid_argument(
        "element enumeration needs a small finite group");
  // Finite: the effective lattice has a pivot in every row, and the
  // canonical representatives are exactly the tuples with each coordinate
  // in [0, pivot of its row).
  IntVec pivots(gens_, Int(1));
  for (std::size_t j = 0; j < eff_.cols(); ++j) {
    std::size_t p = 0;
    while (p < gens_ && eff_(p, j) == 0) ++p;
    if (p < gens_) pivots[p] = eff_(p, j);
  }
  std::vector<IntVec> out;
  IntVec cur(gens_, Int(0));
  for (;;) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < gens_ && cur[i] + 1 == pivots[i]) {
      cur[i] = 0;
      ++i;
    }
    if (i == gens_) break;
    ++cur[i];
  }
  return out;
}

IntVec FgAbGroup::to_canonical_coords(const IntVec& v) const {
  if (v.size() != gens_)
    throw std::invalid_argument("element has wrong coordinate count");
  IntVec y = basis_ * v;
  IntVec out;
  out.reserve(free_rank_ + invariants_.size());
  for (std::size_t p : free_pos_) out.push_back(y[p]);
  for (std::size_t i = 0; i < torsion_pos_.size(); ++i) {
    Int r = y[torsion_pos_[i]] % invariants_[i];
    if (r < 0) r += invariants_[i];
    out.push_back(r);
  }
  return out;
}

IntVec FgAbGroup::from_canonical_coords(const IntVec& c) const {
  if (c.size() != free_rank_ + invariants_.size())
    throw std::invalid_argument("canonical coordinate count mismatch");
  IntVec y(gens_, Int(0));
  for (std::size_t i = 0; i < free_pos_.size(); ++i) y[free_pos_[i]] = c[i];
  for (std::size_t i = 0; i < torsion_pos_.size(); ++i)
    y[torsion_pos_[i]] = c[free_rank_ + i];
  return reduce(basis_inv_ * y);
}

FgAbGroup FgAbGroup::canonical_group() const {
  return from_invariants(ring_, free_rank_, invariants_);
}

IntMatrix FgAbGroup::to_canonical_matrix() const {
  IntMatrix t(free_rank_ + invariants_.size(), gens_);
  std::size_t r = 0;
  for (std::size_t p : free_pos_) {
    for (std::size_t j = 0; j < gens_; ++j) t(r, j) = basis_(p, j);
    ++r;
  }
  for (std::size_t p : torsion_pos_) {
    for (std::size_t j = 0; j < gens_; ++j) t(r, j) = basis_(p, j);
    ++r;
  }
  return t;
}

IntMatrix FgAbGroup::from_canonical_matrix() const {
  IntMatrix f(gens_, free_rank_ + invariants_.size());
  std::size_t c = 0;
  for (std::size_t p : free_pos_) {
    for (std::size_t i = 0; i < gens_; ++i) f(i, c) = basis_inv_(i, p);
    ++c;
  }
  for (std::size_t p : torsion_pos_) {
    for (std::size_t i = 0; i < gens_; ++i) f(i, c) = basis_inv_(i, p);
    ++c;
  }
  return f;
}

GroupHom::GroupHom(FgAbGroup source, FgAbGroup target, IntMatrix matrix)
    : source_(std::make_shared<FgAbGroup>(std::move(source))),
      target_(std::make_shared<FgAbGroup>(std::move(target))),
      matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_->gens() || matrix_.cols() != source_->gens())
    throw std::invalid_argument("hom matrix shape mismatch: expected " +
                                std::to_string(target_->gens()) + "x" +
                                std::to_string(source_->gens()));
  if (!(source_->ring() == target_->ring()))
    throw std::invalid_argument("hom between groups over different rings");
}

GroupHom GroupHom::identity(const FgAbGroup& g) {
  return GroupHom(g, g, IntMatrix::identity(g.gens()));
}

GroupHom GroupHom::zero(const FgAbGroup& src, const FgAbGroup& tgt) {
  return GroupHom(src, tgt, IntMatrix::zero(tgt.gens(), src.gens()));
}

bool GroupHom::is_well_defined() const {
  const IntMatrix& rel = source_->relation_lattice();
  for (std::size_t j = 0; j < rel.cols(); ++j)
    if (!target_->is_zero_element(matrix_ * rel.col(j))) return false;
  return true;
}

void GroupHom::require_well_defined(const char* what) const {
  if (!is_well_defined())
    throw std::invalid_argument(std::string(what) +
                                ": ill-formed hom (does not respect relations)");
}

IntVec GroupHom::apply(const IntVec& v) const {
  if (v.size() != source_->gens())
    throw std::invalid_argument("apply: wrong coordinate count");
  return target_->reduce(matrix_ * v);
}

GroupHom GroupHom::compose(const GroupHom& f) const {
  if (!(f.target() == source()))
    throw std::invalid_argument("compose: middle groups differ");
  return GroupHom(f.source(), target(), matrix_ * f.matrix_);
}

GroupHom GroupHom::operator+(const GroupHom& o) const {
  if (!(source() == o.source()) || !(target() == o.target()))
    throw std::invalid_argument("hom sum: endpoint mismatch");
  return GroupHom(source(), target(), matrix_ + o.matrix_);
}

GroupHom GroupHom::operator-(const GroupHom& o) const { return *this + (-o); }

GroupHom GroupHom::operator-() const {
  return GroupHom(source(), target(), -matrix_);
}

bool GroupHom::equals(const GroupHom& o) const {
  if (!(source() == o.source()) || !(target() == o.target())) return false;
  for (std::size_t j = 0; j < matrix_.cols(); ++j)
    if (!target_->is_zero_element(matrix_.col(j) - o.matrix_.col(j)))
      return false;
  return true;
}

bool GroupHom::is_zero_map() const {
  for (std::size_t j = 0; j < matrix_.cols(); ++j)
    if (!target_->is_zero_element(matrix_.col(j))) return false;
  return true;
}

bool GroupHom::is_injective() const {
  IntMatrix k = kernel_lattice_in_source();
  for (std::size_t j = 0; j < k.cols(); ++j)
    if (!source_->is_zero_element(k.col(j))) return false;
  return true;
}

bool GroupHom::is_surjective() const {
  if (target_->gens() == 0) return true;
  return hnf_cols(image_lattice()) == IntMatrix::identity(target_->gens());
}

std::optional<IntVec> GroupHom::preimage(const IntVec& y) const {
  if (y.size() != target_->gens())
    throw std::invalid_argument("preimage: wrong coordinate count");
  IntMatrix aug = IntMatrix::hstack(matrix_, target_->relation_lattice());
  auto out = solve(aug, y);
  if (!out.solution) return std::nullopt;
  IntVec x(out.solution->particular.begin(),
           out.solution->particular.begin() + source_->gens());
  return source_->reduce(x);
}

GroupHom GroupHom::inverse() const {
  if (!is_bijective())
    throw std::invalid_argument("inverse of a non-bijective hom");
  IntMatrix inv(source_->gens(), target_->gens());
  for (std::size_t j = 0; j < target_->gens(); ++j) {
    IntVec e(target_->gens(), Int(0));
    e[j] = 1;
    auto x = preimage(e);
    if (!x) throw std::logic_error("inverse: preimage missing");
    inv.set_col(j, *x);
  }
  return GroupHom(target(), source(), inv);
}

IntMatrix GroupHom::image_lattice() const {
  return hnf_cols(IntMatrix::hstack(matrix_, target_->relation_lattice()));
}

IntMatrix GroupHom::kernel_lattice_in_source() const {
  IntMatrix pre = preimage_lattice(matrix_, target_->relation_lattice());
  return hnf_cols(IntMatrix::hstack(pre, source_->relation_lattice()));
}

Subgroup subgroup_from_lattice(const FgAbGroup& g,
                               const IntMatrix& gens_lattice) {
  if (gens_lattice.rows() != g.gens())
    throw std::invalid_argument("subgroup lattice has wrong ambient dimension");
  IntMatrix lh = hnf_cols(gens_lattice);
  IntMatrix rels = preimage_lattice(lh, g.relation_lattice());
  FgAbGroup sub(g.ring(), lh.cols(), rels);
  return Subgroup{sub, GroupHom(sub, g, lh)};
}

Subgroup kernel(const GroupHom& f) {
  f.require_well_defined("kernel");
  return subgroup_from_lattice(f.source(), f.kernel_lattice_in_source());
}

Quotient cokernel(const GroupHom& f) {
  f.require_well_defined("cokernel");
  return quotient_by_lattice(f.target(), f.matrix());
}

Quotient quotient_by_lattice(const FgAbGroup& g, const IntMatrix& lattice) {
  if (lattice.rows() != g.gens())
    throw std::invalid_argument("quotient lattice has wrong ambient dimension");
  FgAbGroup q(g.ring(), g.gens(),
              IntMatrix::hstack(g.relation_lattice(), lattice));
  return Quotient{q, GroupHom(g, q, IntMatrix::identity(g.gens()))};
}

Subgroup image(const GroupHom& f) {
  return subgroup_from_lattice(f.target(), f.matrix());
}

DirectSum direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
  if (!(a.ring() == b.ring()))
    throw std::invalid_argument("direct sum over different rings");
  FgAbGroup s(a.ring(), a.gens() + b.gens(),
              IntMatrix::block_diag(a.relations(), b.relations()));
  std::size_t ga = a.gens(), gb = b.gens();
  IntMatrix i1(ga + gb, ga), i2(ga + gb, gb), p1(ga, ga + gb), p2(gb, ga + gb);
  for (std::size_t i = 0; i < ga; ++i) {
    i1(i, i) = 1;
    p1(i, i) = 1;
  }
  for (std::size_t i = 0; i < gb; ++i) {
    i2(ga + i, i) = 1;
    p2(i, ga + i) = 1;
  }
  return DirectSum{s, GroupHom(a, s, i1), GroupHom(b, s, i2),
                   GroupHom(s, a, p1), GroupHom(s, b, p2)};
}

Pushout pushout(const GroupHom& f, const GroupHom& g) {
  if (!(f.source() == g.source()))
    throw std::invalid_argument("pushout legs must share their source");
  f.require_well_defined("pushout");
  g.require_well_defined("pushout");
  DirectSum d = direct_sum(f.target(), g.target());
  GroupHom antidiag(f.source(), d.group,
                    IntMatrix::vstack(f.matrix(), -g.matrix()));
  Quotient q = cokernel(antidiag);
  return Pushout{q.group, q.projection.compose(d.in1),
                 q.projection.compose(d.in2)};
}

GroupHom pushout_mediator(const Pushout& p, const GroupHom& h1,
                          const GroupHom& h2) {
  if (!(h1.target() == h2.target()))
    throw std::invalid_argument("mediator cocone targets differ");
  GroupHom u(p.group, h1.target(),
             IntMatrix::hstack(h1.matrix(), h2.matrix()));
  u.require_well_defined("pushout_mediator (cocone does not commute)");
  return u;
}

ExactnessReport is_exact(const std::vector<GroupHom>& chain) {
  ExactnessReport rep;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!(chain[i].target() == chain[i + 1].source()))
      throw std::invalid_argument("is_exact: chain is not composable at node " +
                                  std::to_string(i));
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const GroupHom& in = chain[i];
    const GroupHom& out = chain[i + 1];
    GroupHom comp = out.compose(in);
    for (std::size_t j = 0; j < comp.matrix().cols(); ++j) {
      IntVec img = comp.target().reduce(comp.matrix().col(j));
      if (!is_zero_vec(img)) {
        rep.failed_at = i;
        rep.reason = "composite is nonzero";
        rep.witness = img;
        return rep;
      }
    }
    IntMatrix ker = out.kernel_lattice_in_source();
    IntMatrix im = in.image_lattice();
    for (std::size_t j = 0; j < ker.cols(); ++j) {
      if (!is_zero_vec(reduce_mod_lattice(im, ker.col(j)))) {
        rep.failed_at = i;
        rep.reason = "kernel element not in image";
        rep.witness = in.target().reduce(ker.col(j));
        return rep;
      }
    }
  }
  rep.exact = true;
  rep.reason = "exact";
  return rep;
}

ExactnessReport is_short_exact(const ShortExact& s) {
  ExactnessReport rep;
  if (!s.inject.is_injective()) {
    rep.reason = "left map is not injective";
    IntMatrix k = s.inject.kernel_lattice_in_source();
    for (std::size_t j = 0; j < k.cols(); ++j)
      if (!s.inject.source().is_zero_element(k.col(j))) {
        rep.witness = s.inject.source().reduce(k.col(j));
        break;
      }
    return rep;
  }
  if (!s.project.is_surjective()) {
    rep.reason = "right map is not surjective";
    return rep;
  }
  FgAbGroup zero = FgAbGroup::trivial(s.inject.source().ring());
  std::vector<GroupHom> chain{GroupHom::zero(zero, s.inject.source()),
                              s.inject, s.project,
                              GroupHom::zero(s.project.target(), zero)};
  return is_exact(chain);
}

namespace {

GroupHom induced_on_subgroups(const GroupHom& f, const Subgroup& sa,
                              const Subgroup& sb) {
  IntMatrix m(sb.group.gens(), sa.group.gens());
  for (std::size_t j = 0; j < sa.group.gens(); ++j) {
    IntVec e(sa.group.gens(), Int(0));
    e[j] = 1;
    IntVec y = f.apply(sa.inclusion.apply(e));
    auto x = sb.inclusion.preimage(y);
    if (!x)
      throw std::invalid_argument("induced map does not land in the subgroup");
    m.set_col(j, *x);
  }
  return GroupHom(sa.group, sb.group, m);
}

} // namespace

SnakeResult snake(const SnakeInput& in) {
  auto top = is_short_exact(in.top);
  if (!top.exact)
    throw std::invalid_argument("snake: top row not exact: " + top.reason);
  auto bot = is_short_exact(in.bottom);
  if (!bot.exact)
    throw std::invalid_argument("snake: bottom row not exact: " + bot.reason);
  if (!in.vb.compose(in.top.inject).equals(in.bottom.inject.compose(in.va)))
    throw std::invalid_argument("snake: left square does not commute");
  if (!in.vc.compose(in.top.project).equals(in.bottom.project.compose(in.vb)))
    throw std::invalid_argument("snake: right square does not commute");

  SnakeResult r{kernel(in.va),
                kernel(in.vb),
                kernel(in.vc),
                cokernel(in.va),
                cokernel(in.vb),
                cokernel(in.vc),
                GroupHom::identity(FgAbGroup()),
                GroupHom::identity(FgAbGroup()),
                GroupHom::identity(FgAbGroup()),
                GroupHom::identity(FgAbGroup()),
                GroupHom::identity(FgAbGroup())};
  r.ker_ab = induced_on_subgroups(in.top.inject, r.ker_a, r.ker_b);
  r.ker_bc = induced_on_subgroups(in.top.project, r.ker_b, r.ker_c);
  r.cok_ab = GroupHom(r.cok_a.group, r.cok_b.group, in.bottom.inject.matrix());
  r.cok_bc = GroupHom(r.cok_b.group, r.cok_c.group, in.bottom.project.matrix());

  // Lift along the top projection, push down the middle, pull back along the
  // bottom injection, land in coker(va). Deterministic HNF-based preimages.
  IntMatrix conn(r.cok_a.group.gens(), r.ker_c.group.gens());
  for (std::size_t j = 0; j < r.ker_c.group.gens(); ++j) {
    IntVec e(r.ker_c.group.gens(), Int(0));
    e[j] = 1;
    IntVec c = r.ker_c.inclusion.apply(e);
    auto b = in.top.project.preimage(c);
    if (!b) throw std::logic_error("snake: projection preimage missing");
    IntVec bprime = in.vb.apply(*b);
    auto aprime = in.bottom.inject.preimage(bprime);
    if (!aprime)
      throw std::logic_error("snake: connecting chase left the image");
    conn.set_col(j, r.cok_a.projection.apply(*aprime));
  }
  r.connecting = GroupHom(r.ker_c.group, r.cok_a.group, conn);
  r.connecting.require_well_defined("snake connecting map");
  return r;
}

std::vector<GroupHom> SnakeResult::six_term() const {
  FgAbGroup zero = FgAbGroup::trivial(ker_a.group.ring());
  return {GroupHom::zero(zero, ker_a.group),
          ker_ab,
          ker_bc,
          connecting,
          cok_ab,
          cok_bc,
          GroupHom::zero(cok_c.group, zero)};
}

} // namespace limtower

#include "doctest.h"

#include "limtower/fgab.hpp"

#include "test_util.hpp"

using namespace limtower;
using testutil::Rng;

namespace {

const Ring Z = ring_z();

// Random group in canonical presentation: free part + torsion invariants.
FgAbGroup random_group(Rng& rng, std::size_t max_rank = 2,
                       long max_invariant = 8) {
  std::size_t f = rng() % (max_rank + 1);
  std::size_t t = rng() % 3;
  IntVec tor;
  Int d = 1 + rng() % max_invariant;
  for (std::size_t i = 0; i < t; ++i) {
    if (d == 1) d = 2;
    tor.push_back(d);
    d *= 1 + rng() % 3; // keep a divisibility chain
  }
  return FgAbGroup::from_invariants(Z, f, tor);
}

// Modulus of generator j in a canonical presentation (0 for a free gen).
Int gen_modulus(const FgAbGroup& g, std::size_t j) {
  if (j < g.free_rank()) return 0;
  return g.invariant_factors()[j - g.free_rank()];
}

// Random well-defined hom between canonically presented groups.
GroupHom random_canonical_hom(Rng& rng, const FgAbGroup& a, const FgAbGroup& b,
                              long lo = -4, long hi = 4) {
  IntMatrix m(b.gens(), a.gens());
  for (std::size_t j = 0; j < a.gens(); ++j) {
    Int dj = gen_modulus(a, j);
    for (std::size_t i = 0; i < b.gens(); ++i) {
      Int ei = gen_modulus(b, i);
      if (dj == 0) {
        m(i, j) = testutil::rand_int(rng, lo, hi);
      } else if (ei == 0) {
        m(i, j) = 0;
      } else {
        Int step = ei / gcd(ei, dj);
        m(i, j) = step * testutil::rand_int(rng, lo, hi);
      }
    }
  }
  return GroupHom(a, b, m);
}

// Random well-defined hom between arbitrary presentations, routed through
// the canonical decompositions.
GroupHom random_hom(Rng& rng, const FgAbGroup& a, const FgAbGroup& b,
                    long lo = -4, long hi = 4) {
  FgAbGroup ca = a.canonical_group(), cb = b.canonical_group();
  GroupHom mid = random_canonical_hom(rng, ca, cb, lo, hi);
  IntMatrix m = b.from_canonical_matrix() * mid.matrix() * a.to_canonical_matrix();
  return GroupHom(a, b, m);
}

} // namespace

TEST_CASE("group canonical forms") {
  FgAbGroup g(Z, 2, IntMatrix{{Int(2), Int(0)}, {Int(0), Int(3)}});
  CHECK(g.canonical_string() == "Z/6");
  CHECK(g.order() == 6);
  CHECK(g.is_finite());

  FgAbGroup h(Z, 2, IntMatrix{{Int(2), Int(4)}, {Int(6), Int(8)}});
  CHECK(h.invariant_factors() == IntVec{Int(2), Int(4)});
  CHECK(h.order() == 8);

  FgAbGroup free2 = FgAbGroup::free_module(Z, 2);
  CHECK(free2.canonical_string() == "Z^2");
  CHECK(free2.is_free_over_ring());
  CHECK(free2.ring_rank() == 2);

  FgAbGroup zm = FgAbGroup::free_module(ring_zmod(6), 2);
  CHECK(zm.canonical_string() == "Z/6 + Z/6");
  CHECK(zm.is_free_over_ring());
  CHECK(zm.ring_rank() == 2);
  FgAbGroup zm2(ring_zmod(6), 1, IntMatrix{{Int(2)}});
  CHECK(zm2.canonical_string() == "Z/2");
  CHECK(!zm2.is_free_over_ring());
}

TEST_CASE("element arithmetic, orders, enumeration") {
  FgAbGroup g = FgAbGroup::from_invariants(Z, 1, {Int(2), Int(4)});
  CHECK(g.element_order({Int(0), Int(1), Int(0)}) == 2);
  CHECK(g.element_order({Int(0), Int(0), Int(1)}) == 4);
  CHECK(g.element_order({Int(0), Int(0), Int(2)}) == 2);
  CHECK(g.element_order({Int(1), Int(0), Int(0)}) == 0);
  CHECK(g.element_order(g.zero_element()) == 1);

  FgAbGroup fin = FgAbGroup::from_invariants(Z, 0, {Int(2), Int(6)});
  auto elems = fin.elements();
  CHECK(elems.size() == 12);
  for (const auto& e : elems) CHECK(fin.reduce(e) == e);

  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    FgAbGroup h = random_group(rng);
    IntVec v = testutil::random_vec(rng, h.gens(), -9, 9);
    CHECK(h.elements_equal(v,
                           h.from_canonical_coords(h.to_canonical_coords(v))));
  }
}

TEST_CASE("kernel pinned examples") {
  FgAbGroup z = FgAbGroup::cyclic(Z, 0);
  SUBCASE("multiplication by 2 on Z") {
    auto k = kernel(GroupHom(z, z, IntMatrix{{Int(2)}}));
    CHECK(k.group.is_trivial());
  }
  SUBCASE("reduction Z -> Z/2 has kernel 2Z") {
    FgAbGroup z2 = FgAbGroup::cyclic(Z, 2);
    auto k = kernel(GroupHom(z, z2, IntMatrix{{Int(1)}}));
    CHECK(k.group.canonical_string() == "Z");
    CHECK(k.inclusion.is_injective());
    // coset enumeration oracle: the kernel is exactly the even integers
    for (long x = -4; x <= 4; ++x) {
      bool in_kernel = lattice_contains(k.inclusion.matrix(), {Int(x)});
      CHECK(in_kernel == (x % 2 == 0));
    }
  }
  SUBCASE("identity") {
    CHECK(kernel(GroupHom::identity(z)).group.is_trivial());
  }
}

TEST_CASE("cokernel pinned examples") {
  FgAbGroup z2free = FgAbGroup::free_module(Z, 2);
  SUBCASE("diag(2,3)") {
    auto c = cokernel(GroupHom(z2free, z2free,
                               IntMatrix{{Int(2), Int(0)}, {Int(0), Int(3)}}));
    CHECK(c.group.same_canonical_form(
        FgAbGroup::from_invariants(Z, 0, {Int(6)})));
    CHECK(c.projection.is_surjective());
  }
  SUBCASE("surjective map has trivial cokernel") {
    FgAbGroup z = FgAbGroup::cyclic(Z, 0);
    auto c = cokernel(GroupHom(z, z, IntMatrix{{Int(-1)}}));
    CHECK(c.group.is_trivial());
  }
  SUBCASE("zero map Z -> Z") {
    FgAbGroup z = FgAbGroup::cyclic(Z, 0);
    auto c = cokernel(GroupHom::zero(z, z));
    CHECK(c.group.canonical_string() == "Z");
  }
}

TEST_CASE("kernel and cokernel sit in exact sequences") {
  Rng rng(23);
  FgAbGroup zero = FgAbGroup::trivial(Z);
  for (int iter = 0; iter < 60; ++iter) {
    FgAbGroup a = random_group(rng), b = random_group(rng);
    GroupHom f = random_hom(rng, a, b);
    auto k = kernel(f);
    auto c = cokernel(f);
    auto left = is_exact({GroupHom::zero(zero, k.group), k.inclusion, f});
    CHECK(left.exact);
    auto right = is_exact({f, c.projection, GroupHom::zero(c.group, zero)});
    CHECK(right.exact);
  }
}

TEST_CASE("pushout pinned examples") {
  FgAbGroup z = FgAbGroup::cyclic(Z, 0);
  SUBCASE("identity legs") {
    auto p = pushout(GroupHom::identity(z), GroupHom::identity(z));
    CHECK(p.group.canonical_string() == "Z");
    CHECK(p.in1.equals(p.in2));
    CHECK(p.in1.is_bijective());
  }
  SUBCASE("x2 against x3") {
    auto p = pushout(GroupHom(z, z, IntMatrix{{Int(2)}}),
                     GroupHom(z, z, IntMatrix{{Int(3)}}));
    CHECK(p.group.canonical_string() == "Z");
  }
  SUBCASE("x2 against the zero target") {
    auto p = pushout(GroupHom(z, z, IntMatrix{{Int(2)}}),
                     GroupHom::zero(z, FgAbGroup::trivial(Z)));
    CHECK(p.group.same_canonical_form(FgAbGroup::cyclic(Z, 2)));
  }
}

TEST_CASE("pushout universal property and mono preservation") {
  Rng rng(29);
  for (int iter = 0; iter < 60; ++iter) {
    FgAbGroup k = random_group(rng), a = random_group(rng),
              b = random_group(rng);
    GroupHom f = random_hom(rng, k, a);
    GroupHom g = random_hom(rng, k, b);
    auto p = pushout(f, g);
    CHECK(p.in1.compose(f).equals(p.in2.compose(g)));
    if (f.is_injective()) CHECK(p.in2.is_injective());
    if (g.is_injective()) CHECK(p.in1.is_injective());

    // Cocone through a random hom out of the pushout; the mediator must
    // exist, reproduce the cocone, and agree with the hom it came from.
    GroupHom phi = random_hom(rng, p.group, random_group(rng));
    GroupHom h1 = phi.compose(p.in1);
    GroupHom h2 = phi.compose(p.in2);
    GroupHom u = pushout_mediator(p, h1, h2);
    CHECK(u.compose(p.in1).equals(h1));
    CHECK(u.compose(p.in2).equals(h2));
    CHECK(u.equals(phi));
  }
}

TEST_CASE("is_exact pinned examples") {
  FgAbGroup z = FgAbGroup::cyclic(Z, 0);
  FgAbGroup z2 = FgAbGroup::cyclic(Z, 2);
  FgAbGroup zero = FgAbGroup::trivial(Z);
  GroupHom times2(z, z, IntMatrix{{Int(2)}});
  GroupHom mod2(z, z2, IntMatrix{{Int(1)}});

  SUBCASE("standard short exact sequence") {
    auto rep = is_exact(
        {GroupHom::zero(zero, z), times2, mod2, GroupHom::zero(z2, zero)});
    CHECK(rep.exact);
  }
  SUBCASE("0 -> Z -x2-> Z -> 0 fails on the right") {
    auto rep =
        is_exact({GroupHom::zero(zero, z), times2, GroupHom::zero(z, zero)});
    CHECK(!rep.exact);
    CHECK(rep.failed_at == 1);
    REQUIRE(rep.witness);
    // the witness generates Z/2Z at the failing node
    CHECK((*rep.witness)[0] % 2 != 0);
  }
  SUBCASE("consecutive identities are not exact unless trivial") {
    GroupHom idz = GroupHom::identity(z);
    CHECK(!is_exact({idz, idz}).exact);
    GroupHom id0 = GroupHom::identity(zero);
    CHECK(is_exact({id0, id0}).exact);
  }
}

TEST_CASE("snake pinned examples") {
  FgAbGroup z = FgAbGroup::cyclic(Z, 0);
  FgAbGroup z2 = FgAbGroup::cyclic(Z, 2);
  GroupHom times2(z, z, IntMatrix{{Int(2)}});
  GroupHom mod2(z, z2, IntMatrix{{Int(1)}});
  ShortExact row{times2, mod2};

  SUBCASE("identity verticals") {
    SnakeInput in{row, row, GroupHom::identity(z), GroupHom::identity(z),
                  GroupHom::identity(z2)};
    auto r = snake(in);
    CHECK(r.ker_a.group.is_trivial());
    CHECK(r.ker_b.group.is_trivial());
    CHECK(r.ker_c.group.is_trivial());
    CHECK(r.cok_a.group.is_trivial());
    CHECK(r.cok_b.group.is_trivial());
    CHECK(r.cok_c.group.is_trivial());
    CHECK(is_exact(r.six_term()).exact);
  }
  SUBCASE("x3 verticals over the 2-torsion row") {
    SnakeInput in{row, row, GroupHom(z, z, IntMatrix{{Int(3)}}),
                  GroupHom(z, z, IntMatrix{{Int(3)}}), GroupHom::identity(z2)};
    auto r = snake(in);
    CHECK(r.ker_c.group.is_trivial());
    CHECK(r.connecting.is_zero_map());
    CHECK(r.cok_a.group.same_canonical_form(FgAbGroup::cyclic(Z, 3)));
    CHECK(is_exact(r.six_term()).exact);
  }
}

TEST_CASE("snake on randomized split rows with twisted middles") {
  Rng rng(31);
  for (int iter = 0; iter < 40; ++iter) {
    FgAbGroup a = random_group(rng), c = random_group(rng);
    FgAbGroup a2 = random_group(rng), c2 = random_group(rng);
    DirectSum b = direct_sum(a, c);
    DirectSum b2 = direct_sum(a2, c2);
    ShortExact top{b.in1, b.pr2};
    ShortExact bottom{b2.in1, b2.pr2};
    GroupHom va = random_hom(rng, a, a2);
    GroupHom vc = random_hom(rng, c, c2);
    GroupHom t = random_hom(rng, c, a2);
    // vb = [[va, t], [0, vc]] keeps both squares commuting.
    IntMatrix m(b2.group.gens(), b.group.gens());
    for (std::size_t i = 0; i < a2.gens(); ++i) {
      for (std::size_t j = 0; j < a.gens(); ++j) m(i, j) = va.matrix()(i, j);
      for (std::size_t j = 0; j < c.gens(); ++j)
        m(i, a.gens() + j) = t.matrix()(i, j);
    }
    for (std::size_t i = 0; i < c2.gens(); ++i)
      for (std::size_t j = 0; j < c.gens(); ++j)
        m(a2.gens() + i, a.gens() + j) = vc.matrix()(i, j);
    GroupHom vb(b.group, b2.group, m);
    SnakeInput in{top, bottom, va, vb, vc};
    auto r = snake(in);
    auto rep = is_exact(r.six_term());
    CHECK(rep.exact);
  }
}

TEST_CASE("snake rejects bad input") {
  FgAbGroup z = FgAbGroup::cyclic(Z, 0);
  FgAbGroup z2 = FgAbGroup::cyclic(Z, 2);
  GroupHom times2(z, z, IntMatrix{{Int(2)}});
  GroupHom mod2(z, z2, IntMatrix{{Int(1)}});
  ShortExact row{times2, mod2};
  ShortExact broken{GroupHom(z, z, IntMatrix{{Int(0)}}), mod2};
  CHECK_THROWS_AS(snake(SnakeInput{broken, row, GroupHom::identity(z),
                                   GroupHom::identity(z),
                                   GroupHom::identity(z2)}),
                  std::invalid_argument);
  // Non-commuting square: va = x2 with identity middles.
  CHECK_THROWS_AS(
      snake(SnakeInput{row, row, GroupHom(z, z, IntMatrix{{Int(2)}}),
                       GroupHom::identity(z), GroupHom::identity(z2)}),
      std::invalid_argument);
}

TEST_CASE("homs over Z/m") {
  Ring r6 = ring_zmod(6);
  FgAbGroup m = FgAbGroup::free_module(r6, 1); // Z/6
  GroupHom f(m, m, IntMatrix{{Int(2)}});
  CHECK(f.is_well_defined());
  CHECK(!f.is_injective());
  CHECK(!f.is_surjective());
  auto k = kernel(f); // {0, 3} in Z/6
  CHECK(k.group.same_canonical_form(FgAbGroup::cyclic(r6, 2)));
  auto c = cokernel(f); // Z/6 over {0, 2, 4}
  CHECK(c.group.same_canonical_form(FgAbGroup::cyclic(r6, 2)));
  GroupHom u(m, m, IntMatrix{{Int(5)}});
  CHECK(u.is_bijective());
  CHECK(u.inverse().compose(u).equals(GroupHom::identity(m)));
}

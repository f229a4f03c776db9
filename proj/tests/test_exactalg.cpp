#include "doctest.h"

#include "limtower/int_matrix.hpp"
#include "limtower/normal_form.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <vector>

using namespace limtower;
using testutil::Rng;

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Oracle: gcd of all k x k minors, by direct enumeration.
Int gcd_of_minors(const IntMatrix& m, std::size_t k) {
  std::vector<std::size_t> ri(k), ci(k);
  Int g = 0;
  std::vector<std::size_t> rows(m.rows()), cols(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) rows[i] = i;
  for (std::size_t j = 0; j < m.cols(); ++j) cols[j] = j;

  std::vector<bool> rsel(m.rows(), false), csel(m.cols(), false);
  std::fill(rsel.end() - k, rsel.end(), true);
  do {
    std::vector<std::size_t> rs;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (rsel[i]) rs.push_back(i);
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.end() - k, csel.end(), true);
    do {
      std::vector<std::size_t> cs;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (csel[j]) cs.push_back(j);
      IntMatrix sub(k, k);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) sub(a, b) = m(rs[a], cs[b]);
      g = gcd(g, sub.det());
    } while (std::next_permutation(csel.begin(), csel.end()));
  } while (std::next_permutation(rsel.begin(), rsel.end()));
  return abs_int(g);
}

// Oracle: solvability of M x = b over Z by searching the triangular
// coefficient box of the column HNF. If H y = b has any solution, the y
// values at pivot rows are the unique rational solution of a triangular
// system, and the recursive bounds below dominate them, so the box search
// is exhaustive.
bool solvable_bruteforce(const IntMatrix& m, const IntVec& b) {
  IntMatrix h = hnf_cols(m);
  std::size_t s = h.cols();
  std::vector<std::size_t> piv(s);
  for (std::size_t j = 0; j < s; ++j) {
    std::size_t p = 0;
    while (h(p, j) == 0) ++p;
    piv[j] = p;
  }
  // Bounds: |y_j| <= beta_j with beta computed from the running residual.
  std::vector<Int> beta(s);
  Int resid = 0;
  for (const auto& x : b) resid = std::max(resid, abs_int(x));
  for (std::size_t j = 0; j < s; ++j) {
    beta[j] = resid / h(piv[j], j) + 1;
    Int colmax = 0;
    for (std::size_t i = 0; i < h.rows(); ++i)
      colmax = std::max(colmax, abs_int(h(i, j)));
    resid += beta[j] * colmax;
  }
  // Depth-first enumeration of y.
  std::vector<Int> y(s, Int(0));
  std::function<bool(std::size_t)> rec = [&](std::size_t j) -> bool {
    if (j == s) {
      IntVec v = h * y;
      return v == b;
    }
    for (Int t = -beta[j]; t <= beta[j]; ++t) {
      y[j] = t;
      if (rec(j + 1)) return true;
    }
    y[j] = 0;
    return false;
  };
  if (s == 0) return is_zero_vec(b);
  return rec(0);
}

// Oracle: intersection of two finite-index lattices by residue enumeration.
IntMatrix intersect_bruteforce(const IntMatrix& a, const IntMatrix& b) {
  std::size_t r = a.rows();
  Int qa = lattice_index(a), qb = lattice_index(b);
  REQUIRE(qa != 0);
  REQUIRE(qb != 0);
  Int period = lcm(qa, qb);
  IntMatrix ha = hnf_cols(a), hb = hnf_cols(b);
  IntMatrix gens(r, 0);
  std::vector<Int> x(r, Int(0));
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == r) {
      if (is_zero_vec(reduce_mod_lattice(ha, x)) &&
          is_zero_vec(reduce_mod_lattice(hb, x)))
        gens = IntMatrix::hstack(gens, IntMatrix::column(x));
      return;
    }
    for (Int t = 0; t < period; ++t) {
      x[i] = t;
      rec(i + 1);
    }
    x[i] = 0;
  };
  rec(0);
  gens = IntMatrix::hstack(gens, IntMatrix::identity(r) * period);
  return hnf_cols(gens);
}

} // namespace

TEST_CASE("snf pinned examples") {
  SUBCASE("2x2 with gcd-of-minors oracle") {
    IntMatrix m{{Int(2), Int(4)}, {Int(6), Int(8)}};
    auto s = snf(m);
    CHECK(s.d == IntMatrix::diagonal({Int(2), Int(4)}));
    CHECK(s.u * m * s.v == s.d);
    CHECK(gcd_of_minors(m, 1) == 2);
    CHECK(gcd_of_minors(m, 2) == 8);
  }
  SUBCASE("identity") {
    auto s = snf(IntMatrix::identity(4));
    CHECK(s.d == IntMatrix::identity(4));
    CHECK(s.rank == 4);
  }
  SUBCASE("zero matrix") {
    auto s = snf(IntMatrix::zero(3, 2));
    CHECK(s.d.is_zero());
    CHECK(s.rank == 0);
  }
  SUBCASE("empty shapes") {
    auto s = snf(IntMatrix(0, 3));
    CHECK(s.d.rows() == 0);
    s = snf(IntMatrix(2, 0));
    CHECK(s.d.cols() == 0);
    CHECK(s.u == IntMatrix::identity(2));
  }
}

TEST_CASE("snf roundtrip and invariants on random matrices") {
  Rng rng(20240817);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    IntMatrix m = testutil::random_matrix(rng, r, c, -20, 20);
    auto s = snf(m);
    CHECK(s.u * m * s.v == s.d);
    CHECK(abs_int(s.u.det()) == 1);
    CHECK(abs_int(s.v.det()) == 1);
    IntVec d = s.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      CHECK(d[i] >= 0);
      if (d[i] == 0) CHECK(d[i + 1] == 0);
      if (d[i] != 0) CHECK(d[i + 1] % d[i] == 0);
    }
  }
}

TEST_CASE("determinantal divisor law up to 4x4") {
  Rng rng(7);
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m = testutil::random_matrix(rng, r, c, -6, 6);
    auto s = snf(m);
    IntVec d = s.diagonal();
    Int prod = 1;
    for (std::size_t k = 1; k <= s.rank; ++k) {
      prod *= d[k - 1];
      CHECK(gcd_of_minors(m, k) == prod);
    }
    if (s.rank < std::min(r, c)) CHECK(gcd_of_minors(m, s.rank + 1) == 0);
  }
}

TEST_CASE("solve pinned examples") {
  SUBCASE("2 does not divide 3") {
    auto out = solve(IntMatrix{{Int(2)}}, {Int(3)});
    REQUIRE(!out.solution);
    REQUIRE(out.certificate);
    CHECK(out.certificate->verify(IntMatrix{{Int(2)}}, {Int(3)}));
  }
  SUBCASE("2x = 4") {
    auto out = solve(IntMatrix{{Int(2)}}, {Int(4)});
    REQUIRE(out.solution);
    CHECK(out.solution->particular == IntVec{Int(2)});
    CHECK(out.solution->kernel.cols() == 0);
  }
  SUBCASE("rank-deficient system with kernel") {
    IntMatrix m{{Int(1), Int(2)}, {Int(2), Int(4)}};
    auto out = solve(m, {Int(1), Int(2)});
    REQUIRE(out.solution);
    CHECK(m * out.solution->particular == IntVec{Int(1), Int(2)});
    REQUIRE(out.solution->kernel.cols() == 1);
    CHECK(lattice_equal(out.solution->kernel, IntMatrix{{Int(2)}, {Int(-1)}}));
  }
}

TEST_CASE("solve soundness and completeness vs box search") {
  Rng rng(99);
  int absent_checked = 0;
  for (int iter = 0; iter < 400; ++iter) {
    std::size_t r = 1 + rng() % 3, c = 1 + rng() % 3;
    IntMatrix m = testutil::random_matrix(rng, r, c, -5, 5);
    IntVec b = testutil::random_vec(rng, r, -5, 5);
    auto out = solve(m, b);
    if (out.solution) {
      CHECK(m * out.solution->particular == b);
      for (std::size_t j = 0; j < out.solution->kernel.cols(); ++j)
        CHECK(is_zero_vec(m * out.solution->kernel.col(j)));
      CHECK(solvable_bruteforce(m, b));
    } else {
      REQUIRE(out.certificate);
      CHECK(out.certificate->verify(m, b));
      CHECK(!solvable_bruteforce(m, b));
      ++absent_checked;
    }
  }
  CHECK(absent_checked > 50);
}

TEST_CASE("solve over Z/m") {
  // 2x = 3 has no solution mod 8 but x = 5 works mod 7.
  auto none = solve(IntMatrix{{Int(2)}}, {Int(3)}, 8);
  CHECK(!none.solution);
  auto some = solve(IntMatrix{{Int(2)}}, {Int(3)}, 7);
  REQUIRE(some.solution);
  CHECK((Int(2) * some.solution->particular[0] - 3) % 7 == 0);
  // Kernel of multiplication by 2 on Z/8 is 4*Z/8.
  IntMatrix k = kernel_lattice(IntMatrix{{Int(2)}}, 8);
  CHECK(lattice_contains(k, {Int(4)}));
  CHECK(!lattice_contains(k, {Int(2)}, 8));
}

TEST_CASE("lattice_intersect pinned examples") {
  CHECK(lattice_intersect(IntMatrix{{Int(2)}}, IntMatrix{{Int(3)}}) ==
        IntMatrix{{Int(6)}});
  Rng rng(5);
  IntMatrix b = testutil::random_matrix(rng, 3, 4, -4, 4);
  CHECK(lattice_intersect(IntMatrix::identity(3), b) == hnf_cols(b));
  CHECK(lattice_intersect(b, b) == hnf_cols(b));
}

TEST_CASE("lattice_intersect vs residue enumeration") {
  Rng rng(31337);
  int done = 0;
  while (done < 40) {
    std::size_t r = 1 + rng() % 3;
    IntMatrix a = testutil::random_matrix(rng, r, r, -3, 3);
    IntMatrix b = testutil::random_matrix(rng, r, r, -3, 3);
    Int qa = lattice_index(a), qb = lattice_index(b);
    if (qa == 0 || qb == 0 || qa > 8 || qb > 8) continue;
    if (lcm(qa, qb) > 24) continue;
    CHECK(lattice_intersect(a, b) == intersect_bruteforce(a, b));
    ++done;
  }
}

TEST_CASE("lattice utilities") {
  SUBCASE("saturation") {
    IntMatrix m{{Int(2), Int(0)}, {Int(0), Int(3)}, {Int(0), Int(0)}};
    IntMatrix s = saturate_lattice(m);
    CHECK(lattice_equal(
        s, IntMatrix{{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(0), Int(0)}}));
  }
  SUBCASE("preimage") {
    // x with 2x in 6Z is 3Z.
    IntMatrix p = preimage_lattice(IntMatrix{{Int(2)}}, IntMatrix{{Int(6)}});
    CHECK(lattice_equal(p, IntMatrix{{Int(3)}}));
  }
  SUBCASE("index") {
    CHECK(lattice_index(IntMatrix{{Int(2), Int(1)}, {Int(0), Int(3)}}) == 6);
    CHECK(lattice_index(IntMatrix{{Int(1), Int(2)}, {Int(2), Int(4)}}) == 0);
  }
  SUBCASE("unimodular inverse") {
    IntMatrix u{{Int(2), Int(1)}, {Int(1), Int(1)}};
    CHECK(inverse_unimodular(u) * u == IntMatrix::identity(2));
  }
  SUBCASE("reduce_mod_lattice is canonical") {
    IntMatrix h = hnf_cols(IntMatrix{{Int(2), Int(0)}, {Int(1), Int(3)}});
    IntVec v{Int(7), Int(5)};
    IntVec r1 = reduce_mod_lattice(h, v);
    // Shifting by lattice vectors does not change the representative.
    IntVec shifted = v + h.col(0) + Int(2) * h.col(1);
    CHECK(reduce_mod_lattice(h, shifted) == r1);
  }
}

TEST_CASE("hnf is canonical under column operations") {
  Rng rng(11);
  for (int iter = 0; iter < 100; ++iter) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m = testutil::random_matrix(rng, r, c, -9, 9);
    IntMatrix h = hnf_cols(m);
    // Random unimodular column mixing preserves the lattice.
    IntMatrix m2 = m;
    for (int k = 0; k < 6 && c >= 2; ++k) {
      std::size_t i = rng() % c, j = rng() % c;
      if (i == j) continue;
      m2.add_col_multiple(i, j, testutil::rand_int(rng, -3, 3));
    }
    CHECK(hnf_cols(m2) == h);
    auto [hh, t] = hnf_cols_transform(m);
    CHECK(hh == h);
    CHECK(m * t == h);
  }
}

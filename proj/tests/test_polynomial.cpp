#include "doctest.h"

#include "limtower/normal_form.hpp"
#include "limtower/polynomial.hpp"

#include "test_util.hpp"

using namespace limtower;
using testutil::Rng;

namespace {

// Oracle: evaluate det(x*I - A) exactly by Bareiss at integer points.
Int char_poly_eval_oracle(const IntMatrix& a, const Int& x) {
  IntMatrix m = IntMatrix::identity(a.rows()) * x - a;
  return m.det();
}

} // namespace

TEST_CASE("char_poly agrees with det(tI - A) at sample points") {
  Rng rng(404);
  for (int iter = 0; iter < 80; ++iter) {
    std::size_t n = 1 + rng() % 5;
    IntMatrix a = testutil::random_matrix(rng, n, n, -7, 7);
    IntPoly p = char_poly(a);
    REQUIRE(p.degree() == static_cast<int>(n));
    CHECK(p.is_monic());
    for (long x : {-3, -1, 0, 1, 2, 5})
      CHECK(p.eval(Int(x)) == char_poly_eval_oracle(a, Int(x)));
  }
}

TEST_CASE("poly division") {
  IntPoly f = IntPoly::from_coeffs({Int(-2), Int(1)}) *
              IntPoly::from_coeffs({Int(3), Int(0), Int(1)});
  auto q = divide_exact(f, IntPoly::from_coeffs({Int(3), Int(0), Int(1)}));
  REQUIRE(q);
  CHECK(*q == IntPoly::from_coeffs({Int(-2), Int(1)}));
  CHECK(!divide_exact(f, IntPoly::from_coeffs({Int(1), Int(1)})));
}

TEST_CASE("factor_monic splits into verified irreducibles") {
  Rng rng(505);
  for (int iter = 0; iter < 60; ++iter) {
    // Build f as a product of random monic factors, factor it back.
    IntPoly f = IntPoly::one();
    int nf = 1 + rng() % 3;
    for (int i = 0; i < nf; ++i) {
      int deg = 1 + rng() % 2;
      std::vector<Int> c;
      for (int d = 0; d < deg; ++d) c.push_back(testutil::rand_int(rng, -4, 4));
      c.push_back(Int(1));
      f = f * IntPoly::from_coeffs(std::move(c));
    }
    auto factors = factor_monic(f);
    IntPoly prod = IntPoly::one();
    for (const auto& g : factors) {
      CHECK(g.is_monic());
      CHECK(g.degree() >= 1);
      prod = prod * g;
      // Irreducibility spot check: the factor itself does not split further.
      CHECK(factor_monic(g).size() == 1);
    }
    CHECK(prod == f);
  }
}

TEST_CASE("unit_split partitions by unit constant term") {
  IntPoly f = IntPoly::from_coeffs({Int(-1), Int(1)}) *   // t - 1 (unit)
              IntPoly::from_coeffs({Int(-2), Int(1)}) *   // t - 2
              IntPoly::from_coeffs({Int(-1), Int(-1), Int(1)}); // t^2-t-1 (unit)
  auto s = unit_split(f);
  CHECK(s.unit.degree() == 3);
  CHECK(s.rest == IntPoly::from_coeffs({Int(-2), Int(1)}));
}

TEST_CASE("eventual_image_lattice pinned cases") {
  SUBCASE("contraction dies") {
    CHECK(eventual_image_lattice(IntMatrix{{Int(2)}}).cols() == 0);
  }
  SUBCASE("unimodular survives whole lattice") {
    IntMatrix e{{Int(2), Int(1)}, {Int(1), Int(1)}};
    CHECK(lattice_equal(eventual_image_lattice(e), IntMatrix::identity(2)));
  }
  SUBCASE("mixed diagonal keeps the unit axis") {
    IntMatrix e{{Int(2), Int(0)}, {Int(0), Int(1)}};
    CHECK(lattice_equal(eventual_image_lattice(e),
                        IntMatrix{{Int(0)}, {Int(1)}}));
  }
  SUBCASE("nilpotent dies") {
    IntMatrix e{{Int(0), Int(1)}, {Int(0), Int(0)}};
    CHECK(eventual_image_lattice(e).cols() == 0);
  }
  SUBCASE("shear keeps only its fixed line") {
    IntMatrix e{{Int(2), Int(1)}, {Int(0), Int(1)}};
    IntMatrix u = eventual_image_lattice(e);
    REQUIRE(u.cols() == 1);
    CHECK(lattice_equal(e * u, u));
    CHECK(lattice_contains(u, {Int(1), Int(-1)}));
  }
}

TEST_CASE("eventual image is E-invariant and inside all iterated images") {
  Rng rng(606);
  for (int iter = 0; iter < 80; ++iter) {
    std::size_t n = 1 + rng() % 4;
    IntMatrix e = testutil::random_matrix(rng, n, n, -3, 3);
    IntMatrix u = eventual_image_lattice(e);
    CHECK(lattice_equal(e * u, u)); // E restricted to U is onto U
    IntMatrix power = IntMatrix::identity(n);
    for (int k = 0; k < 8; ++k) {
      power = power * e;
      for (std::size_t j = 0; j < u.cols(); ++j)
        CHECK(lattice_contains(power, u.col(j)));
    }
  }
}

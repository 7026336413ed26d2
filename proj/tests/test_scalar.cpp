#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diracham/lattice.hpp"
#include "diracham/scalar.hpp"

using namespace diracham;

TEST_CASE("gaussian rationals are a field") {
  GaussianRational a(Rational(1) / 3, Rational(-2));
  GaussianRational b(Rational(5, 7), Rational(1, 2));
  // (1/3 − 2i)(5/7 + i/2) = 5/21 + 1 + i(1/6 − 10/7)
  CHECK(a * b == GaussianRational(Rational(5, 21) + 1, Rational(1, 6) - Rational(10, 7)));
  CHECK((a * b) / b == a);
  CHECK(a - a == GaussianRational(0));
  CHECK(imag_unit<GaussianRational>() * imag_unit<GaussianRational>() == GaussianRational(-1));
  CHECK_THROWS_AS(a / GaussianRational(0), std::domain_error);
}

TEST_CASE("decimal and fraction literals parse exactly") {
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational(" 2 ") == Rational(2));
  CHECK(parse_rational("1.5e-2") == Rational(3, 200));
  CHECK(parse_rational("0.25/0.5") == Rational(1, 2));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational(""));
  CHECK(from_text<Complex>("0.1") == Complex(0.1, 0.0));
}

TEST_CASE("exact square roots refuse to round") {
  CHECK(exact_sqrt(GaussianRational(Rational(9, 16))) == GaussianRational(Rational(3, 4)));
  CHECK_THROWS_AS(exact_sqrt(GaussianRational(Rational(1, 2))), std::domain_error);
  CHECK_THROWS_AS(exact_sqrt(GaussianRational(Rational(-1))), std::domain_error);
}

TEST_CASE("periodic lattice neighbours and volume") {
  LatticeSpec line(1, 5, Rational(1, 4));
  CHECK(line.total_sites() == 5);
  CHECK(line.neighbor(0, 0, -1) == 4);
  CHECK(line.neighbor(4, 0, +1) == 0);
  CHECK(line.exact_cell_volume() == Rational(1, 4));

  LatticeSpec cube(3, 3, Rational(1, 2));
  CHECK(cube.total_sites() == 27);
  CHECK(cube.exact_cell_volume() == Rational(1, 8));
  // site = x + 3(y + 3z)
  const int site = 2 + 3 * (1 + 3 * 0);
  CHECK(cube.neighbor(site, 0, +1) == 0 + 3 * (1 + 3 * 0));
  CHECK(cube.neighbor(site, 1, +1) == 2 + 3 * (2 + 3 * 0));
  CHECK(cube.neighbor(site, 2, -1) == 2 + 3 * (1 + 3 * 2));
  CHECK(cube.coordinate(site, 0) == 2);
  CHECK(cube.coordinate(site, 1) == 1);

  CHECK_THROWS(LatticeSpec(4, 3, Rational(1)));
  CHECK_THROWS(LatticeSpec(1, 3, Rational(0)));
  CHECK_THROWS(LatticeSpec(1, 2, Rational(1)).require_stencil());
}

TEST_CASE("property: neighbour steps invert each other") {
  LatticeSpec sq(2, 4, Rational(1));
  for (int s = 0; s < sq.total_sites(); ++s)
    for (int axis = 0; axis < 2; ++axis) {
      CHECK(sq.neighbor(sq.neighbor(s, axis, +1), axis, -1) == s);
      int walk = s;
      for (int k = 0; k < 4; ++k) walk = sq.neighbor(walk, axis, +1);
      CHECK(walk == s);
    }
}

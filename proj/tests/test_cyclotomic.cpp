#include "doctest.h"
#include "fpk/cyclotomic.hpp"

using namespace fpk;

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_field(1).degree() == 1);
  CHECK(cyclotomic_field(2).degree() == 1);
  CHECK(cyclotomic_field(3).degree() == 2);   // x^2 + x + 1
  CHECK(cyclotomic_field(12).degree() == 4);  // x^4 - x^2 + 1
  const auto& f12 = cyclotomic_field(12).minimal_poly;
  CHECK(f12[0] == 1);
  CHECK(f12[2] == -1);
  CHECK(f12[4] == 1);
  CHECK(cyclotomic_field(60).degree() == 16);
}

TEST_CASE("roots of unity multiply by adding exponents") {
  Scalar z = Scalar::root_of_unity(5, 1);
  Scalar acc(Rat(1));
  for (int i = 0; i < 5; ++i)
    acc = acc * z;
  CHECK(acc == Scalar(Rat(1)));
  CHECK(Scalar::root_of_unity(5, 2) * Scalar::root_of_unity(5, 3) == Scalar(Rat(1)));
  CHECK(Scalar::root_of_unity(6, 3) == Scalar(Rat(-1)));
}

TEST_CASE("zeta6 satisfies z^2 - z + 1 = 0") {
  Scalar z = Scalar::root_of_unity(6, 1);
  CHECK(z * z - z + Scalar(Rat(1)) == Scalar(Rat(0)));
}

TEST_CASE("inversion in a cyclotomic field") {
  Scalar z = Scalar::root_of_unity(7, 3);
  CHECK(z * z.invert() == Scalar(Rat(1)));
  Scalar mix = z + Scalar(Rat(2));
  CHECK(mix * mix.invert() == Scalar(Rat(1)));
  CHECK_THROWS_AS(Scalar(Rat(0)).invert(), NotAUnit);
}

TEST_CASE("cross-conductor arithmetic promotes to the lcm") {
  Scalar a = Scalar::root_of_unity(3, 1);
  Scalar b = Scalar::root_of_unity(4, 1);
  Scalar prod = a * b;
  CHECK(prod == Scalar::root_of_unity(12, 7));  // 4+3 mod 12
  // 1 + zeta3 + zeta3^2 = 0
  Scalar sum = Scalar(Rat(1)) + a + a * a;
  CHECK(sum.is_zero());
}

TEST_CASE("rational collapse after cancellation") {
  Scalar z = Scalar::root_of_unity(8, 1);
  Scalar v = z * z * z * z;  // -1
  CHECK(v.is_rational());
  CHECK(v.as_rational() == Rat(-1));
}

TEST_CASE("float mode applies the zero tolerance") {
  Scalar tiny = Scalar::floating({1e-12, -1e-14});
  CHECK(tiny.is_zero());
  Scalar a = Scalar::floating({2.0, 0.0});
  CHECK((a * a.invert() - Scalar::floating({1.0, 0.0})).is_zero());
  // exact values embed into float mode when mixed
  CHECK((a + Scalar(Rat(1))) == Scalar::floating({3.0, 0.0}));
}

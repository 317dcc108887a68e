#include <random>

#include "doctest.h"
#include "fpk/novikov.hpp"

using namespace fpk;

namespace {

const Rat kCutoff(3);

NovikovSeries one() { return NovikovSeries::constant(Scalar(Rat(1)), SeriesMode::ring, kCutoff); }

NovikovSeries t_power(const Rat& e, long c = 1) {
  return NovikovSeries::monomial(e, Scalar(Rat(c)), SeriesMode::ring, kCutoff);
}

NovikovSeries random_series(std::mt19937_64& rng, SeriesMode mode = SeriesMode::ring,
                            bool positive_valuation = false) {
  std::uniform_int_distribution<int> nterms(0, 4), num(-6, 6), den(1, 6), coeff(-5, 5);
  NovikovSeries s(mode, kCutoff);
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Rat e = make_rat(std::abs(num(rng)), den(rng));
    if (positive_valuation && e == 0)
      e = make_rat(1, den(rng));
    int c = coeff(rng);
    if (c != 0)
      s.add_term(e, Scalar(Rat(c)));
  }
  return s;
}

} // namespace

TEST_CASE("difference of squares") {
  NovikovSeries a = one() + t_power(Rat(1, 2));
  NovikovSeries b = one() - t_power(Rat(1, 2));
  CHECK(a * b == one() - t_power(Rat(1)));
}

TEST_CASE("additive identity and exponent addition") {
  NovikovSeries a = t_power(Rat(1, 3), 2) + t_power(Rat(1), 1);
  CHECK(a + NovikovSeries(SeriesMode::ring, kCutoff) == a);
  CHECK(t_power(Rat(1, 3), 2) * t_power(Rat(2, 3), 3) == t_power(Rat(1), 6));
}

TEST_CASE("valuation") {
  NovikovSeries a = t_power(Rat(1, 3), 2) + t_power(Rat(1));
  CHECK(*a.valuation() == Rat(1, 3));
  CHECK(!NovikovSeries(SeriesMode::ring, kCutoff).valuation().has_value());
  NovikovSeries c = NovikovSeries::constant(Scalar(Rat(5)), SeriesMode::ring, kCutoff) +
                    t_power(Rat(2));
  CHECK(*c.valuation() == Rat(0));
}

TEST_CASE("inversion") {
  // geometric series
  NovikovSeries g = (one() - t_power(Rat(1))).invert();
  CHECK(g == one() + t_power(Rat(1)) + t_power(Rat(2)));
  CHECK(NovikovSeries::constant(Scalar(Rat(2)), SeriesMode::ring, kCutoff).invert() ==
        NovikovSeries::constant(Scalar(Rat(1, 2)), SeriesMode::ring, kCutoff));
  CHECK_THROWS_AS(t_power(Rat(1)).invert(), NotAUnit);
  // field mode inverts pure powers
  NovikovSeries f = NovikovSeries::monomial(Rat(1), Scalar(Rat(1)), SeriesMode::field, kCutoff);
  NovikovSeries finv = f.invert();
  CHECK(*finv.valuation() == Rat(-1));
}

TEST_CASE("exp on the one-variable ring") {
  NovikovSeries e = t_power(Rat(1)).exp();
  CHECK(e == one() + t_power(Rat(1)) + NovikovSeries::monomial(Rat(2), Scalar(Rat(1, 2)),
                                                               SeriesMode::ring, kCutoff));
  CHECK(NovikovSeries(SeriesMode::ring, kCutoff).exp() == one());
  NovikovSeries h = t_power(Rat(1, 2));
  CHECK(h.exp() * (-h).exp() == one());
  CHECK_THROWS_AS(one().exp(), ConfigError);  // exact constant term
}

TEST_CASE("collapse is exponent addition with merging") {
  Rat eps(1, 100);
  BiNovikovSeries a = BiNovikovSeries::monomial(Rat(1, 3), Rat(-1, 6), Scalar(Rat(3)), eps, kCutoff);
  NovikovSeries c = collapse(a);
  CHECK(c == NovikovSeries::monomial(Rat(1, 6), Scalar(Rat(3)), SeriesMode::ring, kCutoff));
  BiNovikovSeries b = BiNovikovSeries::monomial(Rat(1, 2), Rat(0), Scalar(Rat(1)), eps, kCutoff) +
                      BiNovikovSeries::monomial(Rat(0), Rat(1, 2), Scalar(Rat(1)), eps, kCutoff);
  CHECK(collapse(b) == t_power(Rat(1, 2), 2));
}

TEST_CASE("exp on the two-variable ring") {
  Rat eps(1, 100);
  BiNovikovSeries p = BiNovikovSeries::monomial(Rat(1, 2), Rat(1, 4), Scalar(Rat(2)), eps, kCutoff);
  BiNovikovSeries one = BiNovikovSeries::constant(Scalar(Rat(1)), eps, kCutoff);
  CHECK(p.exp() * (-p).exp() == one);
  CHECK(BiNovikovSeries(eps, kCutoff).exp() == one);
  // a nonzero constant term converges only in float mode
  BiNovikovSeries c = BiNovikovSeries::constant(Scalar(Rat(1)), eps, kCutoff);
  CHECK_THROWS_AS(c.exp(), ConfigError);
  BiNovikovSeries cf = BiNovikovSeries::constant(Scalar::floating({1.0, 0.0}), eps, kCutoff);
  auto e = cf.exp();
  CHECK(!e.is_zero());
}

TEST_CASE("two-variable membership is enforced") {
  Rat eps(1, 100);
  CHECK_THROWS_AS(BiNovikovSeries::monomial(Rat(-1), Rat(2), Scalar(Rat(1)), eps, kCutoff),
                  MembershipError);
  CHECK_THROWS_AS(BiNovikovSeries::monomial(Rat(1), Rat(-2), Scalar(Rat(1)), eps, kCutoff),
                  MembershipError);
  // slightly negative vertical exponent is fine
  auto ok = BiNovikovSeries::monomial(Rat(1), Rat(-1, 2), Scalar(Rat(1)), eps, kCutoff);
  ok.validate_membership();
}

TEST_CASE("cutoff and mode mismatches are configuration errors") {
  NovikovSeries a(SeriesMode::ring, Rat(2)), b(SeriesMode::ring, Rat(3));
  CHECK_THROWS_AS((void)(a + b), ConfigError);
  NovikovSeries c(SeriesMode::field, Rat(2));
  CHECK_THROWS_AS((void)(a * c), ConfigError);
}

TEST_CASE("ring axioms on random series") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    NovikovSeries a = random_series(rng), b = random_series(rng), c = random_series(rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("valuation is additive for products") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    NovikovSeries a = random_series(rng), b = random_series(rng);
    auto va = a.valuation(), vb = b.valuation();
    if (!va || !vb || *va + *vb >= kCutoff)
      continue;
    auto vab = (a * b).valuation();
    REQUIRE(vab.has_value());
    CHECK(*vab == *va + *vb);
  }
}

TEST_CASE("invert round trips on random units") {
  std::mt19937_64 rng(13);
  int done = 0;
  while (done < 100) {
    NovikovSeries u = one() + random_series(rng, SeriesMode::ring, true);
    if (!u.valuation() || *u.valuation() != 0)
      continue;
    CHECK(u * u.invert() == one());
    ++done;
  }
}

TEST_CASE("exp inverse on random exact input") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    NovikovSeries p = random_series(rng, SeriesMode::ring, true);
    CHECK(p.exp() * (-p).exp() == one());
  }
}

TEST_CASE("collapse is a ring homomorphism") {
  std::mt19937_64 rng(15);
  Rat eps(1, 100);
  auto random_bi = [&](auto& gen) {
    std::uniform_int_distribution<int> nterms(0, 4), num(0, 5), den(1, 4), coeff(-5, 5);
    BiNovikovSeries s(eps, kCutoff);
    int n = nterms(gen);
    for (int i = 0; i < n; ++i) {
      Rat rho = make_rat(num(gen), den(gen));
      Rat eta = make_rat(num(gen), den(gen));
      int c = coeff(gen);
      if (c != 0)
        s.add_term(rho, eta, Scalar(Rat(c)));
    }
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    BiNovikovSeries a = random_bi(rng), b = random_bi(rng);
    CHECK(collapse(a * b) == collapse(a) * collapse(b));
    CHECK(collapse(a + b) == collapse(a) + collapse(b));
    a.validate_membership();
    (a * b).validate_membership();
    (a + b).validate_membership();
  }
  // units map to units
  BiNovikovSeries u = BiNovikovSeries::constant(Scalar(Rat(2)), eps, kCutoff) +
                      BiNovikovSeries::monomial(Rat(1), Rat(1, 2), Scalar(Rat(5)), eps, kCutoff);
  NovikovSeries cu = collapse(u);
  CHECK(cu * cu.invert() == one());
}

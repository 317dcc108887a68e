#include <random>

#include "doctest.h"
#include "fpk/laurent.hpp"

using namespace fpk;

namespace {

const Rat kCutoff(4);
const Rat kEps(1, 100);

VarSet yvars() { return VarSet({"y1", "y2"}, 2); }

LaurentQR mono(const VarSet& vars, std::vector<long> exps, const Rat& rho, const Rat& eta,
               long c = 1) {
  Exponents e;
  for (long x : exps)
    e.push_back(Int(x));
  LaurentQR p(vars);
  p.add_term(e, BiNovikovSeries::monomial(rho, eta, Scalar(Rat(c)), kEps, kCutoff));
  return p;
}

LaurentT tmono(const VarSet& vars, std::vector<long> exps, const Rat& deg, long c = 1) {
  Exponents e;
  for (long x : exps)
    e.push_back(Int(x));
  LaurentT p(vars);
  p.add_term(e, NovikovSeries::monomial(deg, Scalar(Rat(c)), SeriesMode::ring, kCutoff));
  return p;
}

NovikovSeries unit_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> lead(1, 4), extra(0, 2), num(1, 3), den(1, 4), c(-3, 3);
  NovikovSeries s = NovikovSeries::constant(Scalar(Rat(lead(rng))), SeriesMode::ring, kCutoff);
  int n = extra(rng);
  for (int i = 0; i < n; ++i) {
    int cc = c(rng);
    if (cc)
      s.add_term(make_rat(num(rng), den(rng)), Scalar(Rat(cc)));
  }
  return s;
}

LaurentT random_poly(std::mt19937_64& rng, const VarSet& vars) {
  std::uniform_int_distribution<int> nterms(1, 4), expd(-3, 3), c(-4, 4), num(0, 5), den(1, 3);
  LaurentT p(vars);
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Exponents e;
    for (std::size_t v = 0; v < vars.size(); ++v)
      e.push_back(Int(expd(rng)));
    int cc = c(rng);
    if (cc)
      p.add_term(e, NovikovSeries::monomial(make_rat(num(rng), den(rng)), Scalar(Rat(cc)),
                                            SeriesMode::ring, kCutoff));
  }
  return p;
}

} // namespace

TEST_CASE("power rule") {
  VarSet v = yvars();
  // d/dy1 (y1^2 y2^-1 q^(1/3)) = 2 y1 y2^-1 q^(1/3)
  LaurentQR p = mono(v, {2, -1}, Rat(1, 3), Rat(0));
  CHECK(p.partial_derivative("y1") == mono(v, {1, -1}, Rat(1, 3), Rat(0), 2));
  // derivative in an absent variable vanishes
  LaurentQR q = mono(v, {0, 1}, Rat(1), Rat(0));
  CHECK(q.partial_derivative("y1").is_zero());
  CHECK_THROWS_AS(q.partial_derivative("zz"), ConfigError);
}

TEST_CASE("fiber-direction derivative of a two-term potential") {
  VarSet v({"y3"}, 1);
  Rat a(1, 5), b(1, 7);
  LaurentQR w = mono(v, {1}, Rat(0), a) + mono(v, {-1}, Rat(0), b);
  LaurentQR d = w.partial_derivative("y3");
  CHECK(d == mono(v, {0}, Rat(0), a) + mono(v, {-2}, Rat(0), b, -1));
}

TEST_CASE("monomial substitution") {
  VarSet v({"y1", "y2", "y3"}, 3);
  long k = 5;
  // y1 y3^k maps to y1 under the change of basis sending e1 -> e1 - k e3
  IntMatrix a = IntMatrix::identity(3);
  a.rows[2][0] = -k;
  LaurentT p = tmono(v, {1, 0, k}, Rat(1));
  CHECK(p.substitute_monomial(a) == tmono(v, {1, 0, 0}, Rat(1)));
  CHECK(p.substitute_monomial(IntMatrix::identity(3)) == p);

  IntMatrix bad = IntMatrix::identity(3);
  bad.rows[0][0] = 2;
  CHECK_THROWS_AS(p.substitute_monomial(bad), ConfigError);
}

TEST_CASE("substitution round trip on random polynomials") {
  std::mt19937_64 rng(21);
  VarSet v({"y1", "y2", "y3"}, 3);
  IntMatrix a = IntMatrix::identity(3);
  a.rows[0][1] = 2;
  a.rows[1][2] = -1;
  IntMatrix ainv = a.inverse_unimodular();
  for (int trial = 0; trial < 50; ++trial) {
    LaurentT p = random_poly(rng, v);
    CHECK(p.substitute_monomial(a).substitute_monomial(ainv) == p);
  }
}

TEST_CASE("substitution is a ring map sending units to units") {
  std::mt19937_64 rng(22);
  VarSet v({"y1", "y2"}, 2);
  IntMatrix a = IntMatrix::identity(2);
  a.rows[0][1] = 3;
  for (int trial = 0; trial < 50; ++trial) {
    LaurentT p = random_poly(rng, v), q = random_poly(rng, v);
    CHECK((p * q).substitute_monomial(a) == p.substitute_monomial(a) * q.substitute_monomial(a));
  }
  // a unit monomial stays a unit monomial
  LaurentT u = tmono(v, {1, -2}, Rat(0));
  LaurentT ui = tmono(v, {-1, 2}, Rat(0));
  CHECK(u.substitute_monomial(a) * ui.substitute_monomial(a) == tmono(v, {0, 0}, Rat(0)));
}

TEST_CASE("leibniz rule on random pairs") {
  std::mt19937_64 rng(23);
  VarSet v = yvars();
  for (int trial = 0; trial < 60; ++trial) {
    LaurentT p = random_poly(rng, v), q = random_poly(rng, v);
    LaurentT lhs = (p * q).partial_derivative("y1");
    LaurentT rhs = p.partial_derivative("y1") * q + p * q.partial_derivative("y1");
    CHECK(lhs == rhs);
  }
}

TEST_CASE("clearing denominators") {
  VarSet v({"y"}, 1);
  LaurentT p = tmono(v, {0}, Rat(0)) - tmono(v, {-2}, Rat(0));
  CriticalSystem sys = clear_denominators({p});
  CHECK(sys.equations[0] == tmono(v, {2}, Rat(0)) - tmono(v, {0}, Rat(0)));
  CHECK(sys.provenance[0].clearing == Exponents{Int(2)});

  // already-polynomial input is unchanged
  LaurentT poly = tmono(v, {3}, Rat(1)) + tmono(v, {1}, Rat(0));
  CHECK(clear_denominators({poly}).equations[0] == poly);

  CHECK_THROWS_AS(clear_denominators({LaurentT(v)}), ConfigError);
}

TEST_CASE("clearing the normalized fiber equation") {
  // 1 - y^-2 - m y^-(5m+3) t^alpha  (m = 1) multiplied by y^(5m+3)
  VarSet v({"y"}, 1);
  long m = 1;
  Rat alpha(1, 2);
  LaurentT eq = tmono(v, {0}, Rat(0)) - tmono(v, {-2}, Rat(0)) -
                tmono(v, {-(5 * m + 3)}, alpha, m);
  CriticalSystem sys = clear_denominators({eq});
  LaurentT expected =
      tmono(v, {5 * m + 3}, Rat(0)) - tmono(v, {5 * m + 1}, Rat(0)) - tmono(v, {0}, alpha, m);
  CHECK(sys.equations[0] == expected);
}

TEST_CASE("evaluation") {
  VarSet v({"y"}, 1);
  LaurentT p = tmono(v, {1}, Rat(0)) + tmono(v, {-1}, Rat(0));
  std::map<std::string, NovikovSeries> at_one{
      {"y", NovikovSeries::constant(Scalar(Rat(1)), SeriesMode::ring, kCutoff)}};
  std::map<std::string, NovikovSeries> at_minus_one{
      {"y", NovikovSeries::constant(Scalar(Rat(-1)), SeriesMode::ring, kCutoff)}};
  CHECK(evaluate(p, at_one) ==
        NovikovSeries::constant(Scalar(Rat(2)), SeriesMode::ring, kCutoff));
  CHECK(evaluate(p, at_minus_one) ==
        NovikovSeries::constant(Scalar(Rat(-2)), SeriesMode::ring, kCutoff));
  std::map<std::string, NovikovSeries> at_t{
      {"y", NovikovSeries::monomial(Rat(1), Scalar(Rat(1)), SeriesMode::ring, kCutoff)}};
  CHECK_THROWS_AS(evaluate(p, at_t), NotAUnit);
}

TEST_CASE("evaluation is a homomorphism") {
  std::mt19937_64 rng(24);
  VarSet v = yvars();
  for (int trial = 0; trial < 40; ++trial) {
    LaurentT p = random_poly(rng, v), q = random_poly(rng, v);
    std::map<std::string, NovikovSeries> point{{"y1", unit_point(rng)}, {"y2", unit_point(rng)}};
    CHECK(evaluate(p * q, point) == evaluate(p, point) * evaluate(q, point));
    CHECK(evaluate(p + q, point) == evaluate(p, point) + evaluate(q, point));
  }
}

TEST_CASE("clearing preserves the unit zero locus") {
  std::mt19937_64 rng(25);
  VarSet v = yvars();
  for (int trial = 0; trial < 40; ++trial) {
    LaurentT p = random_poly(rng, v);
    if (p.is_zero())
      continue;
    CriticalSystem sys = clear_denominators({p});
    std::map<std::string, NovikovSeries> point{{"y1", unit_point(rng)}, {"y2", unit_point(rng)}};
    // cleared = monomial * original at every unit point
    LaurentT clearing(v);
    clearing.add_term(sys.provenance[0].clearing,
                      NovikovSeries::constant(Scalar(Rat(1)), SeriesMode::ring, kCutoff));
    CHECK(evaluate(sys.equations[0], point) ==
          evaluate(clearing, point) * evaluate(p, point));
  }
}

TEST_CASE("cover substitution is exponent composition") {
  VarSet v({"y1", "y2", "y3"}, 3);
  VarSet cover({"y"}, 1);
  // y1, y2 -> Y^-m and y3 -> Y^3
  long m = 2;
  std::vector<Exponents> images{{Int(-m)}, {Int(-m)}, {Int(3)}};
  LaurentT p = tmono(v, {1, 1, 1}, Rat(0));
  CHECK(p.substitute_cover(cover, images) == tmono(cover, {3 - 2 * m}, Rat(0)));
}

TEST_CASE("metadata degree consistency can be asserted") {
  VarSet v = yvars();
  DiskMeta meta;
  meta.base_area = Rat(1, 3);
  meta.vert_area = Rat(0);
  LaurentQR p(v);
  p.add_term({Int(1), Int(0)},
             BiNovikovSeries::monomial(Rat(1, 3), Rat(0), Scalar(Rat(1)), kEps, kCutoff), meta);
  for (const auto& [e, t] : p.terms()) {
    REQUIRE(t.meta.has_value());
    CHECK(t.coeff.terms().size() == 1);
    CHECK(t.coeff.terms()[0].first.first == t.meta->base_area);
    CHECK(t.coeff.terms()[0].first.second == t.meta->vert_area);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nilfrac/bipoly.hpp"
#include "nilfrac/field_io.hpp"
#include "nilfrac/series.hpp"

using namespace nilfrac;
using P = BiPoly<Rational>;

namespace {

P random_poly(std::mt19937& rng, int trunc) {
  std::uniform_int_distribution<int> deg(0, trunc), coef(-10, 10), den(1, 4);
  P p(trunc);
  for (int t = 0; t < 5; ++t) {
    const int i = deg(rng), j = deg(rng);
    if (i + j <= trunc) p.add_term(i, j, Rational(coef(rng), den(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("poly_mul") {
  CHECK(poly_mul(P::x(), P::y()) == P::monomial(1, 1, 1));

  const P one_plus_x = P::constant(1, 2) + P::x(2);
  const P one_minus_x = P::constant(1, 2) - P::x(2);
  CHECK(poly_mul(one_plus_x, one_minus_x) == P::constant(1, 2) - P::monomial(2, 0, 1, 2));

  const P s = P::x(1) + P::y(1);
  const P sq = poly_mul(s, s);
  CHECK(sq.is_zero());
  CHECK(sq.truncated());
}

TEST_CASE("ring axioms up to truncation") {
  std::mt19937 rng(7);
  for (int it = 0; it < 60; ++it) {
    const P p = random_poly(rng, 6), q = random_poly(rng, 6), r = random_poly(rng, 6);
    CHECK((p + q) + r == p + (q + r));
    CHECK(p * q == q * p);
    CHECK(p * (q + r) == p * q + p * r);
    CHECK((p * q) * r == p * (q * r));
  }
}

TEST_CASE("exact and float arithmetic agree") {
  std::mt19937 rng(11);
  for (int it = 0; it < 40; ++it) {
    const P p = random_poly(rng, 8), q = random_poly(rng, 8);
    const P e = p * q + p;
    const BiPoly<double> f = p.cast<double>() * q.cast<double>() + p.cast<double>();
    for (const auto& [mon, c] : e.terms()) {
      const double ex = to_double(c);
      CHECK(std::abs(f.coeff(mon.i, mon.j) - ex) <= 1e-12 * std::max(1.0, std::abs(ex)));
    }
    CHECK(e.size() <= f.size() + 0);
    const double x = 0.3, y = -0.7;
    CHECK(e(x, y) == doctest::Approx(f(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("poly_compose_series") {
  using Q = PuiseuxSeries<QuadSurd>;
  const QuadSurd c = QuadSurd::sqrt(Rational(2, 3));
  const Q x32 = Q::exact_sum(Rational(3, 2), Rational(1, 2), {QuadSurd(1)});
  const Q cx32 = Q::exact_sum(Rational(3, 2), Rational(1, 2), {c});

  const Q r1 = poly_compose_series(P::y(), x32);
  CHECK(r1.gamma == Rational(3, 2));
  CHECK(r1.coeffs.front() == QuadSurd(1));

  const Q r2 = poly_compose_series(P::monomial(0, 2, 1), cx32);
  CHECK(r2.gamma == 3);
  CHECK(r2.coeffs.front() == QuadSurd(Rational(2, 3)));
  CHECK(r2.coeffs.size() == 1);

  const P p = P::monomial(2, 0, 1) + P::monomial(2, 1, 1);
  const FracSeries<QuadSurd> r3 = compose(p, cx32.to_frac());
  CHECK(r3.den() == 2);
  CHECK(r3.terms().size() == 2);
  CHECK(r3.coeff(4) == QuadSurd(1));
  CHECK(r3.coeff(7) == c);
}

TEST_CASE("compose respects the degree filtration") {
  std::mt19937 rng(5);
  using Q = PuiseuxSeries<Rational>;
  const Q s = Q::exact_sum(Rational(3, 2), Rational(1, 2), {Rational(2), Rational(-1)});
  for (int it = 0; it < 30; ++it) {
    const P p = random_poly(rng, 6);
    if (p.is_zero() || p.coeff(0, 0) != 0) continue;
    Rational lowest(1000);
    for (const auto& [mon, c] : p.terms()) lowest = std::min(lowest, Rational(mon.i) + Rational(mon.j) * s.gamma);
    bool unique = true;
    int hits = 0;
    for (const auto& [mon, c] : p.terms())
      if (Rational(mon.i) + Rational(mon.j) * s.gamma == lowest) ++hits;
    unique = hits == 1;
    if (!unique) continue;
    CHECK(poly_compose_series(p, s).gamma == lowest);
  }
}

TEST_CASE("poly_divide_monomial") {
  const PlanarVectorField<Rational> v(P::monomial(1, 2, 1), P::monomial(2, 2, 1));
  const auto d = poly_divide_monomial(v);
  CHECK(d.divisor == Monomial{1, 2});
  CHECK(d.field.P == P::constant(1));
  CHECK(d.field.Q == P::monomial(1, 0, 1));

  const PlanarVectorField<Rational> v2(P::monomial(1, 2, 1), P::monomial(2, 1, 1));
  const auto d2 = poly_divide_monomial(v2);
  CHECK(d2.divisor == Monomial{1, 1});
  CHECK(d2.field.P == P::monomial(0, 1, 1));
  CHECK(d2.field.Q == P::monomial(1, 0, 1));

  const PlanarVectorField<Rational> w(P::y(), P::monomial(2, 0, 1));
  const auto e = poly_divide_monomial(w);
  CHECK(e.divisor == Monomial{0, 0});
  CHECK(e.field == w);
}

TEST_CASE("mixed-denominator Puiseux series are rejected") {
  CHECK_THROWS_AS(PuiseuxSeries<Rational>(Rational(3, 2), Rational(1, 3), {Rational(1)}), Error);
}

TEST_CASE("field JSON round trip") {
  const auto f = NilpotentModel(Rational(-1), 5, Rational(-4), 2).field();
  CHECK(parse_field_json(field_to_json(f)) == f);
  CHECK_THROWS_AS(parse_field_json("{\"P\": 3}"), Error);
}

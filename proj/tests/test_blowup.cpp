#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilfrac/blowup.hpp"
#include "nilfrac/classify.hpp"

using namespace nilfrac;
using P = BiPoly<Rational>;

namespace {

const std::vector<std::array<int, 4>> kExamples = {
    {1, 2, -1, 1}, {1, 3, -1, 2}, {1, 4, 1, 1}, {-1, 5, -4, 2}, {-1, 3, 3, 1}, {1, 2, 1, 3}};

NilpotentModel model(int a, int m, int b, int n) { return NilpotentModel(Rational(a), m, Rational(b), n); }

/// Coefficient of x^e in a branch series; zero off the exponent lattice.
QuadSurd coeff_at(const PuiseuxSeries<QuadSurd>& s, const Rational& e) {
  const Rational idx = (e - s.gamma) / s.step;
  if (denominator(idx) != 1) return QuadSurd(0);
  const long k = long(numerator(idx));
  REQUIRE(k >= 0);
  REQUIRE(std::size_t(k) < s.coeffs.size());
  return s.coeffs[std::size_t(k)];
}

bool zero(const QuadSurd& v) { return ScalarTraits<QuadSurd>::is_zero(v); }

}  // namespace

TEST_CASE("cusp chart with weights (2, 3)") {
  const auto chart = blow_up(model(1, 2, -1, 1).field(), 2, 3);
  CHECK(chart.transformed.P == Rational(1, 2) * P::monomial(1, 1, 1));
  const P W = chart.transformed.Q;
  CHECK(W.coeff(0, 0) == 1);
  CHECK(W.coeff(0, 2) == Rational(-3, 2));
  for (const auto& [mon, c] : W.terms())
    if (mon.i == 0) CHECK((mon.j == 0 || mon.j == 2));
  CHECK(blow_down_identity(model(1, 2, -1, 1).field(), chart));
}

TEST_CASE("directional blow-up with weights (1, 1)") {
  const PlanarVectorField<Rational> f(P::y(), P::monomial(2, 0, 1));
  const auto chart = blow_up(f, 1, 1);
  // x = u, y = u w: u' = u w, w' = (u^2 - u w^2)/u
  CHECK(chart.transformed.P == P::monomial(1, 1, 1));
  CHECK(chart.transformed.Q == P::monomial(1, 0, 1) - P::monomial(0, 2, 1));
  CHECK(blow_down_identity(f, chart));
}

TEST_CASE("case 2 chart singularities") {
  for (int n = 1; n <= 3; ++n) {
    const auto f = model(1, 2 * n + 3, 1, n).field();
    const auto chart = blow_up(f, 1, n + 1);
    const P W = chart.transformed.Q;
    const Rational w1(1, n + 1);
    auto W0 = [&](const Rational& w) {
      Rational s = 0;
      for (const auto& [mon, c] : W.terms())
        if (mon.i == 0) s += c * ipow(w, mon.j);
      return s;
    };
    CAPTURE(n);
    CHECK(W0(0) == 0);
    CHECK(W0(w1) == 0);
    CHECK(blow_down_identity(f, chart));
  }
}

TEST_CASE("blow-down identity on the example systems") {
  for (const auto& [a, m, b, n] : kExamples)
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {1, 2}, {2, 5}, {1, 3}})
      CHECK(blow_down_identity(model(a, m, b, n).field(), blow_up(model(a, m, b, n).field(), p, q)));
}

TEST_CASE("leading data") {
  SUBCASE("cusp") {
    const auto L = separatrix_leading(model(1, 2, 1, 1));
    REQUIRE(L.size() == 2);
    for (const auto& l : L) {
      CHECK(l.gamma == Rational(3, 2));
      CHECK(l.c0 * l.c0 == QuadSurd(Rational(2, 3)));
      CHECK(l.tag == CaseTag::Case1A);
    }
    CHECK(L[0].c0 == -L[1].c0);
  }
  SUBCASE("saddle-node") {
    const auto L = separatrix_leading(model(1, 4, 1, 1));
    bool unstable = false, center = false;
    for (const auto& l : L) {
      if (l.stability == BranchStability::Unstable && l.gamma == 2 && l.c0 == QuadSurd(Rational(1, 2))) unstable = true;
      if (l.stability == BranchStability::Center && l.gamma == 3) center = true;
    }
    CHECK(unstable);
    CHECK(center);
  }
  SUBCASE("mixed case with a > 0") {
    for (int n = 1; n <= 3; ++n) {
      const Rational a(2);
      const auto L = separatrix_leading(NilpotentModel(a, 2 * n + 1, Rational(1), n));
      const QuadSurd r = QuadSurd::sqrt(Rational(4) * a * (n + 1) + 1);
      const QuadSurd d(Rational(2 * (n + 1)));
      std::vector<QuadSurd> want{(QuadSurd(1) + r) / d, (QuadSurd(1) - r) / d};
      REQUIRE(L.size() == 2);
      for (const auto& l : L) {
        CHECK(l.gamma == n + 1);
        CHECK(std::find(want.begin(), want.end(), l.c0) != want.end());
      }
    }
  }
  SUBCASE("node with a = -1, b = -4") {
    // y -> y/b reduces to b = 1 with a' = a/b^2.
    const auto L = separatrix_leading(model(-1, 5, -4, 2));
    const Rational ap = Rational(-1) / 16;
    const QuadSurd r = QuadSurd::sqrt(Rational(4) * ap * 3 + 1);
    std::vector<QuadSurd> want{QuadSurd(-4) * (QuadSurd(1) + r) / QuadSurd(6),
                               QuadSurd(-4) * (QuadSurd(1) - r) / QuadSurd(6)};
    REQUIRE(L.size() == 2);
    for (const auto& l : L) {
      CHECK(l.gamma == 3);
      CHECK(std::find(want.begin(), want.end(), l.c0) != want.end());
    }
  }
  SUBCASE("monodromic input") {
    CHECK_THROWS_AS(separatrix_leading(model(-1, 3, 1, 2)), Error);
    CHECK_THROWS_AS(separatrix_leading(model(-1, 3, 1, 1)), Error);
  }
}

TEST_CASE("first correction in case 1") {
  for (int m = 2; m <= 6; ++m)
    for (int n = 1; n <= 4; ++n) {
      if (m >= 2 * n + 1) continue;
      const auto M = model(1, m, 1, n);
      const int k = 2 * n + 1 - m;
      for (const auto& l : separatrix_leading(M)) {
        const auto s = separatrix_series(M, l, k + 3).series;
        CAPTURE(m);
        CAPTURE(n);
        for (int j = 1; j < k; ++j) CHECK(zero(coeff_at(s, l.gamma + Rational(j, 2))));
        CHECK(!zero(coeff_at(s, l.gamma + Rational(k, 2))));
      }
    }
}

TEST_CASE("cusp with n = 3 has corrections at x^4 and x^(13/2)") {
  const auto M = model(1, 2, 1, 3);
  for (const auto& l : separatrix_leading(M)) {
    const auto s = separatrix_series(M, l, 12).series;
    for (int j = 1; j <= 10; ++j) {
      CAPTURE(j);
      if (j == 5 || j == 10)
        CHECK(!zero(s.coeffs[std::size_t(j)]));
      else
        CHECK(zero(s.coeffs[std::size_t(j)]));
    }
  }
}

TEST_CASE("unstable branch correction when m > 2n+1") {
  for (int m = 4; m <= 6; ++m)
    for (int n = 1; 2 * n + 1 < m; ++n)
      for (const auto& [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, -3}}) {
        const auto M = model(a, m, b, n);
        for (const auto& l : separatrix_leading(M)) {
          if (l.stability == BranchStability::Center) continue;
          const auto s = separatrix_series(M, l, m - n).series;
          CAPTURE(m);
          CAPTURE(n);
          CHECK(l.gamma == n + 1);
          CHECK(l.c0 == QuadSurd(Rational(b) / Rational(n + 1)));
          for (int e = n + 2; e < m - n; ++e) CHECK(zero(coeff_at(s, Rational(e))));
          // y = b x^(n+1)/(n+1) + alpha x^(m-n): the x^m balance gives alpha = a(n+1)/(b(m-n)).
          CHECK(coeff_at(s, Rational(m - n)) == QuadSurd(Rational(a * (n + 1)) / Rational(b * (m - n))));
        }
      }
}

TEST_CASE("degenerate mixed case") {
  for (int n = 1; n <= 3; ++n) {
    const Rational a = Rational(-1) / (4 * (n + 1));
    const auto M = NilpotentModel(a, 2 * n + 1, Rational(1), n);
    const auto L = separatrix_leading(M);
    REQUIRE(!L.empty());
    for (const auto& l : L) {
      CHECK(l.c0 == QuadSurd(Rational(1, 2 * (n + 1))));
      const auto s = separatrix_series(M, l, 6).series;
      for (std::size_t j = 1; j < s.coeffs.size(); ++j) CHECK(zero(s.coeffs[j]));
    }
  }
}

TEST_CASE("residual order exceeds the last kept exponent") {
  for (const auto& [a, m, b, n] : kExamples) {
    const auto M = model(a, m, b, n);
    for (const auto& l : separatrix_leading(M)) {
      const auto s = separatrix_series(M, l, 6).series;
      const Rational last = s.exponent(s.coeffs.size() - 1);
      const auto r = invariance_residual(M.field(), s, last + Rational(2 * m + 4));
      const auto lo = r.lowest();
      // Residual Q - s'P of the leading-order balance starts above 2*gamma - 1 + (last - gamma).
      if (lo) CHECK(Rational(*lo, r.den()) > last + l.gamma - 1);
    }
  }
}

TEST_CASE("chart route reproduces the recursion to four terms") {
  for (const auto& [a, m, b, n] : kExamples) {
    const auto M = model(a, m, b, n);
    for (const auto& l : separatrix_leading(M)) {
      const auto direct = separatrix_series(M, l, 4).series;
      const auto chart = chart_branch_series(M, l, 4);
      CAPTURE(a);
      CAPTURE(m);
      REQUIRE(chart.gamma == direct.gamma);
      for (std::size_t j = 0; j < 4; ++j) {
        const Rational e = direct.exponent(j);
        const Rational idx = (e - chart.gamma) / chart.step;
        if (denominator(idx) != 1 || std::size_t(numerator(idx)) >= chart.coeffs.size()) continue;
        CHECK(chart.coeffs[std::size_t(numerator(idx))] == direct.coeffs[j]);
      }
    }
  }
}

TEST_CASE("classification and branch existence agree") {
  for (const auto& [a, m, b, n] : kExamples) {
    const auto kind = classify_nilpotent(model(a, m, b, n).field()).kind;
    CHECK(kind != SingularityKind::CenterOrFocus);
    CHECK(!separatrix_leading(model(a, m, b, n)).empty());
  }
}

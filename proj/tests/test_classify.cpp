#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilfrac/classify.hpp"

using namespace nilfrac;
using P = BiPoly<Rational>;

namespace {

PlanarVectorField<Rational> model(int a, int m, int b, int n) {
  return NilpotentModel(Rational(a), m, Rational(b), n).field();
}

// Independent transcription of the nilpotent case table.
SingularityKind table(int m, int a, int n, int b, NodeStability* st) {
  *st = NodeStability::None;
  if (b == 0) {
    if (m % 2 == 0) return SingularityKind::Cusp;
    return a > 0 ? SingularityKind::Saddle : SingularityKind::CenterOrFocus;
  }
  if (m % 2 == 0) return m < 2 * n + 1 ? SingularityKind::Cusp : SingularityKind::SaddleNode;
  if (a > 0) return SingularityKind::Saddle;
  const int disc = b * b + 4 * a * (n + 1);
  if (m < 2 * n + 1 || (m == 2 * n + 1 && disc < 0)) return SingularityKind::CenterOrFocus;
  if (n % 2 == 1) return SingularityKind::EllipticHyperbolic;
  *st = b > 0 ? NodeStability::Repelling : NodeStability::Attracting;
  return SingularityKind::Node;
}

}  // namespace

TEST_CASE("the five example systems") {
  CHECK(classify_nilpotent(model(1, 2, 1, 1)).kind == SingularityKind::Cusp);
  CHECK(classify_nilpotent(model(1, 3, -1, 2)).kind == SingularityKind::Saddle);
  const auto node = classify_nilpotent(model(-1, 5, -4, 2));
  CHECK(node.kind == SingularityKind::Node);
  CHECK(node.stability == NodeStability::Attracting);
  CHECK(classify_nilpotent(model(-1, 3, 3, 1)).kind == SingularityKind::EllipticHyperbolic);
  CHECK(classify_nilpotent(model(1, 4, 1, 1)).kind == SingularityKind::SaddleNode);
}

TEST_CASE("solve_implicit_f") {
  const P y = P::y();
  SUBCASE("A = 0") {
    CHECK(solve_implicit_f({y, P::monomial(2, 0, 1)}, 8).is_zero());
  }
  SUBCASE("A = x^2") {
    const P f = solve_implicit_f({y + P::monomial(2, 0, 1), P::monomial(3, 0, 1)}, 8);
    CHECK(f == P::monomial(2, 0, -1));
  }
  SUBCASE("A = xy") {
    CHECK(solve_implicit_f({y + P::monomial(1, 1, 1), P::monomial(3, 0, 1)}, 8).is_zero());
  }
}

TEST_CASE("case table for m <= 7, n <= 3") {
  for (int m = 2; m <= 7; ++m)
    for (int n = 1; n <= 3; ++n)
      for (int a : {-3, -1, 1, 2})
        for (int b : {-5, -2, 0, 1, 4}) {
          NodeStability want_st;
          const SingularityKind want = table(m, a, n, b, &want_st);
          NodeStability got_st;
          const auto nn = b == 0 ? std::nullopt : std::optional<int>(n);
          const auto bb = b == 0 ? std::nullopt : std::optional<Rational>(Rational(b));
          CAPTURE(m);
          CAPTURE(n);
          CAPTURE(a);
          CAPTURE(b);
          CHECK(classify_table(m, Rational(a), nn, bb, &got_st) == want);
          CHECK(got_st == want_st);
          if (b != 0) CHECK(classify_nilpotent(model(a, m, b, n)).kind == want);
        }
}

TEST_CASE("boundary discriminant takes the nonnegative branch") {
  // b^2 + 4a(n+1) = 0 with m = 2n+1
  CHECK(classify_nilpotent(model(-2, 3, 4, 1)).kind == SingularityKind::EllipticHyperbolic);
  CHECK(classify_nilpotent(model(-3, 5, 6, 2)).kind == SingularityKind::Node);
}

TEST_CASE("scaling invariance of the kind") {
  for (const auto& [a, m, b, n] : std::vector<std::array<int, 4>>{
           {1, 2, 1, 1}, {1, 3, -1, 2}, {-1, 5, -4, 2}, {-1, 3, 3, 1}, {1, 4, 1, 1}, {-1, 3, 1, 1}}) {
    const auto f = model(a, m, b, n);
    for (const Rational lambda : {Rational(1, 3), Rational(2), Rational(7, 5)}) {
      // (x, y) -> (lambda x, lambda y) conjugates the field to P(lambda x, lambda y)/lambda, ...
      P X = lambda * P::x(), Y = lambda * P::y();
      const Rational inv = Rational(1) / lambda;
      const PlanarVectorField<Rational> g(inv * substitute(f.P, X, Y), inv * substitute(f.Q, X, Y));
      CHECK(classify_nilpotent(g).kind == classify_nilpotent(f).kind);
    }
  }
}

TEST_CASE("nonstandard linear part is brought to Jordan form") {
  // x' = x + y + ..., y' = -x - y + ...: nilpotent with A^2 = 0
  const P x = P::x(), y = P::y();
  const PlanarVectorField<Rational> f(x + y, P::constant(0) - x - y + P::monomial(2, 0, 1));
  const auto g = to_jordan_form(f);
  const auto J = g.jacobian0();
  CHECK(J(0, 0) == 0);
  CHECK(J(0, 1) == 1);
  CHECK(J(1, 0) == 0);
  CHECK(J(1, 1) == 0);
  CHECK_NOTHROW(classify_nilpotent(f));
}

TEST_CASE("undecidable and invalid inputs") {
  CHECK_THROWS_AS(classify_nilpotent({P::y(), P(12)}), Error);
  CHECK_THROWS_AS(classify_nilpotent({P::x(), P::y()}), Error);
}

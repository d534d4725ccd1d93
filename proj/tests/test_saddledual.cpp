#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nilfrac/saddledual.hpp"

using namespace nilfrac;
using P = BiPoly<Rational>;

namespace {

Eigen::Vector2d eval(const PlanarVectorField<Rational>& f, double x, double y) {
  return {f.P.cast<double>()(x, y), f.Q.cast<double>()(x, y)};
}

}  // namespace

TEST_CASE("saddle field") {
  const P x = P::x(), y = P::y();
  const P h = x * x - y * y;
  CHECK(saddle_field(1) == PlanarVectorField<Rational>(y + h, x + h));
  CHECK(saddle_field(2) == PlanarVectorField<Rational>(y + h * h, x + h * h));
  CHECK(saddle_field(3).degree() == 6);
  const auto J = saddle_field(2).jacobian0();
  CHECK(J(0, 0) == 0);
  CHECK(J(1, 1) == 0);
  CHECK(J(0, 1) * J(1, 0) == 1);
  CHECK_THROWS_AS(saddle_field(0), Error);
}

TEST_CASE("infinity chart restricted to u = 0") {
  for (int k = 1; k <= 4; ++k) {
    const auto f = saddle_infinity_chart(k);
    P pu(f.trunc_degree()), qu(f.trunc_degree());
    for (const auto& [mon, c] : f.P.terms())
      if (mon.i == 0) pu.add_term(0, mon.j, c);
    for (const auto& [mon, c] : f.Q.terms())
      if (mon.i == 0) qu.add_term(0, mon.j, c);
    CAPTURE(k);
    CHECK(pu.is_zero());
    CHECK(qu == P::monomial(0, 2 * k, -1));

    const PlanarVectorField<Rational> restricted(P(f.trunc_degree()), qu);
    const auto jet = picard_jet(restricted, 2 * k + 1);
    CHECK(jet.Y.jet(2 * k) == P::y() - P::monomial(0, 2 * k, 1));
  }
}

TEST_CASE("infinity chart is parallel to the saddle field") {
  for (int k = 1; k <= 2; ++k) {
    const auto chart = saddle_infinity_chart(k);
    const auto f = saddle_field(k);
    for (const auto& [u, v] : std::vector<std::pair<double, double>>{{0.1, 0.3}, {-0.2, 0.15}, {0.4, 0.5}}) {
      // x = 1/v, y = (1 + u)/v
      const double x = 1 / v, y = (1 + u) / v;
      Eigen::Matrix2d J;
      J << 0, -1 / (v * v), 1 / v, -(1 + u) / (v * v);
      const Eigen::Vector2d push = J * eval(chart, u, v);
      const Eigen::Vector2d orig = eval(f, x, y);
      CAPTURE(k);
      CHECK(std::abs(push.x() * orig.y() - push.y() * orig.x()) <= 1e-9 * push.norm() * orig.norm());
    }
  }
}

TEST_CASE("dual pairs") {
  CHECK(dual_box_dimension(1).dual_dim == Rational(4, 3));
  CHECK(dual_box_dimension(1).infinity_dim == Rational(1, 2));
  CHECK(dual_box_dimension(2).dual_dim == Rational(8, 5));
  CHECK(dual_box_dimension(2).infinity_dim == Rational(3, 4));
  CHECK(dual_box_dimension(3).dual_dim == Rational(12, 7));
  CHECK(dual_box_dimension(3).infinity_dim == Rational(5, 6));
  for (int k = 1; k < 8; ++k) {
    CHECK(dual_box_dimension(k + 1).dual_dim > dual_box_dimension(k).dual_dim);
    CHECK(dual_box_dimension(k + 1).infinity_dim > dual_box_dimension(k).infinity_dim);
    CHECK(dual_box_dimension(k).dual_dim < 2);
    CHECK(dual_box_dimension(k).infinity_dim < 1);
  }
}

TEST_CASE("hyperbolic coordinates") {
  for (int k = 1; k <= 3; ++k) {
    const SaddleNormalForm nf = saddle_normal_form(k);
    const auto f = nf.field();
    for (double r : {0.3, 0.7})
      for (double phi : {-1.1, 0.0, 0.4, 2.0}) {
        const double x = r * std::cosh(phi), y = r * std::sinh(phi);
        const Eigen::Vector2d w = eval(f, x, y);
        const double rdot = (x * w.x() - y * w.y()) / r;
        const double phidot = (x * w.y() - y * w.x()) / (r * r);
        const Eigen::Vector2d hr = hyperbolic_rates(nf, r, phi);
        CHECK(hr.x() == doctest::Approx(rdot).epsilon(1e-12));
        CHECK(hr.y() == doctest::Approx(phidot).epsilon(1e-12));
        CHECK(hr.x() == doctest::Approx(std::pow(r, 2 * k + 1)).epsilon(1e-12));
        CHECK(hr.y() == doctest::Approx(1.0).epsilon(1e-12));
        const Eigen::Vector2d pr = polar_rates(nf, r);
        CHECK(pr.x() == doctest::Approx(hr.x()).epsilon(1e-12));
        CHECK(pr.y() == doctest::Approx(hr.y()).epsilon(1e-12));
      }
  }
  SUBCASE("general coefficients") {
    const SaddleNormalForm nf({Rational(0), Rational(-2), Rational(1, 2)}, {Rational(1), Rational(0), Rational(0)});
    CHECK(nf.weak_order() == 1);
    const auto f = nf.field();
    const double r = 0.4, phi = 0.3;
    const double x = r * std::cosh(phi), y = r * std::sinh(phi);
    const Eigen::Vector2d w = eval(f, x, y);
    CHECK(hyperbolic_rates(nf, r, phi).x() == doctest::Approx((x * w.x() - y * w.y()) / r).epsilon(1e-12));
    CHECK(hyperbolic_rates(nf, r, phi).x() ==
          doctest::Approx(r * (-2 * r * r + 0.5 * std::pow(r, 4))).epsilon(1e-12));
  }
}

TEST_CASE("v-axis orbit at infinity for k = 1") {
  SaddleConfig cfg;
  cfg.max_points = 30000;
  const auto r = verify_saddle_infinity(1, cfg);
  CHECK(r.predicted == Rational(1, 2));
  CHECK(r.boxcount.value == doctest::Approx(0.5).epsilon(0.1));
  CHECK(r.increment.alpha == doctest::Approx(2).epsilon(0.025));
}

TEST_CASE("stable manifold orbit of the saddle is trivial") {
  const Orbit o = saddle_stable_orbit(1);
  CHECK(o.points.size() > 100);
  CHECK(estimate_dim_boxcount(o.points).value <= 0.1);
}

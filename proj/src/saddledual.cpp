#include "nilfrac/saddledual.hpp"

#include <algorithm>
#include <cmath>

#include "nilfrac/infinity.hpp"

namespace nilfrac {

SaddleNormalForm::SaddleNormalForm(std::vector<Rational> a_, std::vector<Rational> b_)
    : a(std::move(a_)), b(std::move(b_)) {
  if (a.empty() || a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "coefficient lists must match");
  if (a.back() == 0) throw Error(ErrorKind::InvalidInput, "leading saddle quantity must be nonzero");
}

int SaddleNormalForm::weak_order() const {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) return int(i);
  return -1;
}

PlanarVectorField<Rational> SaddleNormalForm::field() const {
  const int trunc = std::max(2 * order() + 1, kDefaultTrunc);
  const BiPoly<Rational> x = BiPoly<Rational>::x(trunc);
  const BiPoly<Rational> y = BiPoly<Rational>::y(trunc);
  const BiPoly<Rational> h = x * x - y * y;
  BiPoly<Rational> P(trunc), Q(trunc);
  BiPoly<Rational> hp = BiPoly<Rational>::constant(Rational(1), trunc);
  for (int i = 0; i <= order(); ++i) {
    P += hp * (a[i] * x + b[i] * y);
    Q += hp * (b[i] * x + a[i] * y);
    hp = hp * h;
  }
  return {P, Q};
}

SaddleNormalForm saddle_normal_form(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");
  std::vector<Rational> a(k + 1, Rational(0)), b(k + 1, Rational(0));
  a[k] = 1;
  b[0] = 1;
  return {a, b};
}

Eigen::Vector2d hyperbolic_rates(const SaddleNormalForm& nf, double r, double phi) {
  const Eigen::Vector2d p(r * std::cosh(phi), r * std::sinh(phi));
  const Eigen::Vector2d f = CompiledField(nf.field())(p);
  // r^2 = x^2 - y^2, tanh(phi) = y/x
  const double rdot = (p.x() * f.x() - p.y() * f.y()) / r;
  const double phidot = (p.x() * f.y() - p.y() * f.x()) / (r * r);
  return {rdot, phidot};
}

Eigen::Vector2d polar_rates(const SaddleNormalForm& nf, double r) {
  double s = 0;
  for (int i = 0; i <= nf.order(); ++i) s += to_double(nf.a[i]) * std::pow(r, 2 * i);
  return {r * s, to_double(nf.b[0])};
}

PlanarVectorField<Rational> saddle_field(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");
  const int trunc = std::max(2 * k, kDefaultTrunc);
  const BiPoly<Rational> x = BiPoly<Rational>::x(trunc);
  const BiPoly<Rational> y = BiPoly<Rational>::y(trunc);
  const BiPoly<Rational> h = pow(x * x - y * y, k);
  return {y + h, x + h};
}

PlanarVectorField<Rational> saddle_infinity_chart(int k) {
  const ChartSystem sys = chart_transform(saddle_field(k), Chart::U1);
  const int trunc = sys.field.trunc_degree();
  const BiPoly<Rational> u1 = BiPoly<Rational>::x(trunc) + BiPoly<Rational>::constant(Rational(1), trunc);
  const BiPoly<Rational> v = BiPoly<Rational>::y(trunc);
  const PlanarVectorField<Rational> moved(substitute(sys.field.P, u1, v), substitute(sys.field.Q, u1, v));
  return poly_divide_monomial(moved).field;
}

DualDimensionResult dual_box_dimension(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");
  return {k, Rational(4 * k, 2 * k + 1), Rational(1) - Rational(1, 2 * k)};
}

SaddleVerification verify_saddle_infinity(int k, const SaddleConfig& cfg) {
  SaddleVerification out;
  out.predicted = dual_box_dimension(k).infinity_dim;
  const CompiledField f(saddle_infinity_chart(k));
  // v' = -v^(2k) on u = 0: inner end from the point-count law
  const double alpha = 2.0 * k;
  const double target = 0.9 * double(cfg.max_points);
  const double v_in = std::max(cfg.floor, std::pow((alpha - 1) * target + std::pow(cfg.v0, 1 - alpha), 1 / (1 - alpha)));
  OrbitOptions oo;
  oo.floor = 0;
  oo.max_iter = cfg.max_points - 1;
  oo.flow = cfg.flow;
  oo.stop = [&](const Eigen::Vector2d& p) { return p.y() <= v_in; };
  const Orbit orbit = iterate_orbit(f, Eigen::Vector2d(0, cfg.v0), oo);
  out.v_sequence = project(orbit.points, 1);
  out.boxcount = estimate_dim_boxcount(out.v_sequence, cfg.estimator);
  out.sausage = estimate_dim_sausage(out.v_sequence, cfg.estimator);
  out.increment = estimate_increment_exponent(out.v_sequence);
  return out;
}

Orbit saddle_stable_orbit(int k, double outer, double floor) {
  const CompiledField f(saddle_field(k));
  OrbitOptions oo;
  oo.floor = 0;
  oo.time_direction = -1;
  oo.max_iter = 100000;
  oo.stop = [&](const Eigen::Vector2d& p) { return p.norm() >= outer; };
  // stable eigenvector (1, -1) of the swap matrix
  const Eigen::Vector2d seed = floor * Eigen::Vector2d(1, -1).normalized();
  Orbit orbit = iterate_orbit(f, seed, oo);
  std::reverse(orbit.points.begin(), orbit.points.end());
  orbit.seed = orbit.points.front();
  orbit.time_direction = 1;
  orbit.floor = floor;
  orbit.termination = Termination::ReachedFloor;
  orbit.map_descriptor = "inverse iterates from the inner end, reversed";
  return orbit;
}

}  // namespace nilfrac

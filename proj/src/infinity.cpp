#include "nilfrac/infinity.hpp"

#include <cmath>

namespace nilfrac {

const char* to_string(Chart c) { return c == Chart::U1 ? "u1" : "u2"; }

ChartSystem chart_transform(const PlanarVectorField<Rational>& field, Chart chart) {
  const int d = std::max(field.degree(), 1);
  const int trunc = 2 * d + 2;
  // v^d f(x, y) after the chart substitution
  auto rescale = [&](const BiPoly<Rational>& f) {
    BiPoly<Rational> r(trunc);
    for (const auto& [mon, c] : f.terms()) {
      const int vpow = d - mon.i - mon.j;
      r.add_term(chart == Chart::U1 ? mon.j : mon.i, vpow, c);
    }
    return r;
  };
  const BiPoly<Rational> Ps = rescale(field.P);
  const BiPoly<Rational> Qs = rescale(field.Q);
  const BiPoly<Rational> u = BiPoly<Rational>::x(trunc);
  const BiPoly<Rational> v = BiPoly<Rational>::y(trunc);
  PlanarVectorField<Rational> raw = chart == Chart::U1 ? PlanarVectorField<Rational>(Qs - u * Ps, -(v * Ps))
                                                       : PlanarVectorField<Rational>(Ps - u * Qs, -(v * Qs));
  const DividedField<Rational> div = poly_divide_monomial(raw);
  return {chart, div.field, div.divisor, d};
}

ChartSystem compactify(const NilpotentModel& model, Chart chart) {
  return chart_transform(model.field(), chart);
}

Rational predicted_dim_infinity(int m, int n, Chart chart) {
  if (m < 2 || n < 1) throw Error(ErrorKind::InvalidInput, "need m >= 2 and n >= 1");
  if (chart == Chart::U1) {
    if (m >= n + 1) throw Error(ErrorKind::InvalidInput, "chart U1 is covered only for m < n + 1");
    return Rational(1) - Rational(1, 2 * n - m + 2);
  }
  if (m <= n + 1) return Rational(1) - Rational(1, n + 1);
  return Rational(1) - Rational(1, m + 1);
}

namespace {

/// Real root of c^k = r with the sign of r for odd k.
double real_root(double r, int k) {
  if (r < 0 && k % 2 == 0) throw Error(ErrorKind::InvalidInput, "no real branch for this sign of coefficients");
  return r < 0 ? -std::pow(-r, 1.0 / k) : std::pow(r, 1.0 / k);
}

}  // namespace

InfinityCurve infinity_curve(const NilpotentModel& model, Chart chart, int terms) {
  const int m = model.m;
  const int n = model.n;
  const double a = to_double(model.a);
  const double b = to_double(model.b);
  const ChartSystem sys = compactify(model, chart);
  InfinityCurve c;
  if (chart == Chart::U1) {
    if (m >= n + 1) throw Error(ErrorKind::InvalidInput, "chart U1 is covered only for m < n + 1");
    if (!model.has_b()) throw Error(ErrorKind::InvalidInput, "chart U1 centre manifold needs b != 0");
    // u = -(a/b) v^(n+1-m) + ..., v' ~ (a/b) v^(2n+2-m)
    c.gamma = Rational(n + 1 - m);
    c.step = 1;
    c.axis = Axis::X;
    c.increment_exponent = 2 * n + 2 - m;
    const Rational c0 = -model.a / model.b;
    c.c0 = to_double(c0);
    c.series = invariant_curve(sys.field, c.gamma, c.step, c0, terms, Axis::X).cast<double>();
    return c;
  }
  c.axis = Axis::Y;
  if (m <= n + 1) {
    // v = c u^((n+1)/n), c^n = b/(n+1), u' ~ -b n/(n+1) u^(n+1)
    if (!model.has_b()) throw Error(ErrorKind::InvalidInput, "chart U2 separatrix needs b != 0 for m <= n + 1");
    c.gamma = Rational(n + 1, n);
    c.c0 = real_root(b / (n + 1), n);
    c.increment_exponent = n + 1;
  } else {
    if (model.has_b() && m <= 2 * n + 1)
      throw Error(ErrorKind::InvalidInput, "chart U2 with n + 1 < m <= 2n + 1 has a mixed leading balance");
    // v = c u^((m+1)/(m-1)), c^(m-1) = 2a/(m+1), u' ~ -a (m-1)/(m+1) u^(m+1)
    c.gamma = Rational(m + 1, m - 1);
    c.c0 = real_root(2 * a / (m + 1), m - 1);
    c.increment_exponent = m + 1;
  }
  c.step = Rational(1, int(denominator(c.gamma)));
  c.series = invariant_curve(sys.field.cast<double>(), c.gamma, c.step, c.c0, terms, Axis::Y, Obstruction::Truncate);
  return c;
}

InfinityVerification verify_dim_infinity(const NilpotentModel& model, Chart chart, const InfinityConfig& cfg) {
  InfinityVerification out;
  out.predicted = predicted_dim_infinity(model.m, model.n, chart);
  if (chart == Chart::U2 && model.m == model.n + 1)
    out.note = "m = n + 1 read as the chart U2 value 1 - 1/(n+1)";
  const InfinityCurve curve = infinity_curve(model, chart, cfg.terms);
  const ChartSystem sys = compactify(model, chart);
  const Orbit orbit = curve_orbit(CompiledField(sys.field), curve.series, curve.axis, cfg.orbit);
  out.orbit_points = orbit.points.size();
  out.boxcount = estimate_dim_boxcount(orbit.points, cfg.estimator);
  out.sausage = estimate_dim_sausage(orbit.points, cfg.estimator);
  const std::vector<double> t = project(orbit.points, curve.axis == Axis::Y ? 0 : 1);
  out.increment = estimate_increment_exponent(t);
  return out;
}

}  // namespace nilfrac

#pragma once

// Weighted blow-up charts, leading separatrix data of the nilpotent model,
// triangular recursion for invariant-curve series, and orbits seeded on them.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nilfrac/series.hpp"
#include "nilfrac/unitmap.hpp"

namespace nilfrac {

enum class BranchStability { Stable, Unstable, Center };
enum class CaseTag { Case1A, Case1B, Case2, Case3 };

const char* to_string(BranchStability s);
const char* to_string(CaseTag t);

/// x = u^p, y = u^q w. The raw chart field is multiplied by u^premultiplier
/// and then divided by the greatest common monomial `divisor`.
template <class S>
struct BlowupChart {
  int p = 1;
  int q = 1;
  int premultiplier = 0;
  PlanarVectorField<S> transformed;
  Monomial divisor;
};

template <class S>
BlowupChart<S> blow_up(const PlanarVectorField<S>& field, int p, int q) {
  if (p < 1 || q < 1) throw Error(ErrorKind::InvalidInput, "blow-up weights must be positive");
  const int M = std::max(p, q);
  int trunc = 0;
  for (const auto* comp : {&field.P, &field.Q})
    for (const auto& [mon, c] : comp->terms()) trunc = std::max(trunc, p * mon.i + q * mon.j + mon.j + M + 2);
  BiPoly<S> U(trunc), W(trunc);
  const S qp = lift<S>(Rational(q, p));
  const S ip = lift<S>(Rational(1, p));
  // u' u^M = P~ u^(M+1-p) / p
  for (const auto& [mon, c] : field.P.terms()) {
    const int e = p * mon.i + q * mon.j;
    U.add_term(e + M + 1 - p, mon.j, ip * c);
    W.add_term(e + M - p, mon.j + 1, S(0) - qp * c);
  }
  // w' u^M = Q~ u^(M-q) - (q/p) w P~ u^(M-p)
  for (const auto& [mon, c] : field.Q.terms()) W.add_term(p * mon.i + q * mon.j + M - q, mon.j, c);
  const DividedField<S> d = poly_divide_monomial(PlanarVectorField<S>(U, W));
  return {p, q, M, d.field, d.divisor};
}

/// Exact check that the chart field pushes forward to the original field:
/// P(u^p, u^q w) u^M = p u^(p-1) U' D and Q(u^p, u^q w) u^M = q u^(q-1) w U' D + u^q W' D,
/// with D the removed divisor.
template <class S>
bool blow_down_identity(const PlanarVectorField<S>& field, const BlowupChart<S>& chart) {
  const int trunc = 4 * (chart.transformed.trunc_degree() + chart.p + chart.q + chart.premultiplier) + 8;
  auto sub = [&](const BiPoly<S>& f) {
    BiPoly<S> r(trunc);
    for (const auto& [mon, c] : f.terms())
      r.add_term(chart.p * mon.i + chart.q * mon.j + chart.premultiplier, mon.j, c);
    return r;
  };
  const BiPoly<S> U = shift(chart.transformed.P.with_trunc(trunc), chart.divisor.i, chart.divisor.j, trunc);
  const BiPoly<S> W = shift(chart.transformed.Q.with_trunc(trunc), chart.divisor.i, chart.divisor.j, trunc);
  const BiPoly<S> lhs_p = sub(field.P);
  const BiPoly<S> rhs_p = lift<S>(Rational(chart.p)) * shift(U, chart.p - 1, 0, trunc);
  const BiPoly<S> lhs_q = sub(field.Q);
  const BiPoly<S> rhs_q =
      lift<S>(Rational(chart.q)) * shift(U, chart.q - 1, 1, trunc) + shift(W, chart.q, 0, trunc);
  return lhs_p == rhs_p && lhs_q == rhs_q;
}

struct LeadingTerm {
  Rational gamma;
  QuadSurd c0;
  CaseTag tag = CaseTag::Case1A;
  BranchStability stability = BranchStability::Stable;
};

/// Real separatrix branches on x > 0 with y ~ c0 x^gamma. Throws Monodromic
/// for centre/focus data and InvalidInput for the x < 0 cusp (m even, a < 0).
std::vector<LeadingTerm> separatrix_leading(const NilpotentModel& model);

/// Weights (p, q) with gamma = q/p in lowest terms.
std::pair<int, int> branch_weights(const Rational& gamma);

namespace detail {

template <class S>
bool negligible(const S& v, double scale) {
  if constexpr (is_exact_v<S>) {
    (void)scale;
    return ScalarTraits<S>::is_zero(v);
  } else {
    return std::abs(to_double(v)) <= 1e-10 * std::max(scale, 1.0);
  }
}

template <class R>
struct OrientedField {
  BiPoly<R> P;
  BiPoly<R> Q;
};

/// Axis::X describes x = s(y); the field is swapped so the curve reads y = s(x).
template <class R>
OrientedField<R> orient(const PlanarVectorField<R>& field, Axis axis) {
  if (axis == Axis::Y) return {field.P, field.Q};
  return {swap_xy(field.Q), swap_xy(field.P)};
}

/// Lowest exponent of p(x, s(x)), searched with growing caps.
template <class S, class R>
std::optional<long> lowest_after_compose(const BiPoly<R>& p, const FracSeries<S>& s, long span) {
  if (p.is_zero()) return std::nullopt;
  const long g = s.low_bound();
  long low = std::numeric_limits<long>::max();
  for (const auto& [mon, c] : p.terms()) low = std::min(low, long(mon.i) * s.den() + long(mon.j) * g);
  for (int round = 0; round < 6; ++round, span *= 2) {
    const FracSeries<S> r = compose(p, s, low + span);
    if (const auto lo = r.lowest()) return lo;
  }
  return std::nullopt;
}

template <class S, class R>
FracSeries<S> invariance_residual(const OrientedField<R>& f, const FracSeries<S>& s, long cap) {
  FracSeries<S> r = compose(f.Q, s, cap) - s.derivative() * compose(f.P, s, cap);
  r.cap(cap);
  return r;
}

}  // namespace detail

/// Q(x, s) - s' P(x, s) for y = s(x) (Axis::Y) or the swapped form for x = s(y),
/// with every exponent below `cap_exponent` exact.
template <class S, class R>
FracSeries<S> invariance_residual(const PlanarVectorField<R>& field, const PuiseuxSeries<S>& series,
                                  const Rational& cap_exponent, Axis axis = Axis::Y) {
  const FracSeries<S> s = series.to_frac();
  const long cap = long(numerator(cap_exponent * Rational(s.den())));
  return detail::invariance_residual(detail::orient(field, axis), s, cap);
}

/// What to do at a resonant order whose residual cannot be cancelled (the
/// curve then carries a logarithmic term).
enum class Obstruction { Throw, Truncate };

/// Invariant curve y = c0 x^gamma + sum c_j x^(gamma + j*step) of the field,
/// solved order by order from the invariance condition. A resonant order with
/// consistent data takes c_j = 0; inconsistent data raises NonTriangular or,
/// with Obstruction::Truncate, ends the series there.
template <class S, class R>
PuiseuxSeries<S> invariant_curve(const PlanarVectorField<R>& field, const Rational& gamma, const Rational& step,
                                 const S& c0, int terms, Axis axis = Axis::Y,
                                 Obstruction policy = Obstruction::Throw) {
  if (terms < 1) throw Error(ErrorKind::InvalidInput, "at least one series term is required");
  if (gamma <= 0) throw Error(ErrorKind::InvalidInput, "invariant curve must pass through the origin");
  PuiseuxSeries<S>(gamma, step, {c0});
  const detail::OrientedField<R> f = detail::orient(field, axis);
  const int den = int(denominator(step));
  const long g = long(numerator(gamma * Rational(den)));
  const BiPoly<R> Py = d_dy(f.P);
  const BiPoly<R> Qy = d_dy(f.Q);
  const double scale = std::abs(to_double(c0));
  FracSeries<S> s = FracSeries<S>::monomial(g, c0, den);
  std::vector<S> coeffs{c0};
  for (int j = 1; j < terms; ++j) {
    const long e = g + j;
    const long span = 2L * den * (terms + 2);
    std::optional<long> shift;
    if (const auto lp = detail::lowest_after_compose(f.P, s, span)) shift = *lp - den;
    {
      const long cap = shift ? *shift + 1 : g + span;
      const FracSeries<S> t1 = compose(Qy, s, cap) - s.derivative() * compose(Py, s, cap);
      if (const auto lo = t1.lowest(); lo && (!shift || *lo < *shift)) shift = *lo;
    }
    if (!shift) throw Error(ErrorKind::NonTriangular, "degenerate linearization at term " + std::to_string(j));
    const long pivot = e + *shift;
    auto residual = [&](const S& cj) {
      FracSeries<S> t = s;
      t.add(e, cj);
      return detail::invariance_residual(f, t, pivot + 1);
    };
    const FracSeries<S> r0 = residual(S(0));
    const FracSeries<S> r1 = residual(S(1));
    for (const auto& [k, c] : r0.terms()) {
      if (k >= pivot) break;
      if (!detail::negligible(c, scale))
        throw Error(ErrorKind::NonTriangular,
                    "residual at exponent " + to_string(Rational(k, den)) + " cannot be cancelled");
    }
    const S L = r1.coeff(pivot) - r0.coeff(pivot);
    S cj(0);
    if (detail::negligible(L, scale)) {
      if (!detail::negligible(r0.coeff(pivot), scale)) {
        if (policy == Obstruction::Truncate) break;
        throw Error(ErrorKind::NonTriangular, "resonant order " + to_string(Rational(e, den)) + " is obstructed");
      }
    } else {
      cj = (S(0) - r0.coeff(pivot)) / L;
    }
    coeffs.push_back(cj);
    s.add(e, cj);
  }
  return PuiseuxSeries<S>(gamma, step, std::move(coeffs));
}

template <class S>
struct SeparatrixBranch {
  PuiseuxSeries<S> series;
  BranchStability stability = BranchStability::Stable;
  CaseTag case_tag = CaseTag::Case1A;
  /// Blow-up weights and the chart singularity (u, w) = (0, c0).
  std::pair<int, int> weights{1, 1};
  S source_w;
};

/// Branch series with `terms` coefficients.
SeparatrixBranch<QuadSurd> separatrix_series(const NilpotentModel& model, const LeadingTerm& leading, int terms = 8);

/// The same branch computed in the blow-up chart as w = c0 + sum beta_k u^k and
/// blown down through x = u^p, y = u^q w.
PuiseuxSeries<QuadSurd> chart_branch_series(const NilpotentModel& model, const LeadingTerm& leading, int terms);

struct CurveOrbitOptions {
  /// Outer end of the orbit in the independent coordinate.
  double outer = 0.5;
  double floor = 1e-9;
  long max_points = 100000;
  FlowOptions flow;
};

/// Orbit of the unit-time map (or its inverse) shadowing the invariant curve
/// `curve` on the positive side of the independent coordinate, ordered from the
/// outer end toward the singular point.
Orbit curve_orbit(const CompiledField& field, const PuiseuxSeries<double>& curve, Axis axis,
                  const CurveOrbitOptions& opt = {});

template <class S>
Orbit separatrix_orbit(const NilpotentModel& model, const SeparatrixBranch<S>& branch,
                       const CurveOrbitOptions& opt = {}) {
  return curve_orbit(CompiledField(model.field()), branch.series.template cast<double>(), Axis::Y, opt);
}

}  // namespace nilfrac

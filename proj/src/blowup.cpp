#include "nilfrac/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nilfrac {

const char* to_string(BranchStability s) {
  switch (s) {
    case BranchStability::Stable: return "stable";
    case BranchStability::Unstable: return "unstable";
    case BranchStability::Center: return "center";
  }
  return "?";
}

const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::Case1A: return "Case1A";
    case CaseTag::Case1B: return "Case1B";
    case CaseTag::Case2: return "Case2";
    case CaseTag::Case3: return "Case3";
  }
  return "?";
}

std::pair<int, int> branch_weights(const Rational& gamma) {
  if (gamma <= 0) throw Error(ErrorKind::InvalidInput, "branch exponent must be positive");
  return {int(denominator(gamma)), int(numerator(gamma))};
}

namespace {

BranchStability stability_of(const QuadSurd& c) {
  return c.sign() < 0 ? BranchStability::Stable : BranchStability::Unstable;
}

}  // namespace

std::vector<LeadingTerm> separatrix_leading(const NilpotentModel& model) {
  const int m = model.m;
  const int n = model.n;
  const Rational& a = model.a;
  const Rational& b = model.b;
  if (!model.has_b() || m < 2 * n + 1) {
    if (a < 0) {
      if (m % 2 == 0) throw Error(ErrorKind::InvalidInput, "cusp branches lie in x < 0, only x >= 0 is covered");
      throw Error(ErrorKind::Monodromic, "centre or focus has no separatrices");
    }
    const Rational gamma(m + 1, 2);
    const QuadSurd c = QuadSurd::sqrt(Rational(2) * a / Rational(m + 1));
    const CaseTag tag = m % 2 == 0 ? CaseTag::Case1A : CaseTag::Case1B;
    return {{gamma, c, tag, BranchStability::Unstable}, {gamma, -c, tag, BranchStability::Stable}};
  }
  if (m > 2 * n + 1) {
    const QuadSurd cu(b / Rational(n + 1));
    const QuadSurd cc(-a / b);
    return {{Rational(n + 1), cu, CaseTag::Case2, stability_of(cu)},
            {Rational(m - n), cc, CaseTag::Case2, BranchStability::Center}};
  }
  const Rational disc = b * b + Rational(4) * a * Rational(n + 1);
  if (disc < 0) throw Error(ErrorKind::Monodromic, "centre or focus has no separatrices");
  const QuadSurd r = QuadSurd::sqrt(disc);
  const QuadSurd den(Rational(2 * (n + 1)));
  const QuadSurd c1 = (QuadSurd(b) + r) / den;
  const QuadSurd c2 = (QuadSurd(b) - r) / den;
  std::vector<LeadingTerm> out;
  for (const QuadSurd& c : {c1, c2}) {
    if (c.sign() == 0) continue;
    if (!out.empty() && out.back().c0 == c) continue;
    out.push_back({Rational(n + 1), c, CaseTag::Case3, stability_of(c)});
  }
  return out;
}

SeparatrixBranch<QuadSurd> separatrix_series(const NilpotentModel& model, const LeadingTerm& leading, int terms) {
  const auto [p, q] = branch_weights(leading.gamma);
  const Rational step(1, p);
  SeparatrixBranch<QuadSurd> branch;
  branch.series = invariant_curve(model.field(), leading.gamma, step, leading.c0, terms);
  branch.stability = leading.stability;
  branch.case_tag = leading.tag;
  branch.weights = {p, q};
  branch.source_w = leading.c0;
  return branch;
}

PuiseuxSeries<QuadSurd> chart_branch_series(const NilpotentModel& model, const LeadingTerm& leading, int terms) {
  const auto [p, q] = branch_weights(leading.gamma);
  const BlowupChart<Rational> chart = blow_up(model.field(), p, q);
  const int T = terms + 1;
  const BiPoly<QuadSurd> U = chart.transformed.P.cast<QuadSurd>();
  const BiPoly<QuadSurd> W = chart.transformed.Q.cast<QuadSurd>();
  const BiPoly<QuadSurd> u = BiPoly<QuadSurd>::x(T);
  BiPoly<QuadSurd> h = BiPoly<QuadSurd>::constant(leading.c0, T);
  std::vector<QuadSurd> coeffs{leading.c0};
  auto residual = [&](const BiPoly<QuadSurd>& hk) { return substitute(W, u, hk) - d_dx(hk) * substitute(U, u, hk); };
  for (int k = 1; k < terms; ++k) {
    BiPoly<QuadSurd> h1 = h;
    h1.add_term(k, 0, QuadSurd(1));
    const BiPoly<QuadSurd> r0 = residual(h);
    const BiPoly<QuadSurd> r1 = residual(h1);
    for (int i = 0; i < k; ++i)
      if (r0.coeff(i, 0) != QuadSurd(0))
        throw Error(ErrorKind::NonTriangular, "chart residual at u^" + std::to_string(i) + " does not vanish");
    const QuadSurd L = r1.coeff(k, 0) - r0.coeff(k, 0);
    QuadSurd beta(0);
    if (L == QuadSurd(0)) {
      if (r0.coeff(k, 0) != QuadSurd(0)) throw Error(ErrorKind::NonTriangular, "resonant chart order");
    } else {
      beta = -r0.coeff(k, 0) / L;
    }
    h.add_term(k, 0, beta);
    coeffs.push_back(beta);
  }
  return PuiseuxSeries<QuadSurd>(leading.gamma, Rational(1, p), std::move(coeffs));
}

namespace {

struct CurveFrame {
  const CompiledField& field;
  const PuiseuxSeries<double>& curve;
  int ti;
  int oi;

  Eigen::Vector2d on(double t) const {
    Eigen::Vector2d p;
    p[ti] = t;
    p[oi] = curve.eval(t);
    return p;
  }
  double speed(double t) const { return field(on(t))[ti]; }
  double deviation(const Eigen::Vector2d& p) const { return p[oi] - curve.eval(p[ti]); }
};

/// Growth of a small transversal offset after `steps` iterates in direction dir.
double transversal_growth(const CurveFrame& fr, double t, int dir, int steps, double lo, double hi,
                          const FlowOptions& flow) {
  Eigen::Vector2d p = fr.on(t);
  const double delta = 1e-6 * std::max(std::abs(p[fr.oi]), 1e-3 * t);
  Eigen::Vector2d q = p;
  q[fr.oi] += delta;
  try {
    for (int k = 0; k < steps; ++k) {
      p = numeric_flow(fr.field, p, double(dir), flow);
      q = numeric_flow(fr.field, q, double(dir), flow);
      if (p[fr.ti] < lo || p[fr.ti] > hi) break;
    }
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(fr.deviation(q) - fr.deviation(p)) / delta;
}

}  // namespace

Orbit curve_orbit(const CompiledField& field, const PuiseuxSeries<double>& curve, Axis axis,
                  const CurveOrbitOptions& opt) {
  const CurveFrame fr{field, curve, axis == Axis::Y ? 0 : 1, axis == Axis::Y ? 1 : 0};
  const double t_out = opt.outer;
  if (!(t_out > opt.floor) || opt.floor <= 0) throw Error(ErrorKind::InvalidInput, "need 0 < floor < outer");
  const double ta = std::max(opt.floor, 1e-7 * t_out);
  const double tb = 10 * ta;
  const double va = fr.speed(ta);
  const double vb = fr.speed(tb);
  if (va == 0 || vb == 0 || (va < 0) != (vb < 0))
    throw Error(ErrorKind::InvalidInput, "flow does not move monotonically along the curve");
  const double alpha = std::log(std::abs(vb / va)) / std::log(10.0);
  const double C = std::abs(va) / std::pow(ta, alpha);
  const int inward = va < 0 ? 1 : -1;

  double t_in = opt.floor;
  const double target = 0.9 * double(opt.max_points);
  if (alpha > 1.001) {
    const double need = (alpha - 1) * C * target + std::pow(t_out, 1 - alpha);
    t_in = std::max(opt.floor, std::pow(need, 1 / (1 - alpha)));
  }

  const double t_mid = std::sqrt(t_in * t_out);
  const double g_in = transversal_growth(fr, t_mid, inward, 40, t_in, t_out, opt.flow);
  const double g_out = transversal_growth(fr, t_mid, -inward, 40, t_in, t_out, opt.flow);

  OrbitOptions oo;
  oo.floor = 0;
  oo.max_iter = opt.max_points - 1;
  oo.flow = opt.flow;
  Orbit orbit;
  if (g_in <= g_out) {
    oo.time_direction = inward;
    oo.stop = [&](const Eigen::Vector2d& p) { return p[fr.ti] <= t_in; };
    orbit = iterate_orbit(field, fr.on(t_out), oo);
  } else {
    oo.time_direction = -inward;
    oo.stop = [&](const Eigen::Vector2d& p) { return p[fr.ti] >= t_out; };
    orbit = iterate_orbit(field, fr.on(t_in), oo);
    std::reverse(orbit.points.begin(), orbit.points.end());
    orbit.seed = orbit.points.front();
    orbit.time_direction = inward;
    orbit.map_descriptor = "inverse iterates from the inner end, reversed";
  }
  if (orbit.termination == Termination::ReachedBound) orbit.termination = Termination::ReachedFloor;
  orbit.floor = t_in;
  return orbit;
}

}  // namespace nilfrac

#include "nilfrac/unitmap.hpp"

#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace nilfrac {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedFloor: return "reached-floor";
    case Termination::MaxIterations: return "max-iterations";
    case Termination::LeftDomain: return "left-domain";
    case Termination::ConvergedToFixedPoint: return "converged-to-fixed-point";
    case Termination::ReachedBound: return "reached-bound";
    case Termination::StepUnderflow: return "step-underflow";
  }
  return "unknown";
}

namespace {

template <class S>
bool is_small(const S& v) {
  if constexpr (std::is_same_v<S, double>) {
    return std::abs(v) < 1e-14;
  } else {
    return v == 0;
  }
}

template <class S>
BiPoly<S> nonlinear_part(const BiPoly<S>& p, int order) {
  BiPoly<S> r(order);
  for (const auto& [mon, c] : p.terms())
    if (mon.degree() >= 2) r.add_term(mon.i, mon.j, c);
  return r;
}

template <class S, class F>
BiPoly<TPoly<S>> map_coeffs(const BiPoly<TPoly<S>>& p, F f) {
  BiPoly<TPoly<S>> r(p.trunc_degree());
  for (const auto& [mon, c] : p.terms()) r.add_term(mon.i, mon.j, f(c));
  return r;
}

template <class S>
BiPoly<S> at_time_one(const BiPoly<TPoly<S>>& p) {
  BiPoly<S> r(p.trunc_degree());
  for (const auto& [mon, c] : p.terms()) r.add_term(mon.i, mon.j, c.at(S(1)));
  return r;
}

template <class S>
void check_jet_request(const PlanarVectorField<S>& field, int order) {
  if (order < 1) throw Error(ErrorKind::InvalidInput, "jet order must be at least 1");
  if (order > field.trunc_degree())
    throw Error(ErrorKind::InvalidInput, "jet order exceeds the field truncation degree");
  if (!is_small(field.P.coeff(0, 0)) || !is_small(field.Q.coeff(0, 0)))
    throw Error(ErrorKind::InvalidInput, "origin is not a singular point");
}

}  // namespace

template <class S>
UnitMapJet<S> picard_iterate(const PlanarVectorField<S>& field, int order, int iterations) {
  using T = TPoly<S>;
  check_jet_request(field, order);
  const Eigen::Matrix<S, 2, 2> A = field.jacobian0();
  const Eigen::Matrix<S, 2, 2> A2 = mul2(A, A);
  for (int k = 0; k < 4; ++k)
    if (!is_small(A2(k / 2, k % 2)))
      throw Error(ErrorKind::NotNilpotent, "Picard iteration in closed form needs a nilpotent linear part");

  const BiPoly<S> NP = nonlinear_part(field.P, order);
  const BiPoly<S> NQ = nonlinear_part(field.Q, order);

  // e^{At} (x, y) with e^{At} = I + A t.
  BiPoly<T> X1(order), Y1(order);
  X1.add_term(1, 0, T(std::vector<S>{S(1), A(0, 0)}));
  X1.add_term(0, 1, T(std::vector<S>{S(0), A(0, 1)}));
  Y1.add_term(1, 0, T(std::vector<S>{S(0), A(1, 0)}));
  Y1.add_term(0, 1, T(std::vector<S>{S(1), A(1, 1)}));

  BiPoly<T> X = X1, Y = Y1;
  auto integral = [](const T& c) { return c.integral(); };
  auto lagged = [](const T& c) { return c.lagged_integral(); };
  for (int it = 0; it < iterations; ++it) {
    const BiPoly<T> NX = substitute(NP, X, Y);
    const BiPoly<T> NY = substitute(NQ, X, Y);
    const BiPoly<T> LX = map_coeffs<S>(NX, lagged);
    const BiPoly<T> LY = map_coeffs<S>(NY, lagged);
    X = X1 + map_coeffs<S>(NX, integral) + T(A(0, 0)) * LX + T(A(0, 1)) * LY;
    Y = Y1 + map_coeffs<S>(NY, integral) + T(A(1, 0)) * LX + T(A(1, 1)) * LY;
  }
  UnitMapJet<S> jet;
  jet.X = at_time_one<S>(X);
  jet.Y = at_time_one<S>(Y);
  jet.order = order;
  jet.linear_part = A;
  jet.linear_part(0, 0) = jet.linear_part(0, 0) + S(1);
  jet.linear_part(1, 1) = jet.linear_part(1, 1) + S(1);
  return jet;
}

template <class S>
UnitMapJet<S> lie_jet(const PlanarVectorField<S>& field, int order, int max_terms) {
  check_jet_request(field, order);
  const BiPoly<S> P = field.P.with_trunc(order);
  const BiPoly<S> Q = field.Q.with_trunc(order);
  // P and Q vanish at the origin, so the Lie derivative keeps the jet order.
  auto exact_copy = [&](const BiPoly<S>& g) {
    BiPoly<S> r(order);
    for (const auto& [mon, c] : g.terms()) r.add_term(mon.i, mon.j, c);
    return r;
  };
  auto lie = [&](const BiPoly<S>& g) {
    const BiPoly<S> e = exact_copy(g);
    return exact_copy(P * d_dx(e) + Q * d_dy(e));
  };
  auto small = [](const BiPoly<S>& g) {
    for (const auto& [mon, c] : g.terms())
      if (!is_small(c) || (std::is_same_v<S, double> && std::abs(to_double(c)) > 1e-17)) return false;
    return true;
  };
  UnitMapJet<S> jet;
  for (int comp = 0; comp < 2; ++comp) {
    BiPoly<S> g = comp == 0 ? BiPoly<S>::x(order) : BiPoly<S>::y(order);
    BiPoly<S> sum = g;
    int k = 1;
    for (; k <= max_terms; ++k) {
      g = lift<S>(Rational(1, k)) * lie(g);
      if (g.is_zero() || (!is_exact_v<S> && small(g))) break;
      sum += g;
    }
    if (k > max_terms) throw Error(ErrorKind::InvalidInput, "Lie series did not terminate");
    (comp == 0 ? jet.X : jet.Y) = sum;
  }
  jet.order = order;
  jet.linear_part << jet.X.coeff(1, 0), jet.X.coeff(0, 1), jet.Y.coeff(1, 0), jet.Y.coeff(0, 1);
  return jet;
}

template <class S>
UnitMapJet<S> picard_jet(const PlanarVectorField<S>& field, int order) {
  check_jet_request(field, order);
  const Eigen::Matrix<S, 2, 2> A = field.jacobian0();
  const Eigen::Matrix<S, 2, 2> A2 = mul2(A, A);
  bool nilpotent = true;
  for (int k = 0; k < 4; ++k) nilpotent = nilpotent && is_small(A2(k / 2, k % 2));
  if (nilpotent) return picard_iterate(field, order, order);
  if constexpr (is_exact_v<S>) {
    throw Error(ErrorKind::NotNilpotent, "exact jets need a nilpotent linear part; use float mode");
  } else {
    return lie_jet(field, order);
  }
}

template UnitMapJet<Rational> picard_iterate(const PlanarVectorField<Rational>&, int, int);
template UnitMapJet<double> picard_iterate(const PlanarVectorField<double>&, int, int);
template UnitMapJet<Rational> picard_jet(const PlanarVectorField<Rational>&, int);
template UnitMapJet<double> picard_jet(const PlanarVectorField<double>&, int);
template UnitMapJet<Rational> lie_jet(const PlanarVectorField<Rational>&, int, int);
template UnitMapJet<double> lie_jet(const PlanarVectorField<double>&, int, int);

CompiledField::CompiledField(const PlanarVectorField<double>& field) {
  for (const auto& [mon, c] : field.P.terms()) p_.push_back({mon.i, mon.j, c});
  for (const auto& [mon, c] : field.Q.terms()) q_.push_back({mon.i, mon.j, c});
  for (const auto* terms : {&p_, &q_}) {
    for (const auto& t : *terms) {
      max_i_ = std::max(max_i_, t.i);
      max_j_ = std::max(max_j_, t.j);
    }
  }
  if (max_i_ > 63 || max_j_ > 63) throw Error(ErrorKind::InvalidInput, "field degree too large for evaluation");
}

CompiledField::CompiledField(const PlanarVectorField<Rational>& field)
    : CompiledField(field.template cast<double>()) {}

Eigen::Vector2d CompiledField::operator()(const Eigen::Vector2d& p) const {
  std::array<double, 64> xp, yp;
  xp[0] = yp[0] = 1.0;
  for (int k = 1; k <= max_i_; ++k) xp[k] = xp[k - 1] * p.x();
  for (int k = 1; k <= max_j_; ++k) yp[k] = yp[k - 1] * p.y();
  double u = 0, v = 0;
  for (const auto& t : p_) u += t.c * xp[t.i] * yp[t.j];
  for (const auto& t : q_) v += t.c * xp[t.i] * yp[t.j];
  return {u, v};
}

Eigen::Vector2d numeric_flow(const CompiledField& f, const Eigen::Vector2d& p0, double t, const FlowOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  if (t == 0) return p0;
  const double dir = t > 0 ? 1.0 : -1.0;
  const double T = std::abs(t);
  auto rhs = [&](const State& p, State& dp, double) {
    const Eigen::Vector2d v = dir * f(Eigen::Vector2d(p[0], p[1]));
    dp = {v.x(), v.y()};
  };
  const double atol = opt.scale_atol ? std::min(opt.atol, opt.rtol * 1e-3 * std::max(p0.norm(), 1e-300)) : opt.atol;
  const double fn = f(p0).norm();
  const double h0 = std::max(fn > 0 ? std::min(T, 0.01 * std::max(p0.norm(), atol) / fn) : T, 1e-6 * T);

  State y{p0.x(), p0.y()};
  long steps = 0;
  double last_t = 0;
  auto observe = [&](const State& p, double s) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || std::hypot(p[0], p[1]) > opt.domain)
      throw Error(ErrorKind::LeftDomain, "trajectory left the domain");
    if (++steps > opt.max_steps) throw Error(ErrorKind::StepUnderflow, "too many integration steps");
    if (s > 0 && s < T && s - last_t < opt.h_min * T)
      throw Error(ErrorKind::StepUnderflow, "step size fell below the minimum");
    last_t = s;
  };
  try {
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(atol, opt.rtol), rhs, y,
                               0.0, T, h0, observe);
  } catch (const odeint::step_adjustment_error&) {
    throw Error(ErrorKind::StepUnderflow, "step size control failed");
  }
  return {y[0], y[1]};
}

Orbit iterate_orbit(const CompiledField& field, const Eigen::Vector2d& p0, const OrbitOptions& opt) {
  if (p0.norm() == 0) throw Error(ErrorKind::InvalidInput, "orbit seed must differ from the origin");
  Orbit orbit;
  orbit.seed = p0;
  orbit.floor = opt.floor;
  orbit.time_direction = opt.time_direction;
  orbit.map_descriptor = opt.time_direction > 0 ? "time-one map" : "inverse time-one map";
  orbit.points.push_back(p0);
  Eigen::Vector2d p = p0;
  long iter = 0;
  while (true) {
    if (p.norm() < opt.floor) {
      orbit.termination = Termination::ReachedFloor;
      break;
    }
    if (iter >= opt.max_iter) {
      orbit.termination = Termination::MaxIterations;
      break;
    }
    Eigen::Vector2d next;
    try {
      next = numeric_flow(field, p, double(opt.time_direction), opt.flow);
    } catch (const Error& e) {
      orbit.termination = e.kind() == ErrorKind::LeftDomain ? Termination::LeftDomain : Termination::StepUnderflow;
      break;
    }
    ++iter;
    if (next == p) {
      orbit.termination = Termination::ConvergedToFixedPoint;
      break;
    }
    orbit.points.push_back(next);
    p = next;
    if (opt.stop && opt.stop(p)) {
      orbit.termination = Termination::ReachedBound;
      break;
    }
  }
  return orbit;
}

}  // namespace nilfrac

#include "nilfrac/classify.hpp"

namespace nilfrac {

const char* to_string(SingularityKind kind) {
  switch (kind) {
    case SingularityKind::Saddle: return "saddle";
    case SingularityKind::CenterOrFocus: return "center-or-focus";
    case SingularityKind::Cusp: return "cusp";
    case SingularityKind::SaddleNode: return "saddle-node";
    case SingularityKind::EllipticHyperbolic: return "elliptic-hyperbolic";
    case SingularityKind::Node: return "node";
  }
  return "unknown";
}

const char* to_string(NodeStability stability) {
  switch (stability) {
    case NodeStability::None: return "none";
    case NodeStability::Attracting: return "attracting";
    case NodeStability::Repelling: return "repelling";
  }
  return "unknown";
}

namespace {

// Lowest-order term of a univariate series stored as a polynomial in x.
std::optional<std::pair<int, Rational>> leading_term(const BiPoly<Rational>& s) {
  for (const auto& [mon, c] : s.terms())
    if (mon.j == 0) return std::make_pair(mon.i, c);
  return std::nullopt;
}

BiPoly<Rational> x_only(const BiPoly<Rational>& p, int order) {
  BiPoly<Rational> r(order);
  for (const auto& [mon, c] : p.terms())
    if (mon.j == 0 && mon.i <= order) r.add_term(mon.i, 0, c);
  return r;
}

}  // namespace

BiPoly<Rational> solve_implicit_f(const PlanarVectorField<Rational>& field, int order) {
  const auto& P = field.P;
  if (P.coeff(0, 1) != 1 || P.coeff(0, 0) != 0 || P.coeff(1, 0) != 0)
    throw Error(ErrorKind::InvalidInput, "x-component must read y + higher-order terms");
  const BiPoly<Rational> A = P - BiPoly<Rational>::y(P.trunc_degree());
  const BiPoly<Rational> X = BiPoly<Rational>::x(order);
  BiPoly<Rational> f(order);
  // Each pass fixes at least one more order because A starts at degree two.
  for (int k = 0; k <= order; ++k) {
    BiPoly<Rational> next = x_only(-substitute(A, X, f), order);
    if (next == f) break;
    f = next;
  }
  return f;
}

SingularityKind classify_table(int m, const Rational& a, std::optional<int> n, const std::optional<Rational>& b,
                               NodeStability* stability) {
  if (stability) *stability = NodeStability::None;
  if (a == 0 || m < 1) throw Error(ErrorKind::InvalidInput, "leading coefficient of F must be nonzero");
  const bool m_even = m % 2 == 0;
  if (!n || !b || *b == 0) {
    if (m_even) return SingularityKind::Cusp;
    return a > 0 ? SingularityKind::Saddle : SingularityKind::CenterOrFocus;
  }
  if (m < 2) throw Error(ErrorKind::InvalidInput, "m must be at least 2 when G is nonzero");
  const int threshold = 2 * *n + 1;
  if (m_even) return m < threshold ? SingularityKind::Cusp : SingularityKind::SaddleNode;
  if (a > 0) return SingularityKind::Saddle;
  const Rational disc = *b * *b + Rational(4) * a * Rational(*n + 1);
  if (m < threshold || (m == threshold && disc < 0)) return SingularityKind::CenterOrFocus;
  if (*n % 2 == 1) return SingularityKind::EllipticHyperbolic;
  if (stability) *stability = *b > 0 ? NodeStability::Repelling : NodeStability::Attracting;
  return SingularityKind::Node;
}

PlanarVectorField<Rational> to_jordan_form(const PlanarVectorField<Rational>& field) {
  const Eigen::Matrix<Rational, 2, 2> J = field.jacobian0();
  const Rational tr = J(0, 0) + J(1, 1);
  const Rational det = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
  const bool zero = J(0, 0) == 0 && J(0, 1) == 0 && J(1, 0) == 0 && J(1, 1) == 0;
  if (tr != 0 || det != 0 || zero) throw Error(ErrorKind::NotNilpotent, "linear part is not nilpotent and nonzero");
  if (J(0, 0) == 0 && J(0, 1) == 1 && J(1, 0) == 0 && J(1, 1) == 0) return field;
  Eigen::Matrix<Rational, 2, 1> e2;
  e2 << Rational(0), Rational(1);
  if (J(0, 1) == 0 && J(1, 1) == 0) e2 << Rational(1), Rational(0);
  const Eigen::Matrix<Rational, 2, 1> e1 = mul2(J, e2);
  Eigen::Matrix<Rational, 2, 2> T;
  T << e1(0), e2(0), e1(1), e2(1);
  const Rational dT = T(0, 0) * T(1, 1) - T(0, 1) * T(1, 0);
  Eigen::Matrix<Rational, 2, 2> Ti;
  Ti << T(1, 1) / dT, -T(0, 1) / dT, -T(1, 0) / dT, T(0, 0) / dT;
  const int tr_deg = field.trunc_degree();
  const auto X = BiPoly<Rational>::x(tr_deg);
  const auto Y = BiPoly<Rational>::y(tr_deg);
  const BiPoly<Rational> xs = T(0, 0) * X + T(0, 1) * Y;
  const BiPoly<Rational> ys = T(1, 0) * X + T(1, 1) * Y;
  const BiPoly<Rational> P = substitute(field.P, xs, ys);
  const BiPoly<Rational> Q = substitute(field.Q, xs, ys);
  return {Ti(0, 0) * P + Ti(0, 1) * Q, Ti(1, 0) * P + Ti(1, 1) * Q};
}

ClassificationReport classify_nilpotent(const PlanarVectorField<Rational>& input) {
  if (input.P.coeff(0, 0) != 0 || input.Q.coeff(0, 0) != 0)
    throw Error(ErrorKind::InvalidInput, "origin is not a singular point");
  const PlanarVectorField<Rational> field = to_jordan_form(input);
  const int order = field.trunc_degree();
  ClassificationReport r;
  r.f_series = solve_implicit_f(field, order);
  const auto X = BiPoly<Rational>::x(order);
  const BiPoly<Rational> A = field.P - BiPoly<Rational>::y(field.trunc_degree());
  r.F_series = x_only(substitute(field.Q, X, r.f_series), order);
  r.G_series = x_only(substitute(d_dx(A) + d_dy(field.Q), X, r.f_series), order);
  const auto F = leading_term(r.F_series);
  if (!F) throw Error(ErrorKind::Undecidable, "F vanishes to order " + std::to_string(order));
  r.m = F->first;
  r.a = F->second;
  if (const auto G = leading_term(r.G_series)) {
    r.n = G->first;
    r.b = G->second;
  }
  if (r.m < 2) throw Error(ErrorKind::Undecidable, "F has a linear term; the point is not nilpotent of this form");
  r.kind = classify_table(r.m, r.a, r.n, r.b, &r.stability);
  r.monodromic = r.kind == SingularityKind::CenterOrFocus;
  return r;
}

}  // namespace nilfrac

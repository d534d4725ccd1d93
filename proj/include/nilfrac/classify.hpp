#pragma once

// Topological type of a nilpotent singular point at the origin.

#include <optional>

#include "nilfrac/bipoly.hpp"

namespace nilfrac {

enum class SingularityKind { Saddle, CenterOrFocus, Cusp, SaddleNode, EllipticHyperbolic, Node };
enum class NodeStability { None, Attracting, Repelling };

const char* to_string(SingularityKind kind);
const char* to_string(NodeStability stability);

struct ClassificationReport {
  SingularityKind kind = SingularityKind::Cusp;
  NodeStability stability = NodeStability::None;
  int m = 0;
  Rational a;
  std::optional<int> n;
  std::optional<Rational> b;
  bool monodromic = false;
  /// Univariate series in x, stored as polynomials without y terms.
  BiPoly<Rational> f_series;
  BiPoly<Rational> F_series;
  BiPoly<Rational> G_series;
};

/// Series f with f + A(x, f) = O(x^(order+1)) where P = y + A.
BiPoly<Rational> solve_implicit_f(const PlanarVectorField<Rational>& field, int order);

/// Case table from the leading data of F = a x^m + ... and G = b x^n + ...
/// (n and b absent when G vanishes identically).
SingularityKind classify_table(int m, const Rational& a, std::optional<int> n, const std::optional<Rational>& b,
                               NodeStability* stability = nullptr);

/// Brings a field with nilpotent, nonzero linear part to the form
/// x' = y + ..., y' = 0*x + 0*y + ... by a rational linear change of coordinates.
PlanarVectorField<Rational> to_jordan_form(const PlanarVectorField<Rational>& field);

ClassificationReport classify_nilpotent(const PlanarVectorField<Rational>& field);

}  // namespace nilfrac

#pragma once

// Saddle normal form, its hyperbolic-coordinate form, dual box dimension and
// the orbit dimension at the singular point at infinity.

#include <vector>

#include "nilfrac/boxdim.hpp"
#include "nilfrac/unitmap.hpp"

namespace nilfrac {

/// x' = sum_i (x^2 - y^2)^i (a_i x + b_i y), y' = sum_i (x^2 - y^2)^i (b_i x + a_i y).
struct SaddleNormalForm {
  std::vector<Rational> a;
  std::vector<Rational> b;

  SaddleNormalForm(std::vector<Rational> a_, std::vector<Rational> b_);
  int order() const { return int(a.size()) - 1; }
  /// Index of the first nonzero a_i, or -1.
  int weak_order() const;
  PlanarVectorField<Rational> field() const;
};

/// a_k = b_0 = 1, everything else zero.
SaddleNormalForm saddle_normal_form(int k);

/// (r', phi') of the normal form at x = r cosh(phi), y = r sinh(phi).
Eigen::Vector2d hyperbolic_rates(const SaddleNormalForm& nf, double r, double phi);
/// (r (sum a_i r^(2i)), b_0): the weak-focus polar form with the same coefficients.
Eigen::Vector2d polar_rates(const SaddleNormalForm& nf, double r);

/// x' = y + (x^2 - y^2)^k, y' = x + (x^2 - y^2)^k.
PlanarVectorField<Rational> saddle_field(int k);

/// Chart U1 of saddle_field(k), translated from (1, 0) to the origin.
PlanarVectorField<Rational> saddle_infinity_chart(int k);

struct DualDimensionResult {
  int k = 1;
  Rational dual_dim;
  Rational infinity_dim;
};

DualDimensionResult dual_box_dimension(int k);

struct SaddleVerification {
  Rational predicted;
  DimensionEstimate boxcount;
  DimensionEstimate sausage;
  IncrementFit increment;
  std::vector<double> v_sequence;
};

struct SaddleConfig {
  double v0 = 0.5;
  double floor = 1e-9;
  long max_points = 100000;
  EstimatorConfig estimator;
  FlowOptions flow;
};

SaddleVerification verify_saddle_infinity(int k, const SaddleConfig& cfg = {});

/// Orbit on the stable manifold of the saddle at the origin, from radius
/// `outer` down to `floor`, built by inverse iteration from the inner end.
Orbit saddle_stable_orbit(int k, double outer = 0.5, double floor = 1e-60);

}  // namespace nilfrac

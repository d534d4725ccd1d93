#pragma once

// Poincare charts of planar polynomial fields and orbit dimensions at the
// singular points they reveal for the nilpotent model.

#include <optional>
#include <string>

#include "nilfrac/blowup.hpp"
#include "nilfrac/boxdim.hpp"

namespace nilfrac {

/// U1: x = 1/v, y = u/v. U2: x = u/v, y = 1/v.
enum class Chart { U1, U2 };
const char* to_string(Chart c);

struct ChartSystem {
  Chart chart = Chart::U1;
  PlanarVectorField<Rational> field;
  Monomial divisor;
  /// Degree d used for the v^d rescaling.
  int degree = 0;
};

/// Chart field rescaled by v^d and divided by the greatest common monomial.
ChartSystem chart_transform(const PlanarVectorField<Rational>& field, Chart chart);

ChartSystem compactify(const NilpotentModel& model, Chart chart);

/// Predicted orbit dimension at the chart singularity.
Rational predicted_dim_infinity(int m, int n, Chart chart);

/// Exponent law of the invariant curve used for the chart orbit: curve
/// through the chart origin, its independent axis, and increment exponent.
struct InfinityCurve {
  Rational gamma;
  Rational step;
  double c0 = 0;
  Axis axis = Axis::Y;
  int increment_exponent = 0;
  PuiseuxSeries<double> series;
};

InfinityCurve infinity_curve(const NilpotentModel& model, Chart chart, int terms = 8);

struct InfinityConfig {
  int terms = 8;
  CurveOrbitOptions orbit;
  EstimatorConfig estimator;
};

struct InfinityVerification {
  Rational predicted;
  DimensionEstimate boxcount;
  DimensionEstimate sausage;
  IncrementFit increment;
  std::size_t orbit_points = 0;
  std::string note;
};

InfinityVerification verify_dim_infinity(const NilpotentModel& model, Chart chart, const InfinityConfig& cfg = {});

}  // namespace nilfrac

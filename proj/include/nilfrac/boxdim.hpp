#pragma once

// Closed-form box dimensions of orbits near nilpotent points and numerical
// estimators (box counting, Minkowski sausage, increment regression).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nilfrac/scalar.hpp"

namespace nilfrac {

enum class DimMethod { FormulaLemma2, FormulaTheorem4, BoxCount, Sausage, IncrementRegression };
const char* to_string(DimMethod m);

struct FitDiagnostics {
  double eps_lo = 0;
  double eps_hi = 0;
  int n_scales = 0;
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double r_squared = 0;
  /// Abscissae and ordinates actually used by the fit.
  std::vector<double> xs;
  std::vector<double> ys;
  bool monte_carlo = false;
};

struct DimensionEstimate {
  double value = 0;
  DimMethod method = DimMethod::BoxCount;
  std::optional<FitDiagnostics> fit;
};

enum class BoxCase { C1i, C1ii, C2i, C2ii };
const char* to_string(BoxCase c);

struct TheoremBoxResult {
  Rational dim_orbit;
  Rational dim_x;
  Rational dim_y;
  BoxCase box_case = BoxCase::C1i;
};

/// 1 - 1/alpha for alpha > 1.
Rational dim_sequence_formula(const Rational& alpha);

/// Dimension of a planar orbit whose coordinates decrease with exponents alpha and beta.
Rational dim_orbit_2d_formula(const Rational& alpha, const Rational& beta);

/// Orbit and projection dimensions for the model with separatrix y ~ x^gamma.
TheoremBoxResult dim_theorem_box(int m, int n, const Rational& gamma);

/// ({4k/(2k+1)}, {2 - 1/(k+1)}) for k = 1..k_max.
std::pair<std::vector<Rational>, std::vector<Rational>> characteristic_sets(int k_max);

/// Least squares y = intercept + slope*x with standard error and R^2.
FitDiagnostics linear_fit(std::vector<double> xs, std::vector<double> ys);

struct IncrementOptions {
  /// Window in log x, as fractions of the log range measured from the small end.
  double window_lo = 0.1;
  double window_hi = 0.6;
  std::size_t min_length = 50;
};

struct IncrementFit {
  double alpha = 0;
  FitDiagnostics fit;
  /// Increments proportional to x_k: the sequence is geometric.
  bool hyperbolic = false;
};

/// alpha from log(x_k - x_{k+1}) against log x_k.
IncrementFit estimate_increment_exponent(const std::vector<double>& seq, const IncrementOptions& opt = {});

struct EstimatorConfig {
  std::optional<double> eps_min;
  std::optional<double> eps_max;
  int n_scales = 24;
  /// Fraction of scales dropped at each end before fitting.
  double trim = 0.1;
  double min_decades = 2.5;
  /// Raster work items allowed per scale before switching to Monte Carlo.
  std::size_t memory_bound = 40'000'000;
  std::size_t mc_samples = 10'000'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

DimensionEstimate estimate_dim_boxcount(const std::vector<Eigen::Vector2d>& points, const EstimatorConfig& cfg = {});
DimensionEstimate estimate_dim_boxcount(const std::vector<double>& seq, const EstimatorConfig& cfg = {});
DimensionEstimate estimate_dim_sausage(const std::vector<Eigen::Vector2d>& points, const EstimatorConfig& cfg = {});
DimensionEstimate estimate_dim_sausage(const std::vector<double>& seq, const EstimatorConfig& cfg = {});

/// DimensionEstimate wrapping an increment fit as 1 - 1/alpha.
DimensionEstimate increment_dimension(const std::vector<double>& seq, const IncrementOptions& opt = {});

/// Occupied grid boxes of side eps.
std::size_t box_count(const std::vector<Eigen::Vector2d>& points, double eps);
std::size_t box_count(const std::vector<double>& seq, double eps);

/// Area of the union of eps-disks by column rasterisation with cell eps/8.
double sausage_area(const std::vector<Eigen::Vector2d>& points, double eps);
/// Monte Carlo (Karp-Luby) estimate of the same area.
double sausage_area_mc(const std::vector<Eigen::Vector2d>& points, double eps, std::size_t samples,
                       std::uint64_t seed);
/// Exact length of the union of [x - eps, x + eps].
double sausage_length(const std::vector<double>& seq, double eps);

/// Coordinate projections of a planar point set.
std::vector<double> project(const std::vector<Eigen::Vector2d>& points, int coord);

}  // namespace nilfrac

#pragma once

// Preset library, cross-check driver, bifurcation sweep and plot emission
// behind the nilfrac command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nilfrac/blowup.hpp"
#include "nilfrac/boxdim.hpp"
#include "nilfrac/infinity.hpp"

namespace nilfrac {

enum class Comparison { Exact, Near, AtMost, Annotation };
enum class PresetKind { Nilpotent, Infinity, Dual, Hyperbolic, Sweep };
enum class Unfolding { BT, DegenerateBT };

const char* to_string(Unfolding u);

/// A quantity with a rational target or, when `value` is empty, a textual one.
struct ExpectedValue {
  std::string quantity;
  std::optional<Rational> value;
  std::string label;
  Comparison comparison = Comparison::Near;
  double tol = 0.05;
  std::string citation;
};

struct Preset {
  std::string name;
  PresetKind kind = PresetKind::Nilpotent;
  NilpotentModel model;
  /// Index into separatrix_leading(model).
  std::size_t branch = 0;
  Chart chart = Chart::U1;
  int k = 1;
  Unfolding unfolding = Unfolding::BT;
  std::vector<ExpectedValue> expected;
};

const std::vector<Preset>& presets();
/// Throws InvalidInput for an unknown name.
const Preset& find_preset(const std::string& name);

/// "u' = ...; v' = ..." in the given variable names.
std::string format_field(const PlanarVectorField<Rational>& field, const char* x = "u", const char* y = "v");

enum class RowStatus { Pass, Fail, Note };
const char* to_string(RowStatus s);

struct VerifyRow {
  std::string preset;
  std::string quantity;
  std::string expected;
  std::string estimated;
  Comparison comparison = Comparison::Near;
  double tol = 0;
  RowStatus status = RowStatus::Pass;
  std::string citation;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Replaces the tolerance of every Near row.
  std::optional<double> tol;
  unsigned threads = 0;
};

/// Empty filter runs every preset.
VerifyReport run_verify(const std::vector<std::string>& filter, const VerifyOptions& opt = {});

void write_report_text(std::ostream& os, const VerifyReport& report);
void write_report_csv(std::ostream& os, const VerifyReport& report);
std::string report_to_json(const VerifyReport& report);

struct SweepConfig {
  int grid = 41;
  Rational lo{-1};
  Rational hi{1};
  long orbit_points = 100000;
  /// Outer end of centre-manifold orbits relative to the transverse eigenvalue.
  double outer_scale = 0.25;
  bool estimate = true;
  /// Extra parameter points, e.g. off-grid points on the saddle-node curve.
  std::vector<std::pair<Rational, Rational>> samples;
  EstimatorConfig estimator;
  unsigned threads = 0;
};

struct SweepSingularity {
  double x = 0;
  double y = 0;
  std::string kind;
  double trace = 0;
  double det = 0;
  bool exact = false;
  std::optional<Rational> gamma;
  std::optional<Rational> predicted;
  std::optional<DimensionEstimate> estimate;
  std::string note;
};

struct SweepCell {
  Rational beta1;
  Rational beta2;
  std::vector<SweepSingularity> singularities;
  int diverged_seeds = 0;
  std::vector<std::string> tags;
  std::string error;
};

struct CurveTag {
  Rational beta1;
  Rational beta2;
  std::string label;
  std::optional<Rational> annotation;
};

struct SweepResult {
  Unfolding unfolding = Unfolding::BT;
  std::vector<SweepCell> grid;
  std::vector<SweepCell> samples;
  std::vector<CurveTag> curve_tags;
};

PlanarVectorField<Rational> unfolding_field(Unfolding u, const Rational& beta1, const Rational& beta2);

/// Points on both branches of the saddle-node curve, off the grid.
std::vector<std::pair<Rational, Rational>> default_curve_samples(Unfolding u);

/// Expected orbit dimension on the saddle-node curves and the Hopf annotation.
Rational saddle_node_curve_dimension(Unfolding u);
Rational hopf_annotation();

SweepCell analyse_cell(Unfolding u, const Rational& beta1, const Rational& beta2, const SweepConfig& cfg);
SweepResult run_sweep(Unfolding u, const SweepConfig& cfg = {});

std::string sweep_to_json(const SweepResult& result);
void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// Scatter of orbit points with an optional polyline overlay. Throws
/// InvalidInput on an empty orbit and Io on write failure.
void emit_plot_svg(std::ostream& os, const std::vector<Eigen::Vector2d>& points,
                   const std::vector<Eigen::Vector2d>& overlay = {});
void emit_plot_svg(const std::string& path, const std::vector<Eigen::Vector2d>& points,
                   const std::vector<Eigen::Vector2d>& overlay = {});

/// Samples y = s(x) (or x = s(y)) on (0, outer].
std::vector<Eigen::Vector2d> curve_polyline(const PuiseuxSeries<double>& s, double outer, Axis axis = Axis::Y,
                                            int samples = 200);

}  // namespace nilfrac

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include <json.hpp>

#include "nilfrac/cli.hpp"

using namespace nilfrac;

TEST_CASE("preset library") {
  std::set<std::string> names;
  for (const Preset& p : presets()) {
    CHECK(names.insert(p.name).second);
    CHECK(!p.expected.empty());
    std::set<std::string> quantities;
    for (const ExpectedValue& e : p.expected) {
      CAPTURE(p.name);
      CAPTURE(e.quantity);
      CHECK(!e.citation.empty());
      CHECK(quantities.insert(e.quantity).second);
      CHECK((e.value.has_value() || !e.label.empty()));
    }
  }
  for (const char* n : {"cusp-BT", "nilpotent-saddle", "saddle-node", "node", "elliptic-hyperbolic", "infinity-u1-22",
                        "infinity-u1-23", "infinity-u2-22", "infinity-u2-23", "dual-k1", "dual-k2", "bt-sweep",
                        "dbt-sweep"})
    CHECK(names.count(n) == 1);
  CHECK_THROWS_AS(find_preset("no-such-preset"), Error);

  auto value = [](const char* preset, const char* q) {
    for (const auto& e : find_preset(preset).expected)
      if (e.quantity == q) return *e.value;
    FAIL("missing quantity");
    return Rational(0);
  };
  CHECK(value("cusp-BT", "dim (box)") == Rational(1, 3));
  CHECK(value("nilpotent-saddle", "dim (box)") == Rational(1, 2));
  CHECK(value("dual-k2", "dim (box)") == Rational(3, 4));
}

TEST_CASE("format_field") {
  const PlanarVectorField<Rational> f(BiPoly<Rational>::y(), BiPoly<Rational>::monomial(2, 0, Rational(-3, 2)));
  CHECK(format_field(f, "x", "y") == "x' = y; y' = -3/2*x^2");
}

TEST_CASE("verify on cheap presets") {
  VerifyOptions opt;
  const VerifyReport a = run_verify({"hyperbolic-node", "dual-k1"}, opt);
  CHECK(!a.rows.empty());
  for (const auto& r : a.rows) {
    CHECK((r.preset == "hyperbolic-node" || r.preset == "dual-k1"));
    CHECK(!r.citation.empty());
  }
  const VerifyReport b = run_verify({"hyperbolic-node", "dual-k1"}, opt);
  CHECK(report_to_json(a) == report_to_json(b));

  std::ostringstream csv, text;
  write_report_csv(csv, a);
  write_report_text(text, a);
  CHECK(csv.str().rfind("preset,quantity,expected,estimated,status,citation", 0) == 0);
  CHECK(!text.str().empty());
  const auto j = nlohmann::json::parse(report_to_json(a));
  CHECK(j["rows"].size() == a.rows.size());
  CHECK_THROWS_AS(run_verify({"bogus"}, opt), Error);
}

TEST_CASE("small sweep") {
  SweepConfig cfg;
  cfg.grid = 5;
  cfg.estimate = false;
  cfg.samples = {};
  const SweepResult r = run_sweep(Unfolding::BT, cfg);
  REQUIRE(r.grid.size() == 25);
  for (const SweepCell& c : r.grid) {
    CHECK(c.beta1 >= -1);
    CHECK(c.beta1 <= 1);
    CHECK(c.beta2 >= -1);
    CHECK(c.beta2 <= 1);
    if (c.beta1 * 4 > c.beta2 * c.beta2) CHECK(c.singularities.empty());
    if (c.beta1 * 4 < c.beta2 * c.beta2) CHECK(c.singularities.size() == 2);
  }
  const SweepCell origin = analyse_cell(Unfolding::BT, Rational(0), Rational(0), cfg);
  REQUIRE(origin.singularities.size() == 1);
  CHECK(origin.singularities[0].kind == "cusp");

  const SweepCell dorigin = analyse_cell(Unfolding::DegenerateBT, Rational(0), Rational(0), cfg);
  REQUIRE(dorigin.singularities.size() == 1);
  CHECK(dorigin.singularities[0].kind == "saddle");

  const auto j = nlohmann::json::parse(sweep_to_json(r));
  CHECK(j["grid"].size() == 25);
  std::ostringstream csv;
  write_sweep_csv(csv, r);
  const std::string rows = csv.str();
  CHECK(std::count(rows.begin(), rows.end(), '\n') >= 26);

  SweepConfig bad = cfg;
  bad.hi = Rational(2);
  CHECK_THROWS_AS(run_sweep(Unfolding::BT, bad), Error);
}

TEST_CASE("saddle-node curve sample carries the centre-manifold estimate") {
  SweepConfig cfg;
  cfg.orbit_points = 30000;
  const SweepCell c = analyse_cell(Unfolding::BT, Rational(1, 4), Rational(-1), cfg);
  REQUIRE(c.singularities.size() == 1);
  const auto& s = c.singularities[0];
  CHECK(s.kind == "saddle-node");
  REQUIRE(s.predicted);
  CHECK(*s.predicted == Rational(1, 2));
  REQUIRE(s.estimate);
  CHECK(s.estimate->value == doctest::Approx(0.5).epsilon(0.14));
  CHECK(std::find(c.tags.begin(), c.tags.end(), "T-") != c.tags.end());
}

TEST_CASE("plot emission") {
  std::ostringstream os;
  CHECK_THROWS_AS(emit_plot_svg(os, {}), Error);
  const std::vector<Eigen::Vector2d> pts{{0.1, 0.2}, {0.05, 0.1}, {0.01, 0.02}};
  const auto s = PuiseuxSeries<double>(Rational(3, 2), Rational(1, 2), {0.8});
  const auto poly = curve_polyline(s, 0.1, Axis::Y, 50);
  CHECK(poly.size() == 50);
  emit_plot_svg(os, pts, poly);
  const std::string svg = os.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 3);
  CHECK_THROWS_AS(emit_plot_svg("/nonexistent-dir/x.svg", pts), Error);
}

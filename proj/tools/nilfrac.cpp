#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nilfrac/classify.hpp"
#include "nilfrac/cli.hpp"
#include "nilfrac/field_io.hpp"
#include "nilfrac/saddledual.hpp"

using namespace nilfrac;
using json = nlohmann::json;

namespace {

struct Globals {
  bool exact = false;
  bool as_float = false;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string out;
  std::string format;
};

Globals g;

class Output {
 public:
  Output() {
    if (!g.out.empty()) {
      file_.open(g.out);
      if (!file_) throw Error(ErrorKind::Io, "cannot open " + g.out);
    }
  }
  std::ostream& os() { return g.out.empty() ? std::cout : file_; }

 private:
  std::ofstream file_;
};

NilpotentModel parse_model(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 4) throw Error(ErrorKind::InvalidInput, "model must read a,m,b,n");
  return NilpotentModel(parse_rational(parts[0]), std::stoi(parts[1]), parse_rational(parts[2]), std::stoi(parts[3]));
}

json fit_json(const DimensionEstimate& e) {
  json j{{"value", e.value}, {"method", to_string(e.method)}};
  if (e.fit)
    j["fit"] = {{"eps_lo", e.fit->eps_lo},         {"eps_hi", e.fit->eps_hi},       {"n_scales", e.fit->n_scales},
                {"slope", e.fit->slope},           {"intercept", e.fit->intercept}, {"stderr", e.fit->slope_stderr},
                {"r_squared", e.fit->r_squared},   {"monte_carlo", e.fit->monte_carlo}};
  return j;
}

json increment_json(const IncrementFit& f) {
  return {{"alpha", f.alpha}, {"hyperbolic", f.hyperbolic}, {"stderr", f.fit.slope_stderr},
          {"r_squared", f.fit.r_squared}};
}

EstimatorConfig estimator() {
  EstimatorConfig c;
  c.seed = g.seed;
  return c;
}

template <class S>
json series_json(const PuiseuxSeries<S>& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs) {
    if constexpr (std::is_same_v<S, double>)
      coeffs.push_back(c);
    else
      coeffs.push_back(to_string(c));
  }
  return {{"gamma", to_string(s.gamma)}, {"step", to_string(s.step)}, {"coeffs", coeffs}};
}

Orbit model_orbit(const NilpotentModel& model, std::size_t branch, long points, double outer) {
  const auto lead = separatrix_leading(model);
  if (branch >= lead.size()) throw Error(ErrorKind::InvalidInput, "branch index out of range");
  CurveOrbitOptions o;
  o.max_points = points;
  o.outer = outer;
  return separatrix_orbit(model, separatrix_series(model, lead[branch], 8), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Box dimensions of unit-time orbits near nilpotent singularities"};
  app.require_subcommand(1);
  auto* mode = app.add_option_group("mode");
  mode->add_flag("--exact", g.exact, "Exact rational arithmetic where available");
  mode->add_flag("--float", g.as_float, "Floating-point arithmetic");
  mode->require_option(0, 1);
  app.add_option("--seed", g.seed, "Seed for Monte Carlo fallbacks");
  app.add_option("--tol", g.tol, "Tolerance for numeric checks");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "json|csv|svg|text");

  std::string model_text, field_path;
  int terms = 8;
  std::size_t branch = 0;
  long points = 100000;
  double outer = 0.5;

  auto* cls = app.add_subcommand("classify", "Topological type of a nilpotent singularity at the origin");
  cls->add_option("--model", model_text, "a,m,b,n for x'=y, y'=a x^m + b x^n y");
  cls->add_option("--field", field_path, "JSON field file");

  auto* sep = app.add_subcommand("separatrix", "Separatrix branches as Puiseux series");
  sep->add_option("--model", model_text)->required();
  sep->add_option("--terms", terms);

  auto* orb = app.add_subcommand("orbit", "Unit-time orbit on a separatrix branch (CSV)");
  orb->add_option("--model", model_text)->required();
  orb->add_option("--branch", branch);
  orb->add_option("--points", points);
  orb->add_option("--outer", outer);

  std::string input, method = "all";
  auto* dim = app.add_subcommand("dim", "Dimension estimates of an orbit CSV");
  dim->add_option("--input", input)->required();
  dim->add_option("--method", method)->check(CLI::IsMember({"box", "sausage", "increment", "all"}));

  std::vector<std::string> preset_names;
  bool all = false;
  auto* ver = app.add_subcommand("verify", "Cross-check presets against their expected values");
  ver->add_flag("--all", all);
  ver->add_option("--preset", preset_names);

  std::string unfolding = "bt";
  int grid = 41;
  bool no_estimate = false;
  auto* swp = app.add_subcommand("sweep", "Singularities and dimensions over a parameter grid");
  swp->add_option("--unfolding", unfolding)->check(CLI::IsMember({"bt", "dbt"}));
  swp->add_option("--grid", grid);
  swp->add_flag("--no-estimate", no_estimate);

  int m = 2, n = 2, k = 1;
  std::string a_text = "1", b_text = "1", chart_text = "u1";
  bool do_verify = false;
  auto* inf = app.add_subcommand("infinity", "Chart system and dimension at infinity");
  inf->add_option("--m", m);
  inf->add_option("--n", n);
  inf->add_option("--a", a_text);
  inf->add_option("--b", b_text);
  inf->add_option("--chart", chart_text)->check(CLI::IsMember({"u1", "u2"}));
  inf->add_flag("--verify", do_verify);

  auto* dual = app.add_subcommand("dual", "Dual box dimension of a weak saddle");
  dual->add_option("--k", k);
  dual->add_flag("--verify", do_verify);

  auto* plot = app.add_subcommand("plot", "SVG of an orbit CSV or a separatrix orbit");
  plot->add_option("--input", input);
  plot->add_option("--model", model_text);
  plot->add_option("--branch", branch);
  plot->add_option("--points", points);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cls) {
      PlanarVectorField<Rational> field;
      if (!field_path.empty())
        field = read_field_json(field_path);
      else if (!model_text.empty())
        field = parse_model(model_text).field();
      else
        throw Error(ErrorKind::InvalidInput, "classify needs --model or --field");
      const ClassificationReport r = classify_nilpotent(field);
      json j{{"kind", to_string(r.kind)}, {"stability", to_string(r.stability)}, {"monodromic", r.monodromic},
             {"m", r.m},                  {"a", to_string(r.a)}};
      if (r.n) j["n"] = *r.n;
      if (r.b) j["b"] = to_string(*r.b);
      j["F"] = poly_to_string(r.F_series);
      j["G"] = poly_to_string(r.G_series);
      Output o;
      o.os() << j.dump(2) << "\n";
      return 0;
    }
    if (*sep) {
      const NilpotentModel model = parse_model(model_text);
      json out = json::array();
      for (const LeadingTerm& L : separatrix_leading(model)) {
        json j{{"case", to_string(L.tag)}, {"stability", to_string(L.stability)}, {"c0", to_string(L.c0)}};
        if (g.as_float) {
          const auto [p, q] = branch_weights(L.gamma);
          j["series"] = series_json(invariant_curve(model.field().cast<double>(), L.gamma, Rational(1, p),
                                                    to_double(L.c0), terms));
        } else {
          const SeparatrixBranch<QuadSurd> br = separatrix_series(model, L, terms);
          j["series"] = series_json(br.series);
          j["weights"] = {br.weights.first, br.weights.second};
        }
        out.push_back(j);
      }
      Output o;
      o.os() << out.dump(2) << "\n";
      return 0;
    }
    if (*orb) {
      const Orbit orbit = model_orbit(parse_model(model_text), branch, points, outer);
      Output o;
      write_orbit_csv(o.os(), orbit.points);
      return 0;
    }
    if (*dim) {
      const std::vector<Eigen::Vector2d> pts = read_orbit_csv(input);
      const EstimatorConfig ec = estimator();
      json j;
      if (method == "box" || method == "all") j["boxcount"] = fit_json(estimate_dim_boxcount(pts, ec));
      if (method == "sausage" || method == "all") j["sausage"] = fit_json(estimate_dim_sausage(pts, ec));
      if (method == "increment" || method == "all") {
        std::vector<double> xs = project(pts, 0);
        for (double& x : xs) x = std::abs(x);
        j["increment"] = increment_json(estimate_increment_exponent(xs));
      }
      Output o;
      o.os() << j.dump(2) << "\n";
      return 0;
    }
    if (*ver) {
      if (!all && preset_names.empty()) throw Error(ErrorKind::InvalidInput, "verify needs --all or --preset");
      VerifyOptions opt;
      opt.seed = g.seed;
      opt.tol = g.tol;
      const VerifyReport rep = run_verify(all ? std::vector<std::string>{} : preset_names, opt);
      Output o;
      if (g.format == "json")
        o.os() << report_to_json(rep) << "\n";
      else if (g.format == "csv")
        write_report_csv(o.os(), rep);
      else
        write_report_text(o.os(), rep);
      return rep.passed() ? 0 : 1;
    }
    if (*swp) {
      SweepConfig cfg;
      cfg.grid = grid;
      cfg.estimate = !no_estimate;
      cfg.estimator = estimator();
      const Unfolding u = unfolding == "bt" ? Unfolding::BT : Unfolding::DegenerateBT;
      cfg.samples = default_curve_samples(u);
      const SweepResult r = run_sweep(u, cfg);
      Output o;
      if (g.format == "csv")
        write_sweep_csv(o.os(), r);
      else
        o.os() << sweep_to_json(r) << "\n";
      return 0;
    }
    if (*inf) {
      const NilpotentModel model(parse_rational(a_text), m, parse_rational(b_text), n);
      const Chart chart = chart_text == "u1" ? Chart::U1 : Chart::U2;
      const ChartSystem sys = compactify(model, chart);
      json j{{"chart", to_string(chart)}, {"system", format_field(sys.field)},
             {"predicted", to_string(predicted_dim_infinity(m, n, chart))}};
      bool ok = true;
      if (do_verify) {
        InfinityConfig cfg;
        cfg.estimator = estimator();
        const InfinityVerification v = verify_dim_infinity(model, chart, cfg);
        j["estimated"] = fit_json(v.boxcount);
        j["sausage"] = fit_json(v.sausage);
        j["increment"] = increment_json(v.increment);
        j["orbit_points"] = v.orbit_points;
        if (!v.note.empty()) j["note"] = v.note;
        const double tol = g.tol.value_or(0.05);
        ok = std::abs(v.boxcount.value - to_double(v.predicted)) <= tol;
        j["pass"] = ok;
      }
      Output o;
      o.os() << j.dump(2) << "\n";
      return ok ? 0 : 1;
    }
    if (*dual) {
      const DualDimensionResult d = dual_box_dimension(k);
      json j{{"k", d.k},
             {"dual_dim", to_string(d.dual_dim)},
             {"infinity_dim", to_string(d.infinity_dim)},
             {"chart_system", format_field(saddle_infinity_chart(k))}};
      bool ok = true;
      if (do_verify) {
        SaddleConfig cfg;
        cfg.estimator = estimator();
        const SaddleVerification v = verify_saddle_infinity(k, cfg);
        j["estimated"] = fit_json(v.boxcount);
        j["sausage"] = fit_json(v.sausage);
        j["increment"] = increment_json(v.increment);
        const double tol = g.tol.value_or(0.05);
        ok = std::abs(v.boxcount.value - to_double(v.predicted)) <= tol;
        j["pass"] = ok;
      }
      Output o;
      o.os() << j.dump(2) << "\n";
      return ok ? 0 : 1;
    }
    if (*plot) {
      std::vector<Eigen::Vector2d> pts, overlay;
      if (!input.empty()) {
        pts = read_orbit_csv(input);
      } else if (!model_text.empty()) {
        const NilpotentModel model = parse_model(model_text);
        const auto lead = separatrix_leading(model);
        if (branch >= lead.size()) throw Error(ErrorKind::InvalidInput, "branch index out of range");
        const SeparatrixBranch<QuadSurd> br = separatrix_series(model, lead[branch], 8);
        CurveOrbitOptions co;
        co.max_points = points;
        pts = separatrix_orbit(model, br, co).points;
        overlay = curve_polyline(br.series.cast<double>(), co.outer);
      } else {
        throw Error(ErrorKind::InvalidInput, "plot needs --input or --model");
      }
      Output o;
      emit_plot_svg(o.os(), pts, overlay);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

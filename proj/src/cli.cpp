#include "nilfrac/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <Eigen/LU>
#include <json.hpp>

#include "nilfrac/classify.hpp"
#include "nilfrac/field_io.hpp"
#include "nilfrac/saddledual.hpp"

namespace nilfrac {

const char* to_string(Unfolding u) { return u == Unfolding::BT ? "bt" : "dbt"; }

const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Pass: return "PASS";
    case RowStatus::Fail: return "FAIL";
    case RowStatus::Note: return "NOTE";
  }
  return "?";
}

bool VerifyReport::passed() const {
  return std::none_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.status == RowStatus::Fail; });
}

std::string format_field(const PlanarVectorField<Rational>& field, const char* x, const char* y) {
  return std::string(x) + "' = " + poly_to_string(field.P, x, y) + "; " + y + "' = " + poly_to_string(field.Q, x, y);
}

namespace {

using Term = std::tuple<int, int, Rational>;

PlanarVectorField<Rational> make_field(const std::vector<Term>& p, const std::vector<Term>& q) {
  BiPoly<Rational> P, Q;
  for (const auto& [i, j, c] : p) P.add_term(i, j, c);
  for (const auto& [i, j, c] : q) Q.add_term(i, j, c);
  return {P, Q};
}

ExpectedValue near(std::string q, Rational v, double tol, std::string cite) {
  return {std::move(q), std::move(v), "", Comparison::Near, tol, std::move(cite)};
}
ExpectedValue exact(std::string q, Rational v, std::string cite) {
  return {std::move(q), std::move(v), "", Comparison::Exact, 0, std::move(cite)};
}
ExpectedValue label(std::string q, std::string text, std::string cite) {
  return {std::move(q), std::nullopt, std::move(text), Comparison::Exact, 0, std::move(cite)};
}
ExpectedValue at_most(std::string q, Rational v, double tol, std::string cite) {
  return {std::move(q), std::move(v), "", Comparison::AtMost, tol, std::move(cite)};
}
ExpectedValue annotation(std::string q, Rational v, std::string cite) {
  return {std::move(q), std::move(v), "", Comparison::Annotation, 0, std::move(cite)};
}

Preset nilpotent_preset(std::string name, NilpotentModel model, std::size_t branch, std::string type,
                        Rational gamma, Rational dim, Rational dim_y, const std::string& where) {
  Preset p;
  p.name = std::move(name);
  p.kind = PresetKind::Nilpotent;
  p.model = std::move(model);
  p.branch = branch;
  p.expected = {
      label("type", std::move(type), where + ": topological type"),
      exact("gamma", gamma, where + ": separatrix exponent"),
      near("alpha", gamma, 0.02, where + ": increment exponent of the x-sequence"),
      near("dim (box)", dim, 0.05, where + ": orbit dimension"),
      near("dim (sausage)", dim, 0.05, where + ": orbit dimension"),
      near("dim_x", dim, 0.05, where + ": dimension of the x-projection"),
      near("dim_y", dim_y, 0.05, where + ": dimension of the y-projection"),
      at_most("sausage-box gap", Rational(0), 0.05, "estimator agreement"),
  };
  return p;
}

Preset infinity_preset(std::string name, int m, int n, Chart chart, Rational dim, int exponent,
                       PlanarVectorField<Rational> printed, const std::string& where) {
  Preset p;
  p.name = std::move(name);
  p.kind = PresetKind::Infinity;
  p.model = NilpotentModel(Rational(1), m, Rational(1), n);
  p.chart = chart;
  p.expected = {
      label("chart field", format_field(printed), where + ": chart system as printed"),
      near("dim (box)", dim, 0.05, where + ": orbit dimension at the chart singularity"),
      near("dim (sausage)", dim, 0.05, where + ": orbit dimension at the chart singularity"),
      near("increment exponent", Rational(exponent), 0.05, "leading balance on the invariant curve"),
  };
  return p;
}

Preset dual_preset(int k, PlanarVectorField<Rational> printed) {
  const DualDimensionResult d = dual_box_dimension(k);
  Preset p;
  p.name = "dual-k" + std::to_string(k);
  p.kind = PresetKind::Dual;
  p.k = k;
  const std::string where = "weak saddle of order " + std::to_string(k);
  p.expected = {
      label("chart field", format_field(printed), where + ": translated chart system as printed"),
      near("dim (box)", d.infinity_dim, 0.05, where + ": v-axis orbit dimension at infinity"),
      near("dim (sausage)", d.infinity_dim, 0.05, where + ": v-axis orbit dimension at infinity"),
      near("increment exponent", Rational(2 * k), 0.05, "unit-time map comparable to v - v^(2k)"),
      exact("dual dim", Rational(4 * k, 2 * k + 1), where + ": dual box dimension"),
      exact("infinity dim", d.infinity_dim, where + ": dimension formula at infinity"),
  };
  return p;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  out.push_back(nilpotent_preset("cusp-BT", NilpotentModel(Rational(1), 2, Rational(-1), 1), 1, "cusp",
                                 Rational(3, 2), Rational(1, 3), Rational(1, 4),
                                 "Bogdanov-Takens point of x'=y, y'=x^2-xy"));
  out.push_back(nilpotent_preset("nilpotent-saddle", NilpotentModel(Rational(1), 3, Rational(-1), 2), 1, "saddle",
                                 Rational(2), Rational(1, 2), Rational(1, 3),
                                 "degenerate Bogdanov-Takens point of x'=y, y'=x^3-x^2y"));
  out.push_back(nilpotent_preset("saddle-node", NilpotentModel(Rational(1), 4, Rational(1), 1), 0, "saddle-node",
                                 Rational(5, 2), Rational(3, 5), Rational(3, 8), "x'=y, y'=x^4+xy"));
  out.push_back(nilpotent_preset("node", NilpotentModel(Rational(-1), 5, Rational(-4), 2), 1, "node", Rational(3),
                                 Rational(2, 3), Rational(2, 5), "x'=y, y'=-x^5-4x^2y"));
  out.push_back(nilpotent_preset("elliptic-hyperbolic", NilpotentModel(Rational(-1), 3, Rational(3), 1), 0,
                                 "elliptic-hyperbolic", Rational(2), Rational(1, 2), Rational(1, 3),
                                 "x'=y, y'=-x^3+3xy"));

  // u' = b u + a v^(n+1-m) - u^2 v^n, v' = -u v^(n+1)
  auto u1 = [](int m, int n) {
    return make_field({{1, 0, 1}, {0, n + 1 - m, 1}, {2, n, -1}}, {{1, n + 1, -1}});
  };
  // u' = v^n - a u^(m+1) v^(n+1-m) + b u^(n+1), v' = -a u^m v^(n-m+2) + b u^n v
  auto u2 = [](int m, int n) {
    return make_field({{0, n, 1}, {m + 1, n + 1 - m, -1}, {n + 1, 0, 1}}, {{m, n - m + 2, -1}, {n, 1, 1}});
  };
  out.push_back(infinity_preset("infinity-u1-22", 2, 2, Chart::U1, Rational(3, 4), 4, u1(2, 2),
                                "m=n=2, first chart"));
  out.push_back(infinity_preset("infinity-u1-23", 2, 3, Chart::U1, Rational(5, 6), 6, u1(2, 3),
                                "m=2, n=3, first chart"));
  out.push_back(infinity_preset("infinity-u2-22", 2, 2, Chart::U2, Rational(2, 3), 3, u2(2, 2),
                                "m=n=2, second chart"));
  out.push_back(infinity_preset("infinity-u2-23", 2, 3, Chart::U2, Rational(3, 4), 4, u2(2, 3),
                                "m=2, n=3, second chart"));

  out.push_back(dual_preset(1, make_field({{1, 1, -2}, {2, 1, 1}}, {{0, 2, -1}, {1, 2, -1}, {1, 0, 2}, {2, 0, 1}})));
  out.push_back(dual_preset(
      2, make_field({{1, 3, -2}, {2, 3, 1}}, {{0, 4, -1}, {1, 4, -1}, {2, 0, -4}, {3, 0, -4}, {4, 0, -1}})));

  Preset hs;
  hs.name = "hyperbolic-saddle";
  hs.kind = PresetKind::Hyperbolic;
  hs.k = 1;
  hs.expected = {at_most("dim (box)", Rational(0), 0.1, "stable manifold of a hyperbolic saddle")};
  out.push_back(hs);
  Preset hn = hs;
  hn.name = "hyperbolic-node";
  hn.expected = {at_most("dim (box)", Rational(0), 0.1, "orbit into a hyperbolic node")};
  out.push_back(hn);

  for (Unfolding u : {Unfolding::BT, Unfolding::DegenerateBT}) {
    Preset s;
    s.kind = PresetKind::Sweep;
    s.unfolding = u;
    const Rational d = saddle_node_curve_dimension(u);
    if (u == Unfolding::BT) {
      s.name = "bt-sweep";
      s.expected = {
          label("region 1 singularities", "0", "no singularities above the saddle-node curve"),
          label("regions 2-4 singularities", "2", "saddle and node or focus below the saddle-node curve"),
          label("origin type", "cusp", "unfolding at zero parameters"),
      };
    } else {
      s.name = "dbt-sweep";
      s.expected = {
          label("beta1 > 0 singularities", "1", "hyperbolic saddle only"),
          label("beta1 < 0 singularities", "3", "two saddles and a node or focus"),
          label("origin type", "saddle", "unfolding at zero parameters"),
      };
    }
    const std::string fam = u == Unfolding::BT ? "Bogdanov-Takens" : "degenerate Bogdanov-Takens";
    s.expected.push_back(near("T- dim", d, 0.07, fam + " unfolding, centre manifold on T-"));
    s.expected.push_back(near("T+ dim", d, 0.07, fam + " unfolding, centre manifold on T+"));
    s.expected.push_back(annotation("H dim", hopf_annotation(), fam + " unfolding, spiral on the Hopf curve"));
    out.push_back(s);
  }
  return out;
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

struct Measured {
  std::optional<double> num;
  std::optional<Rational> exact;
  std::string text;
};

using Measurements = std::map<std::string, Measured>;

Measured num(double v) { return {v, std::nullopt, ""}; }

void measure_nilpotent(const Preset& p, const EstimatorConfig& ec, Measurements& out) {
  const ClassificationReport rep = classify_nilpotent(p.model.field());
  out["type"].text = to_string(rep.kind);
  const std::vector<LeadingTerm> lead = separatrix_leading(p.model);
  const LeadingTerm& L = lead.at(p.branch);
  out["gamma"].exact = L.gamma;
  const SeparatrixBranch<QuadSurd> br = separatrix_series(p.model, L, 8);
  const Orbit orbit = separatrix_orbit(p.model, br);
  const std::vector<double> xs = project(orbit.points, 0);
  std::vector<double> ys = project(orbit.points, 1);
  for (double& y : ys) y = std::abs(y);
  out["alpha"] = num(estimate_increment_exponent(xs).alpha);
  const double box = estimate_dim_boxcount(orbit.points, ec).value;
  const double saus = estimate_dim_sausage(orbit.points, ec).value;
  out["dim (box)"] = num(box);
  out["dim (sausage)"] = num(saus);
  out["dim_x"] = num(estimate_dim_boxcount(xs, ec).value);
  out["dim_y"] = num(estimate_dim_boxcount(ys, ec).value);
  out["sausage-box gap"] = num(std::abs(saus - box));
}

void measure_infinity(const Preset& p, const EstimatorConfig& ec, Measurements& out) {
  out["chart field"].text = format_field(compactify(p.model, p.chart).field);
  InfinityConfig cfg;
  cfg.estimator = ec;
  const InfinityVerification v = verify_dim_infinity(p.model, p.chart, cfg);
  out["dim (box)"] = num(v.boxcount.value);
  out["dim (sausage)"] = num(v.sausage.value);
  out["increment exponent"] = num(v.increment.alpha);
}

void measure_dual(const Preset& p, const EstimatorConfig& ec, Measurements& out) {
  out["chart field"].text = format_field(saddle_infinity_chart(p.k));
  SaddleConfig cfg;
  cfg.estimator = ec;
  const SaddleVerification v = verify_saddle_infinity(p.k, cfg);
  out["dim (box)"] = num(v.boxcount.value);
  out["dim (sausage)"] = num(v.sausage.value);
  out["increment exponent"] = num(v.increment.alpha);
  const DualDimensionResult d = dual_box_dimension(p.k);
  out["dual dim"].exact = d.dual_dim;
  out["infinity dim"].exact = d.infinity_dim;
}

void measure_hyperbolic(const Preset& p, const EstimatorConfig& ec, Measurements& out) {
  Orbit orbit;
  if (p.name == "hyperbolic-saddle") {
    orbit = saddle_stable_orbit(p.k);
  } else {
    const PlanarVectorField<Rational> node = make_field({{1, 0, -1}}, {{0, 1, -2}});
    OrbitOptions oo;
    oo.floor = 1e-60;
    orbit = iterate_orbit(node, Eigen::Vector2d(0.5, 0.5), oo);
  }
  out["dim (box)"] = num(estimate_dim_boxcount(orbit.points, ec).value);
}

void measure_sweep(const Preset& p, const EstimatorConfig& ec, unsigned threads, Measurements& out) {
  SweepConfig cfg;
  cfg.estimator = ec;
  cfg.threads = threads;
  cfg.samples = default_curve_samples(p.unfolding);
  const SweepResult r = run_sweep(p.unfolding, cfg);

  auto region_check = [&](const std::string& key, const std::function<bool(const SweepCell&)>& in_region,
                          std::size_t expected) {
    std::size_t cells = 0, bad = 0;
    for (const SweepCell& c : r.grid) {
      if (!in_region(c)) continue;
      ++cells;
      if (c.singularities.size() != expected) ++bad;
    }
    out[key].text = bad == 0 ? std::to_string(expected) : std::to_string(bad) + " of " + std::to_string(cells) +
                                                              " cells differ";
  };
  if (p.unfolding == Unfolding::BT) {
    region_check("region 1 singularities",
                 [](const SweepCell& c) { return c.beta1 > c.beta2 * c.beta2 / 4; }, 0);
    region_check("regions 2-4 singularities",
                 [](const SweepCell& c) { return c.beta1 < c.beta2 * c.beta2 / 4; }, 2);
  } else {
    region_check("beta1 > 0 singularities", [](const SweepCell& c) { return c.beta1 > 0; }, 1);
    region_check("beta1 < 0 singularities", [](const SweepCell& c) { return c.beta1 < 0; }, 3);
  }
  for (const SweepCell& c : r.grid) {
    if (c.beta1 != 0 || c.beta2 != 0) continue;
    out["origin type"].text = c.singularities.size() == 1 ? c.singularities.front().kind
                                                          : std::to_string(c.singularities.size()) + " singularities";
  }

  const double target = to_double(saddle_node_curve_dimension(p.unfolding));
  for (const char* tag : {"T-", "T+"}) {
    std::vector<double> vals;
    for (const SweepCell& c : r.samples) {
      if (std::find(c.tags.begin(), c.tags.end(), tag) == c.tags.end()) continue;
      for (const SweepSingularity& s : c.singularities)
        if (s.estimate) vals.push_back(s.estimate->value);
    }
    Measured m;
    if (!vals.empty()) {
      double worst = vals.front(), sum = 0;
      for (double v : vals) {
        sum += v;
        if (std::abs(v - target) > std::abs(worst - target)) worst = v;
      }
      m.num = worst;
      m.text = "worst " + fmt(worst) + ", mean " + fmt(sum / double(vals.size())) + " over " +
               std::to_string(vals.size()) + " points";
    } else {
      m.text = "no estimates";
    }
    out[std::string(tag) + " dim"] = m;
  }
}

VerifyRow compare(const Preset& p, const ExpectedValue& e, const Measurements& ms, const VerifyOptions& opt,
                  const std::string& failure) {
  VerifyRow row;
  row.preset = p.name;
  row.quantity = e.quantity;
  row.comparison = e.comparison;
  row.citation = e.citation;
  row.tol = e.comparison == Comparison::Near && opt.tol ? *opt.tol : e.tol;
  row.expected = e.value ? to_string(*e.value) : e.label;
  if (e.comparison == Comparison::Near) row.expected += " +- " + fmt(row.tol, 2);
  if (e.comparison == Comparison::AtMost) row.expected = "<= " + fmt(to_double(*e.value) + row.tol, 2);
  if (e.comparison == Comparison::Annotation) {
    row.estimated = "not estimated";
    row.status = RowStatus::Note;
    return row;
  }
  const auto it = ms.find(e.quantity);
  if (it == ms.end()) {
    row.estimated = failure.empty() ? "missing" : "error: " + failure;
    row.status = RowStatus::Fail;
    return row;
  }
  const Measured& m = it->second;
  bool ok = false;
  if (m.exact) {
    row.estimated = to_string(*m.exact);
    ok = e.value && *m.exact == *e.value;
  } else if (m.num) {
    row.estimated = m.text.empty() ? fmt(*m.num) : m.text;
    const double target = to_double(*e.value);
    ok = e.comparison == Comparison::AtMost ? *m.num <= target + row.tol : std::abs(*m.num - target) <= row.tol;
  } else {
    row.estimated = m.text;
    ok = !e.value && m.text == e.label;
  }
  row.status = ok ? RowStatus::Pass : RowStatus::Fail;
  return row;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return p;
  throw Error(ErrorKind::InvalidInput, "unknown preset '" + name + "'");
}

VerifyReport run_verify(const std::vector<std::string>& filter, const VerifyOptions& opt) {
  std::vector<const Preset*> chosen;
  if (filter.empty()) {
    for (const Preset& p : presets()) chosen.push_back(&p);
  } else {
    for (const std::string& name : filter) chosen.push_back(&find_preset(name));
  }
  EstimatorConfig ec;
  ec.seed = opt.seed;
  ec.threads = opt.threads;
  VerifyReport report;
  for (const Preset* p : chosen) {
    Measurements ms;
    std::string failure;
    try {
      switch (p->kind) {
        case PresetKind::Nilpotent: measure_nilpotent(*p, ec, ms); break;
        case PresetKind::Infinity: measure_infinity(*p, ec, ms); break;
        case PresetKind::Dual: measure_dual(*p, ec, ms); break;
        case PresetKind::Hyperbolic: measure_hyperbolic(*p, ec, ms); break;
        case PresetKind::Sweep: measure_sweep(*p, ec, opt.threads, ms); break;
      }
    } catch (const Error& e) {
      failure = e.what();
    }
    for (const ExpectedValue& e : p->expected) report.rows.push_back(compare(*p, e, ms, opt, failure));
  }
  return report;
}

void write_report_text(std::ostream& os, const VerifyReport& report) {
  for (const VerifyRow& r : report.rows)
    os << std::left << std::setw(5) << to_string(r.status) << " " << std::setw(20) << r.preset << " "
       << std::setw(26) << r.quantity << " expected " << r.expected << " | estimated " << r.estimated << "\n";
  os << (report.passed() ? "all checks passed" : "some checks failed") << "\n";
}

void write_report_csv(std::ostream& os, const VerifyReport& report) {
  auto q = [](const std::string& s) {
    std::string r = "\"";
    for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
    return r + "\"";
  };
  os << "preset,quantity,expected,estimated,status,citation\n";
  for (const VerifyRow& r : report.rows)
    os << q(r.preset) << "," << q(r.quantity) << "," << q(r.expected) << "," << q(r.estimated) << ","
       << to_string(r.status) << "," << q(r.citation) << "\n";
}

std::string report_to_json(const VerifyReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const VerifyRow& r : report.rows)
    rows.push_back({{"preset", r.preset},
                    {"quantity", r.quantity},
                    {"expected", r.expected},
                    {"estimated", r.estimated},
                    {"status", to_string(r.status)},
                    {"citation", r.citation}});
  return nlohmann::json{{"passed", report.passed()}, {"rows", rows}}.dump(2);
}

// ---------------------------------------------------------------- sweep

PlanarVectorField<Rational> unfolding_field(Unfolding u, const Rational& beta1, const Rational& beta2) {
  if (u == Unfolding::BT)
    return make_field({{0, 1, 1}}, {{0, 0, beta1}, {1, 0, beta2}, {2, 0, 1}, {1, 1, -1}});
  return make_field({{0, 1, 1}}, {{1, 0, beta1}, {0, 1, beta2}, {3, 0, 1}, {2, 1, -1}});
}

std::vector<std::pair<Rational, Rational>> default_curve_samples(Unfolding u) {
  std::vector<std::pair<Rational, Rational>> out;
  for (const Rational& b2 : {Rational(-1), Rational(-3, 4), Rational(-1, 2), Rational(-3, 10), Rational(3, 10),
                             Rational(1, 2), Rational(3, 4), Rational(1)})
    out.emplace_back(u == Unfolding::BT ? b2 * b2 / 4 : Rational(0), b2);
  return out;
}

Rational saddle_node_curve_dimension(Unfolding u) { return u == Unfolding::BT ? Rational(1, 2) : Rational(2, 3); }
Rational hopf_annotation() { return Rational(4, 3); }

namespace {

struct Root {
  Eigen::Vector2d p;
  double residual;
};

std::vector<Rational> convergents(double v, long max_den) {
  std::vector<Rational> out;
  BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = v;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(r);
    const BigInt ai = BigInt(static_cast<long long>(a));
    const BigInt h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    out.emplace_back(h2, k2);
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (r - a < 1e-14) break;
    r = 1 / (r - a);
  }
  return out;
}

std::optional<std::pair<Rational, Rational>> snap(const PlanarVectorField<Rational>& F, const Eigen::Vector2d& p) {
  const auto cx = convergents(p.x(), 1000000);
  const auto cy = convergents(p.y(), 1000000);
  for (const Rational& x : cx) {
    if (std::abs(to_double(x) - p.x()) > 1e-6) continue;
    for (const Rational& y : cy)
      if (std::abs(to_double(y) - p.y()) <= 1e-6 && F.P(x, y) == 0 && F.Q(x, y) == 0) return std::make_pair(x, y);
  }
  return std::nullopt;
}

std::vector<Root> newton_roots(const PlanarVectorField<Rational>& F, int& diverged) {
  const PlanarVectorField<double> f = F.cast<double>();
  const BiPoly<double> Px = d_dx(f.P), Py = d_dy(f.P), Qx = d_dx(f.Q), Qy = d_dy(f.Q);
  auto eval = [&](const Eigen::Vector2d& p) { return Eigen::Vector2d(f.P(p.x(), p.y()), f.Q(p.x(), p.y())); };
  std::vector<Root> roots;
  diverged = 0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      Eigen::Vector2d p(-2 + 0.5 * i, -2 + 0.5 * j);
      Eigen::Vector2d r = eval(p);
      bool ok = false;
      for (int it = 0; it < 200; ++it) {
        if (r.norm() < 1e-12) {
          ok = true;
          break;
        }
        Eigen::Matrix2d J;
        J << Px(p.x(), p.y()), Py(p.x(), p.y()), Qx(p.x(), p.y()), Qy(p.x(), p.y());
        if (std::abs(J.determinant()) < 1e-300) break;
        const Eigen::Vector2d step = J.partialPivLu().solve(r);
        double lambda = 1;
        Eigen::Vector2d q = p - step, rq = eval(q);
        for (int h = 0; h < 30 && rq.norm() >= r.norm(); ++h) {
          lambda /= 2;
          q = p - lambda * step;
          rq = eval(q);
        }
        if (rq.norm() >= r.norm()) break;
        p = q;
        r = rq;
        if (p.norm() > 10) break;
      }
      if (!ok) {
        ++diverged;
        continue;
      }
      auto near_root = std::find_if(roots.begin(), roots.end(), [&](const Root& x) { return (x.p - p).norm() < 1e-3; });
      if (near_root == roots.end())
        roots.push_back({p, r.norm()});
      else if (r.norm() < near_root->residual)
        *near_root = {p, r.norm()};
    }
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    return a.p.x() != b.p.x() ? a.p.x() < b.p.x() : a.p.y() < b.p.y();
  });
  return roots;
}

PlanarVectorField<Rational> translate(const PlanarVectorField<Rational>& F, const Rational& x0, const Rational& y0) {
  const int T = F.trunc_degree();
  const BiPoly<Rational> X = BiPoly<Rational>::x(T) + BiPoly<Rational>::constant(x0, T);
  const BiPoly<Rational> Y = BiPoly<Rational>::y(T) + BiPoly<Rational>::constant(y0, T);
  return {substitute(F.P, X, Y), substitute(F.Q, X, Y)};
}

// Centre manifold y = h(x) of a translated field with linear part [[0, p], [0, lambda]].
void centre_manifold(const PlanarVectorField<Rational>& G, const SweepConfig& cfg, SweepSingularity& s) {
  const Rational lambda = G.Q.coeff(0, 1);
  if (G.P.coeff(1, 0) != 0 || G.Q.coeff(1, 0) != 0 || G.P.coeff(0, 1) == 0) {
    s.note = "centre direction is not the x-axis";
    return;
  }
  int g = -1;
  for (const auto& [mon, c] : G.Q.terms())
    if (mon.j == 0 && (g < 0 || mon.i < g)) g = mon.i;
  if (g < 2) {
    s.note = "flat restriction";
    return;
  }
  const Rational c0 = -G.Q.coeff(g, 0) / lambda;
  const PuiseuxSeries<Rational> h = invariant_curve(G, Rational(g), Rational(1), c0, 8);
  const PuiseuxSeries<Rational> reduced = poly_compose_series(G.P, h);
  const Rational alpha = reduced.gamma;
  const int r = sign(reduced.coeffs.front());
  s.gamma = h.gamma;
  if (denominator(alpha) == 1 && numerator(alpha) % 2 == 0)
    s.kind = "saddle-node";
  else
    s.kind = r * sign(lambda) > 0 ? "node" : "saddle";
  s.predicted = dim_sequence_formula(alpha);
  if (!cfg.estimate) return;
  CurveOrbitOptions o;
  o.max_points = cfg.orbit_points;
  o.outer = std::min(0.5, cfg.outer_scale * std::abs(to_double(lambda)));
  const Orbit orbit = curve_orbit(CompiledField(G), h.cast<double>(), Axis::Y, o);
  s.estimate = estimate_dim_boxcount(orbit.points, cfg.estimator);
}

}  // namespace

SweepCell analyse_cell(Unfolding u, const Rational& beta1, const Rational& beta2, const SweepConfig& cfg) {
  SweepCell cell;
  cell.beta1 = beta1;
  cell.beta2 = beta2;
  const PlanarVectorField<Rational> F = unfolding_field(u, beta1, beta2);
  const PlanarVectorField<double> f = F.cast<double>();
  for (const Root& root : newton_roots(F, cell.diverged_seeds)) {
    SweepSingularity s;
    s.x = root.p.x();
    s.y = root.p.y();
    const auto ex = snap(F, root.p);
    s.exact = ex.has_value();
    int det_sign, tr_sign;
    bool nonzero_linear = true;
    if (ex) {
      const auto& [x0, y0] = *ex;
      const Rational a = d_dx(F.P)(x0, y0), b = d_dy(F.P)(x0, y0), c = d_dx(F.Q)(x0, y0), d = d_dy(F.Q)(x0, y0);
      s.trace = to_double(a + d);
      s.det = to_double(a * d - b * c);
      det_sign = sign(a * d - b * c);
      tr_sign = sign(a + d);
      nonzero_linear = a != 0 || b != 0 || c != 0 || d != 0;
    } else {
      const double a = d_dx(f.P)(s.x, s.y), b = d_dy(f.P)(s.x, s.y), c = d_dx(f.Q)(s.x, s.y), d = d_dy(f.Q)(s.x, s.y);
      s.trace = a + d;
      s.det = a * d - b * c;
      det_sign = std::abs(s.det) < 1e-9 ? 0 : (s.det > 0 ? 1 : -1);
      tr_sign = std::abs(s.trace) < 1e-9 ? 0 : (s.trace > 0 ? 1 : -1);
    }
    try {
      if (det_sign < 0) {
        s.kind = "saddle";
      } else if (det_sign > 0) {
        if (tr_sign == 0) {
          s.kind = "weak focus or centre";
          s.predicted = hopf_annotation();
          s.note = "annotation only";
          cell.tags.push_back("H");
        } else if (s.trace * s.trace - 4 * s.det >= 0) {
          s.kind = tr_sign < 0 ? "stable node" : "unstable node";
        } else {
          s.kind = tr_sign < 0 ? "stable focus" : "unstable focus";
        }
      } else if (!ex) {
        s.kind = "degenerate";
        s.note = "no exact location";
      } else if (tr_sign != 0) {
        centre_manifold(translate(F, ex->first, ex->second), cfg, s);
        cell.tags.push_back(beta2 < 0 ? "T-" : "T+");
      } else if (nonzero_linear) {
        const ClassificationReport rep = classify_nilpotent(translate(F, ex->first, ex->second));
        s.kind = to_string(rep.kind);
        cell.tags.push_back("BT");
      } else {
        s.kind = "linearly zero";
      }
    } catch (const Error& e) {
      s.note = e.what();
    }
    cell.singularities.push_back(std::move(s));
  }
  return cell;
}

SweepResult run_sweep(Unfolding u, const SweepConfig& cfg) {
  if (cfg.grid < 2) throw Error(ErrorKind::InvalidInput, "sweep grid needs at least two points per axis");
  if (cfg.lo < -1 || cfg.hi > 1 || cfg.lo >= cfg.hi)
    throw Error(ErrorKind::InvalidInput, "sweep bounds must lie within [-1, 1]");
  std::vector<std::pair<Rational, Rational>> params;
  const Rational h = (cfg.hi - cfg.lo) / Rational(cfg.grid - 1);
  for (int i = 0; i < cfg.grid; ++i)
    for (int j = 0; j < cfg.grid; ++j) params.emplace_back(cfg.lo + h * i, cfg.lo + h * j);
  const std::size_t n_grid = params.size();
  for (const auto& s : cfg.samples) {
    if (s.first < -1 || s.first > 1 || s.second < -1 || s.second > 1)
      throw Error(ErrorKind::InvalidInput, "sample outside [-1, 1]^2");
    params.push_back(s);
  }

  SweepConfig inner = cfg;
  inner.estimator.threads = 1;
  std::vector<SweepCell> cells(params.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < params.size();) {
      try {
        cells[k] = analyse_cell(u, params[k].first, params[k].second, inner);
      } catch (const std::exception& e) {
        cells[k].beta1 = params[k].first;
        cells[k].beta2 = params[k].second;
        cells[k].error = e.what();
      }
    }
  };
  const unsigned nt = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  SweepResult r;
  r.unfolding = u;
  r.grid.assign(cells.begin(), cells.begin() + std::ptrdiff_t(n_grid));
  r.samples.assign(cells.begin() + std::ptrdiff_t(n_grid), cells.end());
  for (const auto* group : {&r.grid, &r.samples})
    for (const SweepCell& c : *group)
      for (const std::string& t : c.tags) {
        std::optional<Rational> ann;
        if (t == "H") ann = hopf_annotation();
        if (t == "T-" || t == "T+") ann = saddle_node_curve_dimension(u);
        r.curve_tags.push_back({c.beta1, c.beta2, t, ann});
      }
  return r;
}

namespace {

nlohmann::json cell_json(const SweepCell& c) {
  nlohmann::json sing = nlohmann::json::array();
  for (const SweepSingularity& s : c.singularities) {
    nlohmann::json j{{"x", s.x}, {"y", s.y}, {"kind", s.kind}, {"trace", s.trace}, {"det", s.det}, {"exact", s.exact}};
    if (s.gamma) j["gamma"] = to_string(*s.gamma);
    if (s.predicted) j["predicted"] = to_string(*s.predicted);
    if (s.estimate) {
      j["estimate"] = s.estimate->value;
      if (s.estimate->fit)
        j["fit"] = {{"slope", s.estimate->fit->slope},
                    {"stderr", s.estimate->fit->slope_stderr},
                    {"r_squared", s.estimate->fit->r_squared},
                    {"eps_lo", s.estimate->fit->eps_lo},
                    {"eps_hi", s.estimate->fit->eps_hi}};
    }
    if (!s.note.empty()) j["note"] = s.note;
    sing.push_back(j);
  }
  nlohmann::json j{{"beta1", to_string(c.beta1)},
                   {"beta2", to_string(c.beta2)},
                   {"singularities", sing},
                   {"diverged_seeds", c.diverged_seeds},
                   {"tags", c.tags}};
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

}  // namespace

std::string sweep_to_json(const SweepResult& result) {
  nlohmann::json grid = nlohmann::json::array(), samples = nlohmann::json::array(), tags = nlohmann::json::array();
  for (const SweepCell& c : result.grid) grid.push_back(cell_json(c));
  for (const SweepCell& c : result.samples) samples.push_back(cell_json(c));
  for (const CurveTag& t : result.curve_tags) {
    nlohmann::json j{{"beta1", to_string(t.beta1)}, {"beta2", to_string(t.beta2)}, {"label", t.label}};
    if (t.annotation) j["dimension"] = to_string(*t.annotation);
    tags.push_back(j);
  }
  return nlohmann::json{{"unfolding", to_string(result.unfolding)}, {"grid", grid}, {"samples", samples},
                        {"curve_tags", tags}}
      .dump(2);
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "beta1,beta2,n_sing,kinds,tags,dims\n";
  for (const auto* group : {&result.grid, &result.samples})
    for (const SweepCell& c : *group) {
      std::string kinds, tags, dims;
      for (const SweepSingularity& s : c.singularities) {
        kinds += (kinds.empty() ? "" : ";") + s.kind;
        if (s.estimate) dims += (dims.empty() ? "" : ";") + fmt(s.estimate->value);
      }
      for (const std::string& t : c.tags) tags += (tags.empty() ? "" : ";") + t;
      os << to_double(c.beta1) << "," << to_double(c.beta2) << "," << c.singularities.size() << "," << kinds << ","
         << tags << "," << dims << "\n";
    }
}

// ---------------------------------------------------------------- plots

std::vector<Eigen::Vector2d> curve_polyline(const PuiseuxSeries<double>& s, double outer, Axis axis, int samples) {
  std::vector<Eigen::Vector2d> out;
  for (int k = 1; k <= samples; ++k) {
    const double t = outer * k / samples;
    const double v = s.eval(t);
    out.emplace_back(axis == Axis::Y ? Eigen::Vector2d(t, v) : Eigen::Vector2d(v, t));
  }
  return out;
}

void emit_plot_svg(std::ostream& os, const std::vector<Eigen::Vector2d>& points,
                   const std::vector<Eigen::Vector2d>& overlay) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "nothing to plot");
  Eigen::Vector2d lo = points.front(), hi = points.front();
  for (const auto* set : {&points, &overlay})
    for (const Eigen::Vector2d& p : *set) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  const double size = 600, margin = 20;
  const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-300});
  auto map = [&](const Eigen::Vector2d& p) {
    return Eigen::Vector2d(margin + (p.x() - lo.x()) / span * (size - 2 * margin),
                           size - margin - (p.y() - lo.y()) / span * (size - 2 * margin));
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!overlay.empty()) {
    os << "<polyline fill=\"none\" stroke=\"green\" stroke-width=\"1\" points=\"";
    for (const Eigen::Vector2d& p : overlay) {
      const Eigen::Vector2d q = map(p);
      os << q.x() << "," << q.y() << " ";
    }
    os << "\"/>\n";
  }
  for (const Eigen::Vector2d& p : points) {
    const Eigen::Vector2d q = map(p);
    os << "<circle cx=\"" << q.x() << "\" cy=\"" << q.y() << "\" r=\"1.2\" fill=\"red\"/>\n";
  }
  os << "</svg>\n";
}

void emit_plot_svg(const std::string& path, const std::vector<Eigen::Vector2d>& points,
                   const std::vector<Eigen::Vector2d>& overlay) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "nothing to plot");
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Io, "cannot open " + path);
  emit_plot_svg(os, points, overlay);
  if (!os) throw Error(ErrorKind::Io, "write failed for " + path);
}

}  // namespace nilfrac

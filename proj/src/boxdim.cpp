#include "nilfrac/boxdim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <thread>
#include <unordered_map>

#include <boost/math/statistics/linear_regression.hpp>

namespace nilfrac {

const char* to_string(DimMethod m) {
  switch (m) {
    case DimMethod::FormulaLemma2: return "formula-lemma2";
    case DimMethod::FormulaTheorem4: return "formula-theorem4";
    case DimMethod::BoxCount: return "boxcount";
    case DimMethod::Sausage: return "sausage";
    case DimMethod::IncrementRegression: return "increment";
  }
  return "?";
}

const char* to_string(BoxCase c) {
  switch (c) {
    case BoxCase::C1i: return "C1i";
    case BoxCase::C1ii: return "C1ii";
    case BoxCase::C2i: return "C2i";
    case BoxCase::C2ii: return "C2ii";
  }
  return "?";
}

Rational dim_sequence_formula(const Rational& alpha) {
  if (alpha <= 1) throw Error(ErrorKind::InvalidInput, "increment exponent must exceed 1");
  return Rational(1) - Rational(1) / alpha;
}

Rational dim_orbit_2d_formula(const Rational& alpha, const Rational& beta) {
  if (alpha <= 1 || beta <= 1) throw Error(ErrorKind::InvalidInput, "increment exponents must exceed 1");
  return dim_sequence_formula(alpha >= beta ? alpha : beta);
}

TheoremBoxResult dim_theorem_box(int m, int n, const Rational& gamma) {
  if (gamma <= 1 || gamma >= m) throw Error(ErrorKind::InvalidInput, "separatrix exponent must lie in (1, m)");
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be positive");
  TheoremBoxResult r;
  r.dim_x = dim_sequence_formula(gamma);
  if (m <= n + 1) {
    const Rational beta = Rational(m) / gamma;
    r.dim_y = Rational(1) - Rational(1) / beta;
    r.box_case = gamma * gamma >= m ? BoxCase::C1i : BoxCase::C1ii;
  } else {
    const Rational beta = (Rational(n) + gamma) / gamma;
    r.dim_y = Rational(1) - Rational(1) / beta;
    // gamma >= (1 + sqrt(1 + 4n))/2  <=>  gamma^2 >= n + gamma for gamma > 1/2
    r.box_case = gamma * gamma >= Rational(n) + gamma ? BoxCase::C2i : BoxCase::C2ii;
  }
  const bool first = r.box_case == BoxCase::C1i || r.box_case == BoxCase::C2i;
  r.dim_orbit = first ? r.dim_x : r.dim_y;
  return r;
}

std::pair<std::vector<Rational>, std::vector<Rational>> characteristic_sets(int k_max) {
  if (k_max < 1) throw Error(ErrorKind::InvalidInput, "k_max must be at least 1");
  std::vector<Rational> dc, ds;
  for (int k = 1; k <= k_max; ++k) {
    dc.emplace_back(4 * k, 2 * k + 1);
    ds.push_back(Rational(2) - Rational(1, k + 1));
  }
  return {dc, ds};
}

FitDiagnostics linear_fit(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3) throw Error(ErrorKind::InsufficientRange, "fit needs three points");
  auto [c0, c1, r2] = boost::math::statistics::simple_ordinary_least_squares_with_R_squared(xs, ys);
  double ssr = 0, mx = 0, sxx = 0;
  for (double x : xs) mx += x;
  mx /= double(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (c0 + c1 * xs[i]);
    ssr += e * e;
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  FitDiagnostics f;
  f.slope = c1;
  f.intercept = c0;
  f.r_squared = r2;
  f.slope_stderr = sxx > 0 ? std::sqrt(ssr / double(xs.size() - 2) / sxx) : 0;
  f.n_scales = int(xs.size());
  f.xs = std::move(xs);
  f.ys = std::move(ys);
  return f;
}

IncrementFit estimate_increment_exponent(const std::vector<double>& seq, const IncrementOptions& opt) {
  if (seq.size() < opt.min_length) throw Error(ErrorKind::InsufficientRange, "sequence too short for regression");
  for (std::size_t k = 0; k + 1 < seq.size(); ++k)
    if (!(seq[k + 1] < seq[k]) || !(seq[k + 1] > 0))
      throw Error(ErrorKind::InvalidInput, "sequence must be positive and strictly decreasing");
  const double lo = std::log(seq.back());
  const double hi = std::log(seq.front());
  const double R = hi - lo;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    const double lx = std::log(seq[k]);
    if (lx < lo + opt.window_lo * R || lx > lo + opt.window_hi * R) continue;
    xs.push_back(lx);
    ys.push_back(std::log(seq[k] - seq[k + 1]));
  }
  if (xs.size() < 10) {
    xs.clear();
    ys.clear();
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
      xs.push_back(std::log(seq[k]));
      ys.push_back(std::log(seq[k] - seq[k + 1]));
    }
  }
  IncrementFit r;
  r.fit = linear_fit(std::move(xs), std::move(ys));
  r.fit.eps_lo = std::exp(r.fit.xs.front() < r.fit.xs.back() ? r.fit.xs.front() : r.fit.xs.back());
  r.fit.eps_hi = std::exp(std::max(r.fit.xs.front(), r.fit.xs.back()));
  r.alpha = r.fit.slope;
  r.hyperbolic = std::abs(r.alpha - 1) < 0.05;
  return r;
}

DimensionEstimate increment_dimension(const std::vector<double>& seq, const IncrementOptions& opt) {
  const IncrementFit f = estimate_increment_exponent(seq, opt);
  DimensionEstimate d;
  d.method = DimMethod::IncrementRegression;
  d.value = f.alpha > 1 && !f.hyperbolic ? 1 - 1 / f.alpha : 0;
  d.fit = f.fit;
  return d;
}

std::vector<double> project(const std::vector<Eigen::Vector2d>& points, int coord) {
  std::vector<double> r;
  r.reserve(points.size());
  for (const auto& p : points) r.push_back(p[coord]);
  return r;
}

std::size_t box_count(const std::vector<Eigen::Vector2d>& points, double eps) {
  if (points.empty()) return 0;
  double x0 = points[0].x(), y0 = points[0].y();
  for (const auto& p : points) {
    x0 = std::min(x0, p.x());
    y0 = std::min(y0, p.y());
  }
  std::vector<std::pair<long long, long long>> keys;
  keys.reserve(points.size());
  for (const auto& p : points)
    keys.emplace_back(static_cast<long long>(std::floor((p.x() - x0) / eps)),
                      static_cast<long long>(std::floor((p.y() - y0) / eps)));
  std::sort(keys.begin(), keys.end());
  return std::size_t(std::unique(keys.begin(), keys.end()) - keys.begin());
}

std::size_t box_count(const std::vector<double>& seq, double eps) {
  if (seq.empty()) return 0;
  const double x0 = *std::min_element(seq.begin(), seq.end());
  std::vector<long long> keys;
  keys.reserve(seq.size());
  for (double x : seq) keys.push_back(static_cast<long long>(std::floor((x - x0) / eps)));
  std::sort(keys.begin(), keys.end());
  return std::size_t(std::unique(keys.begin(), keys.end()) - keys.begin());
}

namespace {

struct Chord {
  long long col;
  double lo;
  double hi;
  bool operator<(const Chord& o) const { return col != o.col ? col < o.col : lo < o.lo; }
};

std::size_t raster_work(const std::vector<Eigen::Vector2d>& points) { return points.size() * 17; }

}  // namespace

double sausage_area(const std::vector<Eigen::Vector2d>& points, double eps) {
  if (points.empty()) return 0;
  const double h = eps / 8;
  double x0 = points[0].x();
  for (const auto& p : points) x0 = std::min(x0, p.x());
  x0 -= eps;
  std::vector<Chord> chords;
  chords.reserve(raster_work(points));
  for (const auto& p : points) {
    const long long c0 = static_cast<long long>(std::floor((p.x() - eps - x0) / h));
    const long long c1 = static_cast<long long>(std::floor((p.x() + eps - x0) / h));
    for (long long c = c0; c <= c1; ++c) {
      const double dx = x0 + (double(c) + 0.5) * h - p.x();
      const double r2 = eps * eps - dx * dx;
      if (r2 <= 0) continue;
      const double half = std::sqrt(r2);
      chords.push_back({c, p.y() - half, p.y() + half});
    }
  }
  std::sort(chords.begin(), chords.end());
  double total = 0;
  std::size_t i = 0;
  while (i < chords.size()) {
    const long long col = chords[i].col;
    double lo = chords[i].lo, hi = chords[i].hi;
    for (++i; i < chords.size() && chords[i].col == col; ++i) {
      if (chords[i].lo > hi) {
        total += hi - lo;
        lo = chords[i].lo;
        hi = chords[i].hi;
      } else {
        hi = std::max(hi, chords[i].hi);
      }
    }
    total += hi - lo;
  }
  return total * h;
}

double sausage_area_mc(const std::vector<Eigen::Vector2d>& points, double eps, std::size_t samples,
                       std::uint64_t seed) {
  if (points.empty()) return 0;
  struct KeyHash {
    std::size_t operator()(const std::pair<long long, long long>& k) const {
      return std::hash<long long>()(k.first * 1000003LL) ^ std::hash<long long>()(k.second);
    }
  };
  std::unordered_map<std::pair<long long, long long>, std::vector<std::size_t>, KeyHash> grid;
  auto key = [&](const Eigen::Vector2d& p) {
    return std::pair<long long, long long>(static_cast<long long>(std::floor(p.x() / eps)),
                                           static_cast<long long>(std::floor(p.y() / eps)));
  };
  for (std::size_t i = 0; i < points.size(); ++i) grid[key(points[i])].push_back(i);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double acc = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Eigen::Vector2d& c = points[pick(rng)];
    const double r = eps * std::sqrt(unit(rng));
    const double th = 2 * M_PI * unit(rng);
    const Eigen::Vector2d z = c + r * Eigen::Vector2d(std::cos(th), std::sin(th));
    const auto [kx, ky] = key(z);
    std::size_t cover = 0;
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find({kx + dx, ky + dy});
        if (it == grid.end()) continue;
        for (std::size_t j : it->second)
          if ((points[j] - z).squaredNorm() <= eps * eps) ++cover;
      }
    acc += 1.0 / double(std::max<std::size_t>(cover, 1));
  }
  return double(points.size()) * M_PI * eps * eps * acc / double(samples);
}

double sausage_length(const std::vector<double>& seq, double eps) {
  if (seq.empty()) return 0;
  std::vector<double> s = seq;
  std::sort(s.begin(), s.end());
  double total = 2 * eps;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) total += std::min(s[k + 1] - s[k], 2 * eps);
  return total;
}

namespace {

template <class Pts>
double diameter(const Pts& pts) {
  if constexpr (std::is_same_v<Pts, std::vector<double>>) {
    const auto [a, b] = std::minmax_element(pts.begin(), pts.end());
    return *b - *a;
  } else {
    Eigen::Vector2d lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
  }
}

/// Default window: eps_max = diam/4, eps_min the smallest scale with at most
/// a quarter of the points in distinct boxes.
template <class Pts>
std::pair<double, double> default_range(const Pts& pts, const EstimatorConfig& cfg) {
  const double diam = diameter(pts);
  const double eps_max = cfg.eps_max.value_or(diam / 4);
  if (cfg.eps_min) return {*cfg.eps_min, eps_max};
  const std::size_t target = std::max<std::size_t>(pts.size() / 4, 2);
  double lo = std::log(diam) - 40, hi = std::log(eps_max);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (box_count(pts, std::exp(mid)) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return {std::exp(hi), eps_max};
}

/// Evaluates f on every scale, concurrently, results in scale order.
std::vector<double> over_scales(const std::vector<double>& eps, const std::function<double(double)>& f,
                                unsigned threads) {
  std::vector<double> out(eps.size());
  unsigned T = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  T = std::min<unsigned>(T, unsigned(eps.size()));
  if (T <= 1) {
    for (std::size_t i = 0; i < eps.size(); ++i) out[i] = f(eps[i]);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(T);
  for (unsigned t = 0; t < T; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < eps.size(); i += T) out[i] = f(eps[i]);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

template <class Pts>
DimensionEstimate scaling_estimate(const Pts& pts, const EstimatorConfig& cfg, DimMethod method,
                                   const std::function<double(double)>& measure, double codim_base,
                                   bool monte_carlo) {
  DimensionEstimate d;
  d.method = method;
  if (pts.empty()) throw Error(ErrorKind::InvalidInput, "empty point set");
  if (diameter(pts) == 0) {
    d.value = 0;
    d.fit = FitDiagnostics{};
    return d;
  }
  const auto [e0, e1] = default_range(pts, cfg);
  if (!(e1 > e0) || std::log10(e1 / e0) < cfg.min_decades)
    throw Error(ErrorKind::InsufficientRange, "scale range below " + std::to_string(cfg.min_decades) + " decades");
  const int S = std::max(cfg.n_scales, 8);
  std::vector<double> eps(S);
  for (int i = 0; i < S; ++i) eps[i] = std::exp(std::log(e0) + (std::log(e1) - std::log(e0)) * i / (S - 1));
  const std::vector<double> vals = over_scales(eps, measure, cfg.threads);
  const int drop = int(std::floor(cfg.trim * S));
  std::vector<double> xs, ys;
  for (int i = drop; i < S - drop; ++i) {
    if (!(vals[i] > 0)) continue;
    if (method == DimMethod::BoxCount) {
      xs.push_back(-std::log(eps[i]));
      ys.push_back(std::log(vals[i]));
    } else {
      xs.push_back(std::log(eps[i]));
      ys.push_back(std::log(vals[i]));
    }
  }
  FitDiagnostics f = linear_fit(std::move(xs), std::move(ys));
  f.eps_lo = eps[drop];
  f.eps_hi = eps[S - 1 - drop];
  f.monte_carlo = monte_carlo;
  const double v = method == DimMethod::BoxCount ? f.slope : codim_base - f.slope;
  d.value = std::clamp(v, 0.0, 2.0);
  d.fit = std::move(f);
  return d;
}

}  // namespace

DimensionEstimate estimate_dim_boxcount(const std::vector<Eigen::Vector2d>& points, const EstimatorConfig& cfg) {
  return scaling_estimate(
      points, cfg, DimMethod::BoxCount, [&](double e) { return double(box_count(points, e)); }, 0, false);
}

DimensionEstimate estimate_dim_boxcount(const std::vector<double>& seq, const EstimatorConfig& cfg) {
  return scaling_estimate(
      seq, cfg, DimMethod::BoxCount, [&](double e) { return double(box_count(seq, e)); }, 0, false);
}

DimensionEstimate estimate_dim_sausage(const std::vector<Eigen::Vector2d>& points, const EstimatorConfig& cfg) {
  const bool mc = raster_work(points) > cfg.memory_bound;
  return scaling_estimate(
      points, cfg, DimMethod::Sausage,
      [&](double e) {
        return mc ? sausage_area_mc(points, e, cfg.mc_samples, cfg.seed) : sausage_area(points, e);
      },
      2, mc);
}

DimensionEstimate estimate_dim_sausage(const std::vector<double>& seq, const EstimatorConfig& cfg) {
  return scaling_estimate(
      seq, cfg, DimMethod::Sausage, [&](double e) { return sausage_length(seq, e); }, 1, false);
}

}  // namespace nilfrac

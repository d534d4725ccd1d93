#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "nilfrac/blowup.hpp"
#include "nilfrac/boxdim.hpp"

using namespace nilfrac;

namespace {

std::vector<double> recursion(double x0, double alpha, std::size_t n) {
  std::vector<double> s{x0};
  while (s.size() < n) s.push_back(s.back() - std::pow(s.back(), alpha));
  return s;
}

std::vector<double> harmonic(int n) {
  std::vector<double> s;
  for (int k = 1; k <= n; ++k) s.push_back(1.0 / k);
  return s;
}

std::vector<Eigen::Vector2d> segment(int n) {
  std::vector<Eigen::Vector2d> p;
  for (int i = 0; i < n; ++i) p.emplace_back(double(i) / (n - 1), 0.5 * double(i) / (n - 1));
  return p;
}

// Exhaustive count of grid cells [x0 + j eps, x0 + (j+1) eps) met by {1/k}.
double harmonic_count_oracle(int n, double eps) {
  std::set<long> boxes;
  for (int k = 1; k <= n; ++k) boxes.insert(long(std::floor((1.0 / k - 1.0 / n) / eps)));
  return double(boxes.size());
}

}  // namespace

TEST_CASE("sequence formula") {
  CHECK(dim_sequence_formula(Rational(2)) == Rational(1, 2));
  CHECK(dim_sequence_formula(Rational(3, 2)) == Rational(1, 3));
  CHECK(dim_sequence_formula(Rational(1000001, 1000000)) < Rational(1, 100000));
  CHECK_THROWS_AS(dim_sequence_formula(Rational(1)), Error);
}

TEST_CASE("planar orbit formula") {
  CHECK(dim_orbit_2d_formula(Rational(3, 2), Rational(4, 3)) == Rational(1, 3));
  CHECK(dim_orbit_2d_formula(Rational(2), Rational(2)) == Rational(1, 2));
  CHECK(dim_orbit_2d_formula(Rational(4, 3), Rational(3, 2)) == Rational(1, 3));
  CHECK_THROWS_AS(dim_orbit_2d_formula(Rational(1), Rational(2)), Error);
  for (int p = 5; p <= 12; ++p)
    for (int q = 5; q <= 12; ++q) {
      const Rational a(p, 4), b(q, 4);
      CHECK(dim_orbit_2d_formula(a, b) == dim_sequence_formula(std::max(a, b)));
    }
}

TEST_CASE("theorem box values") {
  const auto cusp = dim_theorem_box(2, 1, Rational(3, 2));
  CHECK(cusp.dim_orbit == Rational(1, 3));
  CHECK(cusp.dim_x == Rational(1, 3));
  CHECK(cusp.dim_y == Rational(1, 4));
  CHECK(cusp.box_case == BoxCase::C1i);

  // m > n+1: the y-increments scale with exponent n/gamma + 1.
  const auto sn = dim_theorem_box(4, 1, Rational(5, 2));
  CHECK(sn.dim_orbit == Rational(3, 5));
  CHECK(sn.dim_x == Rational(3, 5));
  CHECK(sn.dim_y == Rational(2, 7));
  CHECK(sn.box_case == BoxCase::C2i);

  const auto node = dim_theorem_box(5, 2, Rational(3));
  CHECK(node.dim_orbit == Rational(2, 3));
  CHECK(node.dim_x == Rational(2, 3));
  CHECK(node.dim_y == Rational(2, 5));
  CHECK(node.box_case == BoxCase::C2i);

  CHECK(dim_theorem_box(3, 2, Rational(2)).dim_orbit == Rational(1, 2));
  CHECK(dim_theorem_box(5, 5, Rational(2)).box_case == BoxCase::C1ii);
  CHECK_THROWS_AS(dim_theorem_box(2, 1, Rational(2)), Error);

  for (int m = 2; m <= 6; ++m)
    for (int n = 1; n <= 4; ++n)
      for (int g = 5; g < 4 * m; ++g) {
        const auto r = dim_theorem_box(m, n, Rational(g, 4));
        CHECK(r.dim_orbit == std::max(r.dim_x, r.dim_y));
      }
}

TEST_CASE("characteristic sets") {
  const auto [dc, ds] = characteristic_sets(6);
  REQUIRE(dc.size() == 6);
  CHECK(dc[0] == Rational(4, 3));
  CHECK(dc[1] == Rational(8, 5));
  CHECK(dc[2] == Rational(12, 7));
  CHECK(ds[0] == Rational(3, 2));
  CHECK(ds[1] == Rational(5, 3));
  for (std::size_t k = 1; k < dc.size(); ++k) {
    CHECK(dc[k] > dc[k - 1]);
    CHECK(ds[k] > ds[k - 1]);
    CHECK(dc[k] < 2);
    CHECK(ds[k] < 2);
  }
  CHECK_THROWS_AS(characteristic_sets(0), Error);
}

TEST_CASE("increment exponent regression") {
  CHECK(estimate_increment_exponent(recursion(0.5, 2.0, 100000)).alpha == doctest::Approx(2.0).epsilon(0.01));
  CHECK(estimate_increment_exponent(recursion(0.5, 1.5, 100000)).alpha ==
        doctest::Approx(1.5).epsilon(0.02 / 1.5));

  std::vector<double> geo;
  for (int k = 0; k < 200; ++k) geo.push_back(std::exp(-0.1 * k));
  const IncrementFit g = estimate_increment_exponent(geo);
  CHECK(g.hyperbolic);
  CHECK(increment_dimension(geo).value == 0);

  CHECK_THROWS_AS(estimate_increment_exponent(recursion(0.5, 2.0, 20)), Error);
  std::vector<double> bad = recursion(0.5, 2.0, 100);
  std::swap(bad[10], bad[11]);
  CHECK_THROWS_AS(estimate_increment_exponent(bad), Error);
}

TEST_CASE("box counting") {
  CHECK(estimate_dim_boxcount(segment(10000)).value == doctest::Approx(1.0).epsilon(0.05));
  const auto h = harmonic(10000);
  CHECK(estimate_dim_boxcount(h).value == doctest::Approx(0.5).epsilon(0.1));
  CHECK(estimate_dim_boxcount(std::vector<Eigen::Vector2d>{{0.3, 0.2}}).value == 0);

  for (double eps : {1e-2, 1e-3, 1e-4}) CHECK(double(box_count(h, eps)) == harmonic_count_oracle(10000, eps));
  CHECK_THROWS_AS(estimate_dim_boxcount(std::vector<Eigen::Vector2d>{}), Error);
}

TEST_CASE("sausage") {
  const auto seg = segment(10000);
  const double L = std::hypot(1.0, 0.5);
  for (double eps : {1e-2, 3e-3}) {
    const double area = sausage_area(seg, eps);
    CHECK(area == doctest::Approx(2 * L * eps + M_PI * eps * eps).epsilon(0.02));
  }
  CHECK(estimate_dim_sausage(seg).value == doctest::Approx(1.0).epsilon(0.05));

  const auto h = harmonic(10000);
  CHECK(sausage_length(std::vector<double>{0.0, 1.0}, 0.1) == doctest::Approx(0.4));
  CHECK(sausage_length(std::vector<double>{0.0, 0.1}, 0.1) == doctest::Approx(0.3));
  CHECK(estimate_dim_sausage(h).value == doctest::Approx(0.5).epsilon(0.1));

  std::vector<Eigen::Vector2d> pts{{0, 0}, {0.5, 0.1}, {0.2, 0.7}};
  CHECK(sausage_area_mc(pts, 0.05, 200000, 3) == doctest::Approx(3 * M_PI * 0.0025).epsilon(0.02));
}

TEST_CASE("finite stability and projection inequality") {
  std::vector<Eigen::Vector2d> a, b, u;
  for (int k = 1; k <= 20000; ++k) {
    a.emplace_back(1.0 / k, 0);
    b.emplace_back(2 + 1.0 / k, 1);
  }
  u = a;
  u.insert(u.end(), b.begin(), b.end());
  const double da = estimate_dim_boxcount(a).value, db = estimate_dim_boxcount(b).value;
  CHECK(std::abs(da - db) < 0.05);
  CHECK(std::abs(estimate_dim_boxcount(u).value - da) <= 0.05);

  const NilpotentModel model(Rational(1), 2, Rational(-1), 1);
  const auto L = separatrix_leading(model);
  const auto branch = separatrix_series(model, L.at(1), 8);
  CurveOrbitOptions opt;
  opt.max_points = 20000;
  const Orbit o = separatrix_orbit(model, branch, opt);
  const double dS = estimate_dim_boxcount(o.points).value;
  const double dx = estimate_dim_boxcount(project(o.points, 0)).value;
  const double dy = estimate_dim_boxcount(project(o.points, 1)).value;
  CHECK(dS >= std::max(dx, dy) - 0.05);
}

TEST_CASE("hyperbolic orbit is trivial") {
  std::vector<Eigen::Vector2d> pts;
  Eigen::Vector2d p(0.5, 0.5);
  while (p.norm() > 1e-60) {
    pts.push_back(p);
    p *= std::exp(-1.0);
  }
  CHECK(estimate_dim_boxcount(pts).value <= 0.1);
  CHECK(estimate_dim_sausage(pts).value <= 0.1);
}

TEST_CASE("linear fit") {
  const auto f = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.r_squared == doctest::Approx(1));
}

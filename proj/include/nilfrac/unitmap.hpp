#pragma once

// Unit-time maps: Taylor jets by Picard iteration and Lie series, adaptive
// numerical flow, and discrete orbits.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nilfrac/bipoly.hpp"

namespace nilfrac {

/// Polynomial in the time variable t, used as the coefficient ring of Picard
/// iterates.
template <class S>
class TPoly {
 public:
  TPoly() = default;
  TPoly(int v) : c_{S(v)} { trim(); }  // NOLINT(google-explicit-constructor)
  TPoly(const S& v) : c_{v} { trim(); }  // NOLINT(google-explicit-constructor)
  explicit TPoly(std::vector<S> c) : c_(std::move(c)) { trim(); }

  const std::vector<S>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return int(c_.size()) - 1; }

  S at(const S& t) const {
    S r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
    return r;
  }

  /// int_0^t p(s) ds.
  TPoly integral() const {
    std::vector<S> r(c_.size() + 1, S(0));
    for (std::size_t p = 0; p < c_.size(); ++p) r[p + 1] = c_[p] / S(int(p + 1));
    return TPoly(std::move(r));
  }

  /// int_0^t (t - s) p(s) ds.
  TPoly lagged_integral() const {
    std::vector<S> r(c_.size() + 2, S(0));
    for (std::size_t p = 0; p < c_.size(); ++p) r[p + 2] = c_[p] / S(int((p + 1) * (p + 2)));
    return TPoly(std::move(r));
  }

  friend TPoly operator+(const TPoly& a, const TPoly& b) {
    std::vector<S> r(std::max(a.c_.size(), b.c_.size()), S(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] = r[k] + a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] = r[k] + b.c_[k];
    return TPoly(std::move(r));
  }
  friend TPoly operator-(const TPoly& a, const TPoly& b) { return a + TPoly(S(-1)) * b; }
  friend TPoly operator*(const TPoly& a, const TPoly& b) {
    if (a.is_zero() || b.is_zero()) return TPoly();
    std::vector<S> r(a.c_.size() + b.c_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return TPoly(std::move(r));
  }
  friend bool operator==(const TPoly& a, const TPoly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && ScalarTraits<S>::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<S> c_;
};

template <class S>
struct ScalarTraits<TPoly<S>> {
  static constexpr bool exact = ScalarTraits<S>::exact;
  static bool is_zero(const TPoly<S>& v) { return v.is_zero(); }
};

/// Taylor polynomial of the time-one map at the origin.
template <class S>
struct UnitMapJet {
  BiPoly<S> X;
  BiPoly<S> Y;
  int order = 0;
  Eigen::Matrix<S, 2, 2> linear_part;

  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const { return {X(p.x(), p.y()), Y(p.x(), p.y())}; }
};

/// Result of `iterations` Picard iterations, every iterate truncated at
/// `order`. Requires a nilpotent linear part (A^2 = 0), which makes the
/// iteration exact in rational arithmetic.
template <class S>
UnitMapJet<S> picard_iterate(const PlanarVectorField<S>& field, int order, int iterations);

/// Taylor jet of the time-one map to total degree `order`. Exact fields need a
/// nilpotent linear part; float fields with a general linear part use the Lie series.
template <class S>
UnitMapJet<S> picard_jet(const PlanarVectorField<S>& field, int order);

/// sum_k L^k(id)/k! truncated at `order`, with L the Lie derivative of the field.
template <class S>
UnitMapJet<S> lie_jet(const PlanarVectorField<S>& field, int order, int max_terms = 400);

struct FlowOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Shrinks atol to rtol*1e-3*|p| for points close to the origin.
  bool scale_atol = true;
  double domain = 10.0;
  double h_min = 1e-13;
  long max_steps = 200000;
};

/// Polynomial field flattened for fast double evaluation.
class CompiledField {
 public:
  explicit CompiledField(const PlanarVectorField<double>& field);
  explicit CompiledField(const PlanarVectorField<Rational>& field);

  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const;

 private:
  struct Term {
    int i;
    int j;
    double c;
  };
  std::vector<Term> p_;
  std::vector<Term> q_;
  int max_i_ = 0;
  int max_j_ = 0;
};

/// phi_t(p) by the Boost.Odeint Dormand-Prince 5(4) stepper. Throws StepUnderflow
/// or LeftDomain.
Eigen::Vector2d numeric_flow(const CompiledField& field, const Eigen::Vector2d& p, double t,
                             const FlowOptions& opt = {});

template <class S>
Eigen::Vector2d numeric_unit_map(const PlanarVectorField<S>& field, const Eigen::Vector2d& p,
                                 const FlowOptions& opt = {}) {
  return numeric_flow(CompiledField(field), p, 1.0, opt);
}

enum class Termination { ReachedFloor, MaxIterations, LeftDomain, ConvergedToFixedPoint, ReachedBound, StepUnderflow };

const char* to_string(Termination t);

struct Orbit {
  std::vector<Eigen::Vector2d> points;
  Termination termination = Termination::MaxIterations;
  Eigen::Vector2d seed = Eigen::Vector2d::Zero();
  double floor = 0;
  /// +1 for the time-one map, -1 for its inverse.
  int time_direction = 1;
  std::string map_descriptor;
};

struct OrbitOptions {
  double floor = 1e-9;
  long max_iter = 1000000;
  int time_direction = 1;
  /// Optional early stop evaluated on every new point.
  std::function<bool(const Eigen::Vector2d&)> stop;
  FlowOptions flow;
};

Orbit iterate_orbit(const CompiledField& field, const Eigen::Vector2d& p0, const OrbitOptions& opt = {});

template <class S>
Orbit iterate_orbit(const PlanarVectorField<S>& field, const Eigen::Vector2d& p0, const OrbitOptions& opt = {}) {
  return iterate_orbit(CompiledField(field), p0, opt);
}

}  // namespace nilfrac

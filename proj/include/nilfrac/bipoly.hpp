#pragma once

// Truncated bivariate polynomials and planar polynomial vector fields.

#include <algorithm>
#include <compare>
#include <limits>
#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nilfrac/scalar.hpp"

namespace nilfrac {

inline constexpr int kDefaultTrunc = 12;

struct Monomial {
  int i = 0;
  int j = 0;

  int degree() const { return i + j; }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Converts a coefficient into another coefficient ring, using the ring's own
/// constructor when it has one (time polynomials, surds) and scalar_cast otherwise.
template <class T, class S>
T lift(const S& c) {
  if constexpr (std::is_same_v<T, S>) {
    return c;
  } else if constexpr (std::is_same_v<T, double>) {
    return to_double(c);
  } else if constexpr (std::is_constructible_v<T, const S&>) {
    return T(c);
  } else {
    return scalar_cast<T>(c);
  }
}

/// Sparse polynomial sum c_ij x^i y^j. Terms of total degree above
/// trunc_degree() are discarded on insertion and truncated() records that
/// something was lost.
template <class S>
class BiPoly {
 public:
  using Scalar = S;
  using TermMap = std::map<Monomial, S>;

  explicit BiPoly(int trunc = kDefaultTrunc) : trunc_(trunc) {
    if (trunc < 0) throw Error(ErrorKind::InvalidInput, "negative truncation degree");
  }

  static BiPoly constant(const S& c, int trunc = kDefaultTrunc) { return monomial(0, 0, c, trunc); }

  static BiPoly monomial(int i, int j, const S& c, int trunc = kDefaultTrunc) {
    BiPoly p(trunc);
    p.add_term(i, j, c);
    return p;
  }

  static BiPoly x(int trunc = kDefaultTrunc) { return monomial(1, 0, S(1), trunc); }
  static BiPoly y(int trunc = kDefaultTrunc) { return monomial(0, 1, S(1), trunc); }

  void add_term(int i, int j, const S& c) {
    if (i < 0 || j < 0) throw Error(ErrorKind::InvalidInput, "negative exponent in polynomial term");
    if (ScalarTraits<S>::is_zero(c)) return;
    if (i + j > trunc_) {
      truncated_ = true;
      return;
    }
    auto it = terms_.find({i, j});
    if (it == terms_.end()) {
      terms_.emplace(Monomial{i, j}, c);
      return;
    }
    it->second = it->second + c;
    if (ScalarTraits<S>::is_zero(it->second)) terms_.erase(it);
  }

  S coeff(int i, int j) const {
    const auto it = terms_.find({i, j});
    return it == terms_.end() ? S(0) : it->second;
  }

  const TermMap& terms() const { return terms_; }
  int trunc_degree() const { return trunc_; }
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Highest total degree present, -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [mon, c] : terms_) d = std::max(d, mon.degree());
    return d;
  }

  /// Lowest total degree present, -1 for the zero polynomial.
  int order() const {
    int d = std::numeric_limits<int>::max();
    for (const auto& [mon, c] : terms_) d = std::min(d, mon.degree());
    return terms_.empty() ? -1 : d;
  }

  int max_i() const {
    int d = 0;
    for (const auto& [mon, c] : terms_) d = std::max(d, mon.i);
    return d;
  }

  int max_j() const {
    int d = 0;
    for (const auto& [mon, c] : terms_) d = std::max(d, mon.j);
    return d;
  }

  /// Same terms with a new truncation degree; lowering it drops terms.
  BiPoly with_trunc(int trunc) const {
    BiPoly r(trunc);
    r.truncated_ = truncated_ && trunc >= trunc_;
    for (const auto& [mon, c] : terms_) r.add_term(mon.i, mon.j, c);
    return r;
  }

  /// Terms of total degree <= d.
  BiPoly jet(int d) const {
    BiPoly r(trunc_);
    for (const auto& [mon, c] : terms_)
      if (mon.degree() <= d) r.add_term(mon.i, mon.j, c);
    return r;
  }

  /// Terms of total degree exactly d.
  BiPoly homogeneous(int d) const {
    BiPoly r(trunc_);
    for (const auto& [mon, c] : terms_)
      if (mon.degree() == d) r.add_term(mon.i, mon.j, c);
    return r;
  }

  template <class T>
  BiPoly<T> cast() const {
    BiPoly<T> r(trunc_);
    if (truncated_) r.mark_truncated();
    for (const auto& [mon, c] : terms_) r.add_term(mon.i, mon.j, lift<T>(c));
    return r;
  }

  /// Evaluation at a point of any ring the coefficients lift into.
  template <class T>
  T operator()(const T& x, const T& y) const {
    std::vector<T> xp(max_i() + 1, T(1));
    std::vector<T> yp(max_j() + 1, T(1));
    for (std::size_t k = 1; k < xp.size(); ++k) xp[k] = xp[k - 1] * x;
    for (std::size_t k = 1; k < yp.size(); ++k) yp[k] = yp[k - 1] * y;
    T sum(0);
    for (const auto& [mon, c] : terms_) sum = sum + lift<T>(c) * xp[mon.i] * yp[mon.j];
    return sum;
  }

  BiPoly operator-() const {
    BiPoly r(trunc_);
    r.truncated_ = truncated_;
    for (const auto& [mon, c] : terms_) r.terms_.emplace(mon, S(0) - c);
    return r;
  }

  friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    BiPoly r(std::min(a.trunc_, b.trunc_));
    r.truncated_ = a.truncated_ || b.truncated_;
    for (const auto& [mon, c] : a.terms_) r.add_term(mon.i, mon.j, c);
    for (const auto& [mon, c] : b.terms_) r.add_term(mon.i, mon.j, c);
    return r;
  }

  friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }

  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r(std::min(a.trunc_, b.trunc_));
    r.truncated_ = a.truncated_ || b.truncated_;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma.i + mb.i, ma.j + mb.j, ca * cb);
    return r;
  }

  friend BiPoly operator*(const S& s, const BiPoly& p) {
    BiPoly r(p.trunc_);
    r.truncated_ = p.truncated_;
    for (const auto& [mon, c] : p.terms_) r.add_term(mon.i, mon.j, s * c);
    return r;
  }

  BiPoly& operator+=(const BiPoly& o) { return *this = *this + o; }
  BiPoly& operator-=(const BiPoly& o) { return *this = *this - o; }
  BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }

  /// Equality of the stored terms; truncation metadata is not compared.
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }

 private:
  TermMap terms_;
  int trunc_;
  bool truncated_ = false;
};

template <class S>
BiPoly<S> poly_mul(const BiPoly<S>& p, const BiPoly<S>& q) {
  return p * q;
}

template <class S>
BiPoly<S> pow(const BiPoly<S>& p, int e) {
  BiPoly<S> r = BiPoly<S>::constant(S(1), p.trunc_degree());
  for (int k = 0; k < e; ++k) r = r * p;
  return r;
}

template <class S>
BiPoly<S> d_dx(const BiPoly<S>& p) {
  BiPoly<S> r(p.truncated() ? std::max(p.trunc_degree() - 1, 0) : p.trunc_degree());
  for (const auto& [mon, c] : p.terms())
    if (mon.i > 0) r.add_term(mon.i - 1, mon.j, lift<S>(Rational(mon.i)) * c);
  if (p.truncated()) r.mark_truncated();
  return r;
}

template <class S>
BiPoly<S> d_dy(const BiPoly<S>& p) {
  BiPoly<S> r(p.truncated() ? std::max(p.trunc_degree() - 1, 0) : p.trunc_degree());
  for (const auto& [mon, c] : p.terms())
    if (mon.j > 0) r.add_term(mon.i, mon.j - 1, lift<S>(Rational(mon.j)) * c);
  if (p.truncated()) r.mark_truncated();
  return r;
}

/// x^i y^j * p.
template <class S>
BiPoly<S> shift(const BiPoly<S>& p, int i, int j, int trunc) {
  BiPoly<S> r(trunc);
  if (p.truncated()) r.mark_truncated();
  for (const auto& [mon, c] : p.terms()) r.add_term(mon.i + i, mon.j + j, c);
  return r;
}

/// p(y, x).
template <class S>
BiPoly<S> swap_xy(const BiPoly<S>& p) {
  BiPoly<S> r(p.trunc_degree());
  if (p.truncated()) r.mark_truncated();
  for (const auto& [mon, c] : p.terms()) r.add_term(mon.j, mon.i, c);
  return r;
}

/// p(X, Y) for polynomial arguments over a coefficient ring T that S lifts into.
template <class T, class S>
BiPoly<T> substitute(const BiPoly<S>& p, const BiPoly<T>& X, const BiPoly<T>& Y) {
  const int trunc = std::min(X.trunc_degree(), Y.trunc_degree());
  std::vector<BiPoly<T>> xp{BiPoly<T>::constant(T(1), trunc)};
  std::vector<BiPoly<T>> yp{BiPoly<T>::constant(T(1), trunc)};
  for (int k = 1; k <= p.max_i(); ++k) xp.push_back(xp.back() * X);
  for (int k = 1; k <= p.max_j(); ++k) yp.push_back(yp.back() * Y);
  BiPoly<T> r(trunc);
  for (const auto& [mon, c] : p.terms()) r += lift<T>(c) * (xp[mon.i] * yp[mon.j]);
  if (p.truncated()) r.mark_truncated();
  return r;
}

/// 2x2 products written out; Eigen's mixed-scalar operator lookup does not
/// compile with multiprecision rationals.
template <class S>
Eigen::Matrix<S, 2, 2> mul2(const Eigen::Matrix<S, 2, 2>& a, const Eigen::Matrix<S, 2, 2>& b) {
  Eigen::Matrix<S, 2, 2> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

template <class S>
Eigen::Matrix<S, 2, 1> mul2(const Eigen::Matrix<S, 2, 2>& a, const Eigen::Matrix<S, 2, 1>& v) {
  Eigen::Matrix<S, 2, 1> r;
  for (int i = 0; i < 2; ++i) r(i) = a(i, 0) * v(0) + a(i, 1) * v(1);
  return r;
}

/// Planar field x' = P(x, y), y' = Q(x, y).
template <class S>
struct PlanarVectorField {
  BiPoly<S> P;
  BiPoly<S> Q;

  PlanarVectorField() = default;
  PlanarVectorField(BiPoly<S> p, BiPoly<S> q) : P(std::move(p)), Q(std::move(q)) {
    if (P.trunc_degree() != Q.trunc_degree())
      throw Error(ErrorKind::ModeMismatch, "field components carry different truncation degrees");
  }

  int trunc_degree() const { return P.trunc_degree(); }
  int degree() const { return std::max(P.degree(), Q.degree()); }

  template <class T>
  PlanarVectorField<T> cast() const {
    return {P.template cast<T>(), Q.template cast<T>()};
  }

  /// Jacobian at the origin.
  Eigen::Matrix<S, 2, 2> jacobian0() const {
    Eigen::Matrix<S, 2, 2> J;
    J << P.coeff(1, 0), P.coeff(0, 1), Q.coeff(1, 0), Q.coeff(0, 1);
    return J;
  }

  template <class T>
  Eigen::Matrix<T, 2, 1> operator()(const Eigen::Matrix<T, 2, 1>& p) const {
    return {P(p.x(), p.y()), Q(p.x(), p.y())};
  }

  friend bool operator==(const PlanarVectorField& a, const PlanarVectorField& b) {
    return a.P == b.P && a.Q == b.Q;
  }
};

template <class S>
struct DividedField {
  PlanarVectorField<S> field;
  Monomial divisor;
};

/// Removes the greatest monomial x^i y^j dividing both components.
template <class S>
DividedField<S> poly_divide_monomial(const PlanarVectorField<S>& v) {
  int gi = std::numeric_limits<int>::max();
  int gj = std::numeric_limits<int>::max();
  for (const auto* comp : {&v.P, &v.Q}) {
    for (const auto& [mon, c] : comp->terms()) {
      gi = std::min(gi, mon.i);
      gj = std::min(gj, mon.j);
    }
  }
  if (gi == std::numeric_limits<int>::max()) return {v, {0, 0}};
  const bool lossy = v.P.truncated() || v.Q.truncated();
  const int trunc = lossy ? v.trunc_degree() - gi - gj : v.trunc_degree();
  auto divide = [&](const BiPoly<S>& p) {
    BiPoly<S> r(trunc);
    if (lossy) r.mark_truncated();
    for (const auto& [mon, c] : p.terms()) r.add_term(mon.i - gi, mon.j - gj, c);
    return r;
  };
  return {{divide(v.P), divide(v.Q)}, {gi, gj}};
}

/// Normal-form data x' = y, y' = a x^m + b x^n y + tail.
struct NilpotentModel {
  Rational a;
  int m = 2;
  Rational b;
  int n = 1;
  BiPoly<Rational> tail{kDefaultTrunc};

  NilpotentModel() = default;
  NilpotentModel(Rational a_, int m_, Rational b_, int n_, BiPoly<Rational> tail_ = BiPoly<Rational>());

  bool has_b() const { return b != 0; }
  /// Degree the field needs to be represented without loss.
  int required_degree() const;
  PlanarVectorField<Rational> field(int trunc = kDefaultTrunc) const;
};

}  // namespace nilfrac

#pragma once

// Fractional power series in one variable with an explicit validity bound,
// and the Puiseux-series view used for separatrix asymptotics.

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "nilfrac/bipoly.hpp"

namespace nilfrac {

/// Sum of c_k x^(k/den), known exactly for exponents below limit/den.
/// The limit kExact marks a finite, exactly known sum.
template <class S>
class FracSeries {
 public:
  static constexpr long kExact = std::numeric_limits<long>::max() / 4;

  explicit FracSeries(int den = 1, long limit = kExact) : den_(den), limit_(limit) {
    if (den < 1) throw Error(ErrorKind::InvalidInput, "series denominator must be positive");
  }

  static FracSeries monomial(long k, const S& c, int den = 1) {
    FracSeries s(den);
    s.add(k, c);
    return s;
  }

  int den() const { return den_; }
  long limit() const { return limit_; }
  bool exact() const { return limit_ >= kExact; }
  const std::map<long, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational exponent(long k) const { return Rational(k, den_); }
  std::optional<Rational> limit_exponent() const {
    if (exact()) return std::nullopt;
    return Rational(limit_, den_);
  }

  void add(long k, const S& c) {
    if (k >= limit_ || ScalarTraits<S>::is_zero(c)) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
      return;
    }
    it->second = it->second + c;
    if (ScalarTraits<S>::is_zero(it->second)) terms_.erase(it);
  }

  S coeff(long k) const {
    const auto it = terms_.find(k);
    return it == terms_.end() ? S(0) : it->second;
  }

  /// Lowest exponent numerator present.
  std::optional<long> lowest() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
  }

  /// Lowest exponent that could carry a nonzero term.
  long low_bound() const { return terms_.empty() ? limit_ : terms_.begin()->first; }

  /// Drops everything at or above k.
  void cap(long k) {
    if (k >= limit_) return;
    limit_ = k;
    terms_.erase(terms_.lower_bound(k), terms_.end());
  }

  FracSeries rescaled(int den) const {
    if (den % den_ != 0) throw Error(ErrorKind::InvalidInput, "incompatible series denominators");
    const long f = den / den_;
    FracSeries r(den, exact() ? kExact : limit_ * f);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k * f, c);
    return r;
  }

  FracSeries derivative() const {
    FracSeries r(den_, exact() ? kExact : limit_ - den_);
    for (const auto& [k, c] : terms_)
      if (k != 0) r.add(k - den_, lift<S>(Rational(k, den_)) * c);
    return r;
  }

  double eval(double x) const {
    double sum = 0;
    for (const auto& [k, c] : terms_) sum += to_double(c) * std::pow(x, double(k) / den_);
    return sum;
  }

  FracSeries operator-() const {
    FracSeries r(den_, limit_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, S(0) - c);
    return r;
  }

  friend FracSeries operator+(const FracSeries& a0, const FracSeries& b0) {
    const int den = std::lcm(a0.den_, b0.den_);
    const FracSeries a = a0.rescaled(den);
    const FracSeries b = b0.rescaled(den);
    FracSeries r(den, std::min(a.limit_, b.limit_));
    for (const auto& [k, c] : a.terms_) r.add(k, c);
    for (const auto& [k, c] : b.terms_) r.add(k, c);
    return r;
  }

  friend FracSeries operator-(const FracSeries& a, const FracSeries& b) { return a + (-b); }

  friend FracSeries operator*(const FracSeries& a0, const FracSeries& b0) {
    const int den = std::lcm(a0.den_, b0.den_);
    const FracSeries a = a0.rescaled(den);
    const FracSeries b = b0.rescaled(den);
    const long limit = std::min(sat_add(a.limit_, b.low_bound()), sat_add(b.limit_, a.low_bound()));
    FracSeries r(den, limit);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add(ka + kb, ca * cb);
    return r;
  }

  friend FracSeries operator*(const S& s, const FracSeries& p) {
    FracSeries r(p.den_, p.limit_);
    for (const auto& [k, c] : p.terms_) r.add(k, s * c);
    return r;
  }

 private:
  static long sat_add(long a, long b) { return (a >= kExact || b >= kExact) ? kExact : a + b; }

  int den_;
  long limit_;
  std::map<long, S> terms_;
};

/// x^(k/den) * s.
template <class S>
FracSeries<S> shift_series(const FracSeries<S>& s, long k) {
  FracSeries<S> r(s.den(), s.exact() ? FracSeries<S>::kExact : s.limit() + k);
  for (const auto& [e, c] : s.terms()) r.add(e + k, c);
  return r;
}

/// p(x, s(x)) for a polynomial p and series s with positive leading exponent.
/// Terms whose exponent reaches `cap` (in units of 1/s.den()) are dropped.
template <class S, class R>
FracSeries<S> compose(const BiPoly<R>& p, const FracSeries<S>& s, long cap = FracSeries<S>::kExact) {
  const int den = s.den();
  if (s.low_bound() <= 0) throw Error(ErrorKind::InvalidInput, "series must vanish at the origin");
  FracSeries<S> power = FracSeries<S>::monomial(0, S(1), den);
  std::vector<FracSeries<S>> powers{power};
  for (int j = 1; j <= p.max_j(); ++j) {
    power = power * s;
    power.cap(cap);
    powers.push_back(power);
  }
  long limit = cap;
  if (p.truncated()) limit = std::min(limit, long(p.trunc_degree() + 1) * std::min<long>(den, s.low_bound()));
  FracSeries<S> r(den, limit);
  for (const auto& [mon, c] : p.terms()) {
    r = r + shift_series(lift<S>(c) * powers[mon.j], long(mon.i) * den);
  }
  r.cap(limit);
  return r;
}

/// y = sum_j c_j x^(gamma + j*step) + O(x^order). A missing order marks an
/// exact finite sum.
template <class S>
struct PuiseuxSeries {
  Rational gamma;
  Rational step;
  std::vector<S> coeffs;
  std::optional<Rational> order;

  PuiseuxSeries() = default;
  PuiseuxSeries(Rational g, Rational d, std::vector<S> c, std::optional<Rational> o = std::nullopt)
      : gamma(std::move(g)), step(std::move(d)), coeffs(std::move(c)), order(std::move(o)) {
    validate();
    if (!order) order = gamma + step * Rational(int(coeffs.size()));
  }

  /// Finite sum with no remainder term.
  static PuiseuxSeries exact_sum(Rational g, Rational d, std::vector<S> c) {
    PuiseuxSeries s(std::move(g), std::move(d), std::move(c));
    s.order.reset();
    return s;
  }

  void validate() const {
    if (step <= 0) throw Error(ErrorKind::InvalidInput, "Puiseux step must be positive");
    if (numerator(step) != 1) throw Error(ErrorKind::InvalidInput, "Puiseux step must be 1/q");
    if (denominator(gamma * Rational(denominator(step))) != 1)
      throw Error(ErrorKind::InvalidInput, "mixed-denominator Puiseux series");
    if (coeffs.empty() || ScalarTraits<S>::is_zero(coeffs.front()))
      throw Error(ErrorKind::InvalidInput, "leading Puiseux coefficient must be nonzero");
  }

  int den() const { return int(denominator(step)); }
  Rational exponent(std::size_t j) const { return gamma + step * Rational(int(j)); }

  FracSeries<S> to_frac() const {
    const int q = den();
    const long g = long(numerator(gamma * Rational(q)));
    FracSeries<S> s(q, order ? long(numerator(*order * Rational(q))) : FracSeries<S>::kExact);
    for (std::size_t j = 0; j < coeffs.size(); ++j) s.add(g + long(j), coeffs[j]);
    return s;
  }

  static PuiseuxSeries from_frac(const FracSeries<S>& s) {
    const auto low = s.lowest();
    if (!low) throw Error(ErrorKind::ExponentOverflow, "no terms below the truncation order");
    const long hi = s.exact() ? s.terms().rbegin()->first : s.limit() - 1;
    std::vector<S> c;
    for (long k = *low; k <= hi; ++k) c.push_back(s.coeff(k));
    PuiseuxSeries r(Rational(*low, s.den()), Rational(1, s.den()), std::move(c),
                    s.limit_exponent());
    if (s.exact()) r.order.reset();
    return r;
  }

  template <class T>
  PuiseuxSeries<T> cast() const {
    std::vector<T> c;
    for (const auto& v : coeffs) c.push_back(lift<T>(v));
    PuiseuxSeries<T> r(gamma, step, std::move(c), order);
    r.order = order;
    return r;
  }

  double eval(double x) const {
    double sum = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      sum += to_double(coeffs[j]) * std::pow(x, to_double(exponent(j)));
    return sum;
  }

  double eval_derivative(double x) const {
    double sum = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const double e = to_double(exponent(j));
      sum += to_double(coeffs[j]) * e * std::pow(x, e - 1);
    }
    return sum;
  }
};

enum class Axis { X, Y };

/// Axis::Y substitutes y = s(x); Axis::X substitutes x = s(y) and reports the
/// result as a series in y.
template <class S, class R>
PuiseuxSeries<S> poly_compose_series(const BiPoly<R>& p, const PuiseuxSeries<S>& s, Axis var = Axis::Y) {
  if (s.gamma <= 0) throw Error(ErrorKind::InvalidInput, "series must have a positive leading exponent");
  const BiPoly<R> q = var == Axis::Y ? p : swap_xy(p);
  return PuiseuxSeries<S>::from_frac(compose(q, s.to_frac()));
}

}  // namespace nilfrac

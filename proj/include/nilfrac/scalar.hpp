#pragma once

// Coefficient scalars: exact rationals, quadratic surds over the rationals,
// and binary floats, plus the traits the polynomial templates rely on.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include "nilfrac/error.hpp"

namespace nilfrac {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Parses "7", "-3/4" or a finite decimal such as "0.05" into an exact rational.
Rational parse_rational(std::string_view text);

/// "3/4", "-2", "0".
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline int sign(const Rational& r) { return r.sign(); }

/// Integer power with a non-negative exponent.
template <class S>
S ipow(S base, int e) {
  S result(1);
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

/// p + q*sqrt(d) with p, q rational and d a square-free integer > 1; d == 0
/// marks a plain rational (q == 0). Elements of different radicands can only
/// be combined when one of them is rational.
class QuadSurd {
 public:
  QuadSurd() = default;
  QuadSurd(int v) : p_(v) {}  // NOLINT(google-explicit-constructor)
  QuadSurd(Rational v) : p_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  QuadSurd(Rational p, Rational q, BigInt d);

  /// sqrt(r) for r >= 0, normalized so the radicand is square free.
  static QuadSurd sqrt(const Rational& r);

  const Rational& rational_part() const { return p_; }
  const Rational& radical_coeff() const { return q_; }
  const BigInt& radicand() const { return d_; }
  bool is_rational() const { return q_ == 0; }

  int sign() const;
  double to_double() const;
  std::string str() const;

  QuadSurd operator-() const { return {-p_, -q_, d_}; }
  friend QuadSurd operator+(const QuadSurd& a, const QuadSurd& b);
  friend QuadSurd operator-(const QuadSurd& a, const QuadSurd& b) { return a + (-b); }
  friend QuadSurd operator*(const QuadSurd& a, const QuadSurd& b);
  friend QuadSurd operator/(const QuadSurd& a, const QuadSurd& b);
  QuadSurd& operator+=(const QuadSurd& o) { return *this = *this + o; }
  QuadSurd& operator-=(const QuadSurd& o) { return *this = *this - o; }
  QuadSurd& operator*=(const QuadSurd& o) { return *this = *this * o; }
  friend bool operator==(const QuadSurd& a, const QuadSurd& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && (a.q_ == 0 || a.d_ == b.d_);
  }
  friend bool operator!=(const QuadSurd& a, const QuadSurd& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const QuadSurd& s) { return os << s.str(); }

 private:
  void normalize();
  static BigInt common_radicand(const QuadSurd& a, const QuadSurd& b);

  Rational p_{0};
  Rational q_{0};
  BigInt d_{0};
};

inline double to_double(const QuadSurd& s) { return s.to_double(); }
inline double to_double(double v) { return v; }
inline int sign(const QuadSurd& s) { return s.sign(); }
inline int sign(double v) { return (v > 0) - (v < 0); }
std::string to_string(const QuadSurd& s);
std::string to_string(double v);

/// Per-scalar hooks used by the polynomial and series templates.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& v) { return v == 0; }
  static Rational from_rational(const Rational& r) { return r; }
};

template <>
struct ScalarTraits<QuadSurd> {
  static constexpr bool exact = true;
  static bool is_zero(const QuadSurd& v) { return v.rational_part() == 0 && v.is_rational(); }
  static QuadSurd from_rational(const Rational& r) { return QuadSurd(r); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double v) { return v == 0.0; }
  static double from_rational(const Rational& r) { return to_double(r); }
};

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

/// Converts between coefficient modes. Exact-to-float is lossy; float-to-exact
/// is rejected.
template <class To, class From>
To scalar_cast(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (std::is_same_v<To, double>) {
    return to_double(v);
  } else if constexpr (std::is_same_v<To, QuadSurd> && std::is_same_v<From, Rational>) {
    return QuadSurd(v);
  } else {
    static_assert(!std::is_same_v<From, double>, "float coefficients cannot become exact");
    static_assert(!std::is_same_v<From, QuadSurd> || !std::is_same_v<To, Rational>,
                  "use QuadSurd::rational_part explicitly");
    return To(v);
  }
}

}  // namespace nilfrac

namespace Eigen {

template <>
struct NumTraits<nilfrac::Rational> : GenericNumTraits<nilfrac::Rational> {
  using Real = nilfrac::Rational;
  using NonInteger = nilfrac::Rational;
  using Nested = nilfrac::Rational;
  using Literal = nilfrac::Rational;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 64
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

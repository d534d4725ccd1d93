#include "nilfrac/scalar.hpp"

#include <sstream>

namespace nilfrac {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::ModeMismatch: return "coefficient mode mismatch";
    case ErrorKind::NotNilpotent: return "linear part not nilpotent";
    case ErrorKind::Undecidable: return "undecidable at this jet";
    case ErrorKind::Monodromic: return "monodromic input";
    case ErrorKind::NonTriangular: return "non-triangular recursion";
    case ErrorKind::ExponentOverflow: return "exponent overflow";
    case ErrorKind::StepUnderflow: return "step size underflow";
    case ErrorKind::LeftDomain: return "left integration domain";
    case ErrorKind::InsufficientRange: return "insufficient scale range";
    case ErrorKind::MemoryBound: return "memory bound exceeded";
    case ErrorKind::Io: return "i/o";
  }
  return "unknown";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    t = b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty rational literal");
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      std::string num = s.substr(0, slash);
      std::string den = s.substr(slash + 1);
      trim(num);
      trim(den);
      const BigInt d(den);
      if (d == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + s + "'");
      return Rational(BigInt(num), d);
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      const bool negative = !s.empty() && s[0] == '-';
      std::string whole = s.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
      std::string frac = s.substr(dot + 1);
      if (whole.empty()) whole = "0";
      if (frac.find_first_not_of("0123456789") != std::string::npos ||
          whole.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorKind::InvalidInput, "malformed decimal '" + s + "'");
      }
      BigInt scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Rational r(BigInt(whole + frac), scale);
      return negative ? Rational(-r) : r;
    }
    return Rational(BigInt(s));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "malformed rational '" + s + "'");
  }
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

std::string to_string(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

namespace {

// Largest k with k*k dividing n (trial division; radicands here are small).
BigInt square_part(BigInt n, BigInt& rest) {
  BigInt root = 1;
  for (BigInt f = 2; f * f <= n && f < 100000; ++f) {
    while (n % (f * f) == 0) {
      n /= f * f;
      root *= f;
    }
  }
  rest = n;
  return root;
}

}  // namespace

QuadSurd::QuadSurd(Rational p, Rational q, BigInt d) : p_(std::move(p)), q_(std::move(q)), d_(std::move(d)) {
  normalize();
}

void QuadSurd::normalize() {
  if (q_ == 0) {
    d_ = 0;
    return;
  }
  if (d_ < 0) throw Error(ErrorKind::InvalidInput, "negative radicand");
  BigInt rest;
  const BigInt root = square_part(d_, rest);
  q_ *= Rational(root);
  d_ = rest;
  if (d_ == 1) {
    p_ += q_;
    q_ = 0;
    d_ = 0;
  } else if (d_ == 0) {
    q_ = 0;
  }
}

QuadSurd QuadSurd::sqrt(const Rational& r) {
  if (r < 0) throw Error(ErrorKind::InvalidInput, "square root of negative rational " + nilfrac::to_string(r));
  if (r == 0) return QuadSurd();
  // sqrt(a/b) = sqrt(a*b)/b
  const BigInt a = numerator(r);
  const BigInt b = denominator(r);
  return QuadSurd(0, Rational(BigInt(1), b), a * b);
}

BigInt QuadSurd::common_radicand(const QuadSurd& a, const QuadSurd& b) {
  if (a.q_ == 0) return b.d_;
  if (b.q_ == 0 || a.d_ == b.d_) return a.d_;
  throw Error(ErrorKind::ModeMismatch,
              "surds with radicands " + a.d_.str() + " and " + b.d_.str() + " cannot be combined");
}

QuadSurd operator+(const QuadSurd& a, const QuadSurd& b) {
  const BigInt d = QuadSurd::common_radicand(a, b);
  return {a.p_ + b.p_, a.q_ + b.q_, d};
}

QuadSurd operator*(const QuadSurd& a, const QuadSurd& b) {
  const BigInt d = QuadSurd::common_radicand(a, b);
  return {a.p_ * b.p_ + a.q_ * b.q_ * Rational(d), a.p_ * b.q_ + a.q_ * b.p_, d};
}

QuadSurd operator/(const QuadSurd& a, const QuadSurd& b) {
  const BigInt d = QuadSurd::common_radicand(a, b);
  const Rational norm = b.p_ * b.p_ - b.q_ * b.q_ * Rational(d);
  if (norm == 0) throw Error(ErrorKind::InvalidInput, "division by zero surd");
  const QuadSurd conj(b.p_ / norm, -b.q_ / norm, d);
  return a * conj;
}

int QuadSurd::sign() const {
  const int sp = p_.sign();
  const int sq = q_.sign();
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // opposite signs: compare p^2 with q^2 d
  const Rational lhs = p_ * p_;
  const Rational rhs = q_ * q_ * Rational(d_);
  if (lhs == rhs) return 0;
  return lhs > rhs ? sp : sq;
}

double QuadSurd::to_double() const {
  return p_.convert_to<double>() + q_.convert_to<double>() * std::sqrt(d_.convert_to<double>());
}

std::string QuadSurd::str() const {
  if (q_ == 0) return nilfrac::to_string(p_);
  std::string radical = nilfrac::to_string(q_) + "*sqrt(" + d_.str() + ")";
  if (q_ == 1) radical = "sqrt(" + d_.str() + ")";
  if (q_ == -1) radical = "-sqrt(" + d_.str() + ")";
  if (p_ == 0) return radical;
  if (q_ > 0) return nilfrac::to_string(p_) + " + " + radical;
  return nilfrac::to_string(p_) + " - " + QuadSurd(0, -q_, d_).str();
}

std::string to_string(const QuadSurd& s) { return s.str(); }

}  // namespace nilfrac

#include "nilfrac/bipoly.hpp"

namespace nilfrac {

NilpotentModel::NilpotentModel(Rational a_, int m_, Rational b_, int n_, BiPoly<Rational> tail_)
    : a(std::move(a_)), m(m_), b(std::move(b_)), n(n_), tail(std::move(tail_)) {
  if (a == 0) throw Error(ErrorKind::InvalidInput, "model coefficient a must be nonzero");
  if (m < 2) throw Error(ErrorKind::InvalidInput, "model exponent m must be at least 2");
  if (b != 0 && n < 1) throw Error(ErrorKind::InvalidInput, "model exponent n must be at least 1");
  for (const auto& [mon, c] : tail.terms()) {
    const bool ok = (mon.j == 0 && mon.i > m) || (mon.j == 1 && b != 0 && mon.i > n) || mon.j >= 2;
    if (!ok) {
      throw Error(ErrorKind::InvalidInput, "tail term x^" + std::to_string(mon.i) + " y^" +
                                               std::to_string(mon.j) + " is not of higher order");
    }
  }
}

int NilpotentModel::required_degree() const {
  int d = m;
  if (b != 0) d = std::max(d, n + 1);
  if (!tail.is_zero()) d = std::max(d, tail.degree());
  return d;
}

PlanarVectorField<Rational> NilpotentModel::field(int trunc) const {
  trunc = std::max(trunc, required_degree());
  BiPoly<Rational> P = BiPoly<Rational>::y(trunc);
  BiPoly<Rational> Q(trunc);
  Q.add_term(m, 0, a);
  if (b != 0) Q.add_term(n, 1, b);
  Q += tail.with_trunc(trunc);
  return {P, Q};
}

}  // namespace nilfrac

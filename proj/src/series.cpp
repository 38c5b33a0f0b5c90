#include "pisums/series.hpp"

namespace pisums {

Rational scalar_pow(const Rational& x, const Rational& r) {
  if (x == 1) return Rational(1);
  if (x <= 0) throw DomainError("rational power of a non-positive constant term");
  const Integer p = r.get_num();
  const unsigned long q = r.get_den().get_ui();
  auto exact_root = [q](const Integer& v) {
    Integer out;
    if (mpz_root(out.get_mpz_t(), v.get_mpz_t(), q) == 0) throw DomainError("constant term is not an exact power");
    return out;
  };
  Rational base(exact_root(x.get_num()), exact_root(x.get_den()));
  Rational out(1);
  const long e = p.get_si();
  for (long i = 0; i < (e < 0 ? -e : e); ++i) out *= base;
  return e < 0 ? Rational(1) / out : out;
}

Real scalar_pow(const Real& x, const Rational& r) {
  if (!(x > 0)) throw DomainError("rational power of a non-positive constant term");
  return pow(x, Real(r, x.prec()));
}

QuadExt scalar_pow(const QuadExt& x, const Rational& r) {
  if (!x.is_rational()) throw DomainError("rational power of an irrational quadratic constant term");
  if (r.get_den() == 2 && x.a() > 0) {
    return pow(QuadExt::sqrt_of(x.a()), r.get_num().get_si());
  }
  return QuadExt(scalar_pow(x.a(), r));
}

Complex scalar_pow(const Complex& x, const Rational& r) {
  Complex l = log(x);
  Real rr(r, x.prec());
  return exp(Complex(l.re * rr, l.im * rr));
}

}  // namespace pisums

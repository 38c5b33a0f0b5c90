// Arbitrary-precision scalars: MPFR-backed reals, complex pairs, GMP rationals,
// and exact quadratic-field elements a + b*sqrt(D).
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pisums {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside an operation's domain (poles, unsupported moduli, bad couples).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested precision could not be reached within the term/node budget.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

using Rational = mpq_class;
using Integer = mpz_class;

// a/b in lowest terms.
inline Rational make_rational(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

struct PrecisionContext {
  int target_digits = 30;
  int guard_digits = 10;

  PrecisionContext() = default;
  PrecisionContext(int target, int guard = 10);

  int working_digits() const { return target_digits + guard_digits; }
  mpfr_prec_t bits() const;
  PrecisionContext with_extra(int digits) const {
    return PrecisionContext(target_digits + digits, guard_digits);
  }
};

mpfr_prec_t digits_to_bits(int digits);

class Real {
 public:
  Real() : Real(mpfr_prec_t{64}) {}
  explicit Real(mpfr_prec_t bits);
  Real(long v, mpfr_prec_t bits);
  Real(const Rational& q, mpfr_prec_t bits);
  Real(const Integer& z, mpfr_prec_t bits);
  Real(std::string_view decimal, mpfr_prec_t bits);
  static Real from_double(double d, mpfr_prec_t bits);

  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  Real& operator=(long v);
  ~Real();

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  // Re-round to another precision.
  Real with_prec(mpfr_prec_t bits) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator+=(long o);
  Real& operator-=(long o);
  Real& operator*=(long o);
  Real& operator/=(long o);

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  // Decimal exponent e with 10^(e-1) <= |x| < 10^e roughly; for zero returns a large negative.
  long log10_abs() const;
  // Scientific notation with the given number of significant digits.
  std::string to_string(int digits) const;
  // Fixed notation truncated to the given number of fractional digits.
  std::string to_fixed(int frac_digits) const;

 private:
  mpfr_t v_;
};

Real operator-(const Real& a);
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator+(long a, const Real& b);
Real operator-(long a, const Real& b);
Real operator*(long a, const Real& b);
Real operator/(long a, const Real& b);

bool operator==(const Real& a, const Real& b);
std::partial_ordering operator<=>(const Real& a, const Real& b);
bool operator==(const Real& a, long b);
std::partial_ordering operator<=>(const Real& a, long b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real cbrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log10(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real root(const Real& x, unsigned long k);
Real sin(const Real& x);
Real cos(const Real& x);
Real tan(const Real& x);
Real cot(const Real& x);
Real atan(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real asinh(const Real& x);
Real atan2(const Real& y, const Real& x);
Real floor(const Real& x);
Real round(const Real& x);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real fma(const Real& a, const Real& b, const Real& c);  // a*b + c

// acc += a*b without temporaries.
void add_mul(Real& acc, const Real& a, const Real& b);

Real pi(mpfr_prec_t bits);
Real euler_gamma(mpfr_prec_t bits);
Real zeta_int(unsigned long s, mpfr_prec_t bits);
Real ln_int(unsigned long k, mpfr_prec_t bits);

// Named constants: pi, zeta3, euler_gamma, ln_int(k) (as "ln_int(k)" or "ln<k>").
Real eval_constant(std::string_view name, const PrecisionContext& ctx);

Real gamma(const Real& x);
Real digamma(const Real& x);
Real lgamma_abs(const Real& x);

// Hurwitz zeta by Euler-Maclaurin with the first-omitted-term bound.
Real hurwitz_zeta(int s, const Rational& a, const PrecisionContext& ctx);
Real hurwitz_zeta(int s, const Rational& a, mpfr_prec_t bits);

// Legendre symbol (a/p) for odd prime p.
int legendre_symbol(long a, long p);
// L(chi_p, s) for the quadratic character modulo an odd prime p.
Real dirichlet_L_quadratic(long modulus, int s, const PrecisionContext& ctx);

// theta2/4 and theta3 at a real nome with |q| < 1: theta2(q) = 2 q^{1/4} psi(q)
// needs q > 0; psi(q) = sum q^{n(n+1)} and theta3 work for negative q too.
Real theta2(const Real& q, const PrecisionContext& ctx);
Real theta3(const Real& q, const PrecisionContext& ctx);
Real theta_psi(const Real& q, const PrecisionContext& ctx);
// lambda = theta2^4/theta3^4 = 16 q psi(q)^4 / theta3(q)^4; valid for -1 < q < 1.
Real lambda_from_nome(const Real& q, const PrecisionContext& ctx);
// lambda(t) at q = exp(-pi t), t > 0.
Real lambda_modular(const Real& t, const PrecisionContext& ctx);

// Exact Bernoulli numbers B_0..B_n (B_1 = -1/2), cached.
const Rational& bernoulli(int n);

// ---------------------------------------------------------------------------

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(const Real& r) : re(r), im(r.prec()) {}

  mpfr_prec_t prec() const { return re.prec(); }
  Complex conj() const { return Complex(re, -im); }
  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator*=(const Real& o);
  Complex& operator/=(const Complex& o);
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

Complex operator-(const Complex& a);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator+(const Complex& a, long b);
Complex operator*(const Complex& a, long b);
Complex operator-(long a, const Complex& b);

Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex polar(const Real& r, const Real& theta);
// acc += a*b.
void add_mul(Complex& acc, const Complex& a, const Complex& b);

// log Gamma(z) for Re z > 0 (principal branch continuous in the right half plane).
Complex lgamma(const Complex& z);

// ---------------------------------------------------------------------------

// Exact element a + b*sqrt(D) of Q(sqrt D); D squarefree, D = 1 means rational.
class QuadExt {
 public:
  QuadExt() : a_(0), b_(0), d_(1) {}
  QuadExt(long v) : a_(v), b_(0), d_(1) {}  // NOLINT(google-explicit-constructor)
  QuadExt(const Rational& a) : a_(a), b_(0), d_(1) {}  // NOLINT
  QuadExt(const Rational& a, const Rational& b, long D);
  // sqrt of a non-negative rational, exact when it lands in a quadratic field.
  static QuadExt sqrt_of(const Rational& r);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long D() const { return d_; }
  bool is_rational() const { return b_ == 0; }
  Rational as_rational() const;

  QuadExt conj() const { return QuadExt(a_, -b_, d_); }
  Rational norm() const { return a_ * a_ - b_ * b_ * d_; }
  int sign() const;

  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);

  Real to_real(mpfr_prec_t bits) const;
  std::string to_string() const;

  friend bool operator==(const QuadExt& x, const QuadExt& y);

 private:
  void normalize();
  static long common_field(const QuadExt& x, const QuadExt& y);
  Rational a_, b_;
  long d_;
};

QuadExt operator-(const QuadExt& x);
QuadExt operator+(const QuadExt& x, const QuadExt& y);
QuadExt operator-(const QuadExt& x, const QuadExt& y);
QuadExt operator*(const QuadExt& x, const QuadExt& y);
QuadExt operator/(const QuadExt& x, const QuadExt& y);
QuadExt pow(const QuadExt& x, long n);
std::partial_ordering operator<=>(const QuadExt& x, const QuadExt& y);

// Split r = k^2 * s with s squarefree; returns (k, s) for a positive integer r.
std::pair<Integer, Integer> squarefree_split(const Integer& r);

}  // namespace pisums

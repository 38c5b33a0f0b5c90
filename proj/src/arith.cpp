#include "pisums/arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace pisums {

namespace {
constexpr mpfr_rnd_t RND = MPFR_RNDN;

mpfr_prec_t max_prec(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }
}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw DomainError("empty rational literal");
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den)) throw DomainError("malformed rational '" + std::string(text) + "'");
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

PrecisionContext::PrecisionContext(int target, int guard) : target_digits(target), guard_digits(guard) {
  if (target < 10) throw DomainError("target_digits must be at least 10");
  if (guard < 0) throw DomainError("guard_digits must be non-negative");
}

mpfr_prec_t PrecisionContext::bits() const { return digits_to_bits(working_digits()); }

// ---------------------------------------------------------------------------
// Real

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}
Real::Real(long v, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, v, RND);
}
Real::Real(const Rational& q, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, q.get_mpq_t(), RND);
}
Real::Real(const Integer& z, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_z(v_, z.get_mpz_t(), RND);
}
Real::Real(std::string_view decimal, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  std::string s(decimal);
  char* end = nullptr;
  if (mpfr_strtofr(v_, s.c_str(), &end, 10, RND), end == s.c_str() || *end != '\0') {
    mpfr_clear(v_);
    throw DomainError("malformed decimal literal '" + s + "'");
  }
}
Real Real::from_double(double d, mpfr_prec_t bits) {
  Real r(bits);
  mpfr_set_d(r.v_, d, RND);
  return r;
}
Real::Real(const Real& o) {
  mpfr_init2(v_, o.prec());
  mpfr_set(v_, o.v_, RND);
}
Real::Real(Real&& o) noexcept {
  // Steal the limbs and leave o as a valid minimal value.
  v_[0] = o.v_[0];
  mpfr_init2(o.v_, MPFR_PREC_MIN);
}
Real& Real::operator=(const Real& o) {
  if (this != &o) {
    if (prec() != o.prec()) mpfr_set_prec(v_, o.prec());
    mpfr_set(v_, o.v_, RND);
  }
  return *this;
}
Real& Real::operator=(Real&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}
Real& Real::operator=(long v) {
  mpfr_set_si(v_, v, RND);
  return *this;
}
Real::~Real() { mpfr_clear(v_); }

Real Real::with_prec(mpfr_prec_t bits) const {
  Real r(bits);
  mpfr_set(r.v_, v_, RND);
  return r;
}

namespace {
// Grow the destination precision when a more precise operand arrives.
void widen(Real& a, const Real& b) {
  if (b.prec() > a.prec()) mpfr_prec_round(a.get(), b.prec(), RND);
}
}  // namespace

Real& Real::operator+=(const Real& o) {
  widen(*this, o);
  mpfr_add(v_, v_, o.v_, RND);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  widen(*this, o);
  mpfr_sub(v_, v_, o.v_, RND);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  widen(*this, o);
  mpfr_mul(v_, v_, o.v_, RND);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  widen(*this, o);
  mpfr_div(v_, v_, o.v_, RND);
  return *this;
}
Real& Real::operator+=(long o) {
  mpfr_add_si(v_, v_, o, RND);
  return *this;
}
Real& Real::operator-=(long o) {
  mpfr_sub_si(v_, v_, o, RND);
  return *this;
}
Real& Real::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, RND);
  return *this;
}
Real& Real::operator/=(long o) {
  mpfr_div_si(v_, v_, o, RND);
  return *this;
}

long Real::log10_abs() const {
  if (is_zero()) return -1000000000L;
  if (!is_finite()) return 1000000000L;
  long e = mpfr_get_exp(v_);  // |x| in [2^(e-1), 2^e)
  return static_cast<long>(std::floor(e * 0.30102999566398120));
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (is_zero()) return "0";
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(std::max(digits, 1)), v_, RND);
  std::string m(s);
  mpfr_free_str(s);
  std::string sign_str;
  if (m[0] == '-') {
    sign_str = "-";
    m.erase(0, 1);
  }
  std::string out = sign_str + m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  long exp10 = static_cast<long>(e) - 1;
  if (exp10 != 0) out += "e" + std::to_string(exp10);
  return out;
}

std::string Real::to_fixed(int frac_digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*RNf", frac_digits, v_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

Real operator-(const Real& a) {
  Real r(a.prec());
  mpfr_neg(r.get(), a.get(), RND);
  return r;
}
Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_add(r.get(), a.get(), b.get(), RND);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), RND);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), RND);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_div(r.get(), a.get(), b.get(), RND);
  return r;
}
Real operator+(const Real& a, long b) {
  Real r(a.prec());
  mpfr_add_si(r.get(), a.get(), b, RND);
  return r;
}
Real operator-(const Real& a, long b) {
  Real r(a.prec());
  mpfr_sub_si(r.get(), a.get(), b, RND);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r(a.prec());
  mpfr_mul_si(r.get(), a.get(), b, RND);
  return r;
}
Real operator/(const Real& a, long b) {
  Real r(a.prec());
  mpfr_div_si(r.get(), a.get(), b, RND);
  return r;
}
Real operator+(long a, const Real& b) { return b + a; }
Real operator-(long a, const Real& b) {
  Real r(b.prec());
  mpfr_si_sub(r.get(), a, b.get(), RND);
  return r;
}
Real operator*(long a, const Real& b) { return b * a; }
Real operator/(long a, const Real& b) {
  Real r(b.prec());
  mpfr_si_div(r.get(), a, b.get(), RND);
  return r;
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.get(), b.get())) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.get(), b.get());
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}
bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.get(), b) == 0; }
std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.get())) return std::partial_ordering::unordered;
  int c = mpfr_cmp_si(a.get(), b);
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

#define PISUMS_UNARY(name, fn)          \
  Real name(const Real& x) {            \
    Real r(x.prec());                   \
    fn(r.get(), x.get(), RND);          \
    return r;                           \
  }
PISUMS_UNARY(abs, mpfr_abs)
PISUMS_UNARY(sqrt, mpfr_sqrt)
PISUMS_UNARY(cbrt, mpfr_cbrt)
PISUMS_UNARY(exp, mpfr_exp)
PISUMS_UNARY(log, mpfr_log)
PISUMS_UNARY(log10, mpfr_log10)
PISUMS_UNARY(sin, mpfr_sin)
PISUMS_UNARY(cos, mpfr_cos)
PISUMS_UNARY(tan, mpfr_tan)
PISUMS_UNARY(cot, mpfr_cot)
PISUMS_UNARY(atan, mpfr_atan)
PISUMS_UNARY(sinh, mpfr_sinh)
PISUMS_UNARY(cosh, mpfr_cosh)
PISUMS_UNARY(asinh, mpfr_asinh)
PISUMS_UNARY(gamma, mpfr_gamma)
PISUMS_UNARY(digamma, mpfr_digamma)
#undef PISUMS_UNARY

Real floor(const Real& x) {
  Real r(x.prec());
  mpfr_floor(r.get(), x.get());
  return r;
}
Real round(const Real& x) {
  Real r(x.prec());
  mpfr_round(r.get(), x.get());
  return r;
}
Real lgamma_abs(const Real& x) {
  Real r(x.prec());
  int sgn = 0;
  mpfr_lgamma(r.get(), &sgn, x.get(), RND);
  return r;
}
Real pow(const Real& x, const Real& y) {
  Real r(max_prec(x, y));
  mpfr_pow(r.get(), x.get(), y.get(), RND);
  return r;
}
Real pow(const Real& x, long n) {
  Real r(x.prec());
  mpfr_pow_si(r.get(), x.get(), n, RND);
  return r;
}
Real root(const Real& x, unsigned long k) {
  Real r(x.prec());
  mpfr_rootn_ui(r.get(), x.get(), k, RND);
  return r;
}
Real atan2(const Real& y, const Real& x) {
  Real r(max_prec(x, y));
  mpfr_atan2(r.get(), y.get(), x.get(), RND);
  return r;
}
Real ldexp(const Real& x, long e) {
  Real r(x.prec());
  mpfr_mul_2si(r.get(), x.get(), e, RND);
  return r;
}
Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
Real fma(const Real& a, const Real& b, const Real& c) {
  Real r(std::max(max_prec(a, b), c.prec()));
  mpfr_fma(r.get(), a.get(), b.get(), c.get(), RND);
  return r;
}
void add_mul(Real& acc, const Real& a, const Real& b) {
  mpfr_fma(acc.get(), a.get(), b.get(), acc.get(), RND);
}

Real pi(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_pi(r.get(), RND);
  return r;
}
Real euler_gamma(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_euler(r.get(), RND);
  return r;
}
Real zeta_int(unsigned long s, mpfr_prec_t bits) {
  Real r(bits);
  mpfr_zeta_ui(r.get(), s, RND);
  return r;
}
Real ln_int(unsigned long k, mpfr_prec_t bits) {
  if (k == 0) throw DomainError("ln_int(0)");
  Real r(bits);
  mpfr_log_ui(r.get(), k, RND);
  return r;
}

Real eval_constant(std::string_view name, const PrecisionContext& ctx) {
  const auto bits = ctx.bits();
  if (name == "pi") return pi(bits);
  if (name == "zeta3") return zeta_int(3, bits);
  if (name == "euler_gamma") return euler_gamma(bits);
  std::string n(name);
  std::string arg;
  if (n.rfind("ln_int(", 0) == 0 && n.back() == ')') {
    arg = n.substr(7, n.size() - 8);
  } else if (n.rfind("ln", 0) == 0 && n.size() > 2) {
    arg = n.substr(2);
  }
  if (!arg.empty() && std::all_of(arg.begin(), arg.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return ln_int(std::stoul(arg), bits);
  }
  throw DomainError("unknown constant '" + n + "'");
}

// ---------------------------------------------------------------------------

const Rational& bernoulli(int n) {
  static std::mutex mu;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(cache.size()) <= n) {
    // sum_{k=0}^{m} C(m+1,k) B_k = 0
    const int m = static_cast<int>(cache.size());
    Rational acc = 0;
    Integer binom = 1;  // C(m+1, 0)
    for (int k = 0; k < m; ++k) {
      acc += binom * cache[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    cache.push_back(-acc / Rational(m + 1));
  }
  return cache[static_cast<size_t>(n)];
}

Real hurwitz_zeta(int s, const Rational& a, const PrecisionContext& ctx) { return hurwitz_zeta(s, a, ctx.bits()); }

Real hurwitz_zeta(int s, const Rational& a, mpfr_prec_t bits) {
  if (s < 2) throw DomainError("hurwitz_zeta needs integer s >= 2");
  if (a <= 0 || a > 1) throw DomainError("hurwitz_zeta needs 0 < a <= 1");
  const int digits = static_cast<int>(bits / 3.32) + 5;
  const Real eps = pow(Real(10, bits), -digits);
  const Real ar(a, bits);
  long n_direct = std::max(10, digits / 2);
  for (int attempt = 0; attempt < 8; ++attempt, n_direct *= 2) {
    Real sum(bits);
    for (long k = 0; k < n_direct; ++k) sum += pow(ar + k, -s);
    const Real x = ar + n_direct;
    sum += pow(x, 1 - s) / (s - 1);
    sum += pow(x, -s) / 2;
    // Correction terms B_{2j}/(2j)! * (s)_{2j-1} * x^{-s-2j+1}; remainder bounded by the first omitted term.
    Real poch(static_cast<long>(s), bits);  // (s)_{2j-1}, starts at j=1: (s)_1 = s
    Real fact(2, bits);                     // (2j)!
    Real xpow = pow(x, -s - 1);
    const Real xinv2 = 1 / (x * x);
    Real prev_mag(bits);
    bool converged = false;
    for (int j = 1; j < 4 * digits + 40; ++j) {
      Real term = Real(bernoulli(2 * j), bits) / fact * poch * xpow;
      Real mag = abs(term);
      if (mag < eps * abs(sum)) {
        converged = true;
        break;
      }
      if (j > 2 && mag > prev_mag) break;  // asymptotic series turned; enlarge n_direct
      sum += term;
      prev_mag = mag;
      poch *= (s + 2 * j - 1);
      poch *= (s + 2 * j);
      fact *= (2 * j + 1);
      fact *= (2 * j + 2);
      xpow *= xinv2;
    }
    if (converged) return sum;
  }
  throw PrecisionError("hurwitz_zeta: Euler-Maclaurin did not reach target precision");
}

int legendre_symbol(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  Integer r;
  mpz_powm_ui(r.get_mpz_t(), Integer(a).get_mpz_t(), static_cast<unsigned long>((p - 1) / 2), Integer(p).get_mpz_t());
  return r == 1 ? 1 : -1;
}

Real dirichlet_L_quadratic(long modulus, int s, const PrecisionContext& ctx) {
  if (modulus < 3 || modulus % 2 == 0 || mpz_probab_prime_p(Integer(modulus).get_mpz_t(), 30) == 0) {
    throw DomainError("dirichlet_L_quadratic: modulus must be an odd prime");
  }
  const auto bits = ctx.bits() + 16;
  Real acc(bits);
  for (long a = 1; a < modulus; ++a) {
    const int chi = legendre_symbol(a, modulus);
    Real hz = hurwitz_zeta(s, Rational(a, modulus), bits);
    if (chi > 0) acc += hz;
    else acc -= hz;
  }
  acc *= pow(Real(modulus, bits), -s);
  return acc.with_prec(ctx.bits());
}

// ---------------------------------------------------------------------------
// Theta series with geometric tail bounds.

namespace {
void check_nome(const Real& q) {
  if (!(abs(q) < 1)) throw DomainError("nome must satisfy |q| < 1");
}
}  // namespace

Real theta3(const Real& q, const PrecisionContext& ctx) {
  check_nome(q);
  const auto bits = ctx.bits();
  const Real qq = q.with_prec(bits);
  const Real eps = pow(Real(10, bits), -ctx.working_digits() - 2);
  const Real tail_factor = 1 - abs(qq);
  Real sum(1, bits);
  Real term = qq;       // q^{n^2}
  Real step = qq * qq;  // q^{2n+1} for the next increment, starting with n=1 -> q^3
  step *= qq;
  for (long n = 1; n < 1000000; ++n) {
    // Remaining terms beyond n are bounded by |q^{n^2}| * |q| / (1-|q|).
    sum += 2 * term;
    if (abs(term) <= eps * tail_factor) return sum;
    term *= step;
    step *= qq;
    step *= qq;
  }
  throw PrecisionError("theta3: too many terms");
}

Real theta_psi(const Real& q, const PrecisionContext& ctx) {
  check_nome(q);
  const auto bits = ctx.bits();
  const Real qq = q.with_prec(bits);
  const Real eps = pow(Real(10, bits), -ctx.working_digits() - 2);
  const Real tail_factor = 1 - abs(qq);
  Real sum(1, bits);
  Real term = qq * qq;       // q^{n(n+1)} at n=1
  Real step = term * qq * qq;  // q^{2n+2} at n=1 -> q^4
  for (long n = 1; n < 1000000; ++n) {
    sum += term;
    if (abs(term) <= eps * tail_factor) return sum;
    term *= step;
    step *= qq * qq;
  }
  throw PrecisionError("theta psi: too many terms");
}

Real theta2(const Real& q, const PrecisionContext& ctx) {
  if (!(q > 0) || !(q < 1)) throw DomainError("theta2 needs 0 < q < 1");
  return 2 * root(q.with_prec(ctx.bits()), 4) * theta_psi(q, ctx);
}

Real lambda_from_nome(const Real& q, const PrecisionContext& ctx) {
  check_nome(q);
  Real p = theta_psi(q, ctx);
  Real t = theta3(q, ctx);
  Real r = p / t;
  r *= r;
  r *= r;
  return 16 * q.with_prec(ctx.bits()) * r;
}

Real lambda_modular(const Real& t, const PrecisionContext& ctx) {
  if (!(t > 0)) throw DomainError("lambda_modular needs t > 0");
  const auto bits = ctx.bits();
  return lambda_from_nome(exp(-pi(bits) * t.with_prec(bits)), ctx);
}

// ---------------------------------------------------------------------------
// Complex

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}
Complex& Complex::operator*=(const Real& o) {
  re *= o;
  im *= o;
  return *this;
}
Complex& Complex::operator/=(const Complex& o) {
  *this = *this / o;
  return *this;
}
Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }
Complex operator*(const Complex& a, const Complex& b) {
  Real re = a.re * b.re;
  Real t = a.im * b.im;
  re -= t;
  Real im = a.re * b.im;
  add_mul(im, a.im, b.re);
  return Complex(std::move(re), std::move(im));
}
Complex operator*(const Complex& a, const Real& b) { return Complex(a.re * b, a.im * b); }
Complex operator*(const Real& a, const Complex& b) { return Complex(a * b.re, a * b.im); }
Complex operator/(const Complex& a, const Complex& b) {
  Real d = norm(b);
  Complex num = a * b.conj();
  return Complex(num.re / d, num.im / d);
}
Complex operator/(const Complex& a, const Real& b) { return Complex(a.re / b, a.im / b); }
Complex operator+(const Complex& a, long b) { return Complex(a.re + b, a.im); }
Complex operator*(const Complex& a, long b) { return Complex(a.re * b, a.im * b); }
Complex operator-(long a, const Complex& b) { return Complex(a - b.re, -b.im); }

Real norm(const Complex& z) {
  Real r = z.re * z.re;
  add_mul(r, z.im, z.im);
  return r;
}
Real abs(const Complex& z) {
  Real r(z.prec());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), RND);
  return r;
}
Real arg(const Complex& z) { return atan2(z.im, z.re); }
Complex exp(const Complex& z) {
  Real m = exp(z.re);
  Real s(z.prec()), c(z.prec());
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), RND);
  return Complex(m * c, m * s);
}
Complex log(const Complex& z) { return Complex(log(abs(z)), arg(z)); }
Complex sqrt(const Complex& z) {
  Real r = sqrt(abs(z));
  Real h = arg(z) / 2;
  return polar(r, h);
}
Complex polar(const Real& r, const Real& theta) {
  Real s(theta.prec()), c(theta.prec());
  mpfr_sin_cos(s.get(), c.get(), theta.get(), RND);
  return Complex(r * c, r * s);
}
void add_mul(Complex& acc, const Complex& a, const Complex& b) {
  add_mul(acc.re, a.re, b.re);
  Real t = a.im * b.im;
  acc.re -= t;
  add_mul(acc.im, a.re, b.im);
  add_mul(acc.im, a.im, b.re);
}

namespace {

// B_{2k} / (2k (2k-1)) for k = 1..count at the given precision, cached per thread.
const std::vector<Real>& stirling_coefficients(mpfr_prec_t bits, int count) {
  thread_local std::vector<std::pair<mpfr_prec_t, std::vector<Real>>> cache;
  for (auto& [b, v] : cache) {
    if (b == bits && static_cast<int>(v.size()) >= count) return v;
  }
  std::vector<Real> v;
  for (int k = 1; k <= count; ++k) {
    Real c(bernoulli(2 * k), bits);
    c /= static_cast<long>(2 * k) * (2 * k - 1);
    v.push_back(std::move(c));
  }
  if (cache.size() > 8) cache.erase(cache.begin());
  cache.emplace_back(bits, std::move(v));
  return cache.back().second;
}

}  // namespace

Complex lgamma(const Complex& z) {
  if (!(z.re > 0)) throw DomainError("complex lgamma implemented for Re z > 0");
  const auto bits = z.prec();
  const int digits = static_cast<int>(bits / 3.32);
  // Shift so that |w| is large enough for Stirling and arg w stays within pi/4.
  const double radius = (digits + 5) * std::numbers::ln10 / (2 * std::numbers::pi) + 5;
  const double x0 = z.re.to_double();
  const double y0 = std::fabs(z.im.to_double());
  const double need = std::max(radius, y0);
  long shift = x0 < need ? static_cast<long>(std::ceil(need - x0)) : 0;

  Complex w = z;
  Complex prod(Real(1, bits), Real(bits));
  double arg_sum = 0;
  for (long k = 0; k < shift; ++k) {
    prod *= w;
    arg_sum += std::atan2(w.im.to_double(), w.re.to_double());
    w.re += 1;
  }
  // Stirling: (w-1/2) log w - w + log(2 pi)/2 + sum B_{2k}/(2k(2k-1) w^{2k-1})
  Complex lw = log(w);
  Complex res = Complex(w.re - Real(Rational(1, 2), bits), w.im) * lw - w;
  res.re += log(2 * pi(bits)) / 2;
  const Complex winv = Complex(Real(1, bits), Real(bits)) / w;
  const Complex winv2 = winv * winv;
  Complex wp = winv;
  const Real eps2 = pow(Real(10, bits), -2 * (digits + 3));
  const auto& coefs = stirling_coefficients(bits, 4 * digits + 50);
  for (size_t k = 0; k < coefs.size(); ++k) {
    Complex term = wp * coefs[k];
    res += term;
    if (norm(term) < eps2) break;
    wp *= winv2;
  }
  if (shift > 0) {
    Complex lp = log(prod);
    // Choose the branch of log(prod) matching the sum of individual arguments.
    const double twopi = 2 * std::numbers::pi;
    double delta = arg_sum - lp.im.to_double();
    long turns = std::lround(delta / twopi);
    if (turns != 0) lp.im += pi(bits) * (2 * turns);
    res -= lp;
  }
  return res;
}

// ---------------------------------------------------------------------------
// QuadExt

std::pair<Integer, Integer> squarefree_split(const Integer& r) {
  if (r <= 0) throw DomainError("squarefree_split needs a positive integer");
  Integer rest = r;
  Integer k = 1, s = 1;
  for (unsigned long p = 2; p <= 1000000 && Integer(p) * p <= rest; ++p) {
    int e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      rest /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) k *= p;
    if (e % 2) s *= p;
  }
  if (rest > 1) {
    Integer sq;
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      mpz_sqrt(sq.get_mpz_t(), rest.get_mpz_t());
      k *= sq;
    } else {
      s *= rest;  // large cofactor assumed squarefree
    }
  }
  return {k, s};
}

QuadExt::QuadExt(const Rational& a, const Rational& b, long D) : a_(a), b_(b), d_(D) {
  if (D <= 0) throw DomainError("QuadExt needs D > 0");
  auto [k, s] = squarefree_split(Integer(D));
  b_ *= k;
  d_ = s.get_si();
  normalize();
}

void QuadExt::normalize() {
  a_.canonicalize();
  b_.canonicalize();
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
  if (b_ == 0) d_ = 1;
}

QuadExt QuadExt::sqrt_of(const Rational& r) {
  if (r < 0) throw DomainError("sqrt of a negative rational");
  if (r == 0) return QuadExt();
  Integer pq = r.get_num() * r.get_den();
  auto [k, s] = squarefree_split(pq);
  Rational coef(k, r.get_den());
  coef.canonicalize();
  if (s == 1) return QuadExt(coef);
  return QuadExt(0, coef, s.get_si());
}

Rational QuadExt::as_rational() const {
  if (!is_rational()) throw DomainError("irrational value where a rational is required: " + to_string());
  return a_;
}

int QuadExt::sign() const {
  const int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with b^2 D.
  Rational lhs = a_ * a_, rhs = b_ * b_ * d_;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

long QuadExt::common_field(const QuadExt& x, const QuadExt& y) {
  if (x.b_ == 0) return y.d_;
  if (y.b_ == 0) return x.d_;
  if (x.d_ != y.d_) {
    throw DomainError("mixed quadratic fields sqrt(" + std::to_string(x.d_) + ") and sqrt(" + std::to_string(y.d_) + ")");
  }
  return x.d_;
}

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  d_ = common_field(*this, o);
  a_ += o.a_;
  b_ += o.b_;
  normalize();
  return *this;
}
QuadExt& QuadExt::operator-=(const QuadExt& o) {
  d_ = common_field(*this, o);
  a_ -= o.a_;
  b_ -= o.b_;
  normalize();
  return *this;
}
QuadExt& QuadExt::operator*=(const QuadExt& o) {
  const long D = common_field(*this, o);
  Rational na = a_ * o.a_ + b_ * o.b_ * D;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = na;
  b_ = nb;
  d_ = D;
  normalize();
  return *this;
}
QuadExt& QuadExt::operator/=(const QuadExt& o) {
  const Rational n = o.norm();
  if (n == 0) throw DomainError("QuadExt division by zero");
  QuadExt inv(o.a_ / n, -o.b_ / n, o.d_);
  return *this *= inv;
}

Real QuadExt::to_real(mpfr_prec_t bits) const {
  Real r(a_, bits);
  if (b_ != 0) r += Real(b_, bits) * sqrt(Real(d_, bits));
  return r;
}

std::string QuadExt::to_string() const {
  if (b_ == 0) return pisums::to_string(a_);
  std::string out;
  if (a_ != 0) out = pisums::to_string(a_) + (b_ > 0 ? " + " : " - ");
  else if (b_ < 0) out = "-";
  Rational bb = abs(b_);
  if (bb != 1) out += pisums::to_string(bb) + "*";
  out += "sqrt(" + std::to_string(d_) + ")";
  return out;
}

bool operator==(const QuadExt& x, const QuadExt& y) {
  return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
}

QuadExt operator-(const QuadExt& x) { return QuadExt(-x.a(), -x.b(), x.D()); }
QuadExt operator+(const QuadExt& x, const QuadExt& y) {
  QuadExt r = x;
  return r += y;
}
QuadExt operator-(const QuadExt& x, const QuadExt& y) {
  QuadExt r = x;
  return r -= y;
}
QuadExt operator*(const QuadExt& x, const QuadExt& y) {
  QuadExt r = x;
  return r *= y;
}
QuadExt operator/(const QuadExt& x, const QuadExt& y) {
  QuadExt r = x;
  return r /= y;
}
QuadExt pow(const QuadExt& x, long n) {
  QuadExt base = n < 0 ? QuadExt(1) / x : x;
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  QuadExt r(1);
  while (e) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return r;
}
std::partial_ordering operator<=>(const QuadExt& x, const QuadExt& y) {
  const int s = (x - y).sign();
  return s < 0 ? std::partial_ordering::less : s > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

}  // namespace pisums

#include "pisums/hyper.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace pisums {

Rational pochhammer(const Rational& s, long n) {
  if (n < 0) throw DomainError("pochhammer needs n >= 0");
  Rational r(1);
  for (long j = 0; j < n; ++j) r *= s + j;
  return r;
}

Rational hyper_coefficient(const std::vector<Rational>& s, long n) {
  Rational r(1);
  for (const auto& x : s) r *= pochhammer(x, n);
  Integer f = 1;
  for (long j = 2; j <= n; ++j) f *= j;
  Integer den = 1;
  for (size_t i = 0; i < s.size(); ++i) den *= f;
  r /= Rational(den);
  return r;
}

int matched_digits(const Real& value, const Real& target, int cap) {
  Real diff = abs(value - target);
  if (diff.is_zero()) return cap;
  Real scale = abs(target);
  if (!scale.is_zero()) diff /= scale;
  double d = -log10(diff).to_double();
  if (!std::isfinite(d)) return cap;
  int digits = static_cast<int>(std::floor(d));
  return std::clamp(digits, 0, cap);
}

namespace {

constexpr long kTermBudget = 2000000;

Real epsilon_for(const PrecisionContext& ctx) {
  return pow(Real(10L, ctx.bits()), -ctx.working_digits());
}

double log10_abs_double(const Real& x) {
  if (x.is_zero()) return -1e300;
  return log10(abs(x)).to_double();
}

}  // namespace

SumReport sum_series(const SeriesDef& def, const PrecisionContext& ctx) {
  if (def.kind != SeriesKind::Pi && def.kind != SeriesKind::Pi2) {
    throw DomainError("sum_series handles 1/pi and 1/pi^2 entries; " + def.id + " is " + to_string(def.kind));
  }
  const mpfr_prec_t bits = ctx.bits();
  const Real z = def.z.eval(ctx);
  const Real absz = abs(z);
  if (def.divergent || absz >= 1L) {
    throw DomainError(def.id + " is divergent at z = " + z.to_string(12) + "; use Mellin-Barnes continuation");
  }
  const Real a = def.a.eval(ctx), b = def.b.eval(ctx), c = def.c.eval(ctx);
  const Real aa = abs(a), ab = abs(b), ac = abs(c);
  const Real eps = epsilon_for(ctx);
  const long m = static_cast<long>(def.s.size());

  SumReport rep;
  rep.id = def.id;
  rep.method = "direct";
  Real sum(bits);
  Real t(1L, bits);  // A_n z^n
  double log_first = 0, log_last = 0;
  long n = 0;
  Real bound(bits);
  for (;; ++n) {
    if (n > kTermBudget) throw PrecisionError(def.id + ": term budget exhausted");
    Real p = a + b * n + c * (n * n);
    add_mul(sum, t, p);
    if (n == 1) log_first = log10_abs_double(t);
    if (n >= 1) log_last = log10_abs_double(t);
    for (const auto& s : def.s) t *= Real(s + n, bits);
    t *= z;
    Real den(n + 1, bits);
    for (long i = 0; i < m; ++i) t /= den;
    // |A_{k+1} z / A_k| <= |z| because (s + k)/(k + 1) <= 1 for s <= 1.
    const long N = n + 1;
    Real rho = absz * (N + 1) * (N + 1) / (N * N);
    if (rho < 1L) {
      bound = abs(t) * (aa + ab * N + ac * (N * N)) / (1L - rho);
      if (bound < eps) break;
    }
  }
  rep.value = sum;
  rep.terms_used = n + 1;
  rep.error_bound = bound;
  rep.target = def.rhs.eval(ctx);
  rep.digits_matched = matched_digits(rep.value, rep.target, ctx.target_digits);
  if (n >= 2 && log_first > -1e299 && log_last > -1e299) rep.digits_per_term = (log_first - log_last) / (n - 1);
  return rep;
}

Real hypergeometric_direct(const std::vector<Rational>& upper, const std::vector<Rational>& lower, const Real& z,
                           const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  if (!(abs(z) < 1L)) throw DomainError("direct hypergeometric summation needs |z| < 1");
  Real sum(bits), t(1L, bits);
  const Real eps = epsilon_for(ctx);
  const Real absz = abs(z);
  for (long n = 0; n < kTermBudget; ++n) {
    sum += t;
    for (const auto& u : upper) t *= Real(u + n, bits);
    for (const auto& l : lower) t /= Real(l + n, bits);
    t /= n + 1;
    t *= z;
    // The term ratio tends to |z| monotonically for large n; max(ratio(N), |z|) bounds the tail ratio.
    const long N = n + 1;
    Real ratio(1L, bits);
    for (const auto& u : upper) ratio *= Real(u + N, bits);
    for (const auto& l : lower) ratio /= Real(l + N, bits);
    ratio /= N + 1;
    Real rho = max(abs(ratio) * absz, absz);
    if (rho < 1L && N > 4) {
      Real tail = abs(t) / (1L - rho);
      if (tail < eps) return sum + t;
    }
  }
  throw PrecisionError("hypergeometric_direct: term budget exhausted");
}

MBResult mb_continuation(const std::vector<Rational>& upper, const std::vector<Rational>& lower, const Real& z,
                         const PrecisionContext& ctx) {
  if (upper.size() != lower.size() + 1) throw DomainError("Mellin-Barnes continuation needs p = q + 1");
  if (!(z < 0L)) throw DomainError("Mellin-Barnes continuation implemented for real z < 0");
  for (const auto& u : upper)
    if (u <= 0) throw DomainError("upper parameters must be positive");
  for (const auto& l : lower)
    if (l <= 0) throw DomainError("lower parameters must be positive");

  const int W = ctx.working_digits() + 5;
  const mpfr_prec_t bits = digits_to_bits(W + 10);
  const Rational amin = *std::min_element(upper.begin(), upper.end());
  const Real c = -Real(amin, bits) / 2;
  const double d = amin.get_d() / 2;
  const Real L = log(-z.with_prec(bits));

  // Group equal parameters: the integrand needs one log-gamma per distinct value.
  std::map<Rational, long> up, lo;
  for (const auto& u : upper) ++up[u];
  for (const auto& l : lower) ++lo[l];

  auto log_integrand = [&](const Real& y) {
    Complex s(c, y);
    Complex acc = Complex(s.re * L, s.im * L);
    for (const auto& [u, k] : up) {
      Complex g = lgamma(Complex(s.re + Real(u, bits), s.im));
      acc += g * k;
    }
    for (const auto& [l, k] : lo) {
      Complex g = lgamma(Complex(s.re + Real(l, bits), s.im));
      acc -= g * k;
    }
    acc += lgamma(Complex(-s.re, -s.im));
    return acc;
  };
  const double ln10 = std::log(10.0);
  // Magnitude near the real axis and the truncation point Y where |G| drops below the tolerance.
  const double log_g0 = log_integrand(Real(bits)).re.to_double();
  const double log_tol = log_g0 - (W + 5) * ln10;
  double Y = 4;
  while (log_integrand(Real::from_double(Y, bits)).re.to_double() > log_tol) Y *= 1.25;
  // The envelope decays like exp(-pi y); one more unit of safety.
  Y += 2;

  // Substituting y = sinh(t) turns the exp(-pi y) decay into a double-exponential one.
  // The strip |Im t| < delta maps into the pole-free strip around Re s = c while
  // |(-z)^s| stays dominated by the Gamma decay: sin(delta) < d and tan(delta) < pi/|ln(-z)|.
  const double lnz = std::fabs(L.to_double());
  double delta = std::asin(0.8 * d);
  if (lnz > 0) delta = std::min(delta, 0.5 * std::atan(std::numbers::pi / lnz));
  auto integrand = [&](const Real& t) { return exp(log_integrand(sinh(t))).re * cosh(t); };
  const double Tmax = std::asinh(Y);
  // The h/2 rule reaches the tolerance; the h rule has roughly the square root of that error.
  const double h = 4 * std::numbers::pi * delta / ((W + 8) * ln10);
  const long n1 = static_cast<long>(std::ceil(Tmax / h));
  const Real hr = Real::from_double(Tmax / n1, bits);

  // Trapezoid over [0, T] for the even real part, step h, then the midpoints for h/2.
  Real coarse = integrand(Real(bits)) / 2;
  for (long k = 1; k <= n1; ++k) coarse += integrand(hr * k);
  Real mid(bits);
  for (long k = 0; k < n1; ++k) mid += integrand(hr * k + hr / 2);
  Real i_h = coarse * hr;
  Real i_h2 = (coarse + mid) * hr / 2;

  Real norm(1L, bits);
  for (const auto& l : lower) norm *= gamma(Real(l, bits));
  for (const auto& u : upper) norm /= gamma(Real(u, bits));
  norm /= pi(bits);

  MBResult res;
  res.value = (i_h2 * norm).with_prec(ctx.bits());
  Real tail_bound = exp(Real::from_double(log_tol + std::log(Y), bits)) * norm;
  // Trapezoid errors square when the step halves: err(h/2) ~ err(h)^2 / |I|.
  Real diff = abs(i_h - i_h2);
  Real scale = max(abs(i_h2), Real(1L, bits) * pow(Real(10L, bits), -W));
  res.error_estimate = ((diff * diff / scale) * abs(norm) + abs(tail_bound)).with_prec(ctx.bits());
  res.nodes = 2 * n1 + 1;
  return res;
}

MomentReduction moment_reduction(const std::vector<Rational>& s, int k) {
  if (s.empty()) throw DomainError("moment_reduction needs parameters");
  MomentReduction r;
  const size_t m = s.size();
  switch (k) {
    case 0:
      r.coef = 1;
      r.z_power = 0;
      r.upper = s;
      r.lower.assign(m - 1, Rational(1));
      return r;
    case 1:
    case 2:
      r.coef = 1;
      for (const auto& x : s) r.coef *= x;
      r.z_power = 1;
      for (const auto& x : s) r.upper.push_back(x + 1);
      r.lower.assign(m - 1, Rational(2));
      if (k == 2) r.lower[0] = 1;
      return r;
    default:
      throw DomainError("moment_reduction supports k = 0, 1, 2");
  }
}

MBResult moment_value(const std::vector<Rational>& s, int k, const Real& z, const PrecisionContext& ctx) {
  MomentReduction r = moment_reduction(s, k);
  MBResult f = mb_continuation(r.upper, r.lower, z, ctx);
  Real pre = Real(r.coef, ctx.bits()) * pow(z, r.z_power);
  f.value *= pre;
  f.error_estimate *= abs(pre);
  return f;
}

SumReport continue_series(const SeriesDef& def, const PrecisionContext& ctx) {
  if (def.kind != SeriesKind::Pi && def.kind != SeriesKind::Pi2) {
    throw DomainError("continuation handles 1/pi and 1/pi^2 entries");
  }
  const Real z = def.z.eval(ctx);
  const ExactExpr* coeffs[3] = {&def.a, &def.b, &def.c};
  SumReport rep;
  rep.id = def.id;
  rep.method = "mellin-barnes";
  rep.value = Real(ctx.bits());
  rep.error_bound = Real(ctx.bits());
  for (int k = 0; k < 3; ++k) {
    if (coeffs[k]->is_zero_literal()) continue;
    MBResult v = moment_value(def.s, k, z, ctx);
    Real coef = coeffs[k]->eval(ctx);
    rep.value += coef * v.value;
    rep.error_bound += abs(coef) * v.error_estimate;
    rep.terms_used += v.nodes;
  }
  rep.target = def.rhs.eval(ctx);
  rep.digits_matched = matched_digits(rep.value, rep.target, ctx.target_digits);
  return rep;
}

SumReport upside_down_sum(const SeriesDef& def, const PrecisionContext& ctx) {
  if (def.kind != SeriesKind::UpsideDown) throw DomainError(def.id + " is not an upside-down entry");
  const mpfr_prec_t bits = ctx.bits();
  const Real z = def.z.eval(ctx);
  const Real absz = abs(z);
  if (!(absz < 1L)) throw DomainError(def.id + ": upside-down series diverges for |z| >= 1");
  const Real a = def.a.eval(ctx), b = def.b.eval(ctx), c = def.c.eval(ctx);
  const Real aa = abs(a), ab = abs(b), ac = abs(c);
  const Real eps = epsilon_for(ctx);
  const long m = static_cast<long>(def.s.size());

  SumReport rep;
  rep.id = def.id;
  rep.method = "direct";
  // u = z^n / A_n, starting at n = 1.
  Real u = z;
  for (const auto& s : def.s) u /= Real(s, bits);
  Real sum(bits), bound(bits);
  double log_first = log10_abs_double(u), log_last = log_first;
  long n = 1;
  for (;; ++n) {
    if (n > kTermBudget) throw PrecisionError(def.id + ": term budget exhausted");
    Real p = a + b * n + c * (n * n);
    Real n5 = pow(Real(n, bits), 5);
    add_mul(sum, u, p / n5);
    log_last = log10_abs_double(u);
    // u_{n+1} / u_n = z (n+1)^m / prod (s_i + n)
    Real np1(n + 1, bits);
    for (long i = 0; i < m; ++i) u *= np1;
    for (const auto& s : def.s) u /= Real(s + n, bits);
    u *= z;
    // For k >= N the ratio |z| (k+1)^m / prod (s_i + k) decreases in k, and |p(k)|/k^5 <= P(N)/N^5.
    const long N = n + 1;
    Real rho = absz * pow(Real(N + 1, bits), m);
    for (const auto& s : def.s) rho /= Real(s + N, bits);
    if (rho < 1L) {
      Real pn = (aa + ab * N + ac * (N * N)) / pow(Real(N, bits), 5);
      bound = abs(u) * pn / (1L - rho);
      if (bound < eps) break;
    }
  }
  rep.value = sum;
  rep.terms_used = n;
  rep.error_bound = bound;
  rep.target = def.rhs.eval(ctx);
  rep.digits_matched = matched_digits(rep.value, rep.target, ctx.target_digits);
  if (n >= 2) rep.digits_per_term = (log_first - log_last) / (n - 1);
  return rep;
}

}  // namespace pisums

#include "pisums/mirror.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "pisums/hyper.hpp"
#include "pisums/relations.hpp"

namespace pisums {

namespace {

using Poly = std::vector<Rational>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Poly linear(const Rational& c, const Rational& lead = 1) { return {c, lead}; }

Poly monomial(size_t m) {
  Poly p(m + 1, Rational(0));
  p[m] = 1;
  return p;
}

Poly scaled(Poly p, const Rational& f) {
  for (auto& c : p) c *= f;
  return p;
}

// Truncated product and inverse of polynomials in eps (length m).
template <class C>
std::vector<C> eps_mul(const std::vector<C>& a, const std::vector<C>& b, size_t m) {
  std::vector<C> r(m, zero_like(a[0]));
  for (size_t i = 0; i < m; ++i) {
    if (is_zero(a[i])) continue;
    for (size_t j = 0; i + j < m; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

template <class C>
std::vector<C> eps_inverse(const std::vector<C>& a, size_t m) {
  std::vector<C> r(m, zero_like(a[0]));
  r[0] = one_like(a[0]) / a[0];
  for (size_t n = 1; n < m; ++n) {
    C acc = zero_like(a[0]);
    for (size_t k = 1; k <= n; ++k) acc += a[k] * r[n - k];
    r[n] = -(acc * r[0]);
  }
  return r;
}

template <class C>
std::vector<PowerSeries<C>> blocks_impl(const HypOperator& op, size_t terms, const C& like) {
  const size_t m = op.order();
  if (m == 0 || terms == 0) throw DomainError("frobenius: empty operator or zero terms");
  const Poly& p0 = op.polys[0];
  for (size_t i = 0; i < m; ++i) {
    if (p0[i] != 0) throw DomainError("frobenius: indicial polynomial is not a pure power of theta");
  }
  std::vector<std::vector<C>> c(terms);
  c[0].assign(m, zero_like(like));
  c[0][0] = one_like(like);
  auto lifted = [&](const Poly& p) {
    std::vector<C> v;
    for (const auto& x : p) v.push_back(lift(x, like));
    return v;
  };
  for (size_t n = 1; n < terms; ++n) {
    std::vector<C> acc(m, zero_like(like));
    for (size_t k = 1; k < op.polys.size() && k <= n; ++k) {
      auto pk = lifted(shifted_poly(op.polys[k], Rational(static_cast<long>(n - k)), m));
      auto prod = eps_mul(pk, c[n - k], m);
      for (size_t i = 0; i < m; ++i) acc[i] += prod[i];
    }
    auto inv = eps_inverse(lifted(shifted_poly(p0, Rational(static_cast<long>(n)), m)), m);
    c[n] = eps_mul(acc, inv, m);
    for (auto& x : c[n]) x = -x;
  }
  std::vector<PowerSeries<C>> f(m, PowerSeries<C>::zero(like, terms));
  for (size_t n = 0; n < terms; ++n) {
    for (size_t k = 0; k < m; ++k) f[k][n] = c[n][k];
  }
  return f;
}

long mobius(long n) {
  long r = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    r = -r;
  }
  if (n > 1) r = -r;
  return r;
}

std::map<long, long> factor(long n) {
  std::map<long, long> f;
  for (long p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  }
  if (n > 1) ++f[n];
  return f;
}

Real log_abs_rational(const Rational& r, mpfr_prec_t bits) { return log(abs(Real(r, bits))); }

std::vector<Real> real_coeffs(const PowerSeries<Rational>& f, mpfr_prec_t bits) {
  std::vector<Real> v;
  v.reserve(f.order());
  for (size_t n = 0; n < f.order(); ++n) v.emplace_back(f[n], bits);
  return v;
}

// Sum with the adaptive stop rule: 40 consecutive terms below 10^(-digits-5). A
// shorter series is accepted when its last 10 terms are all below that level.
Real sum_adaptive(const std::vector<Real>& c, const Real& q, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const Real eps = pow(Real(10L, bits), -static_cast<long>(ctx.target_digits + 5));
  Real sum(bits), qp(1L, bits);
  int quiet = 0;
  const size_t cap = std::min<size_t>(c.size(), 20000);
  for (size_t n = 0; n < cap; ++n) {
    Real term = c[n].with_prec(bits) * qp;
    sum += term;
    Real scale = max(Real(1L, bits), abs(sum));
    if (abs(term) < eps * scale) {
      if (++quiet >= 40) return sum;
    } else {
      quiet = 0;
    }
    qp *= q;
  }
  if (quiet >= 10 && cap == c.size()) return sum;
  throw PrecisionError("q-series truncated before reaching the requested precision");
}

Real eval_poly(const std::vector<Real>& c, const Real& x) {
  Real r(x.prec());
  for (size_t k = c.size(); k-- > 0;) {
    r *= x;
    r += c[k];
  }
  return r;
}

std::vector<Real> derivative_coeffs(const std::vector<Real>& c) {
  std::vector<Real> d;
  for (size_t n = 1; n < c.size(); ++n) d.push_back(c[n] * static_cast<long>(n));
  return d;
}

std::pair<Rational, Rational> couple_of(const HypOperator& op) {
  if (op.s.size() != 5) throw DomainError("operator is not attached to a couple");
  return {op.s[1], op.s[3]};
}

Real H_constant(const std::vector<Rational>& s, mpfr_prec_t bits) {
  Real z3 = zeta_int(3, bits);
  Real acc(bits);
  for (const auto& si : s) acc += hurwitz_zeta(3, si, bits) - z3;
  return acc / (3 * z3);
}

}  // namespace

std::vector<Rational> shifted_poly(const std::vector<Rational>& p, const Rational& x, size_t m) {
  std::vector<Rational> r(m, Rational(0));
  for (size_t k = p.size(); k-- > 0;) {
    // r = r * (x + eps) + p_k
    for (size_t i = m; i-- > 0;) {
      r[i] *= x;
      if (i > 0) r[i] += r[i - 1];
    }
    r[0] += p[k];
  }
  return r;
}

HypOperator hypergeometric_operator(const std::vector<Rational>& s) {
  if (s.empty()) throw DomainError("hypergeometric operator needs parameters");
  Poly p1 = {Rational(1)};
  for (const auto& si : s) p1 = poly_mul(p1, linear(si));
  HypOperator op;
  op.polys = {monomial(s.size()), scaled(p1, -1)};
  op.s = s;
  op.name = "hyp(";
  for (size_t i = 0; i < s.size(); ++i) op.name += (i ? "," : "") + to_string(s[i]);
  op.name += ")";
  return op;
}

HypOperator couple_operator(const Rational& s1, const Rational& s2) {
  HypOperator op = hypergeometric_operator(couple_parameters(s1, s2));
  op.name = "couple(" + to_string(s1) + "," + to_string(s2) + ")";
  return op;
}

HypOperator cy_operator(const Rational& s1, const Rational& s2) {
  HypOperator op = hypergeometric_operator({s1, 1 - s1, s2, 1 - s2});
  op.name = "cy(" + to_string(s1) + "," + to_string(s2) + ")";
  return op;
}

HypOperator binom4_operator() {
  HypOperator op;
  Poly p1 = scaled(poly_mul(linear(1, 2), Poly{1, 3, 3}), -2);
  Poly p2 = scaled(poly_mul(poly_mul(linear(1), linear(3, 4)), linear(5, 4)), -4);
  op.polys = {monomial(3), p1, p2};
  op.name = "binom4";
  return op;
}

std::vector<PowerSeries<Rational>> frobenius_blocks(const HypOperator& op, size_t terms) {
  return blocks_impl(op, terms, Rational(0));
}

std::vector<PowerSeries<Real>> frobenius_blocks(const HypOperator& op, size_t terms, mpfr_prec_t bits) {
  return blocks_impl(op, terms, Real(bits));
}

std::vector<LogSeries<Rational>> frobenius_basis(const HypOperator& op, size_t terms) {
  auto f = frobenius_blocks(op, terms);
  std::vector<LogSeries<Rational>> basis;
  for (size_t j = 0; j < f.size(); ++j) {
    std::vector<PowerSeries<Rational>> blocks;
    for (size_t p = 0; p <= j; ++p) blocks.push_back(f[j - p]);
    basis.emplace_back(std::move(blocks));
  }
  return basis;
}

NormalizationConstant canonical_C(const HypOperator& op, const PrecisionContext& ctx) {
  if (!op.hypergeometric()) throw DomainError("canonical_C needs a hypergeometric operator");
  const mpfr_prec_t bits = ctx.bits();
  NormalizationConstant out;
  Real acc(bits);
  const Real psi1 = digamma(Real(1L, bits));
  for (const auto& s : op.s) acc += psi1 - digamma(Real(s, bits));
  out.value = exp(acc);

  // Group numerators by denominator and check for whole Galois orbits.
  std::map<long, std::map<long, long>> by_den;
  for (const auto& s : op.s) {
    if (s <= 0 || s > 1) return out;
    by_den[s.get_den().get_si()][s.get_num().get_si()]++;
  }
  std::map<long, long> exps;
  for (const auto& [m, nums] : by_den) {
    long phi = 0;
    for (long j = 1; j <= m; ++j) phi += std::gcd(j, m) == 1;
    const long mult = nums.begin()->second;
    if (static_cast<long>(nums.size()) != phi) return out;
    for (const auto& [j, c] : nums) {
      if (c != mult) return out;
    }
    // sum over the orbit of psi(1) - psi(j/m) = sum_{d | m} mu(m/d) d ln d
    for (long d = 2; d <= m; ++d) {
      if (m % d) continue;
      long mu = mobius(m / d);
      if (!mu) continue;
      for (const auto& [p, e] : factor(d)) exps[p] += mult * mu * d * e;
    }
  }
  Rational C = 1;
  std::string form;
  for (const auto& [p, e] : exps) {
    if (e == 0) continue;
    out.prime_exponents[p] = e;
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), Integer(p).get_mpz_t(), static_cast<unsigned long>(std::abs(e)));
    if (e > 0) C *= Rational(pe);
    else C /= Rational(pe);
    if (!form.empty()) form += " + ";
    form += std::to_string(e) + "*ln(" + std::to_string(p) + ")";
  }
  out.exact = C;
  out.has_exact = true;
  out.log_form = form.empty() ? "0" : form;
  return out;
}

MirrorData mirror_map(const HypOperator& op, size_t terms, std::optional<Rational> C) {
  const size_t m = op.order();
  if (m < 3 || m > 5) throw DomainError("mirror_map supports operators of order 3, 4 and 5");
  if (terms < 3) throw DomainError("mirror_map needs at least three terms");
  MirrorData md;
  md.op = op;
  md.terms = terms;
  md.level = m == 3 ? MirrorLevel::Pi : (m == 4 ? MirrorLevel::CY4 : MirrorLevel::CY5);
  if (C) {
    md.C = *C;
  } else if (op.hypergeometric()) {
    auto nc = canonical_C(op, PrecisionContext(20));
    if (!nc.has_exact) throw DomainError("no exact normalization constant for " + op.name);
    md.C = nc.exact;
  } else {
    md.C = 1;
  }

  auto f = frobenius_blocks(op, terms);
  const auto inv0 = inverse(f[0]);
  const auto g1 = f[1] * inv0;
  PowerSeries<Rational> A = g1;
  PowerSeries<Rational> P;
  if (m >= 4) {
    const auto g2 = f[2] * inv0;
    if (m == 5) {
      A = (g1 + theta(g2)) / add_constant(theta(g1), Rational(1));
      P = A * A * Rational(make_rational(1, 2)) - A * g1 + g2;
    } else {
      P = g1 * g1 * Rational(make_rational(1, 2)) - g2;
    }
  }

  auto e = exp(A);
  PowerSeries<Rational> qx = PowerSeries<Rational>::zero(Rational(0), terms);
  for (size_t n = 0; n + 1 < terms; ++n) qx[n + 1] = e[n] / md.C;
  md.q_of_x = qx;
  auto [xq, table] = revert_with_powers(qx);
  md.x_of_q = std::move(xq);
  if (m >= 4) {
    md.thetaT = compose_with(P, table);
    md.T = theta_inverse(md.thetaT);
    md.K = add_constant(-theta(theta(md.thetaT)), Rational(1));
  }
  return md;
}

PowerSeries<Rational> yukawa(const MirrorData& md) {
  if (md.level == MirrorLevel::Pi) throw DomainError("yukawa needs a Calabi-Yau level operator");
  return md.K;
}

PowerSeries<Rational> tmap(const PowerSeries<Rational>& K) {
  if (K.order() == 0 || K[0] != 1) throw DomainError("tmap needs K(0) = 1");
  PowerSeries<Rational> T = PowerSeries<Rational>::zero(Rational(0), K.order());
  for (size_t n = 1; n < K.order(); ++n) {
    Rational n3 = Rational(static_cast<long>(n * n * n));
    T[n] = -K[n] / n3;
  }
  return T;
}

CriticalConstants critical_constants(const Rational& s1, const Rational& s2, const PrecisionContext& ctx) {
  if (!is_allowed_couple(s1, s2)) throw DomainError("unknown couple (" + to_string(s1) + ", " + to_string(s2) + ")");
  const mpfr_prec_t bits = ctx.bits();
  const Real p = pi(bits);
  Real c1 = cot(p * Real(s1, bits)), c2 = cot(p * Real(s2, bits));
  Real sn1 = sin(p * Real(s1, bits)), sn2 = sin(p * Real(s2, bits));
  CriticalConstants cc;
  cc.alpha_c = (Real(make_rational(5, 3), bits) + c1 * c1 + c2 * c2) / 2;
  cc.tau_c_sq = 1 / (sn1 * sn1 * sn2 * sn2);
  cc.H = H_constant(couple_parameters(s1, s2), bits);
  cc.h = 6 * cc.H + 10;
  cc.alpha_c_exact = rationalize(cc.alpha_c, Integer(1000), ctx);
  cc.tau_c_sq_exact = rationalize(cc.tau_c_sq, Integer(1000), ctx);
  Real hr = round(cc.h);
  if (abs(cc.h - hr) < pow(Real(10L, bits), -(ctx.target_digits - 5))) cc.h_integer = hr.to_long();
  return cc;
}

Real eval_q_series(const PowerSeries<Rational>& f, const Real& q, const PrecisionContext& ctx) {
  return sum_adaptive(real_coeffs(f, ctx.bits()), q.with_prec(ctx.bits()), ctx);
}

double q_radius_estimate(const PowerSeries<Rational>& f) {
  // Fit log|f_n| ~ a - n log R over the upper half of the nonzero coefficients.
  std::vector<std::pair<double, double>> pts;
  for (size_t n = f.order() / 2; n < f.order(); ++n) {
    if (f[n] == 0) continue;
    long en, ed;
    double mn = mpz_get_d_2exp(&en, f[n].get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, f[n].get_den_mpz_t());
    double lg = std::log(std::fabs(mn)) - std::log(md) + (en - ed) * std::log(2.0);
    pts.emplace_back(static_cast<double>(n), lg);
  }
  if (pts.size() < 2) return 1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(pts.size());
  double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return std::exp(-slope);
}

Real critical_point(const MirrorData& md, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  auto zc = real_coeffs(md.x_of_q, bits);
  auto d1 = derivative_coeffs(zc);
  auto d2 = derivative_coeffs(d1);
  const double R = std::min(1.0, q_radius_estimate(md.x_of_q));
  // Coarse scan for the first sign change of z'(q) at low precision.
  const mpfr_prec_t lo = 64;
  std::vector<Real> d1lo;
  for (const auto& c : d1) d1lo.push_back(c.with_prec(lo));
  const int steps = 400;
  double a = 0, b = -1;
  double prev = 1;  // z'(0) = C > 0
  for (int i = 1; i < steps; ++i) {
    double q = R * i / steps;
    double v = eval_poly(d1lo, Real::from_double(q, lo)).to_double();
    if ((v < 0) != (prev < 0)) {
      a = R * (i - 1) / steps;
      b = q;
      break;
    }
    prev = v;
  }
  if (b < 0) throw DomainError("critical_point: no sign change of dz/dq inside the estimated radius");
  Real qa = Real::from_double(a, bits), qb = Real::from_double(b, bits);
  for (int it = 0; it < 50; ++it) {
    Real mid = (qa + qb) / 2;
    Real v = eval_poly(d1lo, mid.with_prec(lo));
    if (v.sign() > 0) qa = mid;
    else qb = mid;
  }
  Real q = (qa + qb) / 2;
  const Real tol = pow(Real(10L, bits), -static_cast<long>(ctx.working_digits()));
  for (int it = 0; it < 100; ++it) {
    Real f1 = sum_adaptive(d1, q, ctx);
    Real f2 = sum_adaptive(d2, q, ctx);
    Real step = f1 / f2;
    q -= step;
    if (abs(step) < tol * q) break;
  }
  return q;
}

InvariantPoint invariants_at(const MirrorData& md, const Real& q0, const PrecisionContext& ctx) {
  if (md.level != MirrorLevel::CY5) throw DomainError("invariants_at needs an order-5 couple operator");
  if (q0.is_zero()) throw DomainError("invariants_at needs q0 != 0");
  const mpfr_prec_t bits = ctx.bits();
  auto [s1, s2] = couple_of(md.op);
  auto cc = critical_constants(s1, s2, ctx);
  Real q = q0.with_prec(bits);
  InvariantPoint ip;
  ip.q0 = q;
  Real L = log(abs(q));
  const Real p = pi(bits);
  const Real p2 = p * p;
  ip.t = -L / p;
  ip.z0 = eval_q_series(md.x_of_q, q, ctx);
  Real T = eval_q_series(md.T, q, ctx);
  Real thT = eval_q_series(md.thetaT, q, ctx);
  ip.alpha = (L * L * L / 6 - T - cc.H * zeta_int(3, bits)) / (p2 * L);
  ip.tau = (L * L / 2 - thT) / p2 - ip.alpha;
  ip.k = 2 * (ip.alpha - cc.alpha_c);
  ip.digits = ctx.target_digits;
  return ip;
}

InvariantPoint invariants_at_z(const Rational& s1, const Rational& s2, const Real& z0, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real z = z0.with_prec(bits);
  if (z.is_zero() || abs(z) >= 1) throw DomainError("invariants_at_z needs 0 < |z0| < 1");
  const double lz = -std::log(std::fabs(z.to_double()));
  const size_t terms = static_cast<size_t>((ctx.working_digits() + 5) * std::log(10.0) / lz) + 30;
  HypOperator op = couple_operator(s1, s2);
  auto f = frobenius_blocks(op, terms, bits);
  auto inv0 = inverse(f[0]);
  auto g1 = f[1] * inv0;
  auto g2 = f[2] * inv0;
  const Real one(1L, bits);
  auto A = (g1 + theta(g2)) / add_constant(theta(g1), one);
  auto P = A * A * Real(make_rational(1, 2), bits) - A * g1 + g2;
  auto U = P * add_constant(theta(A), one);
  auto T = theta_inverse(U);

  auto cc = critical_constants(s1, s2, ctx);
  auto nc = canonical_C(op, ctx);
  InvariantPoint ip;
  ip.z0 = z;
  Real L = log(abs(z)) + evaluate(A, z) - log(nc.value);
  const Real p = pi(bits);
  const Real p2 = p * p;
  ip.q0 = exp(L);
  if (z.sign() < 0) ip.q0 = -ip.q0;
  ip.t = -L / p;
  Real Tv = evaluate(T, z);
  Real thT = evaluate(P, z);
  ip.alpha = (L * L * L / 6 - Tv - cc.H * zeta_int(3, bits)) / (p2 * L);
  ip.tau = (L * L / 2 - thT) / p2 - ip.alpha;
  ip.k = 2 * (ip.alpha - cc.alpha_c);
  ip.digits = ctx.target_digits;
  return ip;
}

Real solve_z(const MirrorData& md, const Real& target, Branch branch, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const mpfr_prec_t lo = 64;
  Real qc = critical_point(md, ctx);
  auto zc = real_coeffs(md.x_of_q, bits);
  auto d1 = derivative_coeffs(zc);
  std::vector<Real> zlo;
  for (const auto& c : zc) zlo.push_back(c.with_prec(lo));
  const Real tgt = target.with_prec(bits);
  Real zmax = sum_adaptive(zc, qc, ctx);
  if (tgt > zmax + pow(Real(10L, bits), -(ctx.target_digits - 2))) {
    throw DomainError("solve_z: target exceeds the critical value z(q_c)");
  }
  if (tgt.sign() <= 0) throw DomainError("solve_z: target must be positive");
  if (abs(tgt - zmax) < pow(Real(10L, bits), -(ctx.target_digits - 2))) return qc;

  Real qa(bits), qb(bits);
  if (branch == Branch::Inner) {
    qa = Real(0L, bits);
    qb = qc;
  } else {
    qa = qc;
    const double R = std::min(1.0, q_radius_estimate(md.x_of_q));
    double step = (R - qc.to_double()) / 200;
    Real q = qc;
    bool found = false;
    for (int i = 0; i < 199; ++i) {
      q += Real::from_double(step, bits);
      if (eval_poly(zlo, q.with_prec(lo)).to_double() < tgt.to_double()) {
        found = true;
        break;
      }
    }
    if (!found) throw DomainError("solve_z: outer branch not found inside the series radius");
    qb = q;
  }
  // Bisection at low precision, then Newton at full precision.
  const bool increasing = branch == Branch::Inner;
  for (int it = 0; it < 60; ++it) {
    Real mid = (qa + qb) / 2;
    bool below = eval_poly(zlo, mid.with_prec(lo)).to_double() < tgt.to_double();
    if (below == increasing) qa = mid;
    else qb = mid;
  }
  Real q = (qa + qb) / 2;
  const Real tol = pow(Real(10L, bits), -static_cast<long>(ctx.working_digits()));
  for (int it = 0; it < 100; ++it) {
    Real step = (sum_adaptive(zc, q, ctx) - tgt) / sum_adaptive(d1, q, ctx);
    q -= step;
    if (abs(step) < tol * q) break;
  }
  return q;
}

Real log_abs_q_at(const HypOperator& op, const Rational& C, const Real& x0, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real x = x0.with_prec(bits);
  if (x.is_zero() || abs(x) >= 1) throw DomainError("log_abs_q_at needs 0 < |x0| < 1");
  const double lx = -std::log(std::fabs(x.to_double()));
  const size_t terms = static_cast<size_t>((ctx.working_digits() + 5) * std::log(10.0) / lx) + 30;
  auto f = frobenius_blocks(op, terms, bits);
  auto g1 = f[1] / f[0];
  return log(abs(x)) + evaluate(g1, x) - log_abs_rational(C, bits);
}

TauReport tau_pi_level(const SeriesDef& def, const PrecisionContext& ctx) {
  if (def.kind != SeriesKind::Pi) throw DomainError("tau_pi_level needs a 1/pi series: " + def.id);
  const mpfr_prec_t bits = ctx.bits();
  TauReport rep;
  Real z = def.z.eval(ctx);
  rep.tau_a = def.b.eval(ctx) / sqrt(1 - z);
  if (abs(z) < 1 && !z.is_zero()) {
    HypOperator op = hypergeometric_operator(def.s);
    auto nc = canonical_C(op, ctx);
    if (!nc.has_exact) throw DomainError("no exact normalization for " + def.id);
    rep.tau_b = -log_abs_q_at(op, nc.exact, z, ctx) / pi(bits);
    rep.has_tau_b = true;
    rep.digits_agree = matched_digits(rep.tau_b, rep.tau_a, ctx.target_digits);
  }
  return rep;
}

Real h_via_pslq(const MirrorData& md, const PrecisionContext& ctx) {
  if (md.level != MirrorLevel::CY5) throw DomainError("h_via_pslq needs an order-5 couple operator");
  if (ctx.target_digits < 15) throw PrecisionError("h_via_pslq: no relation detectable below 15 digits");
  const mpfr_prec_t bits = ctx.bits();
  Real qc = critical_point(md, ctx);
  Real L = log(qc);
  Real T = eval_q_series(md.T, qc, ctx);
  const Real p = pi(bits);
  auto rel = pslq({L * L * L / 6 - T, p * p * L, zeta_int(3, bits)}, ctx);
  if (!rel || rel->coeffs[0] == 0) throw PrecisionError("h_via_pslq: no relation found at this precision");
  Rational H(-rel->coeffs[2], rel->coeffs[0]);
  H.canonicalize();
  return Real(H * 6 + 10, bits);
}

const MirrorData& couple_mirror(const Rational& s1, const Rational& s2, size_t terms) {
  static std::mutex mu;
  static std::map<std::string, MirrorData> cache;
  const std::string key = to_string(s1) + "," + to_string(s2) + "," + std::to_string(terms);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (!is_allowed_couple(s1, s2)) throw DomainError("unknown couple (" + to_string(s1) + ", " + to_string(s2) + ")");
  return cache.emplace(key, mirror_map(couple_operator(s1, s2), terms)).first->second;
}

}  // namespace pisums

#include "pisums/translate.hpp"

#include <cmath>

#include "pisums/hyper.hpp"

namespace pisums {

namespace {

RatPoly poly_mul(const RatPoly& a, const RatPoly& b) {
  RatPoly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

RatPoly poly_pow(const RatPoly& a, int e) {
  RatPoly r = {Rational(1)};
  for (int i = 0; i < e; ++i) r = poly_mul(r, a);
  return r;
}

RatPoly scaled(RatPoly p, const Rational& c) {
  for (auto& v : p) v *= c;
  return p;
}

PowerSeries<Rational> poly_series(const RatPoly& p, size_t terms) {
  std::vector<Rational> c(terms, Rational(0));
  for (size_t i = 0; i < p.size() && i < terms; ++i) c[i] = p[i];
  return PowerSeries<Rational>(std::move(c));
}

template <class T>
T poly_eval(const RatPoly& p, const T& x) {
  T r = lift(p.back(), x);
  for (size_t i = p.size() - 1; i-- > 0;) r = r * x + lift(p[i], x);
  return r;
}

// z P'(z) / P(z)
Real log_theta(const RatPoly& p, const Real& z) {
  RatPoly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
  if (d.empty()) return Real(z.prec());
  return z * poly_eval(d, z) / poly_eval(p, z);
}

Real side_prefactor(const TransformSide& s, const Real& z) {
  Real r(s.constant, z.prec());
  for (const auto& [p, e] : s.factors) r *= pow(poly_eval(p, z), Real(e, z.prec()));
  return r;
}

Real side_prefactor_theta(const TransformSide& s, const Real& z) {
  Real r(z.prec());
  for (const auto& [p, e] : s.factors) r += Real(e, z.prec()) * log_theta(p, z);
  return r;
}

// sum A_n n^k v^n
Real moment(const std::vector<Rational>& s, int k, const Real& v, const PrecisionContext& ctx) {
  if (!(abs(v) < 1)) throw DomainError("translation: series argument outside the unit disk");
  auto r = moment_reduction(s, k);
  return hypergeometric_direct(r.upper, r.lower, v, ctx) * Real(r.coef, ctx.bits()) * pow(v, r.z_power);
}

TransformSide plain(std::vector<Rational> s) {
  TransformSide t;
  t.s = std::move(s);
  t.arg_num = {Rational(0), Rational(1)};
  t.arg_den = {Rational(1)};
  return t;
}

std::vector<Transformation> make_transformations() {
  const Rational h = make_rational(1, 2);
  const std::vector<Rational> s2 = {h, h, h}, s4 = {h, make_rational(1, 4), make_rational(3, 4)},
                              s6 = {h, make_rational(1, 6), make_rational(5, 6)};
  std::vector<Transformation> out;
  {
    Transformation t{"quartic", "F(1/2)(z) = (1-z)^(-1/2) F(1/4)(-4z/(1-z)^2)", plain(s2), {}};
    t.rhs.s = s4;
    t.rhs.factors = {{{1, -1}, -h}};
    t.rhs.arg_num = {0, -4};
    t.rhs.arg_den = poly_pow({1, -1}, 2);
    out.push_back(t);
  }
  {
    Transformation t{"sextic_a", "F(1/2)(z) = 2 (4-z)^(-1/2) F(1/6)(27z^2/(4-z)^3)", plain(s2), {}};
    t.rhs.s = s6;
    t.rhs.constant = 2;
    t.rhs.factors = {{{4, -1}, -h}};
    t.rhs.arg_num = {0, 0, 27};
    t.rhs.arg_den = poly_pow({4, -1}, 3);
    out.push_back(t);
  }
  {
    Transformation t{"sextic_b", "F(1/2)(z) = (1-4z)^(-1/2) F(1/6)(-27z/(1-4z)^3)", plain(s2), {}};
    t.rhs.s = s6;
    t.rhs.factors = {{{1, -4}, -h}};
    t.rhs.arg_num = {0, -27};
    t.rhs.arg_den = poly_pow({1, -4}, 3);
    out.push_back(t);
  }
  {
    Transformation t{"rogers", "F(1/4)(256z^3/(9(3+z)^4)) = (3+z)/(3(1+3z)) F(1/4)(256z/(9(1+3z)^4))", {}, {}};
    t.lhs.s = s4;
    t.lhs.arg_num = {0, 0, 0, 256};
    t.lhs.arg_den = scaled(poly_pow({3, 1}, 4), 9);
    t.rhs.s = s4;
    t.rhs.constant = make_rational(1, 3);
    t.rhs.factors = {{{3, 1}, Rational(1)}, {{1, 3}, Rational(-1)}};
    t.rhs.arg_num = {0, 256};
    t.rhs.arg_den = scaled(poly_pow({1, 3}, 4), 9);
    out.push_back(t);
  }
  return out;
}

// Richardson over n_k = n0 2^k for an expansion in powers of n^(-1/2).
LimitEstimate richardson_half(const std::vector<Real>& r) {
  const size_t K = r.size();
  const mpfr_prec_t bits = r[0].prec();
  std::vector<std::vector<Real>> T(K);
  for (size_t k = 0; k < K; ++k) {
    T[k].push_back(r[k]);
    for (size_t j = 1; j <= k; ++j) {
      Real f = pow(Real(2L, bits), Real(make_rational(static_cast<long>(j), 2), bits));
      T[k].push_back((f * T[k][j - 1] - T[k - 1][j - 1]) / (f - 1));
    }
  }
  LimitEstimate e;
  e.value = T[K - 1][K - 1];
  e.error = abs(T[K - 1][K - 1] - T[K - 2][K - 2]);
  e.points = static_cast<int>(K);
  return e;
}

// Terms t_n = A_n x^n of a sato entry at summation variable x (already scaled).
class TermStream {
 public:
  TermStream(const SeriesDef& def, const Real& x) : def_(def), x_(x), t_(1L, x.prec()), prev_(x.prec()) {
    binom4_ = def.sequence == "binom4";
    if (!binom4_ && def.s.empty()) throw DomainError("limit: entry '" + def.id + "' has no coefficient data");
    if (!def.sequence.empty() && !binom4_) throw DomainError("limit: unknown sequence '" + def.sequence + "'");
  }
  // Advance from t_{n-1} to t_n and return it.
  const Real& next() {
    ++n_;
    if (binom4_) {
      // n^3 A_n = 2(2n-1)(3n^2-3n+1) A_{n-1} + 4(n-1)(4n-5)(4n-3) A_{n-2}
      const long n = n_;
      Real a = t_ * x_ * (2 * (2 * n - 1) * (3 * n * n - 3 * n + 1));
      if (n >= 2) a += prev_ * x_ * x_ * (4 * (n - 1) * (4 * n - 5) * (4 * n - 3));
      a /= n;
      a /= n;
      a /= n;
      prev_ = t_;
      t_ = a;
    } else {
      const long m = static_cast<long>(def_.s.size());
      for (const auto& s : def_.s) {
        // (n - 1 + s) = ((n-1) den + num) / den
        const long den = s.get_den().get_si(), num = s.get_num().get_si();
        t_ *= (n_ - 1) * den + num;
        t_ /= den;
      }
      for (long i = 0; i < m; ++i) t_ /= n_;
      t_ *= x_;
    }
    return t_;
  }
  long n() const { return n_; }

 private:
  const SeriesDef& def_;
  Real x_;
  Real t_;
  Real prev_;
  long n_ = 0;
  bool binom4_ = false;
};

Real sato_scale(const SeriesDef& def, mpfr_prec_t bits) {
  return def.scale ? Real(*def.scale, bits) : Real(1L, bits);
}

// sum n A_n x^n with x = scale * z, near the radius.
Real weighted_sum(const SeriesDef& def, const Real& x, const Real& eps_rel, const PrecisionContext& ctx) {
  TermStream ts(def, x);
  Real sum(ctx.bits());
  const Real eps = pow(Real(10L, ctx.bits()), -ctx.working_digits());
  int quiet = 0;
  for (long n = 1; n < 200000000L; ++n) {
    Real term = ts.next() * n;
    sum += term;
    // The tail is about term / eps_rel for a ratio 1 - eps_rel.
    if (abs(term) < eps * eps_rel * abs(sum)) {
      if (++quiet > 20) return sum;
    } else {
      quiet = 0;
    }
  }
  throw PrecisionError("limit: weighted sum did not converge");
}

// Least-squares fit of f(eps) on {1, eps^(1/2), eps^(1/2) ln eps, eps, eps^(3/2), ...}; returns c_0.
Real fit_constant(const std::vector<Real>& eps, const std::vector<Real>& f, size_t m, mpfr_prec_t bits) {
  auto basis = [&](const Real& e, size_t j) -> Real {
    if (j == 0) return Real(1L, bits);
    // j = 1,2,3 -> e^(1/2), e^(1/2) ln e, e; then repeating with the next power.
    const size_t block = (j - 1) / 3, r = (j - 1) % 3;
    Real base = pow(e, Real(make_rational(static_cast<long>(2 * block + 1), 2), bits));
    if (r == 0) return base;
    if (r == 1) return base * log(e);
    return pow(e, static_cast<long>(block + 1));
  };
  std::vector<std::vector<Real>> A(m, std::vector<Real>(m + 1, Real(bits)));
  for (size_t p = 0; p < eps.size(); ++p) {
    std::vector<Real> row;
    for (size_t j = 0; j < m; ++j) row.push_back(basis(eps[p], j));
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) A[i][j] += row[i] * row[j];
      A[i][m] += row[i] * f[p];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (size_t c = 0; c < m; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < m; ++r)
      if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    for (size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      Real fct = A[r][c] / A[c][c];
      for (size_t j = c; j <= m; ++j) A[r][j] -= fct * A[c][j];
    }
  }
  return A[0][m] / A[0][0];
}

Real c_ratio_factor(const SeriesDef& def, const Real& zc) {
  // P(z) ~ -zc P'(zc) (1 - z/zc)
  Real d(zc.prec());
  for (size_t i = def.poly.size(); i-- > 1;) d = d * zc + Real(def.poly[i] * Rational(static_cast<long>(i)), zc.prec());
  Real f = -zc * d;
  if (!(f > 0)) throw DomainError("limit: P does not have a simple zero at zc");
  return sqrt(f);
}

}  // namespace

const std::vector<Transformation>& builtin_transformations() {
  static const std::vector<Transformation> table = make_transformations();
  return table;
}

const Transformation& find_transformation(std::string_view id) {
  for (const auto& t : builtin_transformations())
    if (t.id == id) return t;
  throw DomainError("unknown transformation '" + std::string(id) + "'");
}

PowerSeries<Rational> side_series(const TransformSide& side, size_t terms) {
  if (terms == 0) return PowerSeries<Rational>();
  const size_t n = std::max<size_t>(terms, 2);
  auto u = poly_series(side.arg_num, n) / poly_series(side.arg_den, n);
  if (u[0] != 0) throw DomainError("transformation argument must vanish at z = 0");
  std::vector<Rational> a(n);
  Rational c = 1;
  const long m = static_cast<long>(side.s.size());
  for (size_t k = 0; k < n; ++k) {
    a[k] = c;
    for (const auto& s : side.s) c *= s + Rational(static_cast<long>(k));
    for (long i = 0; i < m; ++i) c /= Rational(static_cast<long>(k + 1));
  }
  auto f = compose(PowerSeries<Rational>(std::move(a)), u);
  auto pre = PowerSeries<Rational>::constant(side.constant, n);
  for (const auto& [p, e] : side.factors) pre = pre * pow_rational(poly_series(p, n), e);
  return (pre * f).truncate(terms);
}

TransformCheck verify_transformation(const Transformation& t, size_t terms) {
  auto l = side_series(t.lhs, terms), r = side_series(t.rhs, terms);
  TransformCheck c;
  c.terms = terms;
  c.pass = true;
  for (size_t k = 0; k < terms; ++k) {
    if (l[k] != r[k]) {
      c.pass = false;
      c.first_failure = k;
      break;
    }
  }
  return c;
}

TransformCheck verify_transformation(std::string_view id, size_t terms) {
  return verify_transformation(find_transformation(id), terms);
}

TranslationReport apply_translation(const TranslationOperator& op, const Transformation& t, const QuadExt& z0,
                                    const PrecisionContext& ctx, std::optional<ExactExpr> expected) {
  const mpfr_prec_t bits = ctx.bits();
  const TransformSide& X = op.on_rhs ? t.rhs : t.lhs;
  const TransformSide& Y = op.on_rhs ? t.lhs : t.rhs;
  const Real z = z0.to_real(bits);
  const Real a(op.a, bits), b(op.b, bits);

  TranslationReport rep;
  rep.u0 = poly_eval(X.arg_num, z) / poly_eval(X.arg_den, z);
  rep.w0 = poly_eval(Y.arg_num, z) / poly_eval(Y.arg_den, z);
  // Operator side without its prefactor: sum A_n (a + b n) u^n.
  rep.direct = a * moment(X.s, 0, rep.u0, ctx);
  if (op.b != 0) rep.direct += b * moment(X.s, 1, rep.u0, ctx);

  // S(z) = (pY / pX) F_Y(w(z)); theta_u = (u / (z u')) theta_z.
  const Real ratio = side_prefactor(Y, z) / side_prefactor(X, z);
  const Real fy = moment(Y.s, 0, rep.w0, ctx);
  rep.translated = a * ratio * fy;
  if (op.b != 0) {
    const Real fy1 = moment(Y.s, 1, rep.w0, ctx);
    const Real dlog = side_prefactor_theta(Y, z) - side_prefactor_theta(X, z);
    const Real zw = log_theta(Y.arg_num, z) - log_theta(Y.arg_den, z);
    const Real zu = log_theta(X.arg_num, z) - log_theta(X.arg_den, z);
    const Real theta_s = ratio * (dlog * fy + zw * fy1);
    rep.translated += b * theta_s / zu;
  }
  rep.digits_agree = matched_digits(rep.translated, rep.direct, ctx.target_digits);
  if (expected) {
    rep.expected = expected->eval(ctx);
    rep.digits_expected = std::min(matched_digits(rep.direct, *rep.expected, ctx.target_digits),
                                   matched_digits(rep.translated, *rep.expected, ctx.target_digits));
  }
  return rep;
}

Real critical_translation_limit(const Transformation& t, const Rational& zstar, const Rational& branch,
                                const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const Real z(zstar, bits);
  auto deriv = [](const RatPoly& p) {
    RatPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
    if (d.empty()) d.push_back(Rational(0));
    return d;
  };
  const RatPoly &N = t.lhs.arg_num, &D = t.lhs.arg_den;
  const Real n0 = poly_eval(N, z), n1 = poly_eval(deriv(N), z), n2 = poly_eval(deriv(deriv(N)), z);
  const Real d0 = poly_eval(D, z), d1 = poly_eval(deriv(D), z), d2 = poly_eval(deriv(deriv(D)), z);
  const Real eps = pow(Real(10L, bits), -ctx.target_digits);
  if (!(abs(n0 / d0 - 1) < eps) || !(abs(n1 * d0 - n0 * d1) < eps)) {
    throw DomainError("critical_translation_limit: u(z*) = 1 with u'(z*) = 0 required");
  }
  // u = N/D with N = D at z*: u'' = (N'' - D'') / D there.
  const Real u2 = (n2 - d2) / d0;
  if (!(u2 < 0)) throw DomainError("critical_translation_limit: u has no maximum at z*");
  const Real kappa = -u2 / 2;
  // sqrt(1-u) u/u' -> -1 / (2 sqrt kappa) as z -> z*+.
  const Real w = poly_eval(t.rhs.arg_num, z) / poly_eval(t.rhs.arg_den, z);
  const Real pre = side_prefactor(t.rhs, z) * Real(branch, bits);
  const Real zw = log_theta(t.rhs.arg_num, z) - log_theta(t.rhs.arg_den, z);
  const Real theta_rhs = pre * (side_prefactor_theta(t.rhs, z) * moment(t.rhs.s, 0, w, ctx) + zw * moment(t.rhs.s, 1, w, ctx));
  return -(theta_rhs / z) / (2 * sqrt(kappa));
}

const std::vector<TranslationExample>& builtin_translations() {
  static const std::vector<TranslationExample> table = {
      {"example1", "sextic_a", {Rational(1), Rational(6), false}, QuadExt(make_rational(-1, 8)),
       ExactExpr::parse("2*sqrt(2)/pi"), "pi.alt.6n1", "pi.borwein.126n10"},
      {"example2", "quartic", {Rational(3), Rational(28), true}, QuadExt(Rational(97), Rational(-56), 3),
       ExactExpr::parse("16/(sqrt(3)*pi)"), "pi.rama.28n3", "pi.borwein.sqrt3"},
  };
  return table;
}

LimitEstimate stolz_ratio(const std::function<Real(long)>& a, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const long n0 = 64;
  const int K = 9;
  std::vector<Real> r;
  Real c(1L, bits);  // c_n = (1/2)_n / n!
  long n = 0;
  for (int k = 0; k < K; ++k) {
    const long target = n0 << k;
    for (; n < target; ++n) {
      c *= 2 * n + 1;
      c /= 2 * (n + 1);
    }
    r.push_back(a(n) * n / c);
  }
  return richardson_half(r);
}

LimitEstimate stolz_ratio(const SeriesDef& def, const PrecisionContext& ctx) {
  if (def.kind != SeriesKind::Sato || !def.zc) throw DomainError("stolz_ratio needs a sato entry with zc");
  const mpfr_prec_t bits = ctx.bits();
  const Real zc = def.zc->eval(ctx);
  TermStream ts(def, zc * sato_scale(def, bits));
  Real last(1L, bits);
  auto a = [&](long n) {
    while (ts.n() < n) last = ts.next();
    return last;
  };
  LimitEstimate e = stolz_ratio(a, ctx);
  const Real f = c_ratio_factor(def, zc);
  e.value *= f;
  e.error *= f;
  return e;
}

LimitEstimate aycock_limit(const SeriesDef& def, const PrecisionContext& ctx) {
  if (def.kind != SeriesKind::Sato || !def.zc || def.poly.empty()) {
    throw DomainError("aycock_limit needs a sato entry with P and zc");
  }
  const mpfr_prec_t bits = ctx.bits();
  const Real zc = def.zc->eval(ctx), scale = sato_scale(def, bits);
  std::vector<Real> eps, f;
  const int K = 11;
  for (int k = 0; k < K; ++k) {
    Real e = ldexp(Real(1L, bits), -2 - k);
    Real z = zc * (1 - e);
    Real P = poly_eval(def.poly, z);
    f.push_back(sqrt(P) * weighted_sum(def, z * scale, e, ctx));
    eps.push_back(e);
  }
  LimitEstimate est;
  const size_t m = 9;
  est.value = fit_constant(eps, f, m, bits);
  Real alt1 = fit_constant(eps, f, m - 1, bits);
  std::vector<Real> eps2(eps.begin() + 1, eps.end()), f2(f.begin() + 1, f.end());
  Real alt2 = fit_constant(eps2, f2, m, bits);
  est.error = max(abs(est.value - alt1), abs(est.value - alt2));
  est.points = K;
  if (!(est.error < Real::from_double(1e-3, bits) * abs(est.value))) {
    throw PrecisionError("aycock_limit: extrapolation did not converge");
  }
  return est;
}

}  // namespace pisums

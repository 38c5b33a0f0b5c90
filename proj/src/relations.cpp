#include "pisums/relations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pisums {

namespace {

Integer nearest_integer(const Real& x) {
  Integer z;
  Real r = round(x);
  mpfr_get_z(z.get_mpz_t(), r.get(), MPFR_RNDN);
  return z;
}

Integer content(const std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& a : v) g = gcd(g, a);
  return g;
}

}  // namespace

std::optional<IntegerRelation> pslq(const std::vector<Real>& xs_in, const PrecisionContext& ctx,
                                    const Real& max_norm) {
  const size_t n = xs_in.size();
  if (n < 2) throw DomainError("pslq needs at least two numbers");
  const mpfr_prec_t bits = ctx.bits();
  std::vector<Real> x;
  for (const auto& v : xs_in) x.push_back(v.with_prec(bits));
  Real xmax(bits);
  for (const auto& v : x) xmax = max(xmax, abs(v));
  if (xmax.is_zero()) throw DomainError("pslq: all inputs are zero");

  const Real accept = pow(Real(10L, bits), -static_cast<long>(std::ceil(0.6 * ctx.target_digits))) * xmax;
  const Real gamma = sqrt(Real(4L, bits) / 3) + Real(make_rational(1, 100), bits);

  // A zero input is an immediate relation.
  for (size_t k = 0; k < n; ++k) {
    if (x[k].is_zero()) {
      IntegerRelation r{std::vector<Integer>(n, 0), Real(bits), Real(1L, bits), 0};
      r.coeffs[k] = 1;
      return r;
    }
  }

  std::vector<Real> s(n, Real(bits));
  {
    Real acc(bits);
    for (size_t k = n; k-- > 0;) {
      acc += x[k] * x[k];
      s[k] = sqrt(acc);
    }
  }
  std::vector<Real> y(n, Real(bits));
  const Real s0 = s[0];
  for (size_t k = 0; k < n; ++k) {
    y[k] = x[k] / s0;
    s[k] /= s0;
  }
  std::vector<std::vector<Real>> H(n, std::vector<Real>(n - 1, Real(bits)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n - 1 && j <= i; ++j) {
      if (i == j) {
        H[i][j] = s[i + 1] / s[i];
      } else {
        H[i][j] = -(y[i] * y[j]) / (s[j] * s[j + 1]);
      }
    }
  }
  std::vector<std::vector<Integer>> B(n, std::vector<Integer>(n, 0));
  for (size_t k = 0; k < n; ++k) B[k][k] = 1;

  auto reduce = [&](size_t i, size_t j) {
    if (H[j][j].is_zero()) return;
    Integer t = nearest_integer(H[i][j] / H[j][j]);
    if (t == 0) return;
    Real tr(t, bits);
    y[j] += tr * y[i];
    for (size_t k = 0; k <= j; ++k) H[i][k] -= tr * H[j][k];
    for (size_t k = 0; k < n; ++k) B[k][j] += t * B[k][i];
  };
  for (size_t i = 1; i < n; ++i) {
    for (size_t j = i; j-- > 0;) reduce(i, j);
  }

  auto try_column = [&](size_t j) -> std::optional<IntegerRelation> {
    std::vector<Integer> a(n);
    for (size_t k = 0; k < n; ++k) a[k] = B[k][j];
    Integer g = content(a);
    if (g == 0) return std::nullopt;
    for (auto& v : a) v /= g;
    Real res(bits);
    for (size_t k = 0; k < n; ++k) res += Real(a[k], bits) * x[k];
    res = abs(res);
    if (res >= accept) return std::nullopt;
    return IntegerRelation{a, res, Real(bits), 0};
  };

  const long max_iter = 20000L * static_cast<long>(n);
  for (long iter = 1; iter <= max_iter; ++iter) {
    size_t m = 0;
    Real best(bits);
    Real gp = gamma;
    for (size_t i = 0; i + 1 < n; ++i) {
      Real v = gp * abs(H[i][i]);
      if (v > best) {
        best = v;
        m = i;
      }
      gp *= gamma;
    }
    std::swap(y[m], y[m + 1]);
    std::swap(H[m], H[m + 1]);
    for (size_t k = 0; k < n; ++k) std::swap(B[k][m], B[k][m + 1]);
    if (m + 2 < n) {
      Real t0 = sqrt(H[m][m] * H[m][m] + H[m][m + 1] * H[m][m + 1]);
      Real t1 = H[m][m] / t0, t2 = H[m][m + 1] / t0;
      for (size_t i = m; i < n; ++i) {
        Real t3 = H[i][m], t4 = H[i][m + 1];
        H[i][m] = t1 * t3 + t2 * t4;
        H[i][m + 1] = t1 * t4 - t2 * t3;
      }
    }
    for (size_t i = m + 1; i < n; ++i) {
      for (size_t j = std::min(i - 1, m + 1) + 1; j-- > 0;) reduce(i, j);
    }

    Real hmax(bits);
    for (size_t j = 0; j + 1 < n; ++j) hmax = max(hmax, abs(H[j][j]));
    Real bound = hmax.is_zero() ? Real(0L, bits) : 1 / hmax;

    size_t jmin = 0;
    for (size_t j = 1; j < n; ++j) {
      if (abs(y[j]) < abs(y[jmin])) jmin = j;
    }
    if (abs(y[jmin]) < accept / xmax || hmax.is_zero()) {
      for (size_t j = 0; j < n; ++j) {
        if (auto r = try_column(j)) {
          r->norm_bound = bound;
          r->iterations = iter;
          return r;
        }
      }
      throw PrecisionError("pslq: working precision exhausted");
    }
    if (!hmax.is_zero() && bound > max_norm) return std::nullopt;

    Integer bmax = 0;
    for (const auto& row : B) {
      for (const auto& v : row) bmax = std::max(bmax, Integer(abs(v)));
    }
    if (static_cast<long>(mpz_sizeinbase(bmax.get_mpz_t(), 2)) > static_cast<long>(bits) - 20) {
      throw PrecisionError("pslq: working precision exhausted");
    }
  }
  throw PrecisionError("pslq: iteration limit reached");
}

std::optional<IntegerRelation> pslq(const std::vector<Real>& xs, const PrecisionContext& ctx) {
  const double n = static_cast<double>(xs.size());
  const double e = 0.45 * ctx.target_digits / std::max(1.0, n - 1);
  Real max_norm = pow(Real(10L, ctx.bits()), Real::from_double(e, ctx.bits()));
  return pslq(xs, ctx, max_norm);
}

std::optional<std::vector<Integer>> minpoly(const Real& x, int degree, const PrecisionContext& ctx) {
  if (degree < 1) throw DomainError("minpoly: degree must be positive");
  // Lowest degree first so the result is not a multiple of a smaller relation.
  for (int d = 1; d <= degree; ++d) {
    std::vector<Real> powers;
    Real p(1L, ctx.bits());
    for (int k = 0; k <= d; ++k) {
      powers.push_back(p);
      p *= x.with_prec(ctx.bits());
    }
    auto rel = pslq(powers, ctx);
    if (!rel) continue;
    std::vector<Integer> c = rel->coeffs;
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.size() < 2) continue;
    if (c.back() < 0) {
      for (auto& v : c) v = -v;
    }
    Integer g = content(c);
    for (auto& v : c) v /= g;
    return c;
  }
  return std::nullopt;
}

std::optional<Rational> rationalize(const Real& x, const Integer& max_den, int tol_digits) {
  const mpfr_prec_t bits = x.prec();
  const Real tol = pow(Real(10L, bits), -static_cast<long>(tol_digits));
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // the two previous convergents
  Real r = x;
  for (int step = 0; step < 400; ++step) {
    Real fl = floor(r);
    Integer a;
    mpfr_get_z(a.get_mpz_t(), fl.get(), MPFR_RNDN);
    Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) return std::nullopt;
    Rational cand(p2, q2);
    cand.canonicalize();
    if (abs(x - Real(cand, bits)) < tol) return cand;
    Real frac = r - fl;
    if (frac.is_zero()) return std::nullopt;
    r = 1 / frac;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return std::nullopt;
}

std::optional<Rational> rationalize(const Real& x, const Integer& max_den, const PrecisionContext& ctx) {
  return rationalize(x.with_prec(std::max(x.prec(), ctx.bits())), max_den, ctx.target_digits - 5);
}

std::optional<std::vector<Integer>> discover_quadratic_combination(const Real& v0, const Real& v1, const Real& v2,
                                                                   const Real& w, const Real& target,
                                                                   const PrecisionContext& ctx) {
  auto rel = pslq({v0, v0 * w, v1, v1 * w, v2, v2 * w, target}, ctx);
  if (!rel) return std::nullopt;
  std::vector<Integer> c = rel->coeffs;
  if (c.back() == 0) return std::nullopt;
  if (c.back() > 0) {
    for (auto& v : c) v = -v;
  }
  return c;
}

std::string format_relation(const std::vector<Integer>& coeffs) {
  std::string out = "(";
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out += ", ";
    out += coeffs[i].get_str();
  }
  return out + ")";
}

}  // namespace pisums

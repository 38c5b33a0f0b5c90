#include "pisums/monodromy.hpp"

#include <algorithm>
#include <cmath>

namespace pisums {

namespace {

using RatPoly = std::vector<Rational>;

Complex czero(mpfr_prec_t bits) { return Complex(bits); }
Complex cone(mpfr_prec_t bits) { return Complex(Real(1L, bits), Real(bits)); }
Complex creal(const Real& x) { return Complex(x); }

// Stirling numbers of the second kind S(j, i), j, i <= n.
std::vector<std::vector<Integer>> stirling2(size_t n) {
  std::vector<std::vector<Integer>> S(n + 1, std::vector<Integer>(n + 1, 0));
  S[0][0] = 1;
  for (size_t j = 1; j <= n; ++j)
    for (size_t i = 1; i <= j; ++i) S[j][i] = S[j - 1][i - 1] + Integer(static_cast<long>(i)) * S[j - 1][i];
  return S;
}

// Signed Stirling numbers of the first kind s(k, j): x(x-1)...(x-k+1) = sum s(k,j) x^j.
std::vector<std::vector<Integer>> stirling1(size_t n) {
  std::vector<std::vector<Integer>> s(n + 1, std::vector<Integer>(n + 1, 0));
  s[0][0] = 1;
  for (size_t k = 1; k <= n; ++k)
    for (size_t j = 1; j <= k; ++j) s[k][j] = s[k - 1][j - 1] - Integer(static_cast<long>(k - 1)) * s[k - 1][j];
  return s;
}

// L = sum_i c_i(z) D^i.
std::vector<RatPoly> ode_coefficients(const HypOperator& op) {
  const size_t m = op.order();
  auto S = stirling2(m);
  size_t deg = 0;
  for (size_t k = 0; k < op.polys.size(); ++k) deg = std::max(deg, k + m);
  std::vector<RatPoly> c(m + 1, RatPoly(deg + 1, Rational(0)));
  for (size_t k = 0; k < op.polys.size(); ++k) {
    const auto& p = op.polys[k];
    for (size_t j = 0; j < p.size(); ++j) {
      if (p[j] == 0) continue;
      for (size_t i = 0; i <= j; ++i) {
        if (S[j][i] == 0) continue;
        c[i][k + i] += p[j] * Rational(S[j][i]);
      }
    }
  }
  for (auto& q : c) {
    while (q.size() > 1 && q.back() == 0) q.pop_back();
  }
  return c;
}

// Coefficients of p(z0 + t) in t.
std::vector<Complex> shift(const RatPoly& p, const Complex& z0) {
  const mpfr_prec_t bits = z0.prec();
  const size_t n = p.size();
  std::vector<Complex> c(n, czero(bits));
  for (size_t i = 0; i < n; ++i) c[i] = creal(Real(p[i], bits));
  // Repeated synthetic division (Taylor shift).
  for (size_t k = 0; k + 1 < n; ++k)
    for (size_t i = n - 1; i > k; --i) c[i - 1] += c[i] * z0;
  return c;
}

Real dist_to_singular(const Complex& z, const std::vector<Complex>& sing) {
  Real best = Real::from_double(1e30, z.prec());
  for (const auto& s : sing) best = min(best, abs(z - s));
  return best;
}

// One Taylor step of all columns from z0 by h.
void taylor_step(const std::vector<RatPoly>& coef, const Complex& z0, const Complex& h, CMatrix& Y,
                 const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const size_t m = coef.size() - 1;
  const size_t ncol = Y.empty() ? 0 : Y[0].size();
  std::vector<std::vector<Complex>> C;
  for (const auto& p : coef) C.push_back(shift(p, z0));
  const Complex lead_inv = cone(bits) / C[m][0];
  const Real habs = abs(h);
  const Real eps = pow(Real(10L, bits), -(ctx.working_digits() + 5));

  // a[k][col] = w_col^(k)(z0) / k! initially, extended by the recurrence.
  std::vector<std::vector<Complex>> a;
  Real fact(1L, bits);
  for (size_t k = 0; k < m; ++k) {
    if (k > 0) fact *= static_cast<long>(k);
    std::vector<Complex> row;
    for (size_t c = 0; c < ncol; ++c) row.push_back(Y[k][c] / fact);
    a.push_back(std::move(row));
  }
  // ff(k, i) = k!/(k-i)!
  auto ff = [&](long k, size_t i) {
    Real r(1L, bits);
    for (size_t q = 0; q < i; ++q) r *= k - static_cast<long>(q);
    return r;
  };
  std::vector<Real> scale_max(ncol, Real(bits));
  for (size_t c = 0; c < ncol; ++c)
    for (size_t k = 0; k < m; ++k) scale_max[c] = max(scale_max[c], abs(a[k][c]) * pow(habs, static_cast<long>(k)));
  int quiet = 0;
  Real hp = pow(habs, static_cast<long>(m));
  for (long n = 0;; ++n) {
    if (n > 20000) throw PrecisionError("ode_transport: Taylor step did not converge");
    std::vector<Complex> acc(ncol, czero(bits));
    for (size_t i = 0; i <= m; ++i) {
      for (size_t l = 0; l < C[i].size(); ++l) {
        if (i == m && l == 0) continue;
        const long k = n + static_cast<long>(i) - static_cast<long>(l);
        if (k < static_cast<long>(i)) continue;
        if (C[i][l].is_zero()) continue;
        Complex w = C[i][l] * ff(k, i);
        for (size_t c = 0; c < ncol; ++c) acc[c] += w * a[k][c];
      }
    }
    const Complex denom = lead_inv / ff(n + static_cast<long>(m), m);
    std::vector<Complex> next;
    bool small = true;
    for (size_t c = 0; c < ncol; ++c) {
      next.push_back(-(acc[c] * denom));
      Real mag = abs(next.back()) * hp * pow(Real(n + m + 1, bits), static_cast<long>(m));
      scale_max[c] = max(scale_max[c], abs(next.back()) * hp);
      if (!(mag <= eps * scale_max[c])) small = false;
    }
    a.push_back(std::move(next));
    hp *= habs;
    if (small) {
      if (++quiet >= static_cast<int>(2 * m)) break;
    } else {
      quiet = 0;
    }
  }
  // Derivatives at z0 + h.
  const size_t N = a.size();
  std::vector<Complex> hpow(N, cone(bits));
  for (size_t k = 1; k < N; ++k) hpow[k] = hpow[k - 1] * h;
  for (size_t j = 0; j < m; ++j) {
    for (size_t c = 0; c < ncol; ++c) {
      Complex s = czero(bits);
      for (size_t k = j; k < N; ++k) s += a[k][c] * hpow[k - j] * ff(static_cast<long>(k), j);
      Y[j][c] = s;
    }
  }
}

void transport_matrix(const HypOperator& op, const Path& path, CMatrix& Y, const PrecisionContext& ctx) {
  const auto coef = ode_coefficients(op);
  const auto sing = singular_points(op, ctx.bits());
  const Real frac = Real::from_double(path.step_fraction, ctx.bits());
  if (path.waypoints.empty()) return;
  Complex z = path.waypoints[0];
  for (size_t w = 1; w < path.waypoints.size(); ++w) {
    const Complex& target = path.waypoints[w];
    for (int guard = 0;; ++guard) {
      if (guard > 100000) throw PrecisionError("ode_transport: path subdivision did not terminate");
      Complex rest = target - z;
      Real len = abs(rest);
      if (len.is_zero()) break;
      Real d = dist_to_singular(z, sing);
      if (!(d > 0)) throw DomainError("ode_transport: path meets a singular point");
      Real step = frac * d;
      Complex h = step >= len ? rest : rest * (step / len);
      taylor_step(coef, z, h, Y, ctx);
      z = step >= len ? target : z + h;
      if (step >= len) break;
    }
  }
}

}  // namespace

std::vector<Complex> singular_points(const HypOperator& op, mpfr_prec_t bits) {
  const auto coef = ode_coefficients(op);
  RatPoly lead = coef.back();
  // Strip the z^m factor at the origin.
  size_t low = 0;
  while (low < lead.size() && lead[low] == 0) ++low;
  RatPoly q(lead.begin() + static_cast<long>(low), lead.end());
  std::vector<Complex> out;
  if (low > 0) out.push_back(czero(bits));
  if (q.size() == 2) {
    out.push_back(creal(Real(-q[0] / q[1], bits)));
  } else if (q.size() == 3) {
    Real A(q[2], bits), B(q[1], bits), Cc(q[0], bits);
    Real disc = B * B - 4 * A * Cc;
    if (disc < 0) {
      Real re = -B / (2 * A), im = sqrt(-disc) / (2 * A);
      out.emplace_back(re, im);
      out.emplace_back(re, -im);
    } else {
      out.push_back(creal((-B + sqrt(disc)) / (2 * A)));
      out.push_back(creal((-B - sqrt(disc)) / (2 * A)));
    }
  } else if (q.size() > 3) {
    throw DomainError("singular_points: leading coefficient of degree > 2 not supported");
  }
  return out;
}

std::vector<Complex> ode_transport(const HypOperator& op, const Path& path, const std::vector<Complex>& initial,
                                   const PrecisionContext& ctx) {
  if (initial.size() != op.order()) throw DomainError("ode_transport: initial vector has the wrong size");
  CMatrix Y;
  for (const auto& v : initial) Y.push_back({v});
  transport_matrix(op, path, Y, ctx);
  std::vector<Complex> out;
  for (const auto& row : Y) out.push_back(row[0]);
  return out;
}

CMatrix frobenius_matrix(const HypOperator& op, const Real& zb_in, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const size_t m = op.order();
  const Real zb = zb_in.with_prec(bits);
  Real R = Real::from_double(1e30, bits);
  for (const auto& s : singular_points(op, bits)) {
    if (!s.is_zero()) R = min(R, abs(s));
  }
  if (!(zb > 0) || !(zb < R)) throw DomainError("frobenius_matrix: base point outside (0, R)");
  const double ratio = (R / zb).to_double();
  const size_t terms = static_cast<size_t>(std::ceil(ctx.working_digits() * std::log(10.0) / std::log(ratio))) + 30;
  auto blocks = frobenius_blocks(op, terms, bits);
  auto s1 = stirling1(m);
  const Real L = log(zb);
  CMatrix Y(m, std::vector<Complex>(m, czero(bits)));
  for (size_t j = 0; j < m; ++j) {
    std::vector<PowerSeries<Real>> b;
    for (size_t p = 0; p <= j; ++p) b.push_back(blocks[j - p]);
    LogSeries<Real> y(std::move(b));
    std::vector<Real> th;  // theta^k y at zb
    for (size_t k = 0; k < m; ++k) {
      th.push_back(evaluate(y, zb, L));
      y = theta(y);
    }
    Real zk(1L, bits);
    for (size_t k = 0; k < m; ++k) {
      Real v(bits);
      for (size_t q = 0; q <= k; ++q) v += Real(s1[k][q], bits) * th[q];
      Y[k][j] = creal(v / zk);
      zk *= zb;
    }
  }
  return Y;
}

Path circle_loop(const Complex& center, const Real& radius, const Real& zb, int segments) {
  const mpfr_prec_t bits = radius.prec();
  Path p;
  // Enter the circle radially from the base point.
  const Real a0 = arg(creal(zb) - center);
  const Complex start = center + polar(radius, a0);
  const bool on_circle = abs(start - creal(zb)) < Real::from_double(1e-40, bits);
  p.waypoints.push_back(creal(zb));
  if (!on_circle) p.waypoints.push_back(start);
  const Real tp = 2 * pi(bits);
  for (int k = 1; k <= segments; ++k) p.waypoints.push_back(center + polar(radius, a0 + tp * k / segments));
  p.waypoints.back() = p.waypoints[on_circle ? 0 : 1];
  if (!on_circle) p.waypoints.push_back(creal(zb));
  p.descriptor = "circle";
  return p;
}

Path square_loop(const Complex& center, const Real& half, const Real& zb) {
  const mpfr_prec_t bits = half.prec();
  Path p;
  const Complex ih(Real(bits), half);
  const Complex hr = creal(half);
  Complex left = center - hr;
  p.waypoints = {creal(zb), left, left - ih, center + hr - ih, center + hr + ih, left + ih, left, creal(zb)};
  p.descriptor = "square";
  return p;
}

Path infinity_loop(const Real& zb, const Real& radius, int segments) {
  const mpfr_prec_t bits = radius.prec();
  Path p;
  Real y = sqrt(radius * radius - zb * zb);
  Complex start(zb, -y);
  p.waypoints = {creal(zb), start};
  Real phi0 = atan2(-y, zb);
  const Real tp = 2 * pi(bits);
  for (int k = 1; k <= segments; ++k) p.waypoints.push_back(polar(radius, phi0 - tp * k / segments));
  p.waypoints.back() = start;
  p.waypoints.push_back(creal(zb));
  p.descriptor = "infinity";
  return p;
}

CMatrix identity_matrix(size_t m, mpfr_prec_t bits) {
  CMatrix I(m, std::vector<Complex>(m, czero(bits)));
  for (size_t i = 0; i < m; ++i) I[i][i] = cone(bits);
  return I;
}

CMatrix mat_mul(const CMatrix& a, const CMatrix& b) {
  const size_t n = a.size(), k = b.size(), m = b[0].size();
  const mpfr_prec_t bits = a[0][0].prec();
  CMatrix r(n, std::vector<Complex>(m, czero(bits)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      for (size_t q = 0; q < k; ++q) r[i][j] += a[i][q] * b[q][j];
  return r;
}

CMatrix mat_inverse(const CMatrix& a) {
  const size_t n = a.size();
  const mpfr_prec_t bits = a[0][0].prec();
  CMatrix A = a, I = identity_matrix(n, bits);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < n; ++r)
      if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
    if (abs(A[piv][c]).is_zero()) throw DomainError("mat_inverse: singular matrix");
    std::swap(A[c], A[piv]);
    std::swap(I[c], I[piv]);
    Complex inv = cone(bits) / A[c][c];
    for (size_t j = 0; j < n; ++j) {
      A[c][j] *= inv;
      I[c][j] *= inv;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c].is_zero()) continue;
      Complex f = A[r][c];
      for (size_t j = 0; j < n; ++j) {
        A[r][j] -= f * A[c][j];
        I[r][j] -= f * I[c][j];
      }
    }
  }
  return I;
}

Real max_abs_diff(const CMatrix& a, const CMatrix& b) {
  Real m(a[0][0].prec());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) m = max(m, abs(a[i][j] - b[i][j]));
  return m;
}

CMatrix monodromy_along(const HypOperator& op, const Path& loop, const Real& zb, const PrecisionContext& ctx) {
  CMatrix Y0 = frobenius_matrix(op, zb, ctx);
  CMatrix Y = Y0;
  transport_matrix(op, loop, Y, ctx);
  return mat_mul(mat_inverse(Y0), Y);
}

CMatrix exact_monodromy_at_zero(size_t m, mpfr_prec_t bits) {
  CMatrix M(m, std::vector<Complex>(m, czero(bits)));
  const Complex tpi(Real(bits), 2 * pi(bits));
  std::vector<Complex> pw(m, cone(bits));
  Real fact(1L, bits);
  for (size_t k = 1; k < m; ++k) {
    fact *= static_cast<long>(k);
    pw[k] = pw[k - 1] * tpi;
  }
  Real f(1L, bits);
  for (size_t k = 0; k < m; ++k) {
    if (k > 0) f *= static_cast<long>(k);
    for (size_t i = 0; i + k < m; ++i) M[i][i + k] = pw[k] / f;
  }
  return M;
}

MonodromyResult loop_monodromy(const HypOperator& op, const Rational& around, const Rational& zb,
                               const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  MonodromyResult r;
  if (around == 0) {
    r.matrix = exact_monodromy_at_zero(op.order(), bits);
    r.loop = "z = 0 (exact)";
    r.exact = true;
    return r;
  }
  const Complex c = creal(Real(around, bits));
  Real radius = Real(make_rational(1, 2), bits) * abs(Real(around, bits));
  for (const auto& s : singular_points(op, bits)) {
    Real d = abs(s - c);
    if (!d.is_zero()) radius = min(radius, d / 2);
  }
  bool found = false;
  for (const auto& s : singular_points(op, bits)) found = found || abs(s - c) < Real::from_double(1e-30, bits);
  if (!found) throw DomainError("loop_monodromy: point is not a singularity of the operator");
  Path p = circle_loop(c, radius, Real(zb, bits), 24);
  r.matrix = monodromy_along(op, p, Real(zb, bits), ctx);
  r.loop = "circle around z = " + to_string(around) + ", radius " + radius.to_string(6) + ", base " + to_string(zb);
  return r;
}

std::vector<Complex> char_poly(const CMatrix& A) {
  const size_t n = A.size();
  const mpfr_prec_t bits = A[0][0].prec();
  std::vector<Complex> c(n + 1, czero(bits));
  c[n] = cone(bits);
  CMatrix M(n, std::vector<Complex>(n, czero(bits)));
  for (size_t k = 1; k <= n; ++k) {
    CMatrix AM = mat_mul(A, M);
    for (size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
    M = AM;
    CMatrix AMk = mat_mul(A, M);
    Complex tr = czero(bits);
    for (size_t i = 0; i < n; ++i) tr += AMk[i][i];
    c[n - k] = -(tr / Real(static_cast<long>(k), bits));
  }
  return c;
}

int numerical_rank(CMatrix A, const Real& tol) {
  const size_t n = A.size(), m = A[0].size();
  int rank = 0;
  std::vector<bool> used(m, false);
  for (size_t step = 0; step < std::min(n, m); ++step) {
    size_t pr = 0, pc = 0;
    Real best(tol.prec());
    for (size_t i = static_cast<size_t>(rank); i < n; ++i)
      for (size_t j = 0; j < m; ++j)
        if (!used[j] && abs(A[i][j]) > best) {
          best = abs(A[i][j]);
          pr = i;
          pc = j;
        }
    if (!(best > tol)) break;
    std::swap(A[static_cast<size_t>(rank)], A[pr]);
    used[pc] = true;
    const size_t r0 = static_cast<size_t>(rank);
    for (size_t i = r0 + 1; i < n; ++i) {
      Complex f = A[i][pc] / A[r0][pc];
      for (size_t j = 0; j < m; ++j) A[i][j] -= f * A[r0][j];
    }
    ++rank;
  }
  return rank;
}

CMatrix conjectured_matrix(const Real& ac, const Real& tc2, const Complex& d, bool rank_one) {
  const mpfr_prec_t bits = ac.prec();
  const Real D = tc2 - ac * ac;
  const long e8 = rank_one ? 4 : 8, e128 = rank_one ? 32 : 128;
  auto R = [&](const Real& x) { return creal(x / tc2); };
  auto Cx = [&](const Complex& x) { return x / tc2; };
  const Complex Z = czero(bits);
  CMatrix M = {
      {R(ac * ac), Z, R(-ac * D / e8), Cx(d * D), R(-D * D / e128)},
      {Cx(d * Real(-32L, bits)), R(tc2), Cx(d * (-8 * ac)), Cx(d * d * Real(32L, bits)), Cx(d * (-D))},
      {R(-8 * ac), Z, R(tc2 - 2 * ac * ac), Cx(d * (8 * ac)), R(-ac * D / e8)},
      {Z, Z, Z, R(tc2), Z},
      {R(Real(-32L, bits)), Z, R(-8 * ac), Cx(d * Real(32L, bits)), R(ac * ac)},
  };
  return M;
}


Rational conifold_exponent(const HypOperator& op) {
  if (!op.hypergeometric()) throw DomainError("conifold_exponent: operator is not hypergeometric");
  Rational e(static_cast<long>(op.order()) - 1);
  for (const auto& s : op.s) e -= s;
  return e;
}

namespace {

// Power of d in each entry of the conjectured matrix.
constexpr int kDPower[5][5] = {
    {0, 0, 0, 1, 0}, {1, 0, 1, 2, 1}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 1, 0}};

// Solve A x = b (small, dense, double) by partial pivoting; false if singular.
bool solve_small(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& x) {
  const size_t n = b.size();
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[p][c])) p = r;
    if (std::fabs(A[p][c]) < 1e-12) return false;
    std::swap(A[c], A[p]);
    std::swap(b[c], b[p]);
    for (size_t r = c + 1; r < n; ++r) {
      double f = A[r][c] / A[c][c];
      for (size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (size_t c = n; c-- > 0;) {
    double s = b[c];
    for (size_t j = c + 1; j < n; ++j) s -= A[c][j] * x[j];
    x[c] = s / A[c][c];
  }
  return true;
}

ConjectureFit fit_one(const CMatrix& M, const Real& ac, const Real& tc2, bool rank_one, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  ConjectureFit fit;
  fit.rank_one_variant = rank_one;
  const CMatrix B = conjectured_matrix(ac, tc2, cone(bits), rank_one);
  double bmax = 0;
  for (const auto& row : B)
    for (const auto& e : row) bmax = std::max(bmax, abs(e).to_double());

  // log|g_j| - log|g_i| - e_ij log|d| = log|B_ij| - log|M_ij|. A diagonal gauge moves d
  // freely ((g_1, g_3, d) -> (g_1/t, g_3 t, d t)), so g_0 = g_1 = 1 fixes it.
  std::vector<std::vector<double>> N(4, std::vector<double>(4, 0.0));
  std::vector<double> rhs(4, 0.0);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      double bm = abs(B[i][j]).to_double(), mm = abs(M[i][j]).to_double();
      if (bm < 1e-30 || mm < 1e-30) continue;
      double row[4] = {0, 0, 0, 0};
      if (j > 1) row[j - 2] += 1;
      if (i > 1) row[i - 2] -= 1;
      row[3] -= kDPower[i][j];
      double t = std::log(bm) - std::log(mm);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) N[a][b] += row[a] * row[b];
        rhs[a] += row[a] * t;
      }
    }
  }
  std::vector<double> x;
  if (!solve_small(N, rhs, x)) throw DomainError("fit_conjecture_matrix: fit singular");

  auto residual_for = [&](const std::vector<Real>& g, const Real& d) {
    Real worst(bits);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        Complex target = B[i][j];
        for (int k = 0; k < kDPower[i][j]; ++k) target = target * d;
        worst = max(worst, abs(M[i][j] * (g[static_cast<size_t>(j)] / g[static_cast<size_t>(i)]) - target));
      }
    return worst / Real::from_double(bmax, bits);
  };
  Real best(bits);
  bool have = false;
  for (int mask = 0; mask < 32; ++mask) {
    std::vector<Real> g{Real(1L, bits), Real(mask & 1 ? -1L : 1L, bits)};
    for (int k = 0; k < 3; ++k) {
      Real v = exp(Real::from_double(x[static_cast<size_t>(k)], bits));
      g.push_back((mask >> (k + 1)) & 1 ? -v : v);
    }
    Real d = exp(Real::from_double(x[3], bits));
    if (mask & 16) d = -d;
    Real r = residual_for(g, d);
    if (!have || r < best) {
      have = true;
      best = r;
      fit.d = creal(d);
      fit.gauge.clear();
      for (const auto& v : g) fit.gauge.push_back(creal(v));
    }
  }
  fit.residual = best;

  const Real tol = pow(Real(10L, bits), -(ctx.target_digits - 10));
  bool ok = abs(M[3][3] - cone(bits)) < tol;
  for (int i = 0; i < 5; ++i) {
    if (i != 1) ok = ok && abs(M[static_cast<size_t>(i)][1]) < tol;
    if (i != 3) ok = ok && abs(M[3][static_cast<size_t>(i)]) < tol;
  }
  fit.structural_ok = ok;

  const auto pm = char_poly(M), pc = char_poly(conjectured_matrix(ac, tc2, fit.d, rank_one));
  Real gap(bits);
  for (size_t k = 0; k < pm.size(); ++k) gap = max(gap, abs(pm[k] - pc[k]));
  fit.charpoly_gap = gap;
  return fit;
}

CMatrix transpose(const CMatrix& m) {
  CMatrix t(m[0].size(), std::vector<Complex>(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

}  // namespace

std::vector<ConjectureFit> fit_conjecture_matrix(const MonodromyResult& m, const Rational& s1, const Rational& s2,
                                                 const PrecisionContext& ctx) {
  if (m.matrix.size() != 5) throw DomainError("fit_conjecture_matrix: needs a 5x5 monodromy matrix");
  const auto cc = critical_constants(s1, s2, ctx);
  std::vector<ConjectureFit> out;
  for (bool rank_one : {false, true}) {
    ConjectureFit a = fit_one(m.matrix, cc.alpha_c, cc.tau_c_sq, rank_one, ctx);
    a.orientation = "M";
    ConjectureFit b = fit_one(transpose(m.matrix), cc.alpha_c, cc.tau_c_sq, rank_one, ctx);
    b.orientation = "transpose";
    ConjectureFit f = b.residual < a.residual ? b : a;
    const Real tiny = pow(Real(10L, ctx.bits()), -(ctx.target_digits - 10));
    f.notes.push_back(rank_one ? "variant: rank-one (entries -alpha_c D/4, -D^2/32)" : "variant: as printed");
    if (!f.structural_ok)
      f.notes.push_back("zero column 2 / unit row 4 pattern absent in the Frobenius basis; a diagonal gauge cannot create it");
    if (f.charpoly_gap > tiny)
      f.notes.push_back("characteristic polynomials differ (gap " + f.charpoly_gap.to_string(4) +
                        "); no change of basis can match");
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const ConjectureFit& x, const ConjectureFit& y) { return x.residual < y.residual; });
  return out;
}

}  // namespace pisums

#include "pisums/modeq.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "pisums/mirror.hpp"

namespace pisums {

namespace {

// z(q) for (1/2, s, 1-s) to at least `terms` coefficients; the longest expansion per s is kept.
PowerSeries<Rational> z_series(const Rational& s, size_t terms) {
  static std::mutex mu;
  static std::map<Rational, PowerSeries<Rational>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(s);
  if (it == cache.end() || it->second.order() < terms) {
    MirrorData md = mirror_map(hypergeometric_operator({make_rational(1, 2), s, 1 - s}), terms);
    it = cache.insert_or_assign(s, md.x_of_q).first;
  }
  return it->second.truncate(terms);
}

using IntSeries = std::vector<Integer>;

IntSeries to_integer(const PowerSeries<Rational>& f) {
  IntSeries c;
  for (const auto& v : f.coeffs()) {
    if (v.get_den() != 1) throw DomainError("modular equation: z(q) has non-integral coefficients");
    c.push_back(v.get_num());
  }
  return c;
}

IntSeries mul(const IntSeries& a, const IntSeries& b) {
  const size_t n = std::min(a.size(), b.size());
  IntSeries r(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// f(sign * q^k)
IntSeries substitute_power(const IntSeries& f, int k, int sign, size_t n) {
  IntSeries c(n, 0);
  for (size_t m = 0; m * k < n && m < f.size(); ++m) c[m * k] = (sign < 0 && m % 2) ? Integer(-f[m]) : f[m];
  return c;
}

std::vector<IntSeries> powers(const IntSeries& f, int d) {
  std::vector<IntSeries> p;
  IntSeries one(f.size(), 0);
  if (!one.empty()) one[0] = 1;
  p.push_back(std::move(one));
  for (int e = 1; e <= d; ++e) p.push_back(mul(p.back(), f));
  return p;
}

std::vector<std::pair<int, int>> monomials(int d) {
  std::vector<std::pair<int, int>> m;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) m.emplace_back(i, j);
  return m;
}

Integer row_content(const std::vector<Integer>& r) {
  Integer g = 0;
  for (const auto& v : r) {
    if (v != 0) g = gcd(g, v);
  }
  return g;
}

// Integer nullspace basis of an integer matrix by fraction-free reduction.
std::vector<std::vector<Integer>> integer_nullspace(std::vector<std::vector<Integer>> rows, size_t ncols) {
  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < rows.size(); ++c) {
    size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Integer a = rows[r][c], b = rows[i][c];
      for (size_t j = 0; j < ncols; ++j) rows[i][j] = a * rows[i][j] - b * rows[r][j];
      Integer g = row_content(rows[i]);
      if (g > 1) {
        for (auto& v : rows[i]) v /= g;
      }
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Integer>> basis;
  for (size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    Integer L = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) {
      if (rows[i][f] != 0) L = lcm(L, Integer(abs(rows[i][pivot_col[i]])));
    }
    std::vector<Integer> v(ncols, 0);
    v[f] = L;
    for (size_t i = 0; i < pivot_col.size(); ++i) {
      if (rows[i][f] == 0) continue;
      v[pivot_col[i]] = -rows[i][f] * (L / rows[i][pivot_col[i]]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

BivarPoly::BivarPoly(int d) : degree(d) {
  if (d < 0) throw DomainError("BivarPoly: negative degree");
  for (int i = 0; i <= d; ++i) a.emplace_back(d - i + 1, Integer(0));
}

bool BivarPoly::operator==(const BivarPoly& o) const {
  const int d = std::max(degree, o.degree);
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; i + j <= d; ++j) {
      Integer u = (i + j <= degree) ? a[i][j] : Integer(0);
      Integer v = (i + j <= o.degree) ? o.a[i][j] : Integer(0);
      if (u != v) return false;
    }
  }
  return true;
}

Real BivarPoly::eval(const Real& x, const Real& y) const {
  const mpfr_prec_t bits = std::max(x.prec(), y.prec());
  Real total(bits);
  for (int i = degree; i >= 0; --i) {
    Real inner(bits);
    for (int j = degree - i; j >= 0; --j) inner = inner * y + Real(a[i][j], bits);
    total = total * x + inner;
  }
  return total;
}

void BivarPoly::normalize() {
  Integer g = 0;
  for (const auto& row : a) {
    for (const auto& v : row) g = gcd(g, v);
  }
  if (g == 0) return;
  int sign = 0;
  for (int i = degree; i >= 0 && sign == 0; --i) {
    for (int j = degree - i; j >= 0; --j) {
      if (a[i][j] != 0) {
        sign = a[i][j] > 0 ? 1 : -1;
        break;
      }
    }
  }
  if (sign < 0) g = -g;
  for (auto& row : a) {
    for (auto& v : row) v /= g;
  }
}

std::string BivarPoly::rows() const {
  std::ostringstream os;
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; i + j <= degree; ++j) {
      if (a[i][j] != 0) os << i << ' ' << j << ' ' << a[i][j].get_str() << '\n';
    }
  }
  return os.str();
}

std::string BivarPoly::to_string() const {
  std::string out;
  for (int i = degree; i >= 0; --i) {
    for (int j = degree - i; j >= 0; --j) {
      const Integer& c = a[i][j];
      if (c == 0) continue;
      Integer m = abs(c);
      out += out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
      std::string mono;
      if (i) mono += i == 1 ? "x" : "x^" + std::to_string(i);
      if (j) mono += j == 1 ? "y" : "y^" + std::to_string(j);
      if (mono.empty() || m != 1) out += m.get_str() + (mono.empty() ? "" : "*");
      out += mono;
    }
  }
  return out.empty() ? "0" : out;
}

BivarPoly swapped(const BivarPoly& p) {
  BivarPoly r(p.degree);
  for (int i = 0; i <= p.degree; ++i)
    for (int j = 0; i + j <= p.degree; ++j) r.at(j, i) = p.at(i, j);
  return r;
}

size_t modeq_unknowns(int d) { return static_cast<size_t>((d + 1) * (d + 2) / 2); }

ModeqGuess guess_modeq(const Rational& s, int k, int d, size_t terms, int sign) {
  if (k < 1) throw DomainError("guess_modeq: order must be positive");
  if (d < 1) throw DomainError("guess_modeq: degree must be positive");
  const auto mons = monomials(d);
  const size_t margin = 8;
  if (terms < mons.size() + margin) {
    throw DomainError("guess_modeq: " + std::to_string(terms) + " terms cannot determine " +
                      std::to_string(mons.size()) + " unknowns (need at least " +
                      std::to_string(mons.size() + margin) + ")");
  }
  auto x = to_integer(z_series(s, terms));
  auto y = substitute_power(x, k, sign, terms);
  auto xp = powers(x, d), yp = powers(y, d);

  // Column for x^i y^j holds the q-coefficients of that monomial.
  std::vector<IntSeries> cols;
  for (auto [i, j] : mons) cols.push_back(mul(xp[i], yp[j]));
  std::vector<std::vector<Integer>> rows(terms, std::vector<Integer>(mons.size()));
  for (size_t n = 0; n < terms; ++n)
    for (size_t c = 0; c < mons.size(); ++c) rows[n][c] = cols[c][n];

  ModeqGuess g;
  g.unknowns = mons.size();
  g.equations = terms;
  for (const auto& v : integer_nullspace(std::move(rows), mons.size())) {
    BivarPoly p(d);
    for (size_t c = 0; c < mons.size(); ++c) p.at(mons[c].first, mons[c].second) = v[c];
    p.normalize();
    g.basis.push_back(std::move(p));
  }
  return g;
}

ModeqSeriesCheck verify_modeq_series(const BivarPoly& p, const Rational& s, int k, size_t depth, int sign) {
  if (k < 1) throw DomainError("verify_modeq_series: order must be positive");
  auto x = to_integer(z_series(s, depth));
  auto y = substitute_power(x, k, sign, depth);
  auto yp = powers(y, p.degree);
  // Horner in x.
  IntSeries total(depth, 0);
  for (int i = p.degree; i >= 0; --i) {
    total = mul(total, x);
    for (int j = 0; i + j <= p.degree; ++j) {
      if (p.at(i, j) == 0) continue;
      for (size_t n = 0; n < depth; ++n) total[n] += p.at(i, j) * yp[j][n];
    }
  }
  ModeqSeriesCheck r;
  r.depth = depth;
  r.exact = true;
  for (size_t n = 0; n < depth; ++n) {
    if (total[n] != 0) {
      r.exact = false;
      r.first_nonzero = n;
      break;
    }
  }
  return r;
}

Real verify_modeq_numeric(const BivarPoly& p, const std::vector<std::pair<Real, Real>>& points,
                          const PrecisionContext& ctx) {
  Real worst(ctx.bits());
  for (const auto& [x, y] : points) worst = max(worst, abs(p.eval(x.with_prec(ctx.bits()), y.with_prec(ctx.bits()))));
  return worst;
}

Real z_of_nome(const Rational& s, const Real& q, const PrecisionContext& ctx) {
  return eval_q_series(z_series(s, 250), q, ctx);
}

Real z_half_from_nome(const Real& q, const PrecisionContext& ctx) {
  Real l = lambda_from_nome(q, ctx);
  return 4 * l * (1 - l);
}

Real z_half(const Real& t, int sign, const PrecisionContext& ctx) {
  if (!(t > 0)) throw DomainError("z_half needs t > 0");
  Real q = exp(-pi(ctx.bits()) * t.with_prec(ctx.bits()));
  return z_half_from_nome(sign < 0 ? -q : q, ctx);
}

Real guetzlaff_residual(const Real& t, const PrecisionContext& ctx) {
  if (!(t > 0)) throw DomainError("guetzlaff_residual needs t > 0");
  const mpfr_prec_t bits = ctx.bits();
  const Real tt = t.with_prec(bits);
  // 1 - lambda(t) = lambda(1/t) avoids cancellation when lambda is close to 1.
  Real l1 = lambda_modular(tt, ctx), l7 = lambda_modular(tt / 7, ctx);
  Real m1 = lambda_modular(1 / tt, ctx), m7 = lambda_modular(7 / tt, ctx);
  Real lhs = root(l1 * l7, 8) + root(m1 * m7, 8);
  return abs(lhs - 1);
}

Real duality_residual(const Real& t, const PrecisionContext& ctx) {
  if (!(t > 0)) throw DomainError("duality_residual needs t > 0");
  const Real tt = t.with_prec(ctx.bits());
  return abs(z_half(tt, -1, ctx) * z_half(2 / tt, -1, ctx) - 1);
}

BivarPoly alternating_order2_poly() {
  BivarPoly p(3);
  p.at(1, 0) = 64;
  p.at(0, 2) = 1;
  p.at(1, 1) = -48;
  p.at(2, 1) = 64;
  return p;
}

}  // namespace pisums

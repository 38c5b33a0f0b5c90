// Truncated power series and log-augmented (Frobenius) series over an exact or
// big-float coefficient ring.
#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pisums/arith.hpp"

namespace pisums {

// ---------------------------------------------------------------------------
// Ring glue: every coefficient type provides zero/one "like" another element
// (big floats carry their precision) and lifting of rationals.

inline Rational zero_like(const Rational&) { return Rational(0); }
inline Real zero_like(const Real& x) { return Real(x.prec()); }
inline Complex zero_like(const Complex& x) { return Complex(x.prec()); }
inline QuadExt zero_like(const QuadExt&) { return QuadExt(); }

inline Rational lift(const Rational& q, const Rational&) { return q; }
inline Real lift(const Rational& q, const Real& like) { return Real(q, like.prec()); }
inline Complex lift(const Rational& q, const Complex& like) { return Complex(Real(q, like.prec()), Real(like.prec())); }
inline QuadExt lift(const Rational& q, const QuadExt&) { return QuadExt(q); }
inline Real lift(const Real& x, const Real& like) { return x.prec() == like.prec() ? x : x.with_prec(like.prec()); }
inline Complex lift(const Real& x, const Complex& like) { return Complex(x.with_prec(like.prec()), Real(like.prec())); }
inline Complex lift(const Complex& x, const Complex&) { return x; }
inline Real lift(const QuadExt& x, const Real& like) { return x.to_real(like.prec()); }
inline Complex lift(const QuadExt& x, const Complex& like) { return lift(x.to_real(like.prec()), like); }
inline QuadExt lift(const QuadExt& x, const QuadExt&) { return x; }

template <class C>
C one_like(const C& like) {
  return lift(Rational(1), like);
}

inline Rational div_int(const Rational& x, long n) { return x / Rational(n); }
inline Real div_int(const Real& x, long n) { return x / n; }
inline Complex div_int(const Complex& x, long n) { return Complex(x.re / n, x.im / n); }
inline QuadExt div_int(const QuadExt& x, long n) { return x / QuadExt(n); }

inline Rational mul_int(const Rational& x, long n) { return x * Rational(n); }
inline Real mul_int(const Real& x, long n) { return x * n; }
inline Complex mul_int(const Complex& x, long n) { return x * n; }
inline QuadExt mul_int(const QuadExt& x, long n) { return x * QuadExt(n); }

inline bool is_zero(const Rational& x) { return x == 0; }
inline bool is_zero(const Real& x) { return x.is_zero(); }
inline bool is_zero(const Complex& x) { return x.is_zero(); }
inline bool is_zero(const QuadExt& x) { return x == QuadExt(); }

// x^r for the constant term of a series; exact rings require an exact root.
Rational scalar_pow(const Rational& x, const Rational& r);
Real scalar_pow(const Real& x, const Rational& r);
QuadExt scalar_pow(const QuadExt& x, const Rational& r);
Complex scalar_pow(const Complex& x, const Rational& r);

inline std::string coeff_string(const Rational& x) { return to_string(x); }
inline std::string coeff_string(const QuadExt& x) { return x.to_string(); }
inline std::string coeff_string(const Real& x) { return x.to_string(static_cast<int>(x.prec() / 3.33)); }

// ---------------------------------------------------------------------------

template <class C>
class PowerSeries {
 public:
  using value_type = C;

  PowerSeries() = default;
  explicit PowerSeries(std::vector<C> coeffs) : c_(std::move(coeffs)) {}

  static PowerSeries zero(const C& like, size_t n) { return PowerSeries(std::vector<C>(n, zero_like(like))); }
  static PowerSeries constant(const C& v, size_t n) {
    PowerSeries s = zero(v, n);
    if (n) s.c_[0] = v;
    return s;
  }
  // The series z (requires n >= 2 to be meaningful).
  static PowerSeries variable(const C& like, size_t n) {
    PowerSeries s = zero(like, n);
    if (n > 1) s.c_[1] = one_like(like);
    return s;
  }

  size_t order() const { return c_.size(); }
  bool empty() const { return c_.empty(); }
  const C& operator[](size_t i) const { return c_[i]; }
  C& operator[](size_t i) { return c_[i]; }
  const std::vector<C>& coeffs() const { return c_; }
  std::vector<C>& coeffs() { return c_; }
  const C& like() const { return c_.front(); }

  PowerSeries truncate(size_t n) const {
    PowerSeries r = *this;
    if (n < r.c_.size()) r.c_.resize(n);
    return r;
  }

  PowerSeries& operator+=(const PowerSeries& o) {
    const size_t n = std::min(order(), o.order());
    c_.resize(n);
    for (size_t i = 0; i < n; ++i) c_[i] += o.c_[i];
    return *this;
  }
  PowerSeries& operator-=(const PowerSeries& o) {
    const size_t n = std::min(order(), o.order());
    c_.resize(n);
    for (size_t i = 0; i < n; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  PowerSeries& operator*=(const C& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

 private:
  std::vector<C> c_;
};

template <class C>
PowerSeries<C> operator+(PowerSeries<C> a, const PowerSeries<C>& b) {
  return a += b;
}
template <class C>
PowerSeries<C> operator-(PowerSeries<C> a, const PowerSeries<C>& b) {
  return a -= b;
}
template <class C>
PowerSeries<C> operator-(const PowerSeries<C>& a) {
  PowerSeries<C> r = a;
  for (auto& x : r.coeffs()) x = -x;
  return r;
}
template <class C>
PowerSeries<C> operator*(PowerSeries<C> a, const C& s) {
  return a *= s;
}
template <class C>
PowerSeries<C> operator*(const C& s, PowerSeries<C> a) {
  return a *= s;
}

// a + constant
template <class C>
PowerSeries<C> add_constant(PowerSeries<C> a, const C& v) {
  if (a.order()) a[0] += v;
  return a;
}

template <class C>
PowerSeries<C> operator*(const PowerSeries<C>& a, const PowerSeries<C>& b) {
  const size_t n = std::min(a.order(), b.order());
  if (n == 0) return PowerSeries<C>();
  PowerSeries<C> r = PowerSeries<C>::zero(a.like(), n);
  for (size_t i = 0; i < n; ++i) {
    if (is_zero(a[i])) continue;
    for (size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

template <class C>
PowerSeries<C> inverse(const PowerSeries<C>& b) {
  if (b.order() == 0 || is_zero(b[0])) throw DomainError("series inverse: zero constant term");
  const size_t n = b.order();
  PowerSeries<C> r = PowerSeries<C>::zero(b.like(), n);
  const C inv0 = one_like(b[0]) / b[0];
  r[0] = inv0;
  for (size_t k = 1; k < n; ++k) {
    C acc = zero_like(b[0]);
    for (size_t j = 1; j <= k; ++j) acc += b[j] * r[k - j];
    r[k] = -(acc * inv0);
  }
  return r;
}

template <class C>
PowerSeries<C> operator/(const PowerSeries<C>& a, const PowerSeries<C>& b) {
  if (b.order() == 0 || is_zero(b[0])) throw DomainError("series division: zero constant term");
  const size_t n = std::min(a.order(), b.order());
  PowerSeries<C> r = PowerSeries<C>::zero(b.like(), n);
  const C inv0 = one_like(b[0]) / b[0];
  for (size_t k = 0; k < n; ++k) {
    C acc = a[k];
    for (size_t j = 1; j <= k; ++j) acc -= b[j] * r[k - j];
    r[k] = acc * inv0;
  }
  return r;
}

// f^r for rational r: n g_n f_0 = sum_{k=1}^n (r k - (n-k)) f_k g_{n-k}.
template <class C>
PowerSeries<C> pow_rational(const PowerSeries<C>& f, const Rational& r) {
  if (f.order() == 0) return f;
  if (is_zero(f[0])) throw DomainError("rational power of a series with zero constant term");
  const size_t n = f.order();
  PowerSeries<C> g = PowerSeries<C>::zero(f.like(), n);
  g[0] = scalar_pow(f[0], r);
  const C inv0 = one_like(f[0]) / f[0];
  for (size_t m = 1; m < n; ++m) {
    C acc = zero_like(f[0]);
    for (size_t k = 1; k <= m; ++k) {
      Rational w = r * Rational(static_cast<long>(k)) - Rational(static_cast<long>(m - k));
      if (w == 0) continue;
      acc += lift(w, f[0]) * f[k] * g[m - k];
    }
    g[m] = div_int(acc * inv0, static_cast<long>(m));
  }
  return g;
}

template <class C>
PowerSeries<C> sqrt(const PowerSeries<C>& f) {
  return pow_rational(f, Rational(1, 2));
}

template <class C>
PowerSeries<C> exp(const PowerSeries<C>& f) {
  if (f.order() == 0) return f;
  if (!is_zero(f[0])) throw DomainError("series exp needs zero constant term");
  const size_t n = f.order();
  PowerSeries<C> g = PowerSeries<C>::zero(f.like(), n);
  g[0] = one_like(f[0]);
  for (size_t m = 1; m < n; ++m) {
    C acc = zero_like(f[0]);
    for (size_t k = 1; k <= m; ++k) acc += mul_int(f[k], static_cast<long>(k)) * g[m - k];
    g[m] = div_int(acc, static_cast<long>(m));
  }
  return g;
}

template <class C>
PowerSeries<C> log(const PowerSeries<C>& f) {
  if (f.order() == 0) return f;
  if (!is_zero(f[0] - one_like(f[0]))) throw DomainError("series log needs constant term 1");
  const size_t n = f.order();
  PowerSeries<C> g = PowerSeries<C>::zero(f.like(), n);
  for (size_t m = 1; m < n; ++m) {
    C acc = mul_int(f[m], static_cast<long>(m));
    for (size_t k = 1; k < m; ++k) acc -= mul_int(g[k], static_cast<long>(k)) * f[m - k];
    g[m] = div_int(acc, static_cast<long>(m));
  }
  return g;
}

// theta = z d/dz
template <class C>
PowerSeries<C> theta(const PowerSeries<C>& f) {
  PowerSeries<C> r = f;
  for (size_t i = 0; i < r.order(); ++i) r[i] = mul_int(f[i], static_cast<long>(i));
  return r;
}

// d/dz; the result has one fewer known coefficient.
template <class C>
PowerSeries<C> derivative(const PowerSeries<C>& f) {
  if (f.order() <= 1) return PowerSeries<C>();
  std::vector<C> c;
  c.reserve(f.order() - 1);
  for (size_t i = 1; i < f.order(); ++i) c.push_back(mul_int(f[i], static_cast<long>(i)));
  return PowerSeries<C>(std::move(c));
}

// Inverse of theta on series with zero constant term: coefficient n divided by n.
template <class C>
PowerSeries<C> theta_inverse(const PowerSeries<C>& f) {
  if (f.order() && !is_zero(f[0])) throw DomainError("theta_inverse needs zero constant term");
  PowerSeries<C> r = f;
  for (size_t i = 1; i < r.order(); ++i) r[i] = div_int(f[i], static_cast<long>(i));
  return r;
}

// outer(inner(z)); inner must have zero constant term unless polynomial_outer is set,
// in which case outer is taken as an exact polynomial.
template <class C>
PowerSeries<C> compose(const PowerSeries<C>& outer, const PowerSeries<C>& inner, bool polynomial_outer = false) {
  if (inner.order() == 0 || outer.order() == 0) return PowerSeries<C>();
  if (!polynomial_outer && !is_zero(inner[0])) {
    throw DomainError("compose: inner series has nonzero constant term");
  }
  const size_t n = polynomial_outer ? inner.order() : std::min(outer.order(), inner.order());
  PowerSeries<C> r = PowerSeries<C>::constant(outer[outer.order() - 1], n);
  for (size_t k = outer.order() - 1; k-- > 0;) {
    r = r * inner.truncate(n);
    r[0] += outer[k];
  }
  return r.truncate(n);
}

// Powers table [z^n] g^k of a series g with zero constant term, k,n < N.
template <class C>
struct PowerTable {
  std::vector<std::vector<C>> p;  // p[k][n]
  size_t order() const { return p.empty() ? 0 : p[0].size(); }
};

template <class C>
PowerTable<C> power_table(const PowerSeries<C>& g) {
  if (g.order() && !is_zero(g[0])) throw DomainError("power_table needs zero constant term");
  const size_t n = g.order();
  PowerTable<C> t;
  t.p.assign(n, std::vector<C>(n, zero_like(g.like())));
  if (n == 0) return t;
  t.p[0][0] = one_like(g.like());
  for (size_t k = 1; k < n; ++k) {
    for (size_t m = k; m < n; ++m) {
      C acc = zero_like(g.like());
      for (size_t j = 1; j + k - 1 <= m; ++j) {
        if (is_zero(g[j])) continue;
        acc += g[j] * t.p[k - 1][m - j];
      }
      t.p[k][m] = std::move(acc);
    }
  }
  return t;
}

// h(g(z)) given the power table of g.
template <class C>
PowerSeries<C> compose_with(const PowerSeries<C>& h, const PowerTable<C>& t) {
  const size_t n = std::min(h.order(), t.order());
  PowerSeries<C> r = PowerSeries<C>::zero(h.like(), n);
  for (size_t k = 0; k < n; ++k) {
    if (is_zero(h[k])) continue;
    for (size_t m = k; m < n; ++m) r[m] += h[k] * t.p[k][m];
  }
  return r;
}

// Compositional inverse g of f (f(0)=0, f'(0) invertible), with the power table of g.
template <class C>
std::pair<PowerSeries<C>, PowerTable<C>> revert_with_powers(const PowerSeries<C>& f) {
  const size_t n = f.order();
  if (n < 2 || !is_zero(f[0]) || is_zero(f[1])) throw DomainError("revert: need f(0)=0 and f'(0) invertible");
  const C& like = f.like();
  PowerSeries<C> g = PowerSeries<C>::zero(like, n);
  PowerTable<C> t;
  t.p.assign(n, std::vector<C>(n, zero_like(like)));
  t.p[0][0] = one_like(like);
  const C inv1 = one_like(like) / f[1];
  for (size_t m = 1; m < n; ++m) {
    // [z^m] g^k for k >= 2 only involves g_1..g_{m-1}.
    for (size_t k = 2; k <= m; ++k) {
      C acc = zero_like(like);
      for (size_t j = 1; j + k - 1 <= m; ++j) acc += g[j] * t.p[k - 1][m - j];
      t.p[k][m] = std::move(acc);
    }
    C acc = m == 1 ? one_like(like) : zero_like(like);
    for (size_t k = 2; k <= m; ++k) acc -= f[k] * t.p[k][m];
    g[m] = acc * inv1;
    t.p[1][m] = g[m];
  }
  return {std::move(g), std::move(t)};
}

template <class C>
PowerSeries<C> revert(const PowerSeries<C>& f) {
  return revert_with_powers(f).first;
}

// Horner evaluation of a series at a point of a (possibly wider) ring T.
template <class C, class T>
T evaluate(const PowerSeries<C>& f, const T& x) {
  if (f.order() == 0) return zero_like(x);
  T r = lift(f[f.order() - 1], x);
  for (size_t k = f.order() - 1; k-- > 0;) {
    r *= x;
    r += lift(f[k], x);
  }
  return r;
}

// Evaluation with a tail report: `tail` receives the largest |term| among the
// last `window` terms (a truncation indicator for slowly converging q-series).
template <class C>
Real evaluate_with_tail(const PowerSeries<C>& f, const Real& x, size_t window, Real* tail) {
  Real sum = zero_like(x);
  Real xp = one_like(x);
  Real last = zero_like(x);
  const size_t n = f.order();
  for (size_t k = 0; k < n; ++k) {
    Real term = lift(f[k], x) * xp;
    if (k + window >= n) last = max(last, abs(term));
    sum += term;
    xp *= x;
  }
  if (tail) *tail = last;
  return sum;
}

// ---------------------------------------------------------------------------

// sum_j f_j(z) ln^j(z) / j!
template <class C>
class LogSeries {
 public:
  LogSeries() = default;
  explicit LogSeries(std::vector<PowerSeries<C>> blocks) : b_(std::move(blocks)) {}

  size_t degree() const { return b_.empty() ? 0 : b_.size() - 1; }
  size_t blocks() const { return b_.size(); }
  const PowerSeries<C>& block(size_t j) const { return b_[j]; }
  PowerSeries<C>& block(size_t j) { return b_[j]; }
  size_t order() const { return b_.empty() ? 0 : b_[0].order(); }

  LogSeries& operator+=(const LogSeries& o) {
    if (o.b_.size() > b_.size()) {
      const auto& like = o.b_[0].like();
      b_.resize(o.b_.size(), PowerSeries<C>::zero(like, o.order()));
    }
    for (size_t j = 0; j < o.b_.size(); ++j) b_[j] += o.b_[j];
    return *this;
  }

 private:
  std::vector<PowerSeries<C>> b_;
};

// theta(f L^j/j!) = theta(f) L^j/j! + f L^{j-1}/(j-1)!
template <class C>
LogSeries<C> theta(const LogSeries<C>& w) {
  std::vector<PowerSeries<C>> out;
  for (size_t j = 0; j < w.blocks(); ++j) out.push_back(theta(w.block(j)));
  for (size_t j = 1; j < w.blocks(); ++j) out[j - 1] += w.block(j);
  return LogSeries<C>(std::move(out));
}

// Value at z with the given value of ln z.
template <class C, class T>
T evaluate(const LogSeries<C>& w, const T& z, const T& lnz) {
  T total = zero_like(z);
  T lp = one_like(z);
  for (size_t j = 0; j < w.blocks(); ++j) {
    if (j > 0) {
      lp *= lnz;
      lp = div_int(lp, static_cast<long>(j));
    }
    total += evaluate(w.block(j), z) * lp;
  }
  return total;
}

// Dump format: one coefficient per line, `n<TAB>numerator/denominator`.
template <class C>
void dump_series(std::ostream& os, const PowerSeries<C>& f) {
  for (size_t n = 0; n < f.order(); ++n) os << n << '\t' << coeff_string(f[n]) << '\n';
}

}  // namespace pisums

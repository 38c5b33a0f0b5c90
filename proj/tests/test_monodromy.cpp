#include <doctest.h>

#include "pisums/monodromy.hpp"

using namespace pisums;

namespace {

Real tol(const PrecisionContext& ctx, int digits) { return pow(Real(10L, ctx.bits()), -digits); }
Complex cr(const Rational& q, const PrecisionContext& ctx) { return Complex(Real(q, ctx.bits())); }

Real max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Real m(a[0].prec());
  for (size_t i = 0; i < a.size(); ++i) m = max(m, abs(a[i] - b[i]));
  return m;
}

// (w, w', w'') of sum (1/2)_n^3/n!^3 z^n by direct summation.
std::vector<Complex> w0_direct(const Rational& z, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real zz(z, bits), c(1L, bits), zn(1L, bits);
  Real v(bits), d1(bits), d2(bits);
  for (long n = 0; n < 200; ++n) {
    Real t = c * zn;
    v += t;
    if (n >= 1) d1 += t * n / zz;
    if (n >= 2) d2 += t * (n * (n - 1)) / (zz * zz);
    Real f = Real(2 * n + 1, bits) / (2 * (n + 1));
    c *= f * f * f;
    zn *= zz;
  }
  return {Complex(v), Complex(d1), Complex(d2)};
}

const HypOperator& couple_half() {
  static const HypOperator op = couple_operator(make_rational(1, 2), make_rational(1, 2));
  return op;
}

}  // namespace

TEST_SUITE("monodromy") {
  TEST_CASE("singular points of hypergeometric operators") {
    auto s = singular_points(couple_half(), 128);
    REQUIRE(s.size() == 2);
    CHECK(s[0].is_zero());
    CHECK(abs(s[1] - Complex(Real(1L, 128))) < Real::from_double(1e-30, 128));
  }

  TEST_CASE("constant path is the identity") {
    PrecisionContext ctx(30);
    auto op = hypergeometric_operator({make_rational(1, 2), make_rational(1, 2), make_rational(1, 2)});
    Path p;
    p.waypoints = {cr(make_rational(1, 5), ctx), cr(make_rational(1, 5), ctx)};
    std::vector<Complex> v = {cr(Rational(1), ctx), cr(make_rational(-2, 3), ctx), cr(make_rational(7, 2), ctx)};
    CHECK(max_diff(ode_transport(op, p, v, ctx), v) < tol(ctx, 40));
  }

  TEST_CASE("transport there and back") {
    PrecisionContext ctx(30);
    auto op = hypergeometric_operator({make_rational(1, 2), make_rational(1, 2), make_rational(1, 2)});
    const mpfr_prec_t bits = ctx.bits();
    Complex a = cr(make_rational(1, 128), ctx);
    Complex b(Real(make_rational(3, 10), bits), Real(make_rational(2, 5), bits));
    Path there, back;
    there.waypoints = {a, b};
    back.waypoints = {b, a};
    std::vector<Complex> v = {cr(Rational(1), ctx), cr(make_rational(1, 3), ctx), cr(make_rational(-1, 7), ctx)};
    auto w = ode_transport(op, back, ode_transport(op, there, v, ctx), ctx);
    CHECK(max_diff(w, v) < tol(ctx, 28));
  }

  TEST_CASE("transport of the holomorphic solution matches its series") {
    PrecisionContext ctx(30);
    auto op = hypergeometric_operator({make_rational(1, 2), make_rational(1, 2), make_rational(1, 2)});
    Path p;
    p.waypoints = {cr(make_rational(1, 128), ctx), cr(make_rational(1, 64), ctx)};
    auto w = ode_transport(op, p, w0_direct(make_rational(1, 128), ctx), ctx);
    CHECK(max_diff(w, w0_direct(make_rational(1, 64), ctx)) < tol(ctx, 28));
    // The Frobenius matrix column 0 is the same vector.
    auto Y = frobenius_matrix(op, Real(make_rational(1, 64), ctx.bits()), ctx);
    std::vector<Complex> col{Y[0][0], Y[1][0], Y[2][0]};
    CHECK(max_diff(col, w) < tol(ctx, 28));
  }

  TEST_CASE("loop around zero is exact and matches the numerics") {
    PrecisionContext ctx(30);
    auto r = loop_monodromy(couple_half(), Rational(0), make_rational(1, 128), ctx);
    CHECK(r.exact);
    const Real two_pi = 2 * pi(ctx.bits());
    CHECK(abs(r.matrix[0][1] - Complex(Real(ctx.bits()), two_pi)) < tol(ctx, 40));
    CHECK(abs(r.matrix[1][0]) < tol(ctx, 40));
    Real zb(make_rational(1, 64), ctx.bits());
    auto num = monodromy_along(couple_half(), circle_loop(cr(Rational(0), ctx), zb, zb, 16), zb, ctx);
    CHECK(max_abs_diff(num, r.matrix) < tol(ctx, 25));
  }

  TEST_CASE("path homotopy and the generator product") {
    PrecisionContext ctx(30);
    const mpfr_prec_t bits = ctx.bits();
    const auto zb = make_rational(1, 128);
    const Real zbr(zb, bits);
    auto m1 = loop_monodromy(couple_half(), Rational(1), zb, ctx);
    auto sq = monodromy_along(couple_half(), square_loop(cr(Rational(1), ctx), Real(make_rational(1, 2), bits), zbr),
                              zbr, ctx);
    CHECK(max_abs_diff(sq, m1.matrix) < tol(ctx, 20));
    auto minf = monodromy_along(couple_half(), infinity_loop(zbr, Real(2L, bits), 32), zbr, ctx);
    auto m0 = exact_monodromy_at_zero(5, bits);
    auto prod = mat_mul(mat_mul(m0, m1.matrix), minf);
    CHECK(max_abs_diff(prod, identity_matrix(5, bits)) < tol(ctx, 15));
  }

  TEST_CASE("eigenvalues at the conifold point follow the local exponents") {
    PrecisionContext ctx(30);
    const mpfr_prec_t bits = ctx.bits();
    std::vector<HypOperator> ops = {
        couple_half(), couple_operator(make_rational(1, 2), make_rational(1, 3)),
        hypergeometric_operator({make_rational(1, 2), make_rational(1, 2), make_rational(1, 2)})};
    for (const auto& op : ops) {
      CAPTURE(op.name);
      const size_t m = op.order();
      auto r = loop_monodromy(op, Rational(1), make_rational(1, 128), ctx);
      // (x - 1)^(m-1) (x - e^(2 pi i beta))
      Rational beta = conifold_exponent(op);
      Complex lam = polar(Real(1L, bits), 2 * pi(bits) * Real(beta, bits));
      std::vector<Complex> expect{Complex(Real(1L, bits))};
      auto mul_linear = [&](const Complex& root) {
        std::vector<Complex> next(expect.size() + 1, Complex(bits));
        for (size_t k = 0; k < expect.size(); ++k) {
          next[k + 1] += expect[k];
          next[k] -= expect[k] * root;
        }
        expect = next;
      };
      for (size_t k = 0; k + 1 < m; ++k) mul_linear(Complex(Real(1L, bits)));
      mul_linear(lam);
      auto cp = char_poly(r.matrix);
      REQUIRE(cp.size() == expect.size());
      for (size_t k = 0; k < cp.size(); ++k) CHECK(abs(cp[k] - expect[k]) < tol(ctx, 20));
      auto d = r.matrix;
      for (size_t i = 0; i < m; ++i) d[i][i] -= Complex(Real(1L, bits));
      CHECK(numerical_rank(d, tol(ctx, 15)) == 1);
    }
  }

  TEST_CASE("conjectured matrix structure") {
    const mpfr_prec_t bits = 128;
    Real ac(make_rational(5, 6), bits), t2(Rational(1), bits);
    Complex d(Real::from_double(0.3, bits), Real::from_double(-0.1, bits));
    for (bool rank_one : {false, true}) {
      auto c = conjectured_matrix(ac, t2, d, rank_one);
      for (size_t j = 0; j < 5; ++j) {
        CHECK(abs(c[3][j] - Complex(Real(j == 3 ? 1L : 0L, bits))) < Real::from_double(1e-30, bits));
        if (j != 1) CHECK(c[j][1].is_zero());
      }
      auto cp = char_poly(c);
      // Trace 3 in both forms.
      CHECK(abs(cp[4] + Complex(Real(3L, bits))) < Real::from_double(1e-30, bits));
      // Only the rank-one form is a reflection (det = -1).
      Real det_gap = abs(cp[0] - Complex(Real(1L, bits)));
      if (rank_one) {
        CHECK(det_gap < Real::from_double(1e-30, bits));
        auto sq = mat_mul(c, c);
        CHECK(max_abs_diff(sq, identity_matrix(5, bits)) < Real::from_double(1e-30, bits));
      } else {
        CHECK(det_gap > Real::from_double(0.1, bits));
      }
    }
  }

  TEST_CASE("conjecture fit is reported") {
    PrecisionContext ctx(30);
    auto r = loop_monodromy(couple_half(), Rational(1), make_rational(1, 128), ctx);
    auto fits = fit_conjecture_matrix(r, make_rational(1, 2), make_rational(1, 2), ctx);
    REQUIRE(fits.size() == 2);
    CHECK(fits[0].residual <= fits[1].residual);
    for (const auto& f : fits) {
      CHECK(f.gauge.size() == 5);
      CHECK_FALSE(f.notes.empty());
      if (f.rank_one_variant) {
        CHECK(f.charpoly_gap < tol(ctx, 20));
      } else {
        CHECK(f.charpoly_gap > Real::from_double(0.1, ctx.bits()));
      }
    }
    CHECK_THROWS_AS(loop_monodromy(couple_half(), make_rational(1, 2), make_rational(1, 128), ctx), DomainError);
  }
}

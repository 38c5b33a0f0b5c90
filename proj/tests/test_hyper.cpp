#include <doctest.h>

#include <set>

#include "pisums/hyper.hpp"

using namespace pisums;

namespace {
Real tol(const PrecisionContext& ctx, int digits) { return pow(Real(10L, ctx.bits()), -digits); }
}  // namespace

TEST_SUITE("hyper") {
  TEST_CASE("pochhammer") {
    CHECK(pochhammer(make_rational(1, 2), 0) == 1);
    CHECK(pochhammer(make_rational(1, 2), 2) == make_rational(3, 4));
    CHECK(pochhammer(Rational(1), 6) == 720);
    CHECK(hyper_coefficient({make_rational(1, 2), make_rational(1, 2), make_rational(1, 2), make_rational(1, 3),
                             make_rational(2, 3)},
                            1) == make_rational(1, 36));
  }

  TEST_CASE("rama42 and wz series") {
    PrecisionContext ctx(100);
    auto rep = sum_series(find_series("pi.rama42"), ctx);
    CHECK(rep.digits_matched >= 100);
    CHECK(rep.method == "direct");
    PrecisionContext c60(60);
    for (const char* id : {"pi2.wz1", "pi2.wz2", "pi2.wz3", "pi2.wz4"}) {
      CAPTURE(id);
      CHECK(sum_series(find_series(id), c60).digits_matched >= 60);
    }
  }

  TEST_CASE("every convergent builtin entry matches its right side to 40 digits") {
    PrecisionContext ctx(40);
    for (const auto& d : builtin_corpus()) {
      if (d.divergent || (d.kind != SeriesKind::Pi && d.kind != SeriesKind::Pi2)) continue;
      CAPTURE(d.id);
      CHECK(sum_series(d, ctx).digits_matched >= 40);
    }
  }

  TEST_CASE("digits per term") {
    PrecisionContext ctx(100);
    double d1103 = sum_series(find_series("pi.rama.1103"), ctx).digits_per_term;
    double d1123 = sum_series(find_series("pi.rama.1123"), ctx).digits_per_term;
    CHECK(d1103 > 7.5);
    CHECK(d1103 < 8.5);
    CHECK(d1123 > 5.5);
    CHECK(d1123 < 6.5);
  }

  TEST_CASE("tail certificate exceeds the true remainder") {
    // Sum with a coarse context and compare with a much finer one.
    for (const char* id : {"pi.rama42", "pi2.wz3", "pi.alt.6n1"}) {
      CAPTURE(id);
      PrecisionContext lo(20, 0), hi(80);
      auto a = sum_series(find_series(id), lo);
      auto b = sum_series(find_series(id), hi);
      Real diff = abs(a.value.with_prec(hi.bits()) - b.value);
      // The rounding error of the low-precision sum is at most a few ulps per term.
      Real ulps = pow(Real(2L, hi.bits()), -static_cast<long>(lo.bits()) + 8) * a.terms_used;
      CHECK(diff <= a.error_bound.with_prec(hi.bits()) + ulps);
    }
  }

  TEST_CASE("digits matched is monotone in precision") {
    int prev = 0;
    for (int d : {20, 35, 50, 80}) {
      int got = sum_series(find_series("pi2.wz4"), PrecisionContext(d)).digits_matched;
      CHECK(got >= prev);
      prev = got;
    }
  }

  TEST_CASE("degenerate z = 0") {
    auto defs = parse_catalog("[series zero]\nkind = pi\ns = 1/2, 1/2, 1/2\nz = 0\na = 7/3\nb = 5\nrhs = 1/pi\n");
    PrecisionContext ctx(30);
    auto rep = sum_series(defs[0], ctx);
    CHECK(abs(rep.value - Real(make_rational(7, 3), ctx.bits())) < tol(ctx, 35));
  }

  TEST_CASE("divergent entries are rejected by direct summation") {
    CHECK_THROWS_AS(sum_series(find_series("pi.divergent.15n4"), PrecisionContext(20)), DomainError);
  }

  TEST_CASE("Mellin-Barnes closed form") {
    PrecisionContext ctx(30);
    auto r = mb_continuation({1, 1}, {2}, Real(-4L, ctx.bits()), ctx);
    Real want = log(Real(5L, ctx.bits())) / 4;
    CHECK(abs(r.value - want) < tol(ctx, 30));
    CHECK(r.error_estimate < tol(ctx, 25));
  }

  TEST_CASE("Mellin-Barnes agrees with direct summation inside the disk") {
    PrecisionContext ctx(25);
    const Real z = Real(make_rational(-1, 2), ctx.bits());
    std::set<std::vector<Rational>> tuples;
    for (const auto& d : builtin_corpus()) {
      if (d.kind == SeriesKind::Pi || d.kind == SeriesKind::Pi2) tuples.insert(d.s);
    }
    for (const auto& s : tuples) {
      for (int k = 0; k < 3; ++k) {
        auto mr = moment_reduction(s, k);
        Real direct = hypergeometric_direct(mr.upper, mr.lower, z, ctx) * Real(mr.coef, ctx.bits()) *
                      pow(z, mr.z_power);
        Real mb = moment_value(s, k, z, ctx).value;
        CAPTURE(k);
        CHECK(abs(direct - mb) < tol(ctx, 25));
      }
    }
  }

  TEST_CASE("moment reduction") {
    std::vector<Rational> s = {make_rational(1, 2), make_rational(1, 2), make_rational(1, 2), make_rational(1, 3),
                               make_rational(2, 3)};
    auto r1 = moment_reduction(s, 1);
    CHECK(r1.coef == make_rational(1, 36));
    CHECK(r1.z_power == 1);
    CHECK(r1.upper == std::vector<Rational>{make_rational(3, 2), make_rational(3, 2), make_rational(3, 2),
                                            make_rational(4, 3), make_rational(5, 3)});
    CHECK(r1.lower == std::vector<Rational>{2, 2, 2, 2});
    auto r2 = moment_reduction(s, 2);
    CHECK(r2.lower == std::vector<Rational>{1, 2, 2, 2});
    auto r0 = moment_reduction(s, 0);
    CHECK(r0.upper == s);
    CHECK(r0.coef == 1);
    CHECK_THROWS_AS(moment_reduction(s, 3), DomainError);
    // Exact coefficient check: [z^n] of the reduced series times n! equals A_n n^k.
    for (int k = 1; k <= 2; ++k) {
      auto r = moment_reduction(s, k);
      for (long n = 1; n < 6; ++n) {
        Rational lhs = hyper_coefficient(s, n);
        for (int j = 0; j < k; ++j) lhs *= n;
        // coefficient of z^{n-1} in F(upper; lower) is prod (u)_{n-1} / prod (l)_{n-1} / (n-1)!
        Rational rhs = r.coef;
        for (const auto& u : r.upper) rhs *= pochhammer(u, n - 1);
        for (const auto& l : r.lower) rhs /= pochhammer(l, n - 1);
        rhs /= pochhammer(1, n - 1);
        CHECK(lhs == rhs);
      }
    }
  }

  TEST_CASE("dual series through continuation") {
    PrecisionContext ctx(25);
    auto r3 = continue_series(find_series("pi2.dual.wz3"), ctx);
    CHECK(r3.method == "mellin-barnes");
    CHECK(r3.digits_matched >= 20);
    auto r2 = continue_series(find_series("pi2.dual.wz2"), ctx);
    CHECK(r2.digits_matched >= 15);
    auto r15 = continue_series(find_series("pi.divergent.15n4"), ctx);
    CHECK(r15.digits_matched >= 15);
  }

  TEST_CASE("upside-down L5 sum") {
    PrecisionContext ctx(40);
    const auto& d = find_series("ud.L5");
    auto rep = upside_down_sum(d, ctx);
    CHECK(rep.digits_matched >= 30);
    CHECK(rep.digits_per_term > 4.0);
    CHECK(rep.digits_per_term < 5.0);
    // n = 1 term: z (a + b + c) / A_1 with A_1 = 1/36.
    PrecisionContext c2(30);
    Real z = d.z.eval(c2);
    Real first = z * 36 * (d.a.eval(c2) + d.b.eval(c2) + d.c.eval(c2));
    auto phi = QuadExt(make_rational(-11, 2), make_rational(5, 2), 5);
    QuadExt exact_first = pow(-phi / QuadExt(3), 3) * QuadExt(36) * (QuadExt(941) + QuadExt(84) * phi);
    CHECK(abs(first - exact_first.to_real(c2.bits())) < tol(c2, 28));
  }
}

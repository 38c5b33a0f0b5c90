#include <doctest.h>

#include "pisums/hyper.hpp"
#include "pisums/mirror.hpp"

using namespace pisums;

namespace {

Real tol(const PrecisionContext& ctx, int digits) { return pow(Real(10L, ctx.bits()), -digits); }

const Rational half = make_rational(1, 2);

std::vector<Rational> triple_half() { return {half, half, half}; }

// c_n(eps) = prod (s_i + eps)_n / (1 + eps)_n^m evaluated at a rational eps.
Rational shifted_coefficient(const std::vector<Rational>& s, long n, const Rational& eps) {
  Rational r = 1;
  for (const auto& si : s) r *= pochhammer(si + eps, n);
  for (size_t i = 0; i < s.size(); ++i) r /= pochhammer(1 + eps, n);
  return r;
}

// Exact q-series of 4 lambda (1 - lambda) from theta functions at nome q.
PowerSeries<Rational> theta_oracle(size_t n) {
  auto psi = PowerSeries<Rational>::zero(Rational(0), n);
  auto th3 = PowerSeries<Rational>::zero(Rational(0), n);
  for (size_t k = 0; k * (k + 1) < n; ++k) psi[k * (k + 1)] += 1;
  th3[0] = 1;
  for (size_t k = 1; k * k < n; ++k) th3[k * k] += 2;
  auto p4 = psi * psi * psi * psi;
  auto t4 = th3 * th3 * th3 * th3;
  auto ratio = p4 / t4;
  auto lambda = PowerSeries<Rational>::zero(Rational(0), n);
  for (size_t k = 0; k + 1 < n; ++k) lambda[k + 1] = 16 * ratio[k];
  auto one_minus = add_constant(-lambda, Rational(1));
  return lambda * one_minus * Rational(4);
}

}  // namespace

TEST_SUITE("mirror") {
  TEST_CASE("Frobenius coefficients") {
    auto b = frobenius_basis(hypergeometric_operator(triple_half()), 8);
    REQUIRE(b.size() == 3);
    CHECK(b[0].block(0)[0] == 1);
    CHECK(b[0].block(0)[1] == make_rational(1, 8));
    CHECK(b[1].block(0)[0] == 0);
    CHECK(b[1].block(0)[1] == make_rational(3, 8));
    CHECK(b[1].block(1)[1] == make_rational(1, 8));
    auto b5 = frobenius_blocks(couple_operator(half, half), 4);
    CHECK(b5[0][1] == make_rational(1, 32));
  }

  TEST_CASE("log partners match parameter derivatives") {
    // f_1[n] = d/d eps c_n(eps) at 0, against a central difference with step h.
    const std::vector<Rational> s = {half, make_rational(1, 3), make_rational(2, 3)};
    auto f = frobenius_blocks(hypergeometric_operator(s), 7);
    Rational h(1, Integer("1000000000000"));
    for (long n = 1; n < 7; ++n) {
      Rational fd = (shifted_coefficient(s, n, h) - shifted_coefficient(s, n, -h)) / (2 * h);
      Rational diff = abs(fd - f[1][n]);
      CHECK(diff < Rational(1, Integer("1000000000000000000")));
      // second block: half the second derivative
      Rational sd = (shifted_coefficient(s, n, h) - 2 * shifted_coefficient(s, n, 0) + shifted_coefficient(s, n, -h)) /
                    (2 * h * h);
      CHECK(abs(sd - f[2][n]) < Rational(1, Integer("1000000000")));
    }
  }

  TEST_CASE("Frobenius series solve the operator") {
    // Apply L to y_j = sum_p f_{j-p} ln^p / p! blockwise: every block of L y_j vanishes.
    for (const HypOperator& op : {couple_operator(half, make_rational(1, 3)), binom4_operator()}) {
      CAPTURE(op.name);
      const size_t N = 12;
      auto basis = frobenius_basis(op, N);
      for (const auto& y : basis) {
        std::vector<PowerSeries<Rational>> acc(y.blocks(), PowerSeries<Rational>::zero(Rational(0), N));
        for (size_t k = 0; k < op.polys.size(); ++k) {
          LogSeries<Rational> power = y;
          LogSeries<Rational> total({PowerSeries<Rational>::zero(Rational(0), N)});
          for (size_t d = 0; d < op.polys[k].size(); ++d) {
            LogSeries<Rational> term = power;
            for (size_t j = 0; j < term.blocks(); ++j) term.block(j) *= op.polys[k][d];
            total += term;
            power = theta(power);
          }
          for (size_t j = 0; j < total.blocks(); ++j) {
            for (size_t n = k; n < N; ++n) acc[j][n] += total.block(j)[n - k];
          }
        }
        for (const auto& blk : acc) {
          for (size_t n = 0; n < N; ++n) CHECK(blk[n] == 0);
        }
      }
    }
  }

  TEST_CASE("normalization constants") {
    PrecisionContext ctx(30);
    struct Case {
      HypOperator op;
      long C;
    };
    std::vector<Case> cases = {{hypergeometric_operator(triple_half()), 64},
                               {hypergeometric_operator({half, make_rational(1, 4), make_rational(3, 4)}), 256},
                               {hypergeometric_operator({half, make_rational(1, 3), make_rational(2, 3)}), 108},
                               {hypergeometric_operator({half, make_rational(1, 6), make_rational(5, 6)}), 1728},
                               {cy_operator(half, half), 256},
                               {cy_operator(half, make_rational(1, 3)), 432},
                               {couple_operator(half, half), 1024},
                               {couple_operator(half, make_rational(1, 3)), 1728},
                               {couple_operator(half, make_rational(1, 4)), 4096}};
    for (const auto& c : cases) {
      CAPTURE(c.op.name);
      auto nc = canonical_C(c.op, ctx);
      REQUIRE(nc.has_exact);
      CHECK(nc.exact == c.C);
      CHECK(abs(nc.value - Real(c.C, ctx.bits())) < tol(ctx, 25) * c.C);
    }
    auto five = canonical_C(couple_operator(make_rational(1, 5), make_rational(2, 5)), ctx);
    REQUIRE(five.has_exact);
    CHECK(abs(five.value - Real(five.exact, ctx.bits())) < tol(ctx, 25) * five.value);
    CHECK(five.log_form == "2*ln(2) + 5*ln(5)");
    auto partial = canonical_C(hypergeometric_operator({make_rational(1, 5), half, half}), ctx);
    CHECK_FALSE(partial.has_exact);
  }

  TEST_CASE("mirror map of the 1/2 triple is 4 lambda (1 - lambda)") {
    auto md = mirror_map(hypergeometric_operator(triple_half()), 30);
    CHECK(md.C == 64);
    CHECK(md.x_of_q[0] == 0);
    CHECK(md.x_of_q[1] == 64);
    auto oracle = theta_oracle(30);
    for (size_t n = 0; n < 30; ++n) {
      CAPTURE(n);
      CHECK(md.x_of_q[n] == oracle[n]);
    }
    // round trips
    auto id1 = compose(md.q_of_x, md.x_of_q);
    auto id2 = compose(md.x_of_q, md.q_of_x);
    for (size_t n = 0; n < 30; ++n) {
      CHECK(id1[n] == (n == 1 ? 1 : 0));
      CHECK(id2[n] == (n == 1 ? 1 : 0));
    }
  }

  TEST_CASE("q and z round trips for every operator family") {
    for (const HypOperator& op : {couple_operator(make_rational(1, 5), make_rational(2, 5)), cy_operator(half, half),
                                  binom4_operator()}) {
      CAPTURE(op.name);
      auto md = mirror_map(op, 25);
      auto id = compose(md.x_of_q, md.q_of_x);
      for (size_t n = 0; n < 25; ++n) CHECK(id[n] == (n == 1 ? 1 : 0));
    }
  }

  TEST_CASE("Yukawa coupling and T") {
    auto md = mirror_map(cy_operator(half, half), 50);
    auto K = yukawa(md);
    CHECK(K[0] == 1);
    auto T = tmap(K);
    CHECK(T[0] == 0);
    CHECK(T[1] == -K[1]);
    auto t3 = theta(theta(theta(T)));
    for (size_t n = 1; n < 50; ++n) {
      CHECK(t3[n] == -K[n]);
      CHECK(T[n] == md.T[n]);
    }
    // Independent route: K = theta_q^2 (y2/y0) with theta_q = (1/(1 + theta_z g1)) theta_z, then
    // substitute z(q) by plain composition.
    auto f = frobenius_blocks(cy_operator(half, half), 50);
    auto g1 = f[1] / f[0];
    auto g2 = f[2] / f[0];
    auto scale = inverse(add_constant(theta(g1), Rational(1)));
    auto G = g2 - g1 * g1 * Rational(make_rational(1, 2));
    auto once = theta(G) * scale;
    auto twice = theta(once) * scale;
    auto Kq = compose(add_constant(twice, Rational(1)), md.x_of_q);
    for (size_t n = 0; n < 50; ++n) CHECK(Kq[n] == K[n]);
    // CY level of the couple operator obeys the same relation.
    const auto& m5 = couple_mirror(half, half, 50);
    CHECK(m5.K[0] == 1);
    auto t5 = theta(theta(theta(m5.T)));
    for (size_t n = 1; n < 50; ++n) CHECK(t5[n] == -m5.K[n]);
  }

  TEST_CASE("critical constants") {
    PrecisionContext ctx(30);
    auto a = critical_constants(half, half, ctx);
    CHECK(*a.alpha_c_exact == make_rational(5, 6));
    CHECK(*a.tau_c_sq_exact == 1);
    CHECK(a.h_integer == 70);
    auto b = critical_constants(half, make_rational(1, 3), ctx);
    CHECK(*b.alpha_c_exact == 1);
    CHECK(*b.tau_c_sq_exact == make_rational(4, 3));
    CHECK(b.h_integer == 94);
    auto c = critical_constants(half, make_rational(1, 4), ctx);
    CHECK(*c.alpha_c_exact == make_rational(4, 3));
    CHECK(*c.tau_c_sq_exact == 2);
    for (const auto& [s1, s2] : allowed_couples()) {
      auto cc = critical_constants(s1, s2, ctx);
      CHECK(cc.alpha_c_exact.has_value());
      CHECK(cc.tau_c_sq_exact.has_value());
      CHECK(cc.h_integer > 0);
    }
    CHECK_THROWS_AS(critical_constants(make_rational(1, 5), make_rational(1, 5), ctx), DomainError);
  }

  TEST_CASE("critical points") {
    PrecisionContext ctx(30);
    auto md3 = mirror_map(hypergeometric_operator(triple_half()), 200);
    Real qc3 = critical_point(md3, ctx);
    CHECK(abs(qc3 - exp(-pi(ctx.bits()))) < tol(ctx, 28));
    const auto& m5 = couple_mirror(half, half, 200);
    Real qc = critical_point(m5, ctx);
    CHECK(abs(eval_q_series(m5.x_of_q, qc, ctx) - 1) < tol(ctx, 28));
    auto mb = mirror_map(binom4_operator(), 250);
    Real qb = critical_point(mb, ctx);
    CHECK(abs(eval_q_series(mb.x_of_q, qb, ctx) - Real(make_rational(1, 16), ctx.bits())) < tol(ctx, 28));
    Real p = pi(ctx.bits());
    Real tau_c = -log(qb) / p;
    CHECK(abs(1 / (p * tau_c) - sqrt(Real(10L, ctx.bits())) / (2 * p)) < tol(ctx, 25));
  }

  TEST_CASE("invariants at the wz4 point") {
    PrecisionContext ctx(30);
    const auto& md = couple_mirror(half, make_rational(1, 3), 120);
    Real q0 = solve_z(md, Real(make_rational(27, 64), ctx.bits()), Branch::Inner, ctx);
    auto ip = invariants_at(md, q0, ctx);
    CHECK(abs(ip.k - Real(make_rational(2, 3), ctx.bits())) < tol(ctx, 25));
    CHECK(abs(ip.tau - sqrt(Real(37L, ctx.bits())) / 3) < tol(ctx, 25));
    CHECK(abs(ip.z0 - Real(make_rational(27, 64), ctx.bits())) < tol(ctx, 28));
    // z-domain route agrees and reproduces the same nome.
    auto iz = invariants_at_z(half, make_rational(1, 3), Real(make_rational(27, 64), ctx.bits()), ctx);
    CHECK(abs(iz.q0 - q0) < tol(ctx, 28) * q0);
    CHECK(abs(iz.k - ip.k) < tol(ctx, 25));
    CHECK(abs(iz.tau - ip.tau) < tol(ctx, 25));
  }

  TEST_CASE("invariants at the wz1 point are rational") {
    PrecisionContext ctx(30);
    const auto& d = find_series("pi2.wz1");
    auto cp = d.couple();
    auto ip = invariants_at_z(cp[0], cp[1], d.z.eval(ctx), ctx);
    Real a = ip.alpha, t2 = ip.tau * ip.tau;
    CHECK(abs(a - Real(make_rational(7, 3), ctx.bits())) < tol(ctx, 25));
    CHECK(abs(t2 - 15) < tol(ctx, 25));
    CHECK(abs(ip.k - 2) < tol(ctx, 25));
  }

  TEST_CASE("invariants near q = 0") {
    PrecisionContext ctx(30);
    const auto& md = couple_mirror(half, half, 60);
    Real prev(ctx.bits());
    bool first = true;
    for (long e : {20, 40, 80}) {
      Real q = pow(Real(10L, ctx.bits()), -e);
      auto ip = invariants_at(md, q, ctx);
      Real L = log(q);
      Real ratio = ip.tau * 3 * pi(ctx.bits()) * pi(ctx.bits()) / (L * L);
      Real err = abs(ratio - 1);
      if (!first) CHECK(err < prev);
      prev = err;
      first = false;
    }
    CHECK(prev < Real::from_double(0.02, ctx.bits()));
  }

  TEST_CASE("two branches of z(q) = 0.9") {
    PrecisionContext ctx(30);
    const auto& md = couple_mirror(half, half, 200);
    Real target = Real("0.9", ctx.bits());
    Real qc = critical_point(md, ctx);
    Real q1 = solve_z(md, target, Branch::Inner, ctx);
    Real q2 = solve_z(md, target, Branch::Outer, ctx);
    CHECK(q1 < qc);
    CHECK(qc < q2);
    CHECK(abs(eval_q_series(md.x_of_q, q1, ctx) - target) < tol(ctx, 28));
    CHECK(abs(eval_q_series(md.x_of_q, q2, ctx) - target) < tol(ctx, 28));
    Real at_c = solve_z(md, Real(1L, ctx.bits()), Branch::Outer, ctx);
    CHECK(abs(at_c - qc) < tol(ctx, 25));
    CHECK_THROWS_AS(solve_z(md, Real("1.5", ctx.bits()), Branch::Inner, ctx), DomainError);
  }

  TEST_CASE("tau at 1/pi level") {
    PrecisionContext ctx(30);
    auto r42 = tau_pi_level(find_series("pi.rama42"), ctx);
    CHECK(r42.has_tau_b);
    CHECK(abs(r42.tau_a - sqrt(Real(7L, ctx.bits()))) < tol(ctx, 28));
    CHECK(r42.digits_agree >= 25);
    auto r10 = tau_pi_level(find_series("pi.rama.10n1"), ctx);
    Real s10 = sqrt(Real(10L, ctx.bits()));
    CHECK(abs(r10.tau_b - s10) < tol(ctx, 25));
    CHECK(abs(r10.tau_b - 5 * (2 / s10)) < tol(ctx, 25));
    auto r15 = tau_pi_level(find_series("pi.divergent.15n4"), ctx);
    CHECK_FALSE(r15.has_tau_b);
    CHECK(abs(r15.tau_a - sqrt(Real(15L, ctx.bits())) / 3) < tol(ctx, 28));
    // Every convergent 1/pi entry: exact b against the mirror-map nome.
    for (const auto& d : builtin_corpus()) {
      if (d.kind != SeriesKind::Pi || d.divergent) continue;
      CAPTURE(d.id);
      CHECK(tau_pi_level(d, ctx).digits_agree >= 25);
    }
    CHECK_THROWS_AS(tau_pi_level(find_series("pi2.wz1"), ctx), DomainError);
  }

  TEST_CASE("h from integer relations") {
    PrecisionContext ctx(30);
    CHECK(abs(h_via_pslq(couple_mirror(half, half, 200), ctx) - 70) < tol(ctx, 20));
    CHECK(abs(h_via_pslq(couple_mirror(half, make_rational(1, 3), 200), ctx) - 94) < tol(ctx, 20));
    CHECK_THROWS_AS(h_via_pslq(couple_mirror(half, half, 200), PrecisionContext(12)), PrecisionError);
  }

  TEST_CASE("h from integer relations for every couple") {
    PrecisionContext ctx(20);
    for (const auto& [s1, s2] : allowed_couples()) {
      CAPTURE(to_string(s1));
      CAPTURE(to_string(s2));
      const auto& md = couple_mirror(s1, s2, 150);
      auto cc = critical_constants(s1, s2, ctx);
      CHECK(abs(h_via_pslq(md, ctx) - cc.h) < tol(ctx, 15));
    }
  }
}

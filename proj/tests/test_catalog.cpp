#include <doctest.h>

#include "pisums/catalog.hpp"

using namespace pisums;

TEST_SUITE("catalog") {
  TEST_CASE("expression parsing and exact evaluation") {
    CHECK(ExactExpr::parse("42/16").exact_or_throw() == QuadExt(make_rational(21, 8)));
    CHECK(ExactExpr::parse("(2 - sqrt(3))^4").exact_or_throw() == QuadExt(97, -56, 3));
    CHECK(ExactExpr::parse("1/99^4").exact_or_throw() == QuadExt(Rational(1) / Rational(Integer(96059601))));
    CHECK(ExactExpr::parse("2^(-3)").exact_or_throw() == QuadExt(make_rational(1, 8)));
    CHECK(ExactExpr::parse("-2^2").exact_or_throw() == QuadExt(-4));
    CHECK(ExactExpr::parse("20/(11*sqrt(33))").exact_or_throw() == QuadExt(0, make_rational(20, 363), 33));
    // phi = ((sqrt 5 - 1)/2)^5 = (5 sqrt 5 - 11)/2
    auto phi = ExactExpr::parse("((sqrt(5) - 1)/2)^5").exact_or_throw();
    CHECK(phi == QuadExt(make_rational(-11, 2), make_rational(5, 2), 5));
    CHECK_FALSE(ExactExpr::parse("1/pi").exact().has_value());
    CHECK_FALSE(ExactExpr::parse("sqrt(sqrt(12))").exact().has_value());
    CHECK_FALSE(ExactExpr::parse("sqrt(2) + sqrt(3)").exact().has_value());
  }

  TEST_CASE("numeric evaluation") {
    PrecisionContext ctx(40);
    Real v = ExactExpr::parse("sqrt(sqrt(12))").eval(ctx);
    CHECK(abs(pow(v, 4) - 12L) < pow(Real(10L, ctx.bits()), -38));
    Real p = ExactExpr::parse("1/pi^2").eval(ctx);
    CHECK(abs(p * pi(ctx.bits()) * pi(ctx.bits()) - 1L) < pow(Real(10L, ctx.bits()), -38));
  }

  TEST_CASE("parse errors carry the column") {
    try {
      ExactExpr::parse("1/2^x");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(ExactExpr::parse("2^1.5"), ParseError);
    CHECK_THROWS_AS(ExactExpr::parse("foo(3)"), ParseError);
    CHECK_THROWS_AS(ExactExpr::parse("(1+2"), ParseError);
    CHECK_THROWS_AS(ExactExpr::parse(""), ParseError);
  }

  TEST_CASE("printing round-trips") {
    for (const char* text : {"1/64", "-(1800 + 162*((sqrt(5) - 1)/2)^5)", "(2 - sqrt(3))^4", "2^(-3)",
                             "1125/4*sqrt(5)*L5_3 - 448*zeta3", "1 - (2 - 3)", "a", "--2", "2/(3*4)",
                             "(-3)^3"}) {
      if (std::string(text) == "a") continue;
      ExactExpr e = ExactExpr::parse(text);
      ExactExpr f = ExactExpr::parse(e.to_string());
      CHECK(e.to_string() == f.to_string());
      auto ev = e.exact(), fv = f.exact();
      CHECK(ev.has_value() == fv.has_value());
      if (ev) CHECK(*ev == *fv);
    }
    CHECK(ExactExpr::parse("1 - (2 - 3)").to_string() == "1 - (2 - 3)");
    CHECK(ExactExpr::parse("(1 - 2) - 3").to_string() == "1 - 2 - 3");
  }

  TEST_CASE("builtin corpus") {
    const auto& corpus = builtin_corpus();
    for (const char* id :
         {"pi.rama42", "pi.alt.6n1", "pi.borwein.126n10", "pi.rama.28n3", "pi.borwein.sqrt3", "pi.rama.40n3",
          "pi.rama.10n1", "pi.rama.1123", "pi.rama.1103", "pi.divergent.15n4", "pi2.wz1", "pi2.wz2", "pi2.wz3",
          "pi2.wz4", "pi2.phi", "pi2.phi.dual", "pi2.dual.wz3", "pi2.dual.wz2", "ud.L5", "sato.binom4"}) {
      CAPTURE(id);
      CHECK_NOTHROW(find_series(id));
    }
    const auto& r = find_series("pi.rama42");
    CHECK(r.z.exact_or_throw() == QuadExt(make_rational(1, 64)));
    CHECK(r.a.exact_or_throw() == QuadExt(make_rational(5, 16)));
    CHECK(r.b.exact_or_throw() == QuadExt(make_rational(42, 16)));
    const auto& b = find_series("pi.rama.1103");
    CHECK(b.b.exact_or_throw() == QuadExt(0, Rational(26390 * 2, 9801), 2));
    const auto& ph = find_series("pi2.phi");
    auto phi = QuadExt(make_rational(-11, 2), make_rational(5, 2), 5);
    CHECK(ph.z.exact_or_throw() == pow(QuadExt(3) * phi, 3));
    CHECK(ph.a.exact_or_throw() == (QuadExt(3) - QuadExt(30) * phi) / QuadExt(3));
    CHECK(ph.c.exact_or_throw() == (QuadExt(32) - QuadExt(216) * phi) / QuadExt(3));
    CHECK(find_series("sato.binom4").sequence == "binom4");
    CHECK(find_series("sato.binom4").poly == std::vector<Rational>{1, make_rational(-3, 4), make_rational(-1, 4)});
    CHECK_THROWS_AS(find_series("no.such.id"), DomainError);
    (void)corpus;
  }

  TEST_CASE("couple validation") {
    const char* bad = R"([series bad.couple]
kind = pi2
s = 1/2, 1/2, 1/2, 1/5, 4/5
z = 1/16
b = 1
c = 1
rhs = 1/pi^2
)";
    CHECK_THROWS_AS(parse_catalog(bad), ParseError);
    const char* good = R"([series ok.couple]
kind = pi2
s = 1/2, 1/5, 4/5, 2/5, 3/5
z = 1/16
b = 1
c = 1
rhs = 1/pi^2
)";
    auto defs = parse_catalog(good);
    REQUIRE(defs.size() == 1);
    auto cp = defs[0].couple();
    REQUIRE(cp.size() == 2);
    CHECK(is_allowed_couple(cp[0], cp[1]));
    CHECK(allowed_couples().size() == 14);
    const char* pi_bad = R"([series bad.s]
kind = pi
s = 1/2, 1/5, 4/5
z = 1/16
b = 1
rhs = 1/pi
)";
    CHECK_THROWS_AS(parse_catalog(pi_bad), ParseError);
  }

  TEST_CASE("syntax errors report line numbers") {
    const char* text = "[series x]\nkind = pi\ns = 1/2, 1/2, 1/2\nz = 1/2^\nb = 1\nrhs = 1/pi\n";
    try {
      parse_catalog(text);
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse_catalog("[series x]\nkind = pi\nbogus = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_catalog("[series x]\nkind = pi\ns = 1/2, 1/2, 1/2\nz = 1\nrhs = 1/pi\n"), ParseError);
    CHECK_THROWS_AS(parse_catalog("kind = pi\n"), ParseError);
  }

  TEST_CASE("print and parse round-trip the corpus") {
    const auto& corpus = builtin_corpus();
    auto again = parse_catalog(print_catalog(corpus));
    REQUIRE(again.size() == corpus.size());
    for (size_t i = 0; i < corpus.size(); ++i) {
      CAPTURE(corpus[i].id);
      CHECK(same_definition(corpus[i], again[i]));
    }
    CHECK(print_catalog(again) == print_catalog(corpus));
  }

  TEST_CASE("validate entries") {
    PrecisionContext ctx(30);
    for (const auto& d : builtin_corpus()) {
      CAPTURE(d.id);
      auto rep = validate_entry(d, ctx);
      CHECK(rep.ok);
    }
    CHECK(validate_entry(find_series("pi.divergent.15n4"), ctx).divergent);
    CHECK(validate_entry(find_series("pi.divergent.15n4"), ctx).abs_z == doctest::Approx(4.0));
    CHECK_FALSE(validate_entry(find_series("pi.rama42"), ctx).divergent);
  }
}

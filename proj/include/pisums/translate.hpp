// Hypergeometric transformations, translation of 1/pi series through them, and
// limits at the critical point.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pisums/arith.hpp"
#include "pisums/catalog.hpp"
#include "pisums/series.hpp"

namespace pisums {

using RatPoly = std::vector<Rational>;  // constant term first

// c * prod_i P_i(z)^{r_i} * F_s(N(z)/D(z)),  F_s(u) = sum prod (s_i)_n / (1)_n^m u^n.
struct TransformSide {
  std::vector<Rational> s;
  Rational constant = 1;
  std::vector<std::pair<RatPoly, Rational>> factors;
  RatPoly arg_num;
  RatPoly arg_den;
};

struct Transformation {
  std::string id;
  std::string description;
  TransformSide lhs;
  TransformSide rhs;
};

const std::vector<Transformation>& builtin_transformations();
const Transformation& find_transformation(std::string_view id);  // DomainError if absent

// Exact series of one side to `terms` coefficients.
PowerSeries<Rational> side_series(const TransformSide& side, size_t terms);

struct TransformCheck {
  bool pass = false;
  size_t terms = 0;
  size_t first_failure = 0;  // meaningful when !pass
};
TransformCheck verify_transformation(const Transformation& t, size_t terms);
TransformCheck verify_transformation(std::string_view id, size_t terms);

// a + b theta_v, where v is the argument of the chosen side.
struct TranslationOperator {
  Rational a;
  Rational b;
  bool on_rhs = false;
};

struct TranslationReport {
  Real u0;       // argument of the operator side at z0
  Real w0;       // argument of the other side at z0
  Real direct;   // sum prod (s)_n/(1)_n^m (a + b n) u0^n on the operator side
  Real translated;  // the other side with the operator rewritten in its own variable
  int digits_agree = 0;
  std::optional<Real> expected;
  int digits_expected = 0;
};

TranslationReport apply_translation(const TranslationOperator& op, const Transformation& t, const QuadExt& z0,
                                    const PrecisionContext& ctx, std::optional<ExactExpr> expected = std::nullopt);

struct TranslationExample {
  std::string id;
  std::string transformation;
  TranslationOperator op;
  QuadExt z0;
  ExactExpr expected;          // value of the operator-side sum
  std::string operator_series;  // catalog entries on the two sides
  std::string translated_series;
};
const std::vector<TranslationExample>& builtin_translations();

// lim_{z -> z*+} sqrt(1 - u) (u / u') d/dz [branch * rhs side] where the lhs argument u
// reaches a maximum u(z*) = 1. For rogers, z* = 9 and the rhs argument there is 1/7^4.
// The rogers identity holds as tabulated only for 0 <= z < 1/9 (its rhs argument is u(1/z)
// and reaches 1 at z = 1/9); continued to z > 9 it carries branch = 9.
Real critical_translation_limit(const Transformation& t, const Rational& zstar, const Rational& branch,
                                const PrecisionContext& ctx);

struct LimitEstimate {
  Real value;
  Real error;  // extrapolation error estimate
  int points = 0;
};

// lim_{z -> zc-} sqrt(P(z)) sum A_n n z^n for a sato catalog entry.
LimitEstimate aycock_limit(const SeriesDef& def, const PrecisionContext& ctx);
// lim n a_n / c_n with c_n = (1/2)_n / n!, a_n = A_n zc^n, times the factor that turns
// (1 - z/zc) into P(z) at zc.
LimitEstimate stolz_ratio(const SeriesDef& def, const PrecisionContext& ctx);
// lim n a(n) / c_n for an arbitrary sequence (a is called with increasing n).
LimitEstimate stolz_ratio(const std::function<Real(long)>& a, const PrecisionContext& ctx);

}  // namespace pisums

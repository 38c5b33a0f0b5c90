// Summation of catalog series, Mellin-Barnes continuation and moment reductions.
#pragma once

#include <string>
#include <vector>

#include "pisums/arith.hpp"
#include "pisums/catalog.hpp"

namespace pisums {

Rational pochhammer(const Rational& s, long n);

// A_n = prod (s_i)_n / (1)_n^m as an exact rational.
Rational hyper_coefficient(const std::vector<Rational>& s, long n);

struct SumReport {
  std::string id;
  Real value;
  Real target;       // numeric right-hand side
  Real error_bound;  // certified truncation bound (direct) or quadrature estimate (Mellin-Barnes)
  int digits_matched = 0;
  long terms_used = 0;
  double digits_per_term = 0;
  std::string method;  // "direct" or "mellin-barnes"
};

// Decimal digits of agreement between value and target, capped at cap.
int matched_digits(const Real& value, const Real& target, int cap);

// Direct summation of a convergent pi/pi2 entry with a geometric tail bound.
SumReport sum_series(const SeriesDef& def, const PrecisionContext& ctx);

struct MBResult {
  Real value;
  Real error_estimate;  // |I(h) - I(h/2)| plus the truncation bound
  long nodes = 0;
};

// p+1 F p (upper; lower; z) for real z < 0 by a vertical Mellin-Barnes contour.
MBResult mb_continuation(const std::vector<Rational>& upper, const std::vector<Rational>& lower, const Real& z,
                         const PrecisionContext& ctx);

// Direct summation of pFq (upper; lower; z) for |z| < 1, used as an oracle.
Real hypergeometric_direct(const std::vector<Rational>& upper, const std::vector<Rational>& lower, const Real& z,
                           const PrecisionContext& ctx);

// sum_n A_n n^k z^n = coef * z^power * F(upper; lower; z).
struct MomentReduction {
  Rational coef;
  int z_power = 0;
  std::vector<Rational> upper;
  std::vector<Rational> lower;
};

MomentReduction moment_reduction(const std::vector<Rational>& s, int k);

// sum_n A_n n^k z^n for k = 0, 1, 2 by Mellin-Barnes (any z < 0).
MBResult moment_value(const std::vector<Rational>& s, int k, const Real& z, const PrecisionContext& ctx);

// Analytic-continuation value of a divergent pi/pi2 entry: a v0 + b v1 + c v2.
SumReport continue_series(const SeriesDef& def, const PrecisionContext& ctx);

// sum_{n>=1} z^n / A_n (a + b n + c n^2) / n^5 with a certified tail.
SumReport upside_down_sum(const SeriesDef& def, const PrecisionContext& ctx);

}  // namespace pisums

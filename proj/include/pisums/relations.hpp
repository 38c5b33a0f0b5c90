// Integer relations (PSLQ), minimal polynomials and rational recognition.
#pragma once

#include <optional>
#include <vector>

#include "pisums/arith.hpp"

namespace pisums {

struct IntegerRelation {
  std::vector<Integer> coeffs;
  Real residual;    // |sum a_i x_i|
  Real norm_bound;  // no relation of smaller norm exists (PSLQ bound at exit)
  long iterations = 0;
};

// Relations are accepted when the residual is below 10^(-0.6 * target_digits) * max|x_i|.
// Returns nullopt when the PSLQ norm bound exceeds max_norm; throws PrecisionError
// when the working precision is exhausted before either outcome.
std::optional<IntegerRelation> pslq(const std::vector<Real>& xs, const PrecisionContext& ctx,
                                    const Real& max_norm);
std::optional<IntegerRelation> pslq(const std::vector<Real>& xs, const PrecisionContext& ctx);

// Integer polynomial (constant term first) of degree <= d vanishing at x; leading
// coefficient positive, content 1.
std::optional<std::vector<Integer>> minpoly(const Real& x, int degree, const PrecisionContext& ctx);

// Continued-fraction convergent p/q with q <= max_den and |x - p/q| < 10^(-tol_digits).
std::optional<Rational> rationalize(const Real& x, const Integer& max_den, int tol_digits);
std::optional<Rational> rationalize(const Real& x, const Integer& max_den, const PrecisionContext& ctx);

// Relation among v0, v0*w, v1, v1*w, v2, v2*w, target; sign chosen so the target
// coefficient is negative.
std::optional<std::vector<Integer>> discover_quadratic_combination(const Real& v0, const Real& v1, const Real& v2,
                                                                   const Real& w, const Real& target,
                                                                   const PrecisionContext& ctx);

std::string format_relation(const std::vector<Integer>& coeffs);

}  // namespace pisums

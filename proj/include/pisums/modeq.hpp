// Modular equations for z(q): guessing from exact q-expansions and numeric checks.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pisums/arith.hpp"
#include "pisums/series.hpp"

namespace pisums {

// sum a[i][j] x^i y^j over i + j <= degree.
struct BivarPoly {
  int degree = 0;
  std::vector<std::vector<Integer>> a;  // a[i][j], j <= degree - i

  explicit BivarPoly(int d = 0);
  Integer& at(int i, int j) { return a[i][j]; }
  const Integer& at(int i, int j) const { return a[i][j]; }
  bool operator==(const BivarPoly& o) const;

  Real eval(const Real& x, const Real& y) const;
  // Divide by the content and make the first nonzero coefficient positive, scanning
  // i descending, then j descending.
  void normalize();
  // One "i j a_ij" row per nonzero coefficient.
  std::string rows() const;
  std::string to_string() const;
};

struct ModeqGuess {
  std::vector<BivarPoly> basis;  // empty: no relation; more than one: degree bound too generous
  size_t unknowns = 0;
  size_t equations = 0;
  bool unique() const { return basis.size() == 1; }
};

// Relation P(z(q), z(sign * q^k)) = 0 of total degree <= d for the family (1/2, s, 1-s),
// from the first `terms` q-coefficients. Throws DomainError when terms is too small
// for the number of unknowns.
ModeqGuess guess_modeq(const Rational& s, int k, int d, size_t terms, int sign = 1);
size_t modeq_unknowns(int d);

struct ModeqSeriesCheck {
  bool exact = false;          // vanishes through q^(depth-1)
  size_t first_nonzero = 0;    // otherwise the first order with a nonzero coefficient
  size_t depth = 0;
};
ModeqSeriesCheck verify_modeq_series(const BivarPoly& p, const Rational& s, int k, size_t depth, int sign = 1);

// P(y, x)
BivarPoly swapped(const BivarPoly& p);

Real verify_modeq_numeric(const BivarPoly& p, const std::vector<std::pair<Real, Real>>& points,
                          const PrecisionContext& ctx);

// z(q) for the family (1/2, s, 1-s), summed from its exact q-expansion (|q| below the
// critical nome).
Real z_of_nome(const Rational& s, const Real& q, const PrecisionContext& ctx);
// s = 1/2 via theta functions: 4 lambda (1 - lambda); any real -1 < q < 1.
Real z_half_from_nome(const Real& q, const PrecisionContext& ctx);
// s = 1/2, q = sign * exp(-pi t).
Real z_half(const Real& t, int sign, const PrecisionContext& ctx);

// |(lambda(t) lambda(t/7))^(1/8) + ((1-lambda(t))(1-lambda(t/7)))^(1/8) - 1|
Real guetzlaff_residual(const Real& t, const PrecisionContext& ctx);
// |z(t) z(2/t) - 1| on the alternating s = 1/2 family.
Real duality_residual(const Real& t, const PrecisionContext& ctx);

// The order-2 relation between x = z(t) and y = z(t/2) on the alternating s = 1/2 family.
BivarPoly alternating_order2_poly();

}  // namespace pisums

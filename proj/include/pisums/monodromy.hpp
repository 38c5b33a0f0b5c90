// Analytic continuation of the hypergeometric-type operators by Taylor recentering,
// loop monodromy in the Frobenius basis at 0, and the conifold-matrix fit.
#pragma once

#include <string>
#include <vector>

#include "pisums/arith.hpp"
#include "pisums/mirror.hpp"

namespace pisums {

using CMatrix = std::vector<std::vector<Complex>>;

// Polygonal path; transport subdivides each edge so that every step stays below
// step_fraction times the distance to the nearest singularity.
struct Path {
  std::vector<Complex> waypoints;
  double step_fraction = 0.5;
  std::string descriptor;
};

// Finite singular points of the operator (roots of its leading coefficient).
std::vector<Complex> singular_points(const HypOperator& op, mpfr_prec_t bits);

// Continue the vector (w, w', ..., w^(m-1)) along the path.
std::vector<Complex> ode_transport(const HypOperator& op, const Path& path, const std::vector<Complex>& initial,
                                   const PrecisionContext& ctx);

// Columns: (theta^0 .. m-1 derivatives in d/dz) of the Frobenius solutions y_0..y_{m-1} at a real z_b in (0, R).
CMatrix frobenius_matrix(const HypOperator& op, const Real& zb, const PrecisionContext& ctx);

// Loops based at zb.
Path circle_loop(const Complex& center, const Real& radius, const Real& zb, int segments);
Path square_loop(const Complex& center, const Real& half_side, const Real& zb);
// Around infinity: leave zb downwards to |z| = radius, then a clockwise circle.
Path infinity_loop(const Real& zb, const Real& radius, int segments);

// Matrix M with continued solutions = original solutions * M (columns are solutions).
CMatrix monodromy_along(const HypOperator& op, const Path& loop, const Real& zb, const PrecisionContext& ctx);

struct MonodromyResult {
  CMatrix matrix;
  std::string basis = "frobenius-at-0";
  std::string loop;
  bool exact = false;
};

// (2 pi i)^(j-i)/(j-i)! for j >= i.
CMatrix exact_monodromy_at_zero(size_t m, mpfr_prec_t bits);
// around = 0 is exact; otherwise a counterclockwise circle of radius 1/2 (or half the
// distance to the nearest other singularity) around the point, based at zb.
MonodromyResult loop_monodromy(const HypOperator& op, const Rational& around, const Rational& zb,
                               const PrecisionContext& ctx);

CMatrix mat_mul(const CMatrix& a, const CMatrix& b);
CMatrix mat_inverse(const CMatrix& a);
CMatrix identity_matrix(size_t m, mpfr_prec_t bits);
Real max_abs_diff(const CMatrix& a, const CMatrix& b);
// Coefficients of det(x I - M), constant term first, by Faddeev-LeVerrier.
std::vector<Complex> char_poly(const CMatrix& m);
// Numerical rank with singular-value-free elimination and the given tolerance.
int numerical_rank(CMatrix m, const Real& tol);

// Exponent at z = 1 that is not a nonnegative integer below m-1: (m-1) - sum s_i.
Rational conifold_exponent(const HypOperator& op);

// Conjectured 5x5 matrix (already divided by tau_c^2) for given alpha_c, tau_c^2, d.
// As printed it is not a reflection; rank_one = true replaces -alpha_c D/8 by -alpha_c D/4
// and -D^2/128 by -D^2/32 (D = tau_c^2 - alpha_c^2), which makes C - I rank one with trace -2.
CMatrix conjectured_matrix(const Real& alpha_c, const Real& tau_c_sq, const Complex& d, bool rank_one = false);

struct ConjectureFit {
  bool rank_one_variant = false;
  Complex d;
  std::vector<Complex> gauge;  // D with D^-1 M D compared to the conjectured form
  Real residual;               // max entry deviation after fitting
  bool structural_ok = false;  // invariant zero pattern and the unit row/column
  std::string orientation;     // "M" or "transpose" (whichever fits better)
  Real charpoly_gap;            // max |coefficient difference| of the characteristic polynomials
  std::vector<std::string> notes;
};
// Diagonal gauge and d fitted to the printed form and to the rank-one variant; the better
// (smaller residual) fit is returned first.
std::vector<ConjectureFit> fit_conjecture_matrix(const MonodromyResult& m, const Rational& s1, const Rational& s2,
                                                 const PrecisionContext& ctx);

}  // namespace pisums

// Frobenius bases, mirror maps, Yukawa couplings and the invariants alpha, tau, k.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pisums/arith.hpp"
#include "pisums/catalog.hpp"
#include "pisums/series.hpp"

namespace pisums {

// L = sum_k x^k P_k(theta), P_k given by coefficients in theta (constant first).
// Hypergeometric operators theta^m - x prod (theta + s_i) also keep s.
struct HypOperator {
  std::vector<std::vector<Rational>> polys;
  std::vector<Rational> s;
  std::string name;

  size_t order() const { return polys.empty() ? 0 : polys[0].size() - 1; }
  bool hypergeometric() const { return !s.empty(); }
};

HypOperator hypergeometric_operator(const std::vector<Rational>& s);
// Order five: theta^5 - z (theta+1/2)(theta+s1)(theta+1-s1)(theta+s2)(theta+1-s2).
HypOperator couple_operator(const Rational& s1, const Rational& s2);
// Order four: theta^4 - z (theta+s1)(theta+1-s1)(theta+s2)(theta+1-s2).
HypOperator cy_operator(const Rational& s1, const Rational& s2);
// theta^3 - 2y(2theta+1)(3theta^2+3theta+1) - 4y^2(theta+1)(4theta+3)(4theta+5), y = z/16.
HypOperator binom4_operator();

// Evaluate P(x + eps) as a polynomial in eps truncated to m terms.
std::vector<Rational> shifted_poly(const std::vector<Rational>& p, const Rational& x, size_t m);

// f_k = [eps^k] sum_n c_n(eps) x^n for k < order: the Frobenius solutions are
// y_j = sum_{p<=j} f_{j-p} ln^p x / p!.
std::vector<PowerSeries<Rational>> frobenius_blocks(const HypOperator& op, size_t terms);
std::vector<PowerSeries<Real>> frobenius_blocks(const HypOperator& op, size_t terms, mpfr_prec_t bits);
std::vector<LogSeries<Rational>> frobenius_basis(const HypOperator& op, size_t terms);

// C = exp(sum_i (psi(1) - psi(s_i))) as prod p^e when the parameters form full
// Galois orbits {j/m : gcd(j, m) = 1}.
struct NormalizationConstant {
  std::map<long, long> prime_exponents;  // empty when no exact form exists
  Rational exact;                        // valid when prime_exponents is non-empty or C = 1
  bool has_exact = false;
  Real value;
  std::string log_form;  // e.g. "10*ln(2)"
};

NormalizationConstant canonical_C(const HypOperator& op, const PrecisionContext& ctx);

enum class MirrorLevel { Pi, CY4, CY5 };

struct MirrorData {
  HypOperator op;
  MirrorLevel level = MirrorLevel::Pi;
  Rational C;                     // x-variable normalization, q = (x/C) exp(...)
  PowerSeries<Rational> q_of_x;   // q(x)
  PowerSeries<Rational> x_of_q;   // mirror map
  PowerSeries<Rational> K;        // Yukawa coupling (CY levels)
  PowerSeries<Rational> T;        // theta_q^3 T = 1 - K, T(0) = 0
  PowerSeries<Rational> thetaT;   // theta_q T
  size_t terms = 0;
};

// Level Pi for order 3, CY4 for order 4, CY5 for order 5 operators. C defaults to canonical_C.
MirrorData mirror_map(const HypOperator& op, size_t terms, std::optional<Rational> C = std::nullopt);

// K of an order-4 operator: 1 + theta_q^2 (g2 - g1^2/2), g_k = f_k/f_0.
PowerSeries<Rational> yukawa(const MirrorData& md);
// T from K: t_n = (1-K)_n / n^3.
PowerSeries<Rational> tmap(const PowerSeries<Rational>& K);

struct CriticalConstants {
  Real alpha_c;
  Real tau_c_sq;
  Real h;        // printed normalization 6 H + 10
  Real H;        // coefficient of zeta(3) in alpha(q)
  std::optional<Rational> alpha_c_exact;
  std::optional<Rational> tau_c_sq_exact;
  long h_integer = 0;
};

CriticalConstants critical_constants(const Rational& s1, const Rational& s2, const PrecisionContext& ctx);

// Evaluate a rational q-series at real q, failing when the truncation indicator is too large.
Real eval_q_series(const PowerSeries<Rational>& f, const Real& q, const PrecisionContext& ctx);
// Empirical radius of convergence from the coefficient growth.
double q_radius_estimate(const PowerSeries<Rational>& f);

// Root of dx/dq (Newton on the derivative series); for hypergeometric operators x(q_c) = 1.
Real critical_point(const MirrorData& md, const PrecisionContext& ctx);

struct InvariantPoint {
  Real q0;
  Real t;  // -ln|q0| / pi
  Real z0;
  Real alpha;
  Real tau;
  Real k;
  int digits = 0;
};

// CY5 level: invariants from the q-series at a signed nome q0.
InvariantPoint invariants_at(const MirrorData& md, const Real& q0, const PrecisionContext& ctx);
// Same invariants from z-domain series (|z0| < 1, inner branch); independent of reversion.
InvariantPoint invariants_at_z(const Rational& s1, const Rational& s2, const Real& z0, const PrecisionContext& ctx);

enum class Branch { Inner, Outer };

Real solve_z(const MirrorData& md, const Real& target, Branch branch, const PrecisionContext& ctx);

// ln q at x0 from z-domain series of a 1/pi-level operator (|x0| < 1).
Real log_abs_q_at(const HypOperator& op, const Rational& C, const Real& x0, const PrecisionContext& ctx);

struct TauReport {
  Real tau_a;  // b / sqrt(P(z)) from catalog data
  Real tau_b;  // -ln|q0| / pi from the mirror map (absent outside the disk)
  bool has_tau_b = false;
  int digits_agree = 0;
};

TauReport tau_pi_level(const SeriesDef& def, const PrecisionContext& ctx);

// Recover h from the integer relation among ln^3|q_c|/6 - T(q_c), pi^2 ln|q_c|, zeta(3).
Real h_via_pslq(const MirrorData& md, const PrecisionContext& ctx);

// MirrorData for a couple at CY level, cached per (couple, terms).
const MirrorData& couple_mirror(const Rational& s1, const Rational& s2, size_t terms);

}  // namespace pisums

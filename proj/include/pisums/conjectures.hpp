// Numerical checks of the rationality, branch and duality conjectures and of the
// L5(3) identity. The harness measures support; it proves nothing.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pisums/arith.hpp"
#include "pisums/catalog.hpp"
#include "pisums/mirror.hpp"

namespace pisums {

enum class Verdict { Supported, Failed, Inconclusive };
std::string to_string(Verdict v);

struct RelationResidual {
  std::string relation;
  Real residual;
  int digits = 0;  // -log10(residual), capped at the working precision
};

struct ConjectureReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<RelationResidual> relations;
  std::vector<std::pair<std::string, std::string>> values;  // recognized quantities
  Verdict verdict = Verdict::Inconclusive;
  int min_digits = 18;
  std::vector<std::string> notes;
};

// Multi-line plain-text rendering (stable for a given report).
std::string format_report(const ConjectureReport& r);

// z(q) = target on the real q axis; negative targets use q < 0 (alternating branch).
Real solve_z_signed(const MirrorData& md, const Real& target, Branch branch, const PrecisionContext& ctx);

// Invariants (alpha, tau^2, k) at the entry's z, recognized as rationals with denominator <= max_den.
ConjectureReport check_main_conjecture(const SeriesDef& def, const PrecisionContext& ctx, long max_den = 1000,
                                       int min_digits = 18);

// Both solutions of z(q) = z_target and the three branch relations between them.
ConjectureReport check_branch_relations(const Rational& s1, const Rational& s2, const Real& z_target,
                                        const PrecisionContext& ctx, int min_digits = 18);

// Exact coefficient relations between an alternating (1/2,1/2) entry and its dual, plus the
// Mellin-Barnes value of the divergent dual.
ConjectureReport check_duality(const SeriesDef& def, const PrecisionContext& ctx, int min_digits = 15);

// The (t, k, tau) duality relations at z1 and 1/z1 (both on the alternating branch), and
// a PSLQ search among (k1+1)(k2+1), tau1 tau2, 1.
ConjectureReport check_duality_numeric(const Real& z1, const PrecisionContext& ctx, int min_digits = 18);

// Upside-down sum against 1125/4 sqrt5 L5(3) - 448 zeta(3).
ConjectureReport check_L5_identity(const PrecisionContext& ctx, int min_digits = 30);

}  // namespace pisums

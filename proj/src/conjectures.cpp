#include "pisums/conjectures.hpp"

#include <cmath>
#include <sstream>

#include "pisums/hyper.hpp"
#include "pisums/relations.hpp"

namespace pisums {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Supported:
      return "supported";
    case Verdict::Failed:
      return "failed";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

int residual_digits(const Real& r, const PrecisionContext& ctx) {
  if (r.is_zero()) return ctx.working_digits();
  double l = -std::log10(r.to_double());
  if (!std::isfinite(l)) return ctx.working_digits();
  return std::max(0, std::min(ctx.working_digits(), static_cast<int>(std::floor(l))));
}

void add_relation(ConjectureReport& rep, std::string name, const Real& residual, const PrecisionContext& ctx) {
  Real r = abs(residual);
  rep.relations.push_back({std::move(name), r, residual_digits(r, ctx)});
}

void finalize(ConjectureReport& rep) {
  if (rep.relations.empty()) {
    rep.verdict = Verdict::Inconclusive;
    return;
  }
  bool ok = true;
  for (const auto& r : rep.relations) ok = ok && r.digits >= rep.min_digits;
  rep.verdict = ok ? Verdict::Supported : Verdict::Failed;
}

std::string real_text(const Real& x, int digits = 20) { return x.to_string(digits); }

const MirrorData& mirror_for(const Rational& s1, const Rational& s2, const PrecisionContext& ctx) {
  const size_t terms = std::max<size_t>(200, static_cast<size_t>(7 * ctx.working_digits()));
  return couple_mirror(s1, s2, terms);
}

InvariantPoint invariants_anywhere(const Rational& s1, const Rational& s2, const Real& z, const PrecisionContext& ctx) {
  if (abs(z) < Real::from_double(0.5, ctx.bits())) return invariants_at_z(s1, s2, z, ctx);
  const auto& md = mirror_for(s1, s2, ctx);
  return invariants_at(md, solve_z_signed(md, z, Branch::Inner, ctx), ctx);
}

}  // namespace

std::string format_report(const ConjectureReport& r) {
  std::ostringstream os;
  os << "conjecture " << r.id << ": " << to_string(r.verdict) << " (min digits " << r.min_digits << ")\n";
  for (const auto& [k, v] : r.inputs) os << "  input " << k << " = " << v << "\n";
  for (const auto& [k, v] : r.values) os << "  value " << k << " = " << v << "\n";
  for (const auto& rel : r.relations)
    os << "  relation " << rel.relation << ": residual " << rel.residual.to_string(3) << " (" << rel.digits
       << " digits)\n";
  for (const auto& n : r.notes) os << "  note " << n << "\n";
  return os.str();
}

Real solve_z_signed(const MirrorData& md, const Real& target, Branch branch, const PrecisionContext& ctx) {
  if (target.sign() > 0) return solve_z(md, target, branch, ctx);
  if (target.is_zero()) throw DomainError("solve_z_signed: target must be nonzero");
  if (branch != Branch::Inner) throw DomainError("solve_z_signed: the alternating branch has no outer solution");
  const mpfr_prec_t bits = ctx.bits();
  const double R = std::min(1.0, q_radius_estimate(md.x_of_q));
  const PrecisionContext lo(15);
  // z(q) decreases from 0 as q goes from 0 towards -R.
  Real qa(0L, bits), qb = Real::from_double(-0.7 * R, bits);
  if (!(eval_q_series(md.x_of_q, qb, lo) < target))
    throw DomainError("solve_z_signed: target beyond the reach of the q-series");
  for (int it = 0; it < 50; ++it) {
    Real mid = (qa + qb) / 2;
    if (eval_q_series(md.x_of_q, mid, lo) < target) qb = mid;
    else qa = mid;
  }
  Real q = (qa + qb) / 2;
  const auto dx = theta(md.x_of_q);
  const Real tol = pow(Real(10L, bits), -ctx.working_digits());
  for (int it = 0; it < 60; ++it) {
    Real f = eval_q_series(md.x_of_q, q, ctx) - target;
    Real fp = eval_q_series(dx, q, ctx) / q;
    Real step = f / fp;
    q -= step;
    if (abs(step) < tol * abs(q)) return q;
  }
  throw PrecisionError("solve_z_signed: Newton iteration did not converge");
}

ConjectureReport check_main_conjecture(const SeriesDef& def, const PrecisionContext& ctx, long max_den,
                                       int min_digits) {
  ConjectureReport rep;
  rep.id = "conj-main";
  rep.min_digits = min_digits;
  rep.inputs = {{"entry", def.id}, {"z", def.z.to_string()}};
  if (def.kind != SeriesKind::Pi2 || def.depth() != 5) throw DomainError("check_main_conjecture needs a 1/pi^2 entry");
  try {
    auto cp = def.couple();
    Real z = def.z.eval(ctx);
    auto ip = invariants_anywhere(cp[0], cp[1], z, ctx);
    Real tau2 = ip.tau * ip.tau;
    const Integer den(max_den);
    rep.values.push_back({"r", z.sign() < 0 ? "1" : "0"});
    rep.values.push_back({"t", real_text(ip.t)});
    auto ra = rationalize(ip.alpha, den, min_digits);
    auto rt = rationalize(tau2, den, min_digits);
    auto rk = rationalize(ip.k, den, min_digits);
    rep.values.push_back({"alpha", ra ? to_string(*ra) : real_text(ip.alpha)});
    rep.values.push_back({"tau^2", rt ? to_string(*rt) : real_text(tau2)});
    rep.values.push_back({"k", rk ? to_string(*rk) : real_text(ip.k)});
    if (ra) add_relation(rep, "alpha rational", ip.alpha - Real(*ra, ctx.bits()), ctx);
    else rep.notes.push_back("alpha not recognized with denominator <= " + std::to_string(max_den));
    if (rt) add_relation(rep, "tau^2 rational", tau2 - Real(*rt, ctx.bits()), ctx);
    else rep.notes.push_back("tau^2 not recognized with denominator <= " + std::to_string(max_den));
    if (def.expected_k) add_relation(rep, "k = catalog", ip.k - def.expected_k->eval(ctx), ctx);
    if (def.expected_tau_sq) add_relation(rep, "tau^2 = catalog", tau2 - def.expected_tau_sq->eval(ctx), ctx);
    finalize(rep);
    if (!ra || !rt) rep.verdict = Verdict::Failed;
  } catch (const PrecisionError& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.notes.push_back(e.what());
  }
  return rep;
}

ConjectureReport check_branch_relations(const Rational& s1, const Rational& s2, const Real& z_target,
                                        const PrecisionContext& ctx, int min_digits) {
  ConjectureReport rep;
  rep.id = "conj-branch";
  rep.min_digits = min_digits;
  rep.inputs = {{"couple", to_string(s1) + "," + to_string(s2)}, {"z", z_target.to_string(20)}};
  if (!(z_target > 0) || !(z_target < 1)) throw DomainError("check_branch_relations needs 0 < z < 1");
  try {
    const auto& md = mirror_for(s1, s2, ctx);
    auto cc = critical_constants(s1, s2, ctx);
    Real q1 = solve_z(md, z_target, Branch::Inner, ctx);
    Real q2 = solve_z(md, z_target, Branch::Outer, ctx);
    auto p1 = invariants_at(md, q1, ctx);
    auto p2 = invariants_at(md, q2, ctx);
    const Real& t1 = p1.t;
    const Real& k1 = p1.k;
    const Real& tau1 = p1.tau;
    Real den = 4 * tau1 * tau1 - k1 * k1;
    rep.values = {{"t1", real_text(t1)},  {"k1", real_text(k1)}, {"tau1", real_text(tau1)},
                  {"t2", real_text(p2.t)}, {"k2", real_text(p2.k)}, {"tau2", real_text(p2.tau)},
                  {"tau_c^2", real_text(cc.tau_c_sq)}};
    add_relation(rep, "tau_c^2 4 tau1 - tau2 (4 tau1^2 - k1^2)", cc.tau_c_sq * 4 * tau1 - p2.tau * den, ctx);
    add_relation(rep, "tau_c^2 4 k1 + k2 (4 tau1^2 - k1^2)", cc.tau_c_sq * 4 * k1 + p2.k * den, ctx);
    add_relation(rep, "t2 (2 tau1 + k1) - t1 (2 tau1 - k1)", p2.t * (2 * tau1 + k1) - t1 * (2 * tau1 - k1), ctx);
    finalize(rep);
  } catch (const PrecisionError& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.notes.push_back(e.what());
  }
  return rep;
}

ConjectureReport check_duality(const SeriesDef& def, const PrecisionContext& ctx, int min_digits) {
  ConjectureReport rep;
  rep.id = "conj-duality";
  rep.min_digits = min_digits;
  if (def.dual.empty()) throw DomainError("check_duality: entry " + def.id + " has no dual");
  const SeriesDef& dual = find_series(def.dual);
  rep.inputs = {{"entry", def.id}, {"dual", dual.id}};
  auto cp = def.couple();
  if (cp[0] != make_rational(1, 2) || cp[1] != make_rational(1, 2))
    throw DomainError("check_duality: the duality relations are stated for the couple (1/2, 1/2)");
  if (!def.expected_k || !def.expected_tau_sq) throw DomainError("check_duality: entry lacks k and tau^2");

  const QuadExt z1 = def.z.exact_or_throw();
  const QuadExt z2 = dual.z.exact_or_throw();
  if (!z1.is_rational() || z1.as_rational() >= 0) throw DomainError("check_duality: needs a rational z < 0");
  const Rational k1 = def.expected_k->exact_or_throw().as_rational();
  const Rational tau1_sq = def.expected_tau_sq->exact_or_throw().as_rational();
  const Rational kp = k1 + 1;
  const Rational ratio = Rational(8) / (4 * tau1_sq - kp * kp);  // tau2 / tau1
  const QuadExt root = QuadExt::sqrt_of(-z1.as_rational());
  const QuadExt a = def.a.exact_or_throw(), b = def.b.exact_or_throw(), c = def.c.exact_or_throw();
  const QuadExt r(ratio);
  const QuadExt c2 = r * c / root;
  const QuadExt b2 = r * (c - b) / root;
  const QuadExt a2 = r * (c - QuadExt(2) * b + QuadExt(4) * a) / (QuadExt(4) * root);
  const Rational k2p = 8 * kp / (4 * tau1_sq - kp * kp);

  rep.values = {{"tau2/tau1", to_string(ratio)},
                {"tau2^2", to_string(ratio * ratio * tau1_sq)},
                {"k2", to_string(k2p - 1)},
                {"c2", c2.to_string()},
                {"b2", b2.to_string()},
                {"a2", a2.to_string()}};
  const mpfr_prec_t bits = ctx.bits();
  auto exact_relation = [&](const std::string& name, const QuadExt& x, const QuadExt& y) {
    Real res = x == y ? Real(bits) : (x - y).to_real(bits);
    add_relation(rep, name + (x == y ? " (exact)" : ""), res, ctx);
  };
  exact_relation("z1 z2 = 1", z1 * z2, QuadExt(1));
  exact_relation("c2 = dual c", c2, dual.c.exact_or_throw());
  exact_relation("b2 = dual b", b2, dual.b.exact_or_throw());
  exact_relation("a2 = dual a", a2, dual.a.exact_or_throw());
  try {
    auto mb = continue_series(dual, ctx);
    rep.values.push_back({"mellin-barnes value", real_text(mb.value)});
    add_relation(rep, "Mellin-Barnes sum of the dual = rhs", mb.value - mb.target, ctx);
  } catch (const PrecisionError& e) {
    rep.notes.push_back(e.what());
    rep.verdict = Verdict::Inconclusive;
    return rep;
  }
  finalize(rep);
  return rep;
}

ConjectureReport check_duality_numeric(const Real& z1, const PrecisionContext& ctx, int min_digits) {
  ConjectureReport rep;
  rep.id = "conj-duality-numeric";
  rep.min_digits = min_digits;
  rep.inputs = {{"couple", "1/2,1/2"}, {"z1", z1.to_string(20)}};
  if (!(z1 < 0)) throw DomainError("check_duality_numeric needs z1 < 0");
  const Rational half = make_rational(1, 2);
  try {
    const Real z2 = 1 / z1;
    auto p1 = invariants_anywhere(half, half, z1, ctx);
    auto p2 = invariants_anywhere(half, half, z2, ctx);
    const Real k1p = p1.k + 1, k2p = p2.k + 1;
    const Real den = 4 * p1.tau * p1.tau - k1p * k1p;
    rep.values = {{"t1", real_text(p1.t)},  {"k1", real_text(p1.k)}, {"tau1", real_text(p1.tau)},
                  {"t2", real_text(p2.t)}, {"k2", real_text(p2.k)}, {"tau2", real_text(p2.tau)}};
    add_relation(rep, "tau2 (4 tau1^2 - (k1+1)^2) - 8 tau1", p2.tau * den - 8 * p1.tau, ctx);
    add_relation(rep, "(k2+1)(4 tau1^2 - (k1+1)^2) - 8 (k1+1)", k2p * den - 8 * k1p, ctx);
    add_relation(rep, "t1 t2 (2 tau1 - k1 - 1) - 2 (2 tau1 + k1 + 1)",
                 p1.t * p2.t * (2 * p1.tau - k1p) - 2 * (2 * p1.tau + k1p), ctx);
    add_relation(rep, "(k1+1) tau2 - (k2+1) tau1", k1p * p2.tau - k2p * p1.tau, ctx);
    add_relation(rep, "(k1+1)(k2+1) + 8 - 4 tau1 tau2", k1p * k2p + 8 - 4 * p1.tau * p2.tau, ctx);
    add_relation(rep, "2 t1 t2 - (k1+1)(k2+1) - 2 (k1+1) tau2 - 4",
                 2 * p1.t * p2.t - k1p * k2p - 2 * k1p * p2.tau - 4, ctx);
    auto rel = pslq({k1p * k2p, p1.tau * p2.tau, Real(1L, ctx.bits())}, ctx, Real(1000L, ctx.bits()));
    if (rel) rep.values.push_back({"pslq [(k1+1)(k2+1), tau1 tau2, 1]", format_relation(rel->coeffs)});
    else rep.notes.push_back("no small integer relation among (k1+1)(k2+1), tau1 tau2, 1");
    finalize(rep);
  } catch (const PrecisionError& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.notes.push_back(e.what());
  }
  return rep;
}

ConjectureReport check_L5_identity(const PrecisionContext& ctx, int min_digits) {
  ConjectureReport rep;
  rep.id = "l5";
  rep.min_digits = min_digits;
  const SeriesDef& def = find_series("ud.L5");
  rep.inputs = {{"entry", def.id}};
  auto s = upside_down_sum(def, ctx);
  rep.values = {{"sum", real_text(s.value, 30)}, {"closed form", real_text(s.target, 30)}};
  add_relation(rep, "sum = 1125/4 sqrt5 L5(3) - 448 zeta(3)", s.value - s.target, ctx);
  rep.values.push_back({"sign of closed form", s.target.sign() < 0 ? "negative" : "positive"});
  finalize(rep);
  return rep;
}

}  // namespace pisums

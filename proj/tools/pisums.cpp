// pisums: command-line front end.
// Exit codes: 0 success/supported, 1 verification failed, 2 usage or input error,
// 3 precision not achieved.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "pisums/arith.hpp"
#include "pisums/catalog.hpp"
#include "pisums/conjectures.hpp"
#include "pisums/hyper.hpp"
#include "pisums/mirror.hpp"
#include "pisums/modeq.hpp"
#include "pisums/monodromy.hpp"
#include "pisums/relations.hpp"
#include "pisums/translate.hpp"

using namespace pisums;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kPrecision = 3 };

struct Global {
  int digits = 30;
  std::string digits_source = "default";
  bool machine = false;
  int exit_code = kOk;

  void worsen(int code) {
    // failed beats precision, which beats ok
    if (code == kFailed || (code == kPrecision && exit_code == kOk)) exit_code = code;
  }
};

Global G;

void emit(const json& j, const std::string& text) {
  if (G.machine) std::cout << j.dump() << "\n";
  else std::cout << text;
}

Rational parse_rational(const std::string& s) {
  try {
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw DomainError("not a rational number: " + s);
  }
}

std::pair<Rational, Rational> parse_couple(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw DomainError("couple must be written a,b");
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

std::vector<Rational> parse_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

Real parse_real(const std::string& s, const PrecisionContext& ctx) { return ExactExpr::parse(s).eval(ctx); }

int required_digits(const SumReport& r, int digits) {
  if (r.method == "direct") return digits;
  if (r.method == "mellin-barnes") return std::min(digits, 15);
  return std::min(digits, 10);
}

// ---------------------------------------------------------------- verify

struct VerifyOutcome {
  SumReport report;
  std::string error;
  int code = kOk;
};

VerifyOutcome verify_one(const SeriesDef& def, const PrecisionContext& ctx) {
  VerifyOutcome out;
  try {
    switch (def.kind) {
      case SeriesKind::Pi:
      case SeriesKind::Pi2:
        out.report = def.divergent ? continue_series(def, ctx) : sum_series(def, ctx);
        break;
      case SeriesKind::UpsideDown:
        out.report = upside_down_sum(def, ctx);
        break;
      case SeriesKind::Sato: {
        auto e = stolz_ratio(def, ctx);
        SumReport r;
        r.id = def.id;
        r.value = e.value;
        r.target = def.rhs.eval(ctx);
        r.error_bound = e.error;
        r.digits_matched = matched_digits(e.value, r.target, ctx.target_digits);
        r.terms_used = e.points;
        r.method = "stolz-limit";
        out.report = r;
        break;
      }
    }
    const auto& r = out.report;
    if (r.digits_matched < required_digits(r, ctx.target_digits)) {
      Real gap = abs(r.value - r.target);
      out.code = gap <= 10 * r.error_bound ? kPrecision : kFailed;
    }
  } catch (const PrecisionError& e) {
    out.error = e.what();
    out.code = kPrecision;
  }
  return out;
}

int cmd_verify(const std::vector<std::string>& ids, bool all, int jobs) {
  std::vector<const SeriesDef*> defs;
  if (all) {
    for (const auto& d : builtin_corpus()) defs.push_back(&d);
  } else {
    for (const auto& id : ids) defs.push_back(&find_series(id));
  }
  if (defs.empty()) throw DomainError("verify: no entries given");
  PrecisionContext ctx(G.digits);
  std::vector<VerifyOutcome> results(defs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < defs.size(); i = next++) results[i] = verify_one(*defs[i], ctx);
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(defs.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < defs.size(); ++i) {
    const auto& o = results[i];
    const auto& r = o.report;
    std::string status = o.code == kOk ? "ok" : o.code == kFailed ? "failed" : "precision-not-achieved";
    json j{{"record", "verify"}, {"id", defs[i]->id}, {"status", status}};
    std::ostringstream text;
    if (!o.error.empty()) {
      j["error"] = o.error;
      text << defs[i]->id << ": " << status << " (" << o.error << ")\n";
    } else {
      j["digits_matched"] = r.digits_matched;
      j["terms"] = r.terms_used;
      j["method"] = r.method;
      j["digits_per_term"] = std::round(r.digits_per_term * 1000) / 1000;
      j["value"] = r.value.to_string(std::min(G.digits, 40));
      text << defs[i]->id << ": matched " << r.digits_matched << " digits, " << r.terms_used << " terms, method "
           << r.method;
      if (r.method == "direct") text << ", " << std::fixed << std::setprecision(3) << r.digits_per_term << " digits/term";
      text << ", " << status << "\n";
    }
    emit(j, text.str());
    G.worsen(o.code);
  }
  return G.exit_code;
}

// ---------------------------------------------------------------- list / dump

int cmd_list(const std::string& kind) {
  for (const auto& d : builtin_corpus()) {
    if (!kind.empty() && to_string(d.kind) != kind) continue;
    json j{{"record", "entry"}, {"id", d.id}, {"kind", to_string(d.kind)}, {"z", d.z.to_string()},
           {"rhs", d.rhs.to_string()}, {"divergent", d.divergent}};
    emit(j, d.id + "  " + to_string(d.kind) + "  z = " + d.z.to_string() + (d.divergent ? "  (divergent)" : "") +
                "\n");
  }
  return kOk;
}

int cmd_dump(const std::vector<std::string>& ids) {
  std::vector<SeriesDef> defs;
  if (ids.empty()) defs = builtin_corpus();
  for (const auto& id : ids) defs.push_back(find_series(id));
  std::string text = print_catalog(defs);
  emit(json{{"record", "catalog"}, {"text", text}}, text);
  return kOk;
}

// ---------------------------------------------------------------- invariants

int cmd_invariants(const std::string& id, const std::string& couple) {
  PrecisionContext ctx(G.digits);
  if (!couple.empty()) {
    auto [s1, s2] = parse_couple(couple);
    auto cc = critical_constants(s1, s2, ctx);
    json j{{"record", "critical"}, {"couple", couple}, {"alpha_c", cc.alpha_c.to_string(20)},
           {"tau_c_sq", cc.tau_c_sq.to_string(20)}, {"h", cc.h.to_string(20)}};
    std::ostringstream t;
    t << "couple " << couple << ": alpha_c = "
      << (cc.alpha_c_exact ? to_string(*cc.alpha_c_exact) : cc.alpha_c.to_string(20))
      << ", tau_c^2 = " << (cc.tau_c_sq_exact ? to_string(*cc.tau_c_sq_exact) : cc.tau_c_sq.to_string(20))
      << ", h = " << cc.h.to_string(20) << "\n";
    emit(j, t.str());
    return kOk;
  }
  const SeriesDef& d = find_series(id);
  if (d.kind == SeriesKind::Pi) {
    auto r = tau_pi_level(d, ctx);
    json j{{"record", "invariants"}, {"id", d.id}, {"tau_exact_b", r.tau_a.to_string(25)}};
    std::ostringstream t;
    t << d.id << ": tau (from b) = " << r.tau_a.to_string(25);
    if (r.has_tau_b) {
      j["tau_mirror"] = r.tau_b.to_string(25);
      j["digits_agree"] = r.digits_agree;
      t << ", tau (mirror map) = " << r.tau_b.to_string(25) << ", agree " << r.digits_agree << " digits";
    } else {
      t << ", mirror-map nome outside the disk";
    }
    emit(j, t.str() + "\n");
    return kOk;
  }
  if (d.kind == SeriesKind::Pi2) {
    auto rep = check_main_conjecture(d, ctx);
    json j{{"record", "invariants"}, {"id", d.id}};
    std::ostringstream t;
    t << d.id << ":";
    for (const auto& [k, v] : rep.values) {
      j[k] = v;
      t << " " << k << " = " << v;
    }
    emit(j, t.str() + "\n");
    return rep.verdict == Verdict::Inconclusive ? kPrecision : kOk;
  }
  throw DomainError("invariants: " + d.id + " is neither a 1/pi nor a 1/pi^2 entry");
}

// ---------------------------------------------------------------- guess-modeq

int cmd_guess_modeq(const std::string& s, int order, int degree, size_t terms, int sign, size_t verify_depth) {
  auto g = guess_modeq(parse_rational(s), order, degree, terms, sign);
  json head{{"record", "modeq"}, {"s", s}, {"order", order}, {"degree", degree}, {"terms", terms},
            {"sign", sign}, {"unknowns", g.unknowns}, {"basis_dimension", g.basis.size()}};
  std::ostringstream t;
  t << "# modular equation: s = " << s << ", order " << order << (sign < 0 ? " (alternating)" : "") << ", degree "
    << degree << ", " << terms << " terms, " << g.unknowns << " unknowns, basis dimension " << g.basis.size() << "\n";
  if (g.basis.empty()) {
    emit(head, t.str() + "# no relation of this degree\n");
    return kFailed;
  }
  if (!g.unique()) {
    emit(head, t.str() + "# relation not unique; lower the degree\n");
    return kPrecision;
  }
  const auto& p = g.basis[0];
  head["polynomial"] = p.to_string();
  json rows = json::array();
  for (int i = 0; i <= p.degree; ++i)
    for (int j = 0; i + j <= p.degree; ++j)
      if (p.at(i, j) != 0) rows.push_back({i, j, p.at(i, j).get_str()});
  head["rows"] = rows;
  t << "# " << p.to_string() << "\n" << p.rows();
  int code = kOk;
  if (verify_depth > 0) {
    auto c = verify_modeq_series(p, parse_rational(s), order, verify_depth, sign);
    head["verified_terms"] = verify_depth;
    head["verified"] = c.exact;
    t << "# verification to " << verify_depth << " terms: " << (c.exact ? "zero residual" : "FAILED") << "\n";
    if (!c.exact) code = kFailed;
  }
  emit(head, t.str());
  return code;
}

// ---------------------------------------------------------------- check

int verdict_code(Verdict v) {
  return v == Verdict::Supported ? kOk : v == Verdict::Failed ? kFailed : kPrecision;
}

json report_json(const ConjectureReport& r) {
  json j{{"record", "conjecture"}, {"id", r.id}, {"verdict", to_string(r.verdict)}, {"min_digits", r.min_digits}};
  json in = json::object(), vals = json::object(), rels = json::array();
  for (const auto& [k, v] : r.inputs) in[k] = v;
  for (const auto& [k, v] : r.values) vals[k] = v;
  for (const auto& rel : r.relations)
    rels.push_back({{"relation", rel.relation}, {"residual", rel.residual.to_string(3)}, {"digits", rel.digits}});
  j["inputs"] = in;
  j["values"] = vals;
  j["relations"] = rels;
  j["notes"] = r.notes;
  return j;
}

int cmd_check(const std::string& what, const std::string& arg, const std::string& couple, const std::string& z,
              size_t terms) {
  PrecisionContext ctx(G.digits);
  ConjectureReport rep;
  if (what == "conj-main") {
    rep = check_main_conjecture(find_series(arg), ctx);
  } else if (what == "conj-branch") {
    auto [s1, s2] = parse_couple(couple.empty() ? "1/2,1/2" : couple);
    rep = check_branch_relations(s1, s2, parse_real(z.empty() ? "9/10" : z, ctx), ctx);
  } else if (what == "conj-duality") {
    rep = check_duality(find_series(arg.empty() ? "pi2.wz3" : arg), ctx);
  } else if (what == "conj-duality-numeric") {
    rep = check_duality_numeric(parse_real(z.empty() ? "-1/2" : z, ctx), ctx);
  } else if (what == "l5") {
    rep = check_L5_identity(ctx, std::min(30, ctx.target_digits - 5));
  } else if (what == "transform") {
    std::vector<const Transformation*> ts;
    if (arg.empty()) {
      for (const auto& t : builtin_transformations()) ts.push_back(&t);
    } else {
      ts.push_back(&find_transformation(arg));
    }
    int code = kOk;
    for (const auto* t : ts) {
      auto c = verify_transformation(*t, terms);
      json j{{"record", "transform"}, {"id", t->id}, {"terms", terms}, {"pass", c.pass}};
      std::ostringstream s;
      s << t->id << ": " << (c.pass ? "exact to " + std::to_string(terms) + " terms"
                                    : "fails at order " + std::to_string(c.first_failure))
        << "\n";
      if (!c.pass) {
        j["first_failure"] = c.first_failure;
        code = kFailed;
      }
      emit(j, s.str());
    }
    return code;
  } else if (what == "translate") {
    int code = kOk;
    for (const auto& ex : builtin_translations()) {
      if (!arg.empty() && ex.id != arg) continue;
      auto r = apply_translation(ex.op, find_transformation(ex.transformation), ex.z0, ctx, ex.expected);
      json j{{"record", "translate"}, {"id", ex.id}, {"transformation", ex.transformation},
             {"u0", r.u0.to_string(20)}, {"w0", r.w0.to_string(20)}, {"digits_agree", r.digits_agree},
             {"digits_expected", r.digits_expected}};
      std::ostringstream s;
      s << ex.id << " (" << ex.transformation << "): operator side at " << r.u0.to_string(15)
        << ", translated side at " << r.w0.to_string(15) << ", sides agree " << r.digits_agree
        << " digits, expected value " << r.digits_expected << " digits\n";
      emit(j, s.str());
      if (std::min(r.digits_agree, r.digits_expected) < ctx.target_digits - 5) code = kFailed;
    }
    return code;
  } else {
    throw DomainError("check: unknown target " + what +
                      " (conj-main, conj-branch, conj-duality, conj-duality-numeric, l5, transform, translate)");
  }
  emit(report_json(rep), format_report(rep));
  return verdict_code(rep.verdict);
}

// ---------------------------------------------------------------- pslq

int cmd_pslq(const std::vector<std::string>& values, const std::string& minpoly_of, int degree,
             const std::string& combination, const std::string& w_expr, long max_norm) {
  PrecisionContext ctx(G.digits);
  if (!minpoly_of.empty()) {
    Real x = parse_real(minpoly_of, ctx);
    auto mp = minpoly(x, degree, ctx);
    json j{{"record", "minpoly"}, {"x", minpoly_of}, {"degree", degree}};
    if (!mp) {
      emit(j, "no polynomial of degree <= " + std::to_string(degree) + "\n");
      return kFailed;
    }
    j["coefficients"] = json::array();
    for (const auto& c : *mp) j["coefficients"].push_back(c.get_str());
    emit(j, "minimal polynomial (constant term first): " + format_relation(*mp) + "\n");
    return kOk;
  }
  if (!combination.empty()) {
    const SeriesDef& d = find_series(combination);
    Real z = d.z.eval(ctx);
    Real v[3];
    for (int k = 0; k < 3; ++k) {
      if (abs(z) < 1) {
        auto r = moment_reduction(d.s, k);
        v[k] = hypergeometric_direct(r.upper, r.lower, z, ctx) * Real(r.coef, ctx.bits()) * pow(z, r.z_power);
      } else {
        v[k] = moment_value(d.s, k, z, ctx).value;
      }
    }
    Real p = pi(ctx.bits());
    auto c = discover_quadratic_combination(v[0], v[1], v[2], parse_real(w_expr, ctx), 1 / (p * p), ctx);
    json j{{"record", "combination"}, {"id", d.id}, {"w", w_expr}};
    if (!c) {
      emit(j, "no relation among v0, v0 w, v1, v1 w, v2, v2 w, 1/pi^2\n");
      return kFailed;
    }
    j["coefficients"] = json::array();
    for (const auto& x : *c) j["coefficients"].push_back(x.get_str());
    emit(j, "relation among v0, v0 w, v1, v1 w, v2, v2 w, 1/pi^2: " + format_relation(*c) + "\n");
    return kOk;
  }
  if (values.size() < 2) throw DomainError("pslq: give at least two values, --minpoly or --combination");
  std::vector<Real> xs;
  for (const auto& v : values) xs.push_back(parse_real(v, ctx));
  auto rel = pslq(xs, ctx, Real(max_norm, ctx.bits()));
  json j{{"record", "pslq"}, {"values", values}};
  if (!rel) {
    emit(j, "no relation with norm <= " + std::to_string(max_norm) + "\n");
    return kFailed;
  }
  j["coefficients"] = json::array();
  for (const auto& c : rel->coeffs) j["coefficients"].push_back(c.get_str());
  j["residual"] = rel->residual.to_string(3);
  emit(j, "relation " + format_relation(rel->coeffs) + ", residual " + rel->residual.to_string(3) + "\n");
  return kOk;
}

// ---------------------------------------------------------------- monodromy

int cmd_monodromy(const std::string& couple, const std::string& s_list, const std::string& around,
                  const std::string& base, bool emit_matrix, bool fit) {
  PrecisionContext ctx(G.digits);
  HypOperator op;
  std::optional<std::pair<Rational, Rational>> cp;
  if (!couple.empty()) {
    cp = parse_couple(couple);
    op = couple_operator(cp->first, cp->second);
  } else if (!s_list.empty()) {
    op = hypergeometric_operator(parse_list(s_list));
  } else {
    throw DomainError("monodromy: give --couple a,b or --s list");
  }
  const Rational zc = parse_rational(around), zb = parse_rational(base);
  auto r = loop_monodromy(op, zc, zb, ctx);
  const mpfr_prec_t bits = ctx.bits();
  const size_t m = op.order();
  json j{{"record", "monodromy"}, {"operator", op.name}, {"around", around}, {"base", base}, {"loop", r.loop},
         {"basis", r.basis}, {"exact", r.exact}};
  std::ostringstream t;
  t << "# monodromy of " << op.name << " around z = " << around << " (" << r.loop << "), basis " << r.basis << "\n";
  int code = kOk;
  if (zc != 0 && op.hypergeometric()) {
    // Expected spectrum: 1 (m-1 times) and exp(2 pi i beta).
    auto cpoly = char_poly(r.matrix);
    Rational beta = conifold_exponent(op);
    Complex lam = polar(Real(1L, bits), 2 * pi(bits) * Real(beta, bits));
    std::vector<Complex> expect{Complex(Real(1L, bits))};
    auto mul = [&](const Complex& root) {
      std::vector<Complex> nx(expect.size() + 1, Complex(bits));
      for (size_t k = 0; k < expect.size(); ++k) {
        nx[k + 1] += expect[k];
        nx[k] -= expect[k] * root;
      }
      expect = nx;
    };
    for (size_t k = 0; k + 1 < m; ++k) mul(Complex(Real(1L, bits)));
    mul(lam);
    Real gap(bits);
    for (size_t k = 0; k < expect.size(); ++k) gap = max(gap, abs(cpoly[k] - expect[k]));
    auto d = r.matrix;
    for (size_t i = 0; i < m; ++i) d[i][i] -= Complex(Real(1L, bits));
    int rank = numerical_rank(d, pow(Real(10L, bits), -(ctx.target_digits / 2)));
    j["local_exponent"] = to_string(beta);
    j["charpoly_gap"] = gap.to_string(3);
    j["rank_M_minus_I"] = rank;
    t << "# exponent " << to_string(beta) << " at z = " << around << ": characteristic polynomial gap "
      << gap.to_string(3) << ", rank(M - I) = " << rank << "\n";
    if (gap > pow(Real(10L, bits), -(ctx.target_digits / 2)) || rank != 1) code = kFailed;
  }
  if (emit_matrix) {
    json rows = json::array();
    for (size_t i = 0; i < m; ++i)
      for (size_t k = 0; k < m; ++k) {
        const auto& e = r.matrix[i][k];
        std::string re = e.re.to_string(std::min(G.digits, 30)), im = e.im.to_string(std::min(G.digits, 30));
        rows.push_back({i, k, re, im});
        t << i << " " << k << " " << re << " " << im << "\n";
      }
    j["matrix"] = rows;
  }
  if (fit) {
    if (!cp) throw DomainError("monodromy --fit needs --couple");
    json fits = json::array();
    for (const auto& f : fit_conjecture_matrix(r, cp->first, cp->second, ctx)) {
      fits.push_back({{"variant", f.rank_one_variant ? "rank-one" : "printed"},
                      {"orientation", f.orientation},
                      {"d", f.d.re.to_string(15)},
                      {"residual", f.residual.to_string(4)},
                      {"structural_ok", f.structural_ok},
                      {"charpoly_gap", f.charpoly_gap.to_string(3)},
                      {"notes", f.notes}});
      t << "# fit (" << (f.rank_one_variant ? "rank-one variant" : "as printed") << ", " << f.orientation
        << "): d = " << f.d.re.to_string(15) << ", residual " << f.residual.to_string(4) << ", charpoly gap "
        << f.charpoly_gap.to_string(3) << "\n";
      for (const auto& n : f.notes) t << "#   " << n << "\n";
    }
    j["fits"] = fits;
  }
  emit(j, t.str());
  return code;
}

// ---------------------------------------------------------------- limit

int cmd_limit(const std::string& id, const std::string& method, const std::string& translate_id,
              const std::string& zstar, const std::string& branch) {
  PrecisionContext ctx(G.digits);
  if (!translate_id.empty()) {
    const auto& t = find_transformation(translate_id);
    Real v = critical_translation_limit(t, parse_rational(zstar), parse_rational(branch), ctx);
    json j{{"record", "limit"}, {"transformation", t.id}, {"z", zstar}, {"branch", branch},
           {"value", v.to_string(std::min(G.digits, 40))}};
    emit(j, t.id + ": limit at z = " + zstar + " (branch " + branch + ") = " + v.to_string(std::min(G.digits, 40)) +
                "\n");
    return kOk;
  }
  const SeriesDef& d = find_series(id);
  if (d.kind != SeriesKind::Sato) throw DomainError("limit: " + d.id + " is not a critical-point (sato) entry");
  Real rhs = d.rhs.eval(ctx);
  int code = kOk;
  auto report = [&](const std::string& name, const LimitEstimate& e, int need) {
    int dig = matched_digits(e.value, rhs, ctx.target_digits);
    json j{{"record", "limit"}, {"id", d.id}, {"method", name}, {"value", e.value.to_string(25)},
           {"error_estimate", e.error.to_string(3)}, {"points", e.points}, {"digits_matched", dig}};
    std::ostringstream s;
    s << d.id << " [" << name << "]: " << e.value.to_string(25) << " (estimate error " << e.error.to_string(3)
      << ", " << e.points << " points), matches " << d.rhs.to_string() << " to " << dig << " digits\n";
    emit(j, s.str());
    if (dig < need) code = abs(e.value - rhs) <= e.error * 10 ? kPrecision : kFailed;
  };
  if (method == "aycock" || method == "both") report("aycock", aycock_limit(d, ctx), 6);
  if (method == "stolz" || method == "both") report("stolz", stolz_ratio(d, ctx), 10);
  if (method != "aycock" && method != "stolz" && method != "both")
    throw DomainError("limit: method must be aycock, stolz or both");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("PISUMS_DIGITS")) {
    try {
      G.digits = std::stoi(env);
      G.digits_source = "PISUMS_DIGITS";
    } catch (const std::exception&) {
      std::cerr << "error: PISUMS_DIGITS is not an integer\n";
      return kUsage;
    }
  }
  CLI::App app{"pisums: series for 1/pi and 1/pi^2, mirror maps, modular equations, monodromy"};
  app.require_subcommand(1);
  app.fallthrough();
  int digits = 0;
  std::string format = "text";
  app.add_option("--digits", digits, "target precision in decimal digits (default 30 or PISUMS_DIGITS)");
  app.add_option("--format", format, "text or json (one JSON object per line)")
      ->check(CLI::IsMember({"text", "json"}));

  std::function<int()> action;

  auto* list = app.add_subcommand("list", "list catalog entries");
  std::string kind;
  list->add_option("--kind", kind, "pi, pi2, sato or upside_down");
  list->callback([&] { action = [&] { return cmd_list(kind); }; });

  auto* verify = app.add_subcommand("verify", "sum entries and compare with their right-hand sides");
  std::vector<std::string> ids;
  bool all = false;
  int jobs = 1;
  verify->add_option("ids", ids, "catalog ids");
  verify->add_flag("--all", all, "every catalog entry");
  verify->add_option("--jobs", jobs, "worker threads for --all");
  verify->callback([&] { action = [&] { return cmd_verify(ids, all, jobs); }; });

  auto* inv = app.add_subcommand("invariants", "tau, alpha, k at an entry, or critical constants of a couple");
  std::string inv_id, inv_couple;
  inv->add_option("id", inv_id, "catalog id");
  inv->add_option("--couple", inv_couple, "a,b");
  inv->callback([&] {
    if (inv_id.empty() == inv_couple.empty()) throw CLI::ValidationError("invariants", "give an id or --couple");
    action = [&] { return cmd_invariants(inv_id, inv_couple); };
  });

  auto* gm = app.add_subcommand("guess-modeq", "guess a modular equation from q-expansions");
  std::string gm_s = "1/2";
  int gm_order = 3, gm_degree = 6, gm_sign = 1;
  size_t gm_terms = 50, gm_verify = 0;
  gm->add_option("--s", gm_s, "family parameter (1/2, s, 1-s)");
  gm->add_option("--order", gm_order, "k in z(q^k)");
  gm->add_option("--degree", gm_degree, "total degree bound");
  gm->add_option("--terms", gm_terms, "q-coefficients used");
  gm->add_option("--sign", gm_sign, "1, or -1 for z(-q^k)")->check(CLI::IsMember({1, -1}));
  gm->add_option("--verify", gm_verify, "check the relation to this many terms");
  gm->callback([&] { action = [&] { return cmd_guess_modeq(gm_s, gm_order, gm_degree, gm_terms, gm_sign, gm_verify); }; });

  auto* check = app.add_subcommand("check", "conjecture and identity checks");
  std::string ck_what, ck_arg, ck_couple, ck_z;
  size_t ck_terms = 40;
  check->add_option("what", ck_what,
                    "conj-main, conj-branch, conj-duality, conj-duality-numeric, l5, transform, translate")
      ->required();
  check->add_option("arg", ck_arg, "entry, transformation or example id");
  check->add_option("--couple", ck_couple, "a,b (conj-branch)");
  check->add_option("--z", ck_z, "z value (conj-branch, conj-duality-numeric)");
  check->add_option("--terms", ck_terms, "series terms (transform)");
  check->callback([&] { action = [&] { return cmd_check(ck_what, ck_arg, ck_couple, ck_z, ck_terms); }; });

  auto* ps = app.add_subcommand("pslq", "integer relations");
  std::vector<std::string> ps_values;
  std::string ps_minpoly, ps_comb, ps_w = "((sqrt(5) - 1)/2)^5";
  int ps_degree = 2;
  long ps_norm = 1000000000L;
  ps->add_option("values", ps_values, "expressions, e.g. 'sqrt(2)' 1");
  ps->add_option("--minpoly", ps_minpoly, "expression whose minimal polynomial is wanted");
  ps->add_option("--degree", ps_degree, "degree bound for --minpoly");
  ps->add_option("--combination", ps_comb, "entry id: relation among v_k, v_k w and 1/pi^2");
  ps->add_option("--w", ps_w, "the multiplier w for --combination");
  ps->add_option("--max-norm", ps_norm, "give up above this coefficient norm");
  ps->callback([&] { action = [&] { return cmd_pslq(ps_values, ps_minpoly, ps_degree, ps_comb, ps_w, ps_norm); }; });

  auto* mono = app.add_subcommand("monodromy", "loop monodromy in the Frobenius basis at 0");
  std::string mo_couple, mo_s, mo_around = "1", mo_base = "1/128";
  bool mo_emit = false, mo_fit = false;
  mono->add_option("--couple", mo_couple, "a,b for the order-5 operator");
  mono->add_option("--s", mo_s, "parameters of a hypergeometric operator");
  mono->add_option("--around", mo_around, "singular point (0 or 1)");
  mono->add_option("--base", mo_base, "real base point");
  mono->add_flag("--emit-matrix", mo_emit, "print 'i j re im' rows");
  mono->add_flag("--fit", mo_fit, "fit the conjectured conifold matrix");
  mono->callback([&] { action = [&] { return cmd_monodromy(mo_couple, mo_s, mo_around, mo_base, mo_emit, mo_fit); }; });

  auto* lim = app.add_subcommand("limit", "limits at the critical point");
  std::string li_id, li_method = "both", li_tr, li_z = "9", li_branch = "9";
  lim->add_option("id", li_id, "sato entry id");
  lim->add_option("--method", li_method, "aycock, stolz or both");
  lim->add_option("--translate", li_tr, "transformation id for the translated limit");
  lim->add_option("--z", li_z, "critical z of the translated limit");
  lim->add_option("--branch", li_branch, "branch factor of the translated limit");
  lim->callback([&] {
    if (li_id.empty() == li_tr.empty()) throw CLI::ValidationError("limit", "give an id or --translate");
    action = [&] { return cmd_limit(li_id, li_method, li_tr, li_z, li_branch); };
  });

  auto* dump = app.add_subcommand("dump", "print catalog entries in catalog syntax");
  std::vector<std::string> dump_ids;
  dump->add_option("ids", dump_ids, "catalog ids (all when omitted)");
  dump->callback([&] { action = [&] { return cmd_dump(dump_ids); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (digits > 0) {
    G.digits = digits;
    G.digits_source = "--digits";
  }
  if (G.digits < 5 || G.digits > 5000) {
    std::cerr << "error: digits must be between 5 and 5000\n";
    return kUsage;
  }
  G.machine = format == "json";
  emit(json{{"record", "precision"}, {"digits", G.digits}, {"source", G.digits_source}},
       "# precision " + std::to_string(G.digits) + " digits (" + G.digits_source + ")\n");
  try {
    int rc = action();
    std::cout.flush();
    return rc;
  } catch (const PrecisionError& e) {
    std::cerr << "precision not achieved: " << e.what() << "\n";
    return kPrecision;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

#include "pisums/catalog.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace pisums {

namespace detail {
extern const std::string_view kBuiltinCatalog;
}

std::string to_string(SeriesKind k) {
  switch (k) {
    case SeriesKind::Pi:
      return "pi";
    case SeriesKind::Pi2:
      return "pi2";
    case SeriesKind::Sato:
      return "sato";
    case SeriesKind::UpsideDown:
      return "upside_down";
  }
  return "pi";
}

SeriesKind parse_kind(std::string_view s) {
  if (s == "pi") return SeriesKind::Pi;
  if (s == "pi2") return SeriesKind::Pi2;
  if (s == "sato") return SeriesKind::Sato;
  if (s == "upside_down") return SeriesKind::UpsideDown;
  throw DomainError("unknown series kind '" + std::string(s) + "'");
}

const std::vector<Rational>& allowed_s_values() {
  static const std::vector<Rational> v = {make_rational(1, 2), make_rational(1, 3), make_rational(1, 4),
                                          make_rational(1, 6)};
  return v;
}

const std::vector<std::pair<Rational, Rational>>& allowed_couples() {
  static const std::vector<std::pair<Rational, Rational>> v = [] {
    const long raw[14][4] = {{1, 2, 1, 2}, {1, 2, 1, 3}, {1, 2, 1, 4}, {1, 2, 1, 6}, {1, 3, 1, 3},
                             {1, 3, 1, 4}, {1, 3, 1, 6}, {1, 4, 1, 4}, {1, 4, 1, 6}, {1, 6, 1, 6},
                             {1, 5, 2, 5}, {1, 8, 3, 8}, {1, 10, 3, 10}, {1, 12, 5, 12}};
    std::vector<std::pair<Rational, Rational>> out;
    for (const auto& r : raw) out.emplace_back(make_rational(r[0], r[1]), make_rational(r[2], r[3]));
    return out;
  }();
  return v;
}

std::vector<Rational> couple_parameters(const Rational& s1, const Rational& s2) {
  return {make_rational(1, 2), s1, 1 - s1, s2, 1 - s2};
}

bool is_allowed_couple(const Rational& s1, const Rational& s2) {
  for (const auto& [a, b] : allowed_couples()) {
    if ((a == s1 && b == s2) || (a == s2 && b == s1)) return true;
  }
  return false;
}

namespace {

std::vector<Rational> sorted(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Elements <= 1/2 of the multiset left after removing one 1/2 (five entries)
// or the single s <= 1/2 of {1/2, s, 1-s}.
std::vector<Rational> extract_couple(const std::vector<Rational>& s) {
  std::vector<Rational> rest = sorted(s);
  auto it = std::find(rest.begin(), rest.end(), make_rational(1, 2));
  if (it == rest.end()) return {};
  rest.erase(it);
  std::vector<Rational> low;
  size_t halves = 0;
  for (const auto& x : rest) {
    if (x < make_rational(1, 2)) low.push_back(x);
    if (x == make_rational(1, 2)) ++halves;
  }
  for (size_t i = 0; i < halves / 2; ++i) low.push_back(make_rational(1, 2));
  std::sort(low.begin(), low.end());
  if (low.size() * 2 != rest.size()) return {};
  std::vector<Rational> rebuilt;
  for (const auto& x : low) {
    rebuilt.push_back(x);
    rebuilt.push_back(1 - x);
  }
  if (sorted(rebuilt) != rest) return {};
  return low;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<Rational> parse_rational_list(const std::string& v, size_t line) {
  std::vector<Rational> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_rational(trim(item)));
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what(), line, 1);
    }
  }
  return out;
}

std::string join(const std::vector<Rational>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out;
}

void check_entry(const SeriesDef& d) {
  auto bad = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(d.line) + ": series " + d.id + ": " + msg, d.line, 1);
  };
  switch (d.kind) {
    case SeriesKind::Pi: {
      if (d.s.size() != 3) bad("1/pi entries need three parameters");
      auto low = extract_couple(d.s);
      if (low.size() != 1 ||
          std::find(allowed_s_values().begin(), allowed_s_values().end(), low[0]) == allowed_s_values().end())
        bad("parameters must be 1/2, s, 1-s with s in {1/2, 1/3, 1/4, 1/6}");
      if (!d.c.is_zero_literal()) bad("1/pi entries have no quadratic coefficient");
      break;
    }
    case SeriesKind::Pi2:
    case SeriesKind::UpsideDown: {
      if (d.s.size() != 5) bad("1/pi^2 entries need five parameters");
      auto low = extract_couple(d.s);
      if (low.size() != 2 || !is_allowed_couple(low[0], low[1]))
        bad("parameters " + join(d.s) + " do not come from an allowed couple");
      break;
    }
    case SeriesKind::Sato:
      if (d.sequence.empty()) {
        auto low = extract_couple(d.s);
        if (d.s.size() != 3 || low.size() != 1) bad("sato entries need a sequence or three parameters");
      } else if (d.sequence != "binom4") {
        bad("unknown sequence '" + d.sequence + "'");
      }
      if (d.poly.empty() || !d.zc) bad("sato entries need poly and zc");
      break;
  }
}

}  // namespace

std::vector<Rational> SeriesDef::couple() const { return extract_couple(s); }

bool same_definition(const SeriesDef& x, const SeriesDef& y) {
  auto opt_eq = [](const std::optional<ExactExpr>& a, const std::optional<ExactExpr>& b) {
    return a.has_value() == b.has_value() && (!a || *a == *b);
  };
  return x.id == y.id && x.kind == y.kind && x.s == y.s && x.sequence == y.sequence && x.z == y.z &&
         x.a == y.a && x.b == y.b && x.c == y.c && x.rhs == y.rhs && x.divergent == y.divergent &&
         opt_eq(x.expected_tau, y.expected_tau) && opt_eq(x.expected_k, y.expected_k) &&
         opt_eq(x.expected_tau_sq, y.expected_tau_sq) && x.poly == y.poly && opt_eq(x.zc, y.zc) &&
         x.scale == y.scale && x.dual == y.dual && x.provenance == y.provenance;
}

std::vector<SeriesDef> parse_catalog(std::string_view text) {
  std::vector<SeriesDef> defs;
  std::set<std::string> ids;
  std::set<std::string> seen_keys;
  std::set<std::string> required;
  size_t line_no = 0;
  size_t pos = 0;

  auto finish = [&]() {
    if (defs.empty()) return;
    SeriesDef& d = defs.back();
    for (const char* key : {"kind", "z", "b", "rhs"}) {
      if (!seen_keys.count(key)) {
        throw ParseError("line " + std::to_string(d.line) + ": series " + d.id + " lacks key '" + key + "'",
                         d.line, 1);
      }
    }
    if (d.s.empty() && d.sequence.empty()) {
      throw ParseError("line " + std::to_string(d.line) + ": series " + d.id + " lacks 's' or 'sequence'", d.line,
                       1);
    }
    check_entry(d);
  };

  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("line " + std::to_string(line_no) + ": unterminated section", line_no, 1);
      std::string inner = trim(std::string_view(line).substr(1, line.size() - 2));
      if (inner.rfind("series ", 0) != 0) {
        throw ParseError("line " + std::to_string(line_no) + ": expected [series <id>]", line_no, 2);
      }
      std::string id = trim(std::string_view(inner).substr(7));
      if (id.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty series id", line_no, 2);
      if (!ids.insert(id).second) {
        throw ParseError("line " + std::to_string(line_no) + ": duplicate series id " + id, line_no, 2);
      }
      finish();
      defs.emplace_back();
      defs.back().id = id;
      defs.back().line = line_no;
      seen_keys.clear();
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value", line_no, 1);
    }
    if (defs.empty()) throw ParseError("line " + std::to_string(line_no) + ": key outside a section", line_no, 1);
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    const size_t value_col = line.find_first_not_of(" \t", eq + 1) + 1;
    if (!seen_keys.insert(key).second) {
      throw ParseError("line " + std::to_string(line_no) + ": repeated key '" + key + "'", line_no, 1);
    }
    SeriesDef& d = defs.back();

    auto expr = [&]() {
      try {
        return ExactExpr::parse(value);
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no, value_col + e.column() - 1);
      }
    };

    if (key == "kind") {
      try {
        d.kind = parse_kind(value);
      } catch (const Error& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no, value_col);
      }
    } else if (key == "s") {
      d.s = parse_rational_list(value, line_no);
    } else if (key == "sequence") {
      d.sequence = value;
    } else if (key == "z") {
      d.z = expr();
    } else if (key == "a") {
      d.a = expr();
    } else if (key == "b") {
      d.b = expr();
    } else if (key == "c") {
      d.c = expr();
    } else if (key == "rhs") {
      d.rhs = expr();
    } else if (key == "divergent") {
      if (value != "true" && value != "false") {
        throw ParseError("line " + std::to_string(line_no) + ": divergent must be true or false", line_no, value_col);
      }
      d.divergent = value == "true";
    } else if (key == "expected_tau") {
      d.expected_tau = expr();
    } else if (key == "expected_k") {
      d.expected_k = expr();
    } else if (key == "expected_tau_sq") {
      d.expected_tau_sq = expr();
    } else if (key == "poly") {
      d.poly = parse_rational_list(value, line_no);
    } else if (key == "zc") {
      d.zc = expr();
    } else if (key == "scale") {
      try {
        d.scale = parse_rational(value);
      } catch (const Error& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no, value_col);
      }
    } else if (key == "dual") {
      d.dual = value;
    } else if (key == "provenance") {
      d.provenance = value;
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", line_no, 1);
    }
  }
  finish();
  return defs;
}

std::string print_catalog(const std::vector<SeriesDef>& defs) {
  std::ostringstream os;
  for (size_t i = 0; i < defs.size(); ++i) {
    const SeriesDef& d = defs[i];
    if (i) os << '\n';
    os << "[series " << d.id << "]\n";
    os << "kind = " << to_string(d.kind) << '\n';
    if (!d.s.empty()) os << "s = " << join(d.s) << '\n';
    if (!d.sequence.empty()) os << "sequence = " << d.sequence << '\n';
    if (d.scale) os << "scale = " << to_string(*d.scale) << '\n';
    os << "z = " << d.z.to_string() << '\n';
    os << "a = " << d.a.to_string() << '\n';
    os << "b = " << d.b.to_string() << '\n';
    if (!d.c.is_zero_literal()) os << "c = " << d.c.to_string() << '\n';
    os << "rhs = " << d.rhs.to_string() << '\n';
    if (d.divergent) os << "divergent = true\n";
    if (d.expected_tau) os << "expected_tau = " << d.expected_tau->to_string() << '\n';
    if (d.expected_k) os << "expected_k = " << d.expected_k->to_string() << '\n';
    if (d.expected_tau_sq) os << "expected_tau_sq = " << d.expected_tau_sq->to_string() << '\n';
    if (!d.poly.empty()) os << "poly = " << join(d.poly) << '\n';
    if (d.zc) os << "zc = " << d.zc->to_string() << '\n';
    if (!d.dual.empty()) os << "dual = " << d.dual << '\n';
    if (!d.provenance.empty()) os << "provenance = " << d.provenance << '\n';
  }
  return os.str();
}

const std::vector<SeriesDef>& builtin_corpus() {
  static const std::vector<SeriesDef> corpus = parse_catalog(detail::kBuiltinCatalog);
  return corpus;
}

const SeriesDef& find_series(std::string_view id) {
  if (id == "pi.rama.eq41") id = "pi.rama.10n1";
  for (const auto& d : builtin_corpus())
    if (d.id == id) return d;
  throw DomainError("unknown series id '" + std::string(id) + "'");
}

ValidationReport validate_entry(const SeriesDef& def, const PrecisionContext& ctx) {
  ValidationReport rep;
  const mpfr_prec_t bits = ctx.bits();
  Real z = def.z.eval(ctx);
  if (def.scale) z *= Real(*def.scale, bits);
  // Radius of convergence in the summation variable.
  Real radius(1L, bits);
  if (def.sequence == "binom4") radius = Real(make_rational(1, 16), bits);
  Real ratio = abs(z) / radius;
  rep.abs_z = ratio.to_double();
  rep.divergent = ratio >= 1L;
  if (def.kind != SeriesKind::Sato && rep.divergent != def.divergent) {
    rep.ok = false;
    rep.notes.push_back(std::string("divergent flag is ") + (def.divergent ? "true" : "false") +
                        " but |z|/radius = " + ratio.to_string(6));
  }
  for (const auto* e : {&def.z, &def.a, &def.b, &def.c}) {
    if (!e->exact() && def.kind != SeriesKind::Sato) {
      rep.notes.push_back("non-quadratic coefficient " + e->to_string() + " evaluated numerically");
    }
  }
  if (def.kind == SeriesKind::Pi && def.expected_tau) {
    Real one_minus = 1L - def.z.eval(ctx);
    if (one_minus.sign() > 0) {
      Real tau_a = def.b.eval(ctx) / sqrt(one_minus);
      Real want = def.expected_tau->eval(ctx);
      Real err = abs(tau_a - want);
      if (err > Real(1L, bits) * pow(Real(10L, bits), -(ctx.target_digits - 2))) {
        rep.ok = false;
        rep.notes.push_back("b/sqrt(1-z) = " + tau_a.to_string(20) + " differs from expected tau " +
                            def.expected_tau->to_string());
      }
    }
  }
  if (def.kind == SeriesKind::Pi2 && def.c.is_zero_literal()) {
    rep.ok = false;
    rep.notes.push_back("1/pi^2 entry without quadratic coefficient");
  }
  return rep;
}

}  // namespace pisums

// Series catalog: exact expressions, series definitions and the bundled corpus.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pisums/arith.hpp"

namespace pisums {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, size_t line, size_t column)
      : Error(msg), line_(line), column_(column) {}
  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  size_t line_;
  size_t column_;
};

// Expression over integers with + - * / ^(integer), sqrt(.) and the named
// constants pi, zeta3, L5_3.
class ExactExpr {
 public:
  struct Node;

  ExactExpr();  // the integer 0
  static ExactExpr parse(std::string_view text);
  static ExactExpr integer(long v);
  static ExactExpr rational(const Rational& q);

  // Exact value in Q(sqrt D); nullopt when the expression leaves a single
  // quadratic field or involves transcendental constants.
  std::optional<QuadExt> exact() const;
  QuadExt exact_or_throw() const;
  Real eval(const PrecisionContext& ctx) const;
  Real eval(mpfr_prec_t bits) const;

  // Canonical text; parse(to_string()) reproduces the same string.
  std::string to_string() const;
  bool is_zero_literal() const;

  friend bool operator==(const ExactExpr& a, const ExactExpr& b) { return a.to_string() == b.to_string(); }

 private:
  explicit ExactExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend class ExprParser;
};

enum class SeriesKind { Pi, Pi2, Sato, UpsideDown };

std::string to_string(SeriesKind k);
SeriesKind parse_kind(std::string_view s);

struct SeriesDef {
  std::string id;
  SeriesKind kind = SeriesKind::Pi;
  std::vector<Rational> s;  // Pochhammer parameters of A_n over (1)_n^m
  std::string sequence;     // named sequence instead of s (binom4)
  ExactExpr z;
  ExactExpr a;
  ExactExpr b;
  ExactExpr c;  // zero for the 1/pi kinds
  ExactExpr rhs;
  bool divergent = false;
  std::optional<ExactExpr> expected_tau;
  std::optional<ExactExpr> expected_k;
  std::optional<ExactExpr> expected_tau_sq;
  std::vector<Rational> poly;  // P(z) coefficients, constant term first
  std::optional<ExactExpr> zc;
  std::optional<Rational> scale;  // sato sequences are summed at scale*z
  std::string dual;
  std::string provenance;
  size_t line = 0;

  // Number of (1)_n factors in the denominator.
  size_t depth() const { return s.size(); }
  // The couple (s1, s2) of a five-parameter entry, or s for three parameters.
  std::vector<Rational> couple() const;
};

bool same_definition(const SeriesDef& x, const SeriesDef& y);

// Allowed values of s for three-parameter entries and couples for five.
const std::vector<Rational>& allowed_s_values();
const std::vector<std::pair<Rational, Rational>>& allowed_couples();
// (1/2, s1, 1-s1, s2, 1-s2) for the couple.
std::vector<Rational> couple_parameters(const Rational& s1, const Rational& s2);
bool is_allowed_couple(const Rational& s1, const Rational& s2);

std::vector<SeriesDef> parse_catalog(std::string_view text);
std::string print_catalog(const std::vector<SeriesDef>& defs);
const std::vector<SeriesDef>& builtin_corpus();
const SeriesDef& find_series(std::string_view id);  // DomainError if absent

struct ValidationReport {
  bool ok = true;
  bool divergent = false;  // |z| beyond the radius of convergence
  double abs_z = 0;
  std::vector<std::string> notes;
};

ValidationReport validate_entry(const SeriesDef& def, const PrecisionContext& ctx);

}  // namespace pisums

#include <cctype>

#include "pisums/catalog.hpp"

namespace pisums {

struct ExactExpr::Node {
  enum class Op { Int, Name, Neg, Add, Sub, Mul, Div, Pow, Sqrt };
  Op op;
  Integer value;      // Int
  std::string name;   // Name
  long exponent = 0;  // Pow
  std::shared_ptr<const Node> lhs, rhs;
};

using Node = ExactExpr::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr make_int(const Integer& v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Int;
  n->value = v;
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool known_name(const std::string& s) { return s == "pi" || s == "zeta3" || s == "L5_3"; }

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

void print(const Node& n, std::string& out);

void print_child(const Node& c, int min_prec, std::string& out) {
  if (precedence(c) < min_prec) {
    out += '(';
    print(c, out);
    out += ')';
  } else {
    print(c, out);
  }
}

void print(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Int:
      out += n.value.get_str();
      return;
    case Op::Name:
      out += n.name;
      return;
    case Op::Neg:
      out += '-';
      print_child(*n.lhs, 3, out);
      return;
    case Op::Add:
      print_child(*n.lhs, 1, out);
      out += " + ";
      print_child(*n.rhs, 2, out);
      return;
    case Op::Sub:
      print_child(*n.lhs, 1, out);
      out += " - ";
      print_child(*n.rhs, 2, out);
      return;
    case Op::Mul:
      print_child(*n.lhs, 2, out);
      out += '*';
      print_child(*n.rhs, 3, out);
      return;
    case Op::Div:
      print_child(*n.lhs, 2, out);
      out += '/';
      print_child(*n.rhs, 3, out);
      return;
    case Op::Pow:
      print_child(*n.lhs, 5, out);
      out += '^';
      if (n.exponent < 0) out += "(" + std::to_string(n.exponent) + ")";
      else out += std::to_string(n.exponent);
      return;
    case Op::Sqrt:
      out += "sqrt(";
      print(*n.lhs, out);
      out += ')';
      return;
  }
}

std::optional<QuadExt> exact_value(const Node& n) {
  switch (n.op) {
    case Op::Int:
      return QuadExt(Rational(n.value));
    case Op::Name:
      return std::nullopt;
    case Op::Neg: {
      auto a = exact_value(*n.lhs);
      if (!a) return std::nullopt;
      return -*a;
    }
    case Op::Sqrt: {
      auto a = exact_value(*n.lhs);
      if (!a || !a->is_rational()) return std::nullopt;
      if (a->as_rational() < 0) throw DomainError("sqrt of a negative value");
      return QuadExt::sqrt_of(a->as_rational());
    }
    case Op::Pow: {
      auto a = exact_value(*n.lhs);
      if (!a) return std::nullopt;
      if (n.exponent < 0 && *a == QuadExt()) throw DomainError("zero raised to a negative power");
      return pow(*a, n.exponent);
    }
    default:
      break;
  }
  auto a = exact_value(*n.lhs);
  auto b = exact_value(*n.rhs);
  if (!a || !b) return std::nullopt;
  if (!a->is_rational() && !b->is_rational() && a->D() != b->D()) return std::nullopt;
  switch (n.op) {
    case Op::Add:
      return *a + *b;
    case Op::Sub:
      return *a - *b;
    case Op::Mul:
      return *a * *b;
    case Op::Div:
      if (*b == QuadExt()) throw DomainError("division by zero in expression");
      return *a / *b;
    default:
      return std::nullopt;
  }
}

Real real_value(const Node& n, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  switch (n.op) {
    case Op::Int:
      return Real(n.value, bits);
    case Op::Name:
      if (n.name == "L5_3") return dirichlet_L_quadratic(5, 3, ctx);
      return eval_constant(n.name, ctx);
    case Op::Neg:
      return -real_value(*n.lhs, ctx);
    case Op::Sqrt: {
      Real v = real_value(*n.lhs, ctx);
      if (v.sign() < 0) throw DomainError("sqrt of a negative value");
      return sqrt(v);
    }
    case Op::Pow:
      return pow(real_value(*n.lhs, ctx), n.exponent);
    case Op::Add:
      return real_value(*n.lhs, ctx) + real_value(*n.rhs, ctx);
    case Op::Sub:
      return real_value(*n.lhs, ctx) - real_value(*n.rhs, ctx);
    case Op::Mul:
      return real_value(*n.lhs, ctx) * real_value(*n.rhs, ctx);
    case Op::Div: {
      Real d = real_value(*n.rhs, ctx);
      if (d.is_zero()) throw DomainError("division by zero in expression");
      return real_value(*n.lhs, ctx) / d;
    }
  }
  return Real(bits);
}

}  // namespace

// expr := term (('+'|'-') term)*
// term := unary (('*'|'/') unary)*
// unary := '-' unary | power
// power := primary ('^' exponent)?
// exponent := integer | '-' integer | '(' '-'? integer ')'
// primary := integer | name | 'sqrt' '(' expr ')' | '(' expr ')'
class ExprParser {
 public:
  explicit ExprParser(std::string_view t) : t_(t) {}

  ExactExpr run() {
    NodePtr e = expr();
    skip();
    if (p_ != t_.size()) fail("unexpected character '" + std::string(1, t_[p_]) + "'");
    return ExactExpr(e);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression error at column " + std::to_string(p_ + 1) + ": " + msg, 0, p_ + 1);
  }
  void skip() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < t_.size() && t_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (eat('+')) left = make_binary(Op::Add, left, term());
      else if (eat('-')) left = make_binary(Op::Sub, left, term());
      else return left;
    }
  }
  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (eat('*')) left = make_binary(Op::Mul, left, unary());
      else if (eat('/')) left = make_binary(Op::Div, left, unary());
      else return left;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make_unary(Op::Neg, unary());
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (!eat('^')) return base;
    long e;
    if (eat('(')) {
      bool neg = eat('-');
      e = integer_literal();
      if (neg) e = -e;
      expect(')');
    } else {
      bool neg = eat('-');
      e = integer_literal();
      if (neg) e = -e;
    }
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->lhs = base;
    n->exponent = e;
    return n;
  }
  long integer_literal() {
    skip();
    size_t start = p_;
    while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) ++p_;
    if (start == p_) fail("exponent must be an integer");
    if (p_ - start > 6) fail("exponent too large");
    return std::stol(std::string(t_.substr(start, p_ - start)));
  }
  NodePtr primary() {
    skip();
    if (p_ >= t_.size()) fail("unexpected end of expression");
    const char ch = t_[p_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t start = p_;
      while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) ++p_;
      return make_int(Integer(std::string(t_.substr(start, p_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      size_t start = p_;
      while (p_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[p_])) || t_[p_] == '_')) ++p_;
      std::string name(t_.substr(start, p_ - start));
      if (name == "sqrt") {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return make_unary(Op::Sqrt, arg);
      }
      if (!known_name(name)) {
        p_ = start;
        fail("unknown name '" + name + "'");
      }
      auto n = std::make_shared<Node>();
      n->op = Op::Name;
      n->name = name;
      return n;
    }
    if (eat('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    fail("unexpected character '" + std::string(1, ch) + "'");
  }

  std::string_view t_;
  size_t p_ = 0;
};

ExactExpr::ExactExpr() : node_(make_int(Integer(0))) {}

ExactExpr ExactExpr::parse(std::string_view text) { return ExprParser(text).run(); }

ExactExpr ExactExpr::integer(long v) {
  NodePtr n = make_int(Integer(v < 0 ? -v : v));
  return ExactExpr(v < 0 ? make_unary(Op::Neg, n) : n);
}

ExactExpr ExactExpr::rational(const Rational& q) {
  Integer num = abs(q.get_num());
  NodePtr n = make_int(num);
  if (q.get_den() != 1) n = make_binary(Op::Div, n, make_int(q.get_den()));
  if (q < 0) n = make_unary(Op::Neg, n);
  return ExactExpr(n);
}

std::optional<QuadExt> ExactExpr::exact() const { return exact_value(*node_); }

QuadExt ExactExpr::exact_or_throw() const {
  auto v = exact();
  if (!v) throw DomainError("expression is not an element of a quadratic field: " + to_string());
  return *v;
}

Real ExactExpr::eval(const PrecisionContext& ctx) const { return real_value(*node_, ctx); }

Real ExactExpr::eval(mpfr_prec_t bits) const {
  const int digits = std::max(10, static_cast<int>(bits * 0.30103));
  return real_value(*node_, PrecisionContext(digits, 5)).with_prec(bits);
}

std::string ExactExpr::to_string() const {
  std::string out;
  print(*node_, out);
  return out;
}

bool ExactExpr::is_zero_literal() const { return node_->op == Op::Int && node_->value == 0; }

}  // namespace pisums

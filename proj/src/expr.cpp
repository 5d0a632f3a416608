#include "lagrome/expr.hpp"

#include <cctype>
#include <numbers>

namespace lagrome {

namespace {

using Node = Expression::Node;
using Kind = Expression::Kind;

class Parser {
 public:
  Parser(const std::string& s, int nvars) : s_(s), nvars_(nvars) {}

  std::unique_ptr<Node> parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("potential expression: " + what + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static std::unique_ptr<Node> make(Kind k, std::unique_ptr<Node> a = nullptr, std::unique_ptr<Node> b = nullptr) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Kind::add, std::move(lhs), term());
      else if (accept('-')) lhs = make(Kind::sub, std::move(lhs), term());
      else return lhs;
    }
  }

  std::unique_ptr<Node> term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Kind::mul, std::move(lhs), unary());
      else if (accept('/')) lhs = make(Kind::div, std::move(lhs), unary());
      else return lhs;
    }
  }

  std::unique_ptr<Node> unary() {
    if (accept('-')) return make(Kind::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  std::unique_ptr<Node> power() {
    auto base = primary();
    if (accept('^')) {
      auto ex = unary();
      double v = 0.0;
      if (!constant_value(*ex, v)) fail("exponent must be a constant");
      auto n = make(Kind::pow, std::move(base));
      n->value = v;
      return n;
    }
    return base;
  }

  static bool constant_value(const Node& n, double& out) {
    double a = 0, b = 0;
    switch (n.kind) {
      case Kind::constant: out = n.value; return true;
      case Kind::neg:
        if (!constant_value(*n.a, a)) return false;
        out = -a;
        return true;
      case Kind::add: case Kind::sub: case Kind::mul: case Kind::div:
        if (!constant_value(*n.a, a) || !constant_value(*n.b, b)) return false;
        out = n.kind == Kind::add ? a + b : n.kind == Kind::sub ? a - b : n.kind == Kind::mul ? a * b : a / b;
        return true;
      case Kind::pow:
        if (!constant_value(*n.a, a)) return false;
        out = std::pow(a, n.value);
        return true;
      default: return false;
    }
  }

  std::unique_ptr<Node> primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = make(Kind::constant);
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word == "pi") {
        auto n = make(Kind::constant);
        n->value = std::numbers::pi;
        return n;
      }
      if (word.size() >= 2 && word[0] == 'x' &&
          word.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int idx = std::stoi(word.substr(1));
        if (idx < 1 || idx > nvars_) fail("variable " + word + " out of range (n = " + std::to_string(nvars_) + ")");
        auto n = make(Kind::variable);
        n->var = idx - 1;
        return n;
      }
      Kind k;
      if (word == "sin") k = Kind::sin;
      else if (word == "cos") k = Kind::cos;
      else if (word == "exp") k = Kind::exp;
      else if (word == "sqrt") k = Kind::sqrt;
      else if (word == "log") k = Kind::log;
      else if (word == "atan") k = Kind::atan;
      else fail("unknown identifier '" + word + "'");
      if (!accept('(')) fail("expected '(' after " + word);
      auto arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(k, std::move(arg));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  int nvars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, int nvars) {
  if (nvars < 1) throw std::invalid_argument("expression needs at least one variable");
  Expression e;
  e.source_ = text;
  e.nvars_ = nvars;
  e.root_ = Parser(text, nvars).parse();
  return e;
}

std::unique_ptr<Expression::Node> Expression::clone(const Node* n) {
  if (!n) return nullptr;
  auto c = std::make_unique<Node>();
  c->kind = n->kind;
  c->value = n->value;
  c->var = n->var;
  c->a = clone(n->a.get());
  c->b = clone(n->b.get());
  return c;
}

}  // namespace lagrome

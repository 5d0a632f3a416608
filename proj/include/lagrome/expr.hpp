#pragma once

// Scalar expressions over variables x1..xn, used for graph potentials and
// flow initial data.  Grammar (docs/potential_grammar.md):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = ("+" | "-") unary | power ;
//   power   = primary [ "^" unary ] ;          (exponent must be constant)
//   primary = number | "pi" | var | func "(" expr ")" | "(" expr ")" ;
//   var     = "x" digit { digit } ;             (x1 .. xn)
//   func    = "sin" | "cos" | "exp" | "sqrt" | "log" | "atan" ;

#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

#include "lagrome/jet.hpp"

namespace lagrome {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expression {
 public:
  enum class Kind { constant, variable, add, sub, mul, div, neg, pow, sin, cos, exp, sqrt, log, atan };

  struct Node {
    Kind kind = Kind::constant;
    double value = 0.0;  // constant value, or the exponent for pow
    int var = 0;         // zero-based variable index
    std::unique_ptr<Node> a, b;
  };

  Expression() = default;
  Expression(const Expression& o) : source_(o.source_), nvars_(o.nvars_), root_(clone(o.root_.get())) {}
  Expression(Expression&&) noexcept = default;
  Expression& operator=(const Expression& o) {
    if (this != &o) {
      source_ = o.source_;
      nvars_ = o.nvars_;
      root_ = clone(o.root_.get());
    }
    return *this;
  }
  Expression& operator=(Expression&&) noexcept = default;

  /// Parses `text`; variables beyond x<nvars> are rejected.
  static Expression parse(const std::string& text, int nvars);

  const std::string& source() const { return source_; }
  int num_vars() const { return nvars_; }
  bool empty() const { return !root_; }

  template <class S>
  S eval(std::span<const S> vars) const {
    if (static_cast<int>(vars.size()) < nvars_) throw std::invalid_argument("too few expression variables");
    return eval_node<S>(*root_, vars);
  }

 private:
  static std::unique_ptr<Node> clone(const Node* n);

  template <class S>
  static S constant_like(const S& proto, double v) {
    if constexpr (std::is_same_v<S, double>) {
      return v;
    } else {
      return S(proto.dim(), proto.order(), v);
    }
  }

  template <class S>
  static S eval_node(const Node& n, std::span<const S> vars) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    using std::atan;
    switch (n.kind) {
      case Kind::constant: return constant_like(vars[0], n.value);
      case Kind::variable: return vars[n.var];
      case Kind::add: return eval_node(*n.a, vars) + eval_node(*n.b, vars);
      case Kind::sub: return eval_node(*n.a, vars) - eval_node(*n.b, vars);
      case Kind::mul: return eval_node(*n.a, vars) * eval_node(*n.b, vars);
      case Kind::div: return eval_node(*n.a, vars) / eval_node(*n.b, vars);
      case Kind::neg: return -eval_node(*n.a, vars);
      case Kind::pow: {
        const S base = eval_node(*n.a, vars);
        const double p = n.value;
        if (p == std::round(p) && std::abs(p) <= 64) {
          if constexpr (std::is_same_v<S, double>) {
            return std::pow(base, p);
          } else {
            return pow(base, static_cast<int>(p));
          }
        }
        if constexpr (std::is_same_v<S, double>) {
          return std::pow(base, p);
        } else {
          return pow(base, p);
        }
      }
      case Kind::sin: return sin(eval_node(*n.a, vars));
      case Kind::cos: return cos(eval_node(*n.a, vars));
      case Kind::exp: return exp(eval_node(*n.a, vars));
      case Kind::sqrt: return sqrt(eval_node(*n.a, vars));
      case Kind::log: return log(eval_node(*n.a, vars));
      case Kind::atan: return atan(eval_node(*n.a, vars));
    }
    throw std::logic_error("bad expression node");
  }

  std::string source_;
  int nvars_ = 0;
  std::unique_ptr<Node> root_;
};

}  // namespace lagrome

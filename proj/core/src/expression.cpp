#include "nvk/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace nvk {

struct Expression::Node {
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Exp } kind = Kind::Number;
  double value = 0.0;
  std::size_t index = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(std::span<const double> t) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Variable: return t[index];
      case Kind::Neg: return -lhs->eval(t);
      case Kind::Add: return lhs->eval(t) + rhs->eval(t);
      case Kind::Sub: return lhs->eval(t) - rhs->eval(t);
      case Kind::Mul: return lhs->eval(t) * rhs->eval(t);
      case Kind::Div: return lhs->eval(t) / rhs->eval(t);
      case Kind::Pow: return std::pow(lhs->eval(t), rhs->eval(t));
      case Kind::Exp: return std::exp(lhs->eval(t));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse_all() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

  std::size_t arity = 0;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression: " + what + " at offset " + std::to_string(pos_), pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+')) n = make(Kind::Add, n, term());
      else if (eat('-')) n = make(Kind::Sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Kind::Mul, n, unary());
      else if (eat('/')) n = make(Kind::Div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Kind::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view word = s_.substr(start, pos_ - start);
      if (word == "pi") {
        auto n = std::make_shared<Expression::Node>();
        n->value = std::numbers::pi;
        return n;
      }
      if (word == "exp") {
        if (!eat('(')) fail("expected '(' after exp");
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(Kind::Exp, arg);
      }
      if (word.size() >= 2 && word[0] == 't') {
        std::size_t k = 0;
        const auto res = std::from_chars(word.data() + 1, word.data() + word.size(), k);
        if (res.ec == std::errc() && res.ptr == word.data() + word.size() && k >= 1) {
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Variable;
          n->index = k - 1;
          arity = std::max(arity, k);
          return n;
        }
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(word) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    double v = 0.0;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser p(text);
  Expression e;
  e.root_ = p.parse_all();
  e.arity_ = p.arity;
  e.text_ = std::string(text);
  return e;
}

double Expression::operator()(std::span<const double> t) const {
  if (t.size() < arity_) throw std::invalid_argument("expression: too few variables");
  return root_->eval(t);
}

}  // namespace nvk

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nvk {

/// Parse failure; `offset` is the 0-based character position in the source.
class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Real arithmetic expression over t1..tn:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | 'pi' | 't' digits | 'exp' '(' expr ')' | '(' expr ')'
/// '^' is right-associative.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text);

  double operator()(std::span<const double> t) const;
  /// Largest k such that tk occurs (0 for constants).
  std::size_t arity() const { return arity_; }
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::size_t arity_ = 0;
  std::string text_;
};

}  // namespace nvk

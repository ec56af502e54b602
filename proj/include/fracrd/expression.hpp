#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fracrd {

/// Parse failure with a 1-based column into the expression text.
class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(const std::string& what, std::size_t column)
      : std::runtime_error(what), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Closed-form initial data over x and y.
///
/// Grammar: numbers, the variables x and y, the constant pi, binary
/// + - * / ^ (right associative), unary minus, parentheses and the functions
/// sin, cos, exp, abs and max(a, b). The Unicode minus sign is accepted.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double evaluate(double x, double y = 0.0) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace fracrd

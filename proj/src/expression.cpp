#include "fracrd/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fracrd {

struct Expression::Node {
  enum class Kind { Number, X, Y, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Max };
  Kind kind = Kind::Number;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double x, double y) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::X: return x;
      case Kind::Y: return y;
      case Kind::Neg: return -args[0]->eval(x, y);
      case Kind::Add: return args[0]->eval(x, y) + args[1]->eval(x, y);
      case Kind::Sub: return args[0]->eval(x, y) - args[1]->eval(x, y);
      case Kind::Mul: return args[0]->eval(x, y) * args[1]->eval(x, y);
      case Kind::Div: return args[0]->eval(x, y) / args[1]->eval(x, y);
      case Kind::Pow: return std::pow(args[0]->eval(x, y), args[1]->eval(x, y));
      case Kind::Sin: return std::sin(args[0]->eval(x, y));
      case Kind::Cos: return std::cos(args[0]->eval(x, y));
      case Kind::Exp: return std::exp(args[0]->eval(x, y));
      case Kind::Abs: return std::abs(args[0]->eval(x, y));
      case Kind::Max: return std::max(args[0]->eval(x, y), args[1]->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string text) : text_(std::move(text)) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression column " + std::to_string(pos_ + 1) + ": " + what, pos_ + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+'))
        lhs = make(Kind::Add, {lhs, term()});
      else if (accept('-'))
        lhs = make(Kind::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*'))
        lhs = make(Kind::Mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make(Kind::Div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, {unary()});
    if (accept('+')) return unary();
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make(Kind::Number, {}, v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Kind::X);
    if (name == "y") return make(Kind::Y);
    if (name == "pi") return make(Kind::Number, {}, std::numbers::pi);

    Kind kind;
    std::size_t arity = 1;
    if (name == "sin")
      kind = Kind::Sin;
    else if (name == "cos")
      kind = Kind::Cos;
    else if (name == "exp")
      kind = Kind::Exp;
    else if (name == "abs")
      kind = Kind::Abs;
    else if (name == "max") {
      kind = Kind::Max;
      arity = 2;
    } else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    expect('(');
    std::vector<NodePtr> args{expression()};
    for (std::size_t i = 1; i < arity; ++i) {
      expect(',');
      args.push_back(expression());
    }
    expect(')');
    return make(kind, std::move(args));
  }
};

// U+2212 MINUS SIGN is common in copied formulas.
std::string normalise_minus(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 &&
        static_cast<unsigned char>(text[i + 2]) == 0x92) {
      out.push_back('-');
      i += 2;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(normalise_minus(text)).parse();
  return e;
}

double Expression::evaluate(double x, double y) const { return root_->eval(x, y); }

}  // namespace fracrd

#ifndef RAMANPASS_DSL_HPP
#define RAMANPASS_DSL_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ramanpass/errors.hpp"

// A small arithmetic expression language over the variables t and nu, used
// to declare analytic Stokes envelopes and eta factors in protocol files.
// Grammar (EBNF) in docs/dsl.md. No implicit multiplication; angles are
// radians; all evaluation is double precision.
namespace raman::dsl {

enum class TokenKind { Number, Identifier, Operator, Paren, Comma };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;  // character offset into the source
};

// Splits source into tokens. Whitespace separates; any unrecognized
// character raises ParseError with its offset.
std::vector<Token> tokenize(std::string_view source);

enum class Func {
  Sin,
  Cos,
  Tan,
  Sec,
  Sech,
  Tanh,
  Sinh,
  Cosh,
  Exp,
  Ln,
  Sqrt,
  Abs,
};

const char* func_name(Func f);

enum class NodeKind {
  Constant,
  VarT,
  VarNu,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Call,
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  NodeKind kind;
  double value = 0.0;  // Constant only
  Func func{};         // Call only
  ExprPtr lhs;         // left child; sole child for Neg and Call
  ExprPtr rhs;         // right child of binary nodes
};

// Recursive-descent parse with the precedence ladder
//   ^  >  unary -  >  * /  >  + -
// where ^ is right-associative and the rest left-associative. The only
// variables are t and nu; the only calls are the Func set, one argument each.
ExprPtr parse(const std::vector<Token>& tokens);
ExprPtr parse(std::string_view source);

// Evaluates in double precision. Throws EvalDomainError for ln of a
// non-positive value, sqrt of a negative, division by zero, fractional
// powers of negatives, and any non-finite intermediate result.
double eval(const Expr& e, double t, double nu);

// Minimal-parentheses rendering; reparsing the result reproduces the tree.
std::string to_string(const Expr& e);

bool equal(const Expr& a, const Expr& b);
ExprPtr clone(const Expr& e);

}  // namespace raman::dsl

#endif  // RAMANPASS_DSL_HPP

#include "ramanpass/dsl.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace raman::dsl {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = source.size();
  while (i < n) {
    const char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(source[i + 1]))) {
      while (i < n && is_digit(source[i])) ++i;
      if (i < n && source[i] == '.') {
        ++i;
        while (i < n && is_digit(source[i])) ++i;
      }
      if (i < n && (source[i] == 'e' || source[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (source[j] == '+' || source[j] == '-')) ++j;
        if (j < n && is_digit(source[j])) {
          i = j;
          while (i < n && is_digit(source[i])) ++i;
        }
      }
      tokens.push_back({TokenKind::Number,
                        std::string(source.substr(start, i - start)), start});
      continue;
    }
    if (is_ident_start(c)) {
      while (i < n && is_ident_char(source[i])) ++i;
      tokens.push_back({TokenKind::Identifier,
                        std::string(source.substr(start, i - start)), start});
      continue;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      tokens.push_back({TokenKind::Operator, std::string(1, c), start});
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      tokens.push_back({TokenKind::Paren, std::string(1, c), start});
      ++i;
      continue;
    }
    if (c == ',') {
      tokens.push_back({TokenKind::Comma, ",", start});
      ++i;
      continue;
    }
    throw ParseError(std::string("unrecognized character '") + c + "'", start);
  }
  return tokens;
}

namespace {

constexpr std::array<std::pair<const char*, Func>, 12> kFuncs = {{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"sec", Func::Sec},
    {"sech", Func::Sech},
    {"tanh", Func::Tanh},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"exp", Func::Exp},
    {"ln", Func::Ln},
    {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
}};

bool lookup_func(const std::string& name, Func& out) {
  for (const auto& [fname, f] : kFuncs) {
    if (name == fname) {
      out = f;
      return true;
    }
  }
  return false;
}

ExprPtr make_node(NodeKind kind, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  ExprPtr run() {
    if (tokens_.empty()) throw ParseError("empty expression", 0);
    ExprPtr e = sum();
    if (pos_ < tokens_.size())
      throw ParseError("unexpected token '" + tokens_[pos_].lexeme + "'",
                       tokens_[pos_].position);
    return e;
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;

  const Token* peek() const {
    return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr;
  }

  bool accept_op(char op) {
    const Token* t = peek();
    if (t && t->kind == TokenKind::Operator && t->lexeme[0] == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_paren(char p) {
    const Token* t = peek();
    if (t && t->kind == TokenKind::Paren && t->lexeme[0] == p) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::size_t end_offset() const {
    if (tokens_.empty()) return 0;
    const Token& last = tokens_.back();
    return last.position + last.lexeme.size();
  }

  [[noreturn]] void fail_here(const std::string& msg) const {
    if (const Token* t = peek()) throw ParseError(msg, t->position);
    throw ParseError(msg + " at end of input", end_offset());
  }

  ExprPtr sum() {
    ExprPtr lhs = product();
    for (;;) {
      if (accept_op('+'))
        lhs = make_node(NodeKind::Add, std::move(lhs), product());
      else if (accept_op('-'))
        lhs = make_node(NodeKind::Sub, std::move(lhs), product());
      else
        return lhs;
    }
  }

  ExprPtr product() {
    ExprPtr lhs = unary();
    for (;;) {
      if (accept_op('*'))
        lhs = make_node(NodeKind::Mul, std::move(lhs), unary());
      else if (accept_op('/'))
        lhs = make_node(NodeKind::Div, std::move(lhs), unary());
      else
        return lhs;
    }
  }

  // unary minus binds looser than ^, so -x^2 is -(x^2) and 2^-3 parses.
  ExprPtr unary() {
    if (accept_op('-')) return make_node(NodeKind::Neg, unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (accept_op('^'))
      return make_node(NodeKind::Pow, std::move(base), unary());
    return base;
  }

  ExprPtr primary() {
    const Token* t = peek();
    if (!t) fail_here("expected operand");
    if (t->kind == TokenKind::Number) {
      ++pos_;
      auto e = make_node(NodeKind::Constant);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(t->lexeme.data(),
                                       t->lexeme.data() + t->lexeme.size(), v);
      if (ec != std::errc() || ptr != t->lexeme.data() + t->lexeme.size() ||
          !std::isfinite(v))
        throw ParseError("malformed number literal '" + t->lexeme + "'",
                         t->position);
      e->value = v;
      return e;
    }
    if (t->kind == TokenKind::Identifier) {
      ++pos_;
      if (t->lexeme == "t") return make_node(NodeKind::VarT);
      if (t->lexeme == "nu") return make_node(NodeKind::VarNu);
      Func f;
      if (lookup_func(t->lexeme, f)) {
        if (!accept_paren('('))
          fail_here("expected '(' after function '" + t->lexeme + "'");
        ExprPtr arg = sum();
        if (const Token* c = peek(); c && c->kind == TokenKind::Comma)
          throw ParseError("function '" + std::string(t->lexeme) +
                               "' takes exactly one argument",
                           c->position);
        if (!accept_paren(')')) fail_here("expected ')'");
        auto e = make_node(NodeKind::Call, std::move(arg));
        e->func = f;
        return e;
      }
      throw ParseError("unknown identifier '" + t->lexeme + "'", t->position);
    }
    if (t->kind == TokenKind::Paren && t->lexeme[0] == '(') {
      ++pos_;
      ExprPtr e = sum();
      if (!accept_paren(')')) fail_here("expected ')'");
      return e;
    }
    fail_here("unexpected token '" + t->lexeme + "'");
  }
};

}  // namespace

ExprPtr parse(const std::vector<Token>& tokens) {
  return Parser(tokens).run();
}

ExprPtr parse(std::string_view source) { return parse(tokenize(source)); }

const char* func_name(Func f) {
  for (const auto& [name, fn] : kFuncs)
    if (fn == f) return name;
  return "?";
}

namespace {

double eval_call(Func f, double x) {
  switch (f) {
    case Func::Sin:
      return std::sin(x);
    case Func::Cos:
      return std::cos(x);
    case Func::Tan:
      return std::tan(x);
    case Func::Sec: {
      const double c = std::cos(x);
      if (c == 0.0) throw EvalDomainError("sec at a zero of cos");
      return 1.0 / c;
    }
    case Func::Sech:
      return 1.0 / std::cosh(x);
    case Func::Tanh:
      return std::tanh(x);
    case Func::Sinh:
      return std::sinh(x);
    case Func::Cosh:
      return std::cosh(x);
    case Func::Exp:
      return std::exp(x);
    case Func::Ln:
      if (x <= 0.0) throw EvalDomainError("ln of a non-positive value");
      return std::log(x);
    case Func::Sqrt:
      if (x < 0.0) throw EvalDomainError("sqrt of a negative value");
      return std::sqrt(x);
    case Func::Abs:
      return std::fabs(x);
  }
  throw EvalDomainError("unknown function");
}

}  // namespace

double eval(const Expr& e, double t, double nu) {
  double r;
  switch (e.kind) {
    case NodeKind::Constant:
      return e.value;
    case NodeKind::VarT:
      return t;
    case NodeKind::VarNu:
      return nu;
    case NodeKind::Neg:
      return -eval(*e.lhs, t, nu);
    case NodeKind::Add:
      r = eval(*e.lhs, t, nu) + eval(*e.rhs, t, nu);
      break;
    case NodeKind::Sub:
      r = eval(*e.lhs, t, nu) - eval(*e.rhs, t, nu);
      break;
    case NodeKind::Mul:
      r = eval(*e.lhs, t, nu) * eval(*e.rhs, t, nu);
      break;
    case NodeKind::Div: {
      const double num = eval(*e.lhs, t, nu);
      const double den = eval(*e.rhs, t, nu);
      if (den == 0.0) throw EvalDomainError("division by zero");
      r = num / den;
      break;
    }
    case NodeKind::Pow: {
      const double b = eval(*e.lhs, t, nu);
      const double p = eval(*e.rhs, t, nu);
      r = std::pow(b, p);
      if (std::isnan(r))
        throw EvalDomainError("fractional power of a negative value");
      break;
    }
    case NodeKind::Call:
      r = eval_call(e.func, eval(*e.lhs, t, nu));
      break;
    default:
      throw EvalDomainError("malformed expression node");
  }
  if (!std::isfinite(r)) throw EvalDomainError("non-finite value");
  return r;
}

namespace {

// Precedence levels used by the printer; higher binds tighter.
int prec_of(NodeKind k) {
  switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub:
      return 1;
    case NodeKind::Mul:
    case NodeKind::Div:
      return 2;
    case NodeKind::Neg:
      return 3;
    case NodeKind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// min_prec: parenthesize unless this node binds at least that tightly.
// Right operands of -, /, + and * use prec+1 so that the printed string
// reparses to the identical tree, not merely an equivalent one.
void render(const Expr& e, int min_prec, std::string& out) {
  const int p = prec_of(e.kind);
  const bool parens = p < min_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case NodeKind::Constant:
      out += format_double(e.value);
      break;
    case NodeKind::VarT:
      out += 't';
      break;
    case NodeKind::VarNu:
      out += "nu";
      break;
    case NodeKind::Neg:
      out += '-';
      render(*e.lhs, p, out);
      break;
    case NodeKind::Add:
    case NodeKind::Sub:
      render(*e.lhs, p, out);
      out += (e.kind == NodeKind::Add) ? '+' : '-';
      render(*e.rhs, p + 1, out);
      break;
    case NodeKind::Mul:
    case NodeKind::Div:
      render(*e.lhs, p, out);
      out += (e.kind == NodeKind::Mul) ? '*' : '/';
      render(*e.rhs, p + 1, out);
      break;
    case NodeKind::Pow:
      render(*e.lhs, p + 1, out);
      out += '^';
      render(*e.rhs, p, out);
      break;
    case NodeKind::Call:
      out += func_name(e.func);
      out += '(';
      render(*e.lhs, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  render(e, 0, out);
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      return a.value == b.value;
    case NodeKind::VarT:
    case NodeKind::VarNu:
      return true;
    case NodeKind::Neg:
      return equal(*a.lhs, *b.lhs);
    case NodeKind::Call:
      return a.func == b.func && equal(*a.lhs, *b.lhs);
    default:
      return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

ExprPtr clone(const Expr& e) {
  auto out = std::make_unique<Expr>();
  out->kind = e.kind;
  out->value = e.value;
  out->func = e.func;
  if (e.lhs) out->lhs = clone(*e.lhs);
  if (e.rhs) out->rhs = clone(*e.rhs);
  return out;
}

}  // namespace raman::dsl

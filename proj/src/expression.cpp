#include "hflag/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace hflag {

struct Expression::Node {
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Call } kind;
  Complex number{};
  int variable = 0;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
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
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expr() {
    NodePtr l = term();
    for (;;) {
      if (accept('+')) l = make(Kind::Add, {l, term()});
      else if (accept('-')) l = make(Kind::Sub, {l, term()});
      else return l;
    }
  }
  NodePtr term() {
    NodePtr l = unary();
    for (;;) {
      if (accept('*')) l = make(Kind::Mul, {l, unary()});
      else if (accept('/')) l = make(Kind::Div, {l, unary()});
      else return l;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, {base, unary()});
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }
  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ += used;
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
  }
  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    auto n = std::make_shared<Expression::Node>();
    if (id == "abs" || id == "sqrt" || id == "exp" || id == "log" || id == "sin" || id == "cos") {
      expect('(');
      n->kind = Kind::Call;
      n->function = id;
      n->args = {expr()};
      expect(')');
      return n;
    }
    if (id == "lambda") {
      n->kind = Kind::Variable;
      n->variable = 2 * n_;
      return n;
    }
    if (id == "i" || id == "pi") {
      n->kind = Kind::Number;
      n->number = id == "i" ? Complex(0.0, 1.0) : Complex(std::numbers::pi);
      return n;
    }
    if (id.size() >= 2 && id[0] == 'w') {
      const std::string digits = id.substr(1);
      bool ok = !digits.empty() && digits[0] != '0';
      for (char d : digits) ok = ok && std::isdigit(static_cast<unsigned char>(d));
      if (ok) {
        const int k = std::stoi(digits);
        if (k >= 1 && k <= 2 * n_) {
          n->kind = Kind::Variable;
          n->variable = k - 1;
          return n;
        }
      }
    }
    throw ParseError("unknown name '" + id + "'", start);
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

Complex integer_power(Complex b, long e) {
  Complex r = 1.0;
  const bool invert = e < 0;
  unsigned long u = static_cast<unsigned long>(invert ? -e : e);
  for (; u > 0; u >>= 1) {
    if (u & 1ul) r *= b;
    b *= b;
  }
  return invert ? 1.0 / r : r;
}

bool integral(Complex c) {
  return c.imag() == 0.0 && c.real() == std::floor(c.real()) && std::abs(c.real()) <= 64.0;
}

Complex call(const std::string& f, Complex x) {
  if (f == "abs") return std::abs(x);
  if (f == "sqrt") return std::sqrt(x);
  if (f == "exp") return std::exp(x);
  if (f == "log") return std::log(x);
  if (f == "sin") return std::sin(x);
  return std::cos(x);
}

Jet call(const std::string& f, const Jet& x) {
  if (f == "abs") return abs(x);
  if (f == "sqrt") return sqrt(x);
  if (f == "exp") return exp(x);
  if (f == "log") return log(x);
  if (f == "sin") return sin(x);
  return cos(x);
}

Complex constant(const Complex&, Complex c) { return c; }
Jet constant(const Jet& like, Complex c) { return like.constant_like(c); }

Complex raise(const Complex& b, const Complex& e, const Expression::Node& exponent) {
  if (exponent.kind == Kind::Number && integral(exponent.number))
    return integer_power(b, static_cast<long>(exponent.number.real()));
  return std::pow(b, e);
}

Jet raise(const Jet& b, const Jet& e, const Expression::Node& exponent) {
  if (exponent.kind == Kind::Number && exponent.number.imag() == 0.0) {
    const double p = exponent.number.real();
    if (p < 0.0 && p == std::floor(p)) return 1.0 / pow(b, -p);
    return pow(b, p);
  }
  return pow(b, e);
}

template <class T>
T eval(const Expression::Node& n, std::span<const T> args) {
  switch (n.kind) {
    case Kind::Number:
      return constant(args[0], n.number);
    case Kind::Variable:
      return args[n.variable];
    case Kind::Add:
      return eval(*n.args[0], args) + eval(*n.args[1], args);
    case Kind::Sub:
      return eval(*n.args[0], args) - eval(*n.args[1], args);
    case Kind::Mul:
      return eval(*n.args[0], args) * eval(*n.args[1], args);
    case Kind::Div:
      return eval(*n.args[0], args) / eval(*n.args[1], args);
    case Kind::Pow:
      return raise(eval(*n.args[0], args), eval(*n.args[1], args), *n.args[1]);
    case Kind::Neg:
      return -eval(*n.args[0], args);
    case Kind::Call:
      return call(n.function, eval(*n.args[0], args));
  }
  return constant(args[0], 0.0);
}

}  // namespace

Expression Expression::parse(const std::string& text, int n) {
  if (n < 1) throw DomainError("expression dimension n must be positive");
  Expression e;
  e.text_ = text;
  e.vars_ = 2 * n + 1;
  e.root_ = Parser(text, n).parse();
  return e;
}

Complex Expression::evaluate(std::span<const Complex> args) const {
  if (static_cast<int>(args.size()) != vars_) throw DimensionError("expression argument count");
  return eval<Complex>(*root_, args);
}

Jet Expression::evaluate(std::span<const Jet> args) const {
  if (static_cast<int>(args.size()) != vars_) throw DimensionError("expression argument count");
  return eval<Jet>(*root_, args);
}

}  // namespace hflag

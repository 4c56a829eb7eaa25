#pragma once

#include <memory>
#include <span>
#include <string>

#include "hflag/error.hpp"
#include "hflag/jet.hpp"

namespace hflag {

struct ParseError : ConfigError {
  ParseError(const std::string& what, std::size_t pos)
      : ConfigError(what + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Arithmetic expression in w1..w{2n} and lambda. Grammar (EBNF):
//
//   expr    = term , { ( "+" | "-" ) , term } ;
//   term    = unary , { ( "*" | "/" ) , unary } ;
//   unary   = ( "+" | "-" ) , unary | power ;
//   power   = primary , [ "^" , unary ] ;
//   primary = number | name | func , "(" , expr , ")" | "(" , expr , ")" ;
//   name    = "w1" | ... | "w{2n}" | "lambda" | "i" | "pi" ;
//   func    = "abs" | "sqrt" | "exp" | "log" | "sin" | "cos" ;
//
// "^" is right associative and binds tighter than unary minus on its left
// operand, so -w1^2 means -(w1^2).
class Expression {
 public:
  static Expression parse(const std::string& text, int n = 1);

  const std::string& text() const { return text_; }
  int variable_count() const { return vars_; }

  // Arguments are (w1, ..., w{2n}, lambda).
  Complex evaluate(std::span<const Complex> args) const;
  Jet evaluate(std::span<const Jet> args) const;

  struct Node;

 private:
  std::string text_;
  int vars_ = 0;
  std::shared_ptr<const Node> root_;
};

}  // namespace hflag

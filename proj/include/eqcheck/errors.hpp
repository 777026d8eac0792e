#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "eqcheck/syntax/ast.hpp"

namespace eqcheck {

class Error : public std::runtime_error {
 public:
  Error(std::string message, Span span) : std::runtime_error(std::move(message)), span_(span) {}
  const Span& span() const { return span_; }

 private:
  Span span_;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, Span span, std::vector<std::string> expected = {})
      : Error(std::move(message), span), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

// Measure annotation on a function that is not a one-argument,
// one-clause-per-constructor function over primitives and measures.
class MeasureShapeError : public TypeError {
 public:
  using TypeError::TypeError;
};

// Ill-formed refinement (unbound name, unlifted function).
class WfError : public Error {
 public:
  using Error::Error;
};

}  // namespace eqcheck

#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "eqcheck/errors.hpp"
#include "eqcheck/types/env.hpp"

namespace eqcheck {

class NonTermination : public Error {
 public:
  using Error::Error;
};

/// One recursive call checked against a metric: under `facts`, the goal
/// states nonnegativity and lexicographic decrease.
struct DecreaseCheck {
  std::size_t clause = 0;
  std::size_t row = 0;  // residual row within the clause
  std::size_t call = 0; // recursive call index within the row
  Span span;
  std::vector<Pred> facts;
  Pred goal;
  VarSorts vars;
};

struct TerminationEvidence {
  enum class Kind { NonRecursive, Structural, Semantic };
  Kind kind = Kind::NonRecursive;
  std::vector<std::size_t> positions;  // Structural: lexicographic argument order
  std::vector<Term> metric;            // Semantic: over the signature binders
  bool guessed = false;                // Semantic metric chosen by the checker
  std::vector<DecreaseCheck> checks;   // Semantic: every discharged call
};

/// Decides `facts |- goal` over the constants in `vars`.
using EntailFn = std::function<bool(const std::vector<Pred>& facts, const Pred& goal, const VarSorts& vars)>;

/// Every application of `f` in the clause bodies, hints included.
std::vector<const Term*> recursive_calls(const Clause& c, const std::string& f);

/// Functions in a call-graph cycle through another function.
std::set<std::string> mutually_recursive(const TypeEnv& env);

/// A declared metric is checked as given. Otherwise structural descent is
/// tried first, then a metric on the first Int argument or the first
/// argument with a measure. Throws NonTermination at the offending call.
TerminationEvidence check_termination(const FunctionInfo& f, const TypeEnv& env, const EntailFn& entails);

}  // namespace eqcheck

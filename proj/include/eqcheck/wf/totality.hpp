#pragma once

#include <vector>

#include "eqcheck/types/env.hpp"

namespace eqcheck {

/// One pattern per argument.
using PatternRow = std::vector<Pattern>;

struct TotalityResult {
  bool total = true;
  // Uncovered argument vectors. Exact for data and Bool arguments; an Int or
  // polymorphic argument that only literals constrain is reported as `_`.
  std::vector<PatternRow> missing;
};

TotalityResult check_totality(const FunctionInfo& f, const TypeEnv& env);

/// Argument vectors that reach clause `index`: its patterns minus those of
/// every earlier clause, as a list of disjoint refined rows. A variable that
/// had to be split keeps its name as the alias of the refined sub-pattern;
/// fresh variables contain '#'. Literal clashes on infinite sorts are not
/// split, so a row may still admit some inputs of earlier clauses.
std::vector<PatternRow> residual_rows(const FunctionInfo& f, std::size_t index, const TypeEnv& env);

/// Sorts of the fields of `con` inside a value of sort `s`.
std::vector<Sort> field_sorts(const TypeEnv& env, const ConstructorInfo& con, const Sort& s);

}  // namespace eqcheck

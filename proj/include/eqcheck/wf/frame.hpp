#pragma once

#include <vector>

#include "eqcheck/syntax/subst.hpp"
#include "eqcheck/types/env.hpp"
#include "eqcheck/wf/totality.hpp"

namespace eqcheck {

/// Ground view of one clause (or residual row): every argument, pattern
/// variable and wildcard becomes an opaque constant.
struct ClauseFrame {
  std::vector<Term> args;        // constant standing for each argument
  Subst binders;                 // signature binder -> argument term
  std::vector<Pred> equalities;  // argument (or alias) == pattern term
  VarSorts vars;                 // sort of every constant
};

/// An argument whose pattern is a plain variable is that variable. Other
/// arguments are named after their binder, suffixed with '#' when a pattern
/// variable already uses the name. Wildcards become `_#N`.
ClauseFrame clause_frame(const TypeEnv& env, const FunctionInfo& f, const PatternRow& row);

/// The pattern read as a term; wildcards get fresh names from `counter`.
Term pattern_term(const Pattern& p, int& counter);

}  // namespace eqcheck

#pragma once

#include "eqcheck/syntax/ast.hpp"

namespace eqcheck {

/// Rewrites list sugar (`[]`, `[e1,...,ek]`, `e : e'`) into the prelude's
/// `Nil`/`Cons` constructors and turns references to nullary functions into
/// applications. Idempotent.
SourceModule desugar(SourceModule m);

Term desugar_term(Term t);
Pred desugar_pred(Pred p);

/// True when no sugar node remains anywhere in `t`.
bool is_desugared(const Term& t);

}  // namespace eqcheck

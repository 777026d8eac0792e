#pragma once

#include <string>

#include "eqcheck/syntax/ast.hpp"

namespace eqcheck {

// Renderings re-parse to structurally equal ASTs (after desugaring).
std::string pretty(const Term& t);
std::string pretty(const Pred& p);
std::string pretty(const Pattern& p);
std::string pretty(const BaseType& b);
std::string pretty(const RefType& t);
std::string pretty_module(const SourceModule& m);

}  // namespace eqcheck

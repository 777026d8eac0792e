#pragma once

#include <map>
#include <set>
#include <string>

#include "eqcheck/syntax/ast.hpp"

namespace eqcheck {

using Subst = std::map<std::string, Term>;

// Simultaneous substitution of variables; terms are first-order so there is
// no capture to avoid.
Term subst(const Term& t, const Subst& s);
Pred subst(const Pred& p, const Subst& s);

void free_vars(const Term& t, std::set<std::string>& out);
void free_vars(const Pred& p, std::set<std::string>& out);
void pattern_vars(const Pattern& p, std::set<std::string>& out);

// Every App node in `t`, outermost first.
void collect_apps(const Term& t, std::vector<const Term*>& out);

}  // namespace eqcheck

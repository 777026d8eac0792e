#include "eqcheck/wf/frame.hpp"

#include <set>

namespace eqcheck {

namespace {

void alias_equalities(const Pattern& p, const Term& t, std::vector<Pred>& out) {
  if (!p.alias.empty()) out.push_back(Pred::atom(Rel::Eq, Term::var(p.alias, p.span), t, p.span));
  if (p.kind == PatternKind::Con) {
    for (std::size_t i = 0; i < p.args.size(); ++i) alias_equalities(p.args[i], t.args[i], out);
  }
}

}  // namespace

Term pattern_term(const Pattern& p, int& counter) {
  switch (p.kind) {
    case PatternKind::Var:
      return Term::var(p.name, p.span);
    case PatternKind::Wild:
      return Term::var("_#" + std::to_string(++counter), p.span);
    case PatternKind::Int:
      return Term::int_lit(p.value, p.span);
    case PatternKind::Bool:
      return Term::bool_lit(p.flag, p.span);
    case PatternKind::Con:
      break;
  }
  std::vector<Term> args;
  for (const auto& a : p.args) args.push_back(pattern_term(a, counter));
  return Term::con(p.name, std::move(args), p.span);
}

ClauseFrame clause_frame(const TypeEnv& env, const FunctionInfo& f, const PatternRow& row) {
  ClauseFrame fr;
  std::set<std::string> taken;
  for (const auto& p : row) pattern_vars(p, taken);

  int counter = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const auto& p = row[i];
    const auto& param = f.sig.params[i];
    bind_pattern(env, p, param.sort, fr.vars);
    Term pt = pattern_term(p, counter);
    Term arg;
    if (p.kind == PatternKind::Var && p.alias.empty()) {
      arg = pt;
    } else {
      std::string name = param.name;
      while (taken.count(name)) name += "#";
      taken.insert(name);
      arg = Term::var(name, p.span);
      fr.equalities.push_back(Pred::atom(Rel::Eq, arg, pt, p.span));
      alias_equalities(p, pt, fr.equalities);
    }
    fr.vars[arg.name] = param.sort;
    fr.binders[param.name] = arg;
    fr.args.push_back(std::move(arg));
  }

  // Wildcard constants take the sort of their position, numbered in the
  // same order as pattern_term.
  int wild = 0;
  auto walk = [&](auto& self, const Pattern& p, const Sort& s) -> void {
    if (p.kind == PatternKind::Wild) fr.vars["_#" + std::to_string(++wild)] = s;
    if (p.kind == PatternKind::Con) {
      auto fs = field_sorts(env, *env.constructor(p.name), s);
      for (std::size_t i = 0; i < p.args.size(); ++i) self(self, p.args[i], fs[i]);
    }
  };
  for (std::size_t i = 0; i < row.size(); ++i) walk(walk, row[i], f.sig.params[i].sort);
  return fr;
}

}  // namespace eqcheck

#include "eqcheck/syntax/subst.hpp"

namespace eqcheck {

Term subst(const Term& t, const Subst& s) {
  if (t.kind == TermKind::Var) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  if (t.args.empty()) return t;
  Term out = t;
  for (auto& a : out.args) a = subst(a, s);
  return out;
}

Pred subst(const Pred& p, const Subst& s) {
  Pred out = p;
  for (auto& t : out.terms) t = subst(t, s);
  for (auto& q : out.parts) q = subst(q, s);
  return out;
}

void free_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Var) out.insert(t.name);
  for (const auto& a : t.args) free_vars(a, out);
}

void free_vars(const Pred& p, std::set<std::string>& out) {
  for (const auto& t : p.terms) free_vars(t, out);
  for (const auto& q : p.parts) free_vars(q, out);
}

void pattern_vars(const Pattern& p, std::set<std::string>& out) {
  if (p.kind == PatternKind::Var) out.insert(p.name);
  if (!p.alias.empty()) out.insert(p.alias);
  for (const auto& a : p.args) pattern_vars(a, out);
}

void collect_apps(const Term& t, std::vector<const Term*>& out) {
  if (t.kind == TermKind::App) out.push_back(&t);
  for (const auto& a : t.args) collect_apps(a, out);
}

}  // namespace eqcheck

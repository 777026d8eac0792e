#include "eqcheck/wf/termination.hpp"

#include <map>
#include <optional>

#include "eqcheck/syntax/pretty.hpp"
#include "eqcheck/syntax/subst.hpp"
#include "eqcheck/wf/frame.hpp"
#include "eqcheck/wf/totality.hpp"

namespace eqcheck {

namespace {

std::vector<const Term*> body_terms(const Clause& c) {
  std::vector<const Term*> out;
  if (const auto* t = std::get_if<Term>(&c.body)) {
    out.push_back(t);
  } else {
    const auto& chain = std::get<ProofChain>(c.body);
    out.push_back(&chain.head);
    for (const auto& s : chain.steps) {
      out.push_back(&s.rhs);
      for (const auto& h : s.hints) out.push_back(&h);
    }
  }
  return out;
}

enum class Cmp { Smaller, Same, Unknown };

bool occurs_strictly(const Pattern& p, const std::string& x) {
  for (const auto& a : p.args) {
    if ((a.kind == PatternKind::Var && a.name == x) || occurs_strictly(a, x)) return true;
  }
  return false;
}

bool has_wild(const Pattern& p) {
  if (p.kind == PatternKind::Wild) return true;
  for (const auto& a : p.args) {
    if (has_wild(a)) return true;
  }
  return false;
}

Cmp compare(const Term& arg, const Pattern& p) {
  if (arg.kind == TermKind::Var) {
    if (p.kind == PatternKind::Var && p.name == arg.name) return Cmp::Same;
    if (occurs_strictly(p, arg.name)) return Cmp::Smaller;
  }
  if (!has_wild(p)) {
    int counter = 0;
    if (pattern_term(p, counter) == arg) return Cmp::Same;
  }
  return Cmp::Unknown;
}

// Greedy lexicographic search: any position on which every remaining call
// is smaller or unchanged can come next.
std::optional<std::vector<std::size_t>> structural_order(const std::vector<std::vector<Cmp>>& calls,
                                                         std::size_t arity) {
  std::vector<std::size_t> order;
  std::vector<bool> open(calls.size(), true), used(arity, false);
  std::size_t remaining = calls.size();
  while (remaining) {
    bool progress = false;
    for (std::size_t k = 0; k < arity && !progress; ++k) {
      if (used[k]) continue;
      bool ok = true, strict = false;
      for (std::size_t i = 0; i < calls.size(); ++i) {
        if (!open[i]) continue;
        if (calls[i][k] == Cmp::Unknown) ok = false;
        if (calls[i][k] == Cmp::Smaller) strict = true;
      }
      if (!ok || !strict) continue;
      used[k] = true;
      order.push_back(k);
      for (std::size_t i = 0; i < calls.size(); ++i) {
        if (open[i] && calls[i][k] == Cmp::Smaller) {
          open[i] = false;
          --remaining;
        }
      }
      progress = true;
    }
    if (!progress) return std::nullopt;
  }
  return order;
}

Pred lex_decrease(const std::vector<Term>& now, const std::vector<Term>& next) {
  std::vector<Pred> options;
  for (std::size_t i = 0; i < now.size(); ++i) {
    std::vector<Pred> parts;
    for (std::size_t j = 0; j < i; ++j) parts.push_back(Pred::atom(Rel::Eq, next[j], now[j]));
    parts.push_back(Pred::atom(Rel::Lt, next[i], now[i]));
    options.push_back(Pred::conj(std::move(parts)));
  }
  return Pred::disj(std::move(options));
}

struct Failure {
  Span span;
  std::string reason;
};

// Checks `metric` at every recursive call; returns the failing call if any.
std::optional<Failure> check_metric(const FunctionInfo& f, const TypeEnv& env, const EntailFn& entails,
                                    const std::vector<Term>& metric, std::vector<DecreaseCheck>& checks) {
  for (std::size_t ci = 0; ci < f.decl.clauses.size(); ++ci) {
    const auto& clause = f.decl.clauses[ci];
    auto calls = recursive_calls(clause, f.name());
    if (calls.empty()) continue;
    auto rows = residual_rows(f, ci, env);
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
      ClauseFrame fr = clause_frame(env, f, rows[ri]);
      std::vector<Term> now;
      for (const auto& e : metric) now.push_back(subst(e, fr.binders));
      for (std::size_t k = 0; k < calls.size(); ++k) {
        const Term& call = *calls[k];
        // Call arguments mention pattern variables, which are constants.
        Subst at_call;
        for (std::size_t i = 0; i < f.sig.params.size(); ++i) at_call[f.sig.params[i].name] = call.args[i];
        std::vector<Term> next;
        std::vector<Pred> goal;
        for (const auto& e : metric) {
          Term t = subst(e, at_call);
          goal.push_back(Pred::atom(Rel::Ge, t, Term::int_lit(0)));
          next.push_back(std::move(t));
        }
        goal.push_back(lex_decrease(now, next));
        DecreaseCheck dc{ci, ri, k, call.span, fr.equalities, Pred::conj(std::move(goal)), fr.vars};
        if (!entails(dc.facts, dc.goal, dc.vars)) {
          std::string m;
          for (std::size_t i = 0; i < metric.size(); ++i) m += (i ? ", " : "") + pretty(metric[i]);
          return Failure{call.span, "metric [" + m + "] does not decrease at '" + pretty(call) + "'"};
        }
        checks.push_back(std::move(dc));
      }
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Term>> guess_metric(const FunctionInfo& f, const TypeEnv& env) {
  for (const auto& p : f.sig.params) {
    if (p.sort.is_int()) return std::vector<Term>{Term::var(p.name)};
    if (p.sort.is_data()) {
      auto ms = env.measures_on(p.sort.name);
      for (const auto* m : ms) {
        if (m->sig.result.is_int()) return std::vector<Term>{Term::app(m->name(), {Term::var(p.name)})};
      }
    }
  }
  return std::nullopt;
}

void collect_calls(const Term& t, const std::string& f, std::vector<const Term*>& out) {
  std::vector<const Term*> apps;
  collect_apps(t, apps);
  for (const auto* a : apps) {
    if (a->name == f) out.push_back(a);
  }
}

}  // namespace

std::vector<const Term*> recursive_calls(const Clause& c, const std::string& f) {
  std::vector<const Term*> out;
  for (const auto* t : body_terms(c)) collect_calls(*t, f, out);
  return out;
}

std::set<std::string> mutually_recursive(const TypeEnv& env) {
  const auto& names = env.function_order();
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& n : names) {
    for (const auto& c : env.function(n)->decl.clauses) {
      for (const auto* t : body_terms(c)) {
        std::vector<const Term*> apps;
        collect_apps(*t, apps);
        for (const auto* a : apps) {
          if (env.function(a->name)) edges[n].insert(a->name);
        }
      }
    }
  }
  // f is mutually recursive when it reaches itself through some g != f.
  std::set<std::string> out;
  for (const auto& f : names) {
    std::set<std::string> seen;
    std::vector<std::string> work;
    for (const auto& g : edges[f]) {
      if (g != f) work.push_back(g);
    }
    while (!work.empty()) {
      auto g = work.back();
      work.pop_back();
      if (!seen.insert(g).second) continue;
      if (g == f) {
        out.insert(f);
        break;
      }
      for (const auto& h : edges[g]) work.push_back(h);
    }
  }
  return out;
}

TerminationEvidence check_termination(const FunctionInfo& f, const TypeEnv& env, const EntailFn& entails) {
  std::vector<std::vector<Cmp>> table;
  std::vector<const Term*> sites;
  for (const auto& c : f.decl.clauses) {
    for (const auto* call : recursive_calls(c, f.name())) {
      std::vector<Cmp> row;
      for (std::size_t i = 0; i < c.patterns.size(); ++i) row.push_back(compare(call->args[i], c.patterns[i]));
      table.push_back(std::move(row));
      sites.push_back(call);
    }
  }

  if (mutually_recursive(env).count(f.name())) {
    throw NonTermination("'" + f.name() + "' is mutually recursive with another function; only direct recursion is supported",
                         f.decl.span);
  }

  TerminationEvidence ev;
  if (f.decl.metric) {
    if (sites.empty()) return ev;
    ev.kind = TerminationEvidence::Kind::Semantic;
    ev.metric = *f.decl.metric;
    if (auto fail = check_metric(f, env, entails, ev.metric, ev.checks)) {
      throw NonTermination(fail->reason, fail->span);
    }
    return ev;
  }
  if (sites.empty()) return ev;

  if (auto order = structural_order(table, f.sig.arity())) {
    ev.kind = TerminationEvidence::Kind::Structural;
    ev.positions = *order;
    return ev;
  }

  // Report the first call that no argument shrinks on.
  const Term* culprit = sites.front();
  for (std::size_t i = 0; i < table.size(); ++i) {
    bool shrinks = false;
    for (auto c : table[i]) shrinks = shrinks || c == Cmp::Smaller;
    if (!shrinks) {
      culprit = sites[i];
      break;
    }
  }
  std::string reason = "no argument of '" + pretty(*culprit) + "' is structurally smaller";
  if (auto metric = guess_metric(f, env)) {
    ev.kind = TerminationEvidence::Kind::Semantic;
    ev.metric = *metric;
    ev.guessed = true;
    if (!check_metric(f, env, entails, ev.metric, ev.checks)) return ev;
    reason += ", and the guessed metric [" + pretty(metric->front()) + "] does not decrease";
  }
  throw NonTermination(reason, culprit->span);
}

}  // namespace eqcheck

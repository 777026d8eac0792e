#include "eqcheck/checker/checker.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "eqcheck/syntax/pretty.hpp"
#include "eqcheck/syntax/subst.hpp"
#include "eqcheck/wf/termination.hpp"
#include "eqcheck/wf/totality.hpp"

namespace eqcheck {

std::string to_string(ObligationKind k) {
  switch (k) {
    case ObligationKind::ClauseVC:
      return "ClauseVC";
    case ObligationKind::ChainStep:
      return "ChainStep";
    case ObligationKind::HintPrecondition:
      return "HintPrecondition";
    case ObligationKind::TerminationDecrease:
      return "TerminationDecrease";
    case ObligationKind::Totality:
      return "Totality";
    case ObligationKind::Termination:
      return "Termination";
    case ObligationKind::Blocked:
      return "Blocked";
  }
  return "?";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Proved:
      return "proved";
    case Status::Failed:
      return "failed";
    case Status::FuelExhausted:
      return "fuel-exhausted";
  }
  return "?";
}

bool Report::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.status == Status::Proved; });
}

namespace {

void push_unique(std::vector<Pred>& out, Pred p) {
  if (p.is_trivial()) return;
  if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
}

bool has_result_fact(const FunctionInfo& g) { return !g.sig.result_pred.is_trivial(); }

// Result facts of every refined call inside `t`, nested calls included.
void call_facts(const TypeEnv& env, const Term& t, std::vector<Pred>& out) {
  std::vector<const Term*> apps;
  collect_apps(t, apps);
  for (const Term* a : apps) {
    const FunctionInfo* g = env.function(a->name);
    if (g && has_result_fact(*g) && a->args.size() == g->sig.arity()) push_unique(out, lemma_facts(*g, a->args));
  }
}

Subst param_subst(const FunctionInfo& g, const std::vector<Term>& args) {
  Subst s;
  for (std::size_t i = 0; i < g.sig.arity() && i < args.size(); ++i) s[g.sig.params[i].name] = args[i];
  return s;
}

std::vector<const Term*> program_terms(const Clause& c) {
  std::vector<const Term*> out;
  if (const auto* t = std::get_if<Term>(&c.body)) {
    out.push_back(t);
  } else {
    const auto& chain = std::get<ProofChain>(c.body);
    out.push_back(&chain.head);
    for (const auto& s : chain.steps) out.push_back(&s.rhs);
  }
  return out;
}

struct Hint {
  const Term* term;
  std::size_t step;  // 1-based step the hint is attached to
};

std::vector<Hint> hints_of(const Clause& c) {
  std::vector<Hint> out;
  if (const auto* chain = std::get_if<ProofChain>(&c.body)) {
    for (std::size_t k = 0; k < chain->steps.size(); ++k) {
      for (const auto& h : chain->steps[k].hints) out.push_back({&h, k + 1});
    }
  }
  return out;
}

std::string clause_label(std::size_t clause, std::size_t row, std::size_t rows) {
  std::string s = "c" + std::to_string(clause + 1);
  if (rows > 1) s += "." + std::to_string(row + 1);
  return s;
}

// Obligations of one residual row. `skip` drops one hint (by clause-wide
// index) for the unused-hint probe.
std::vector<Obligation> row_obligations(const TypeEnv& env, const FunctionInfo& f, std::size_t ci, const PatternRow& row,
                                        const std::string& label, const CheckOptions& opts,
                                        std::optional<std::size_t> skip = std::nullopt) {
  const Clause& clause = f.decl.clauses[ci];
  ClauseContext ctx = clause_context(env, f, clause, row);
  const std::string base = f.name() + "/" + label + "/";
  const bool ple = f.ple || opts.ple_default;

  std::vector<Hint> hints = hints_of(clause);
  auto hint_facts = [&](std::size_t upto) {
    std::vector<Pred> facts;
    for (std::size_t i = 0; i < hints.size(); ++i) {
      if (i == skip || hints[i].step > upto) continue;
      call_facts(env, *hints[i].term, facts);
    }
    return facts;
  };
  auto hint_seeds = [&](std::size_t upto, std::vector<Term>& seeds) {
    for (std::size_t i = 0; i < hints.size(); ++i) {
      if (i != skip && hints[i].step <= upto) seeds.push_back(*hints[i].term);
    }
  };
  auto make = [&](ObligationKind kind, std::string id, Span span, std::vector<Pred> facts, Pred goal,
                  std::vector<Term> seeds) {
    Obligation ob;
    ob.id = base + id;
    ob.decl = f.name();
    ob.kind = kind;
    ob.span = span;
    ob.facts = std::move(facts);
    ob.goal = std::move(goal);
    ob.vars = ctx.frame.vars;
    ob.seeds = std::move(seeds);
    ob.ple = ple;
    return ob;
  };
  auto with = [&](std::vector<Pred> more) {
    std::vector<Pred> facts = ctx.facts;
    for (auto& p : more) push_unique(facts, std::move(p));
    return facts;
  };

  std::vector<Obligation> out;
  const std::size_t all = static_cast<std::size_t>(-1);
  Subst binders = ctx.frame.binders;

  if (const auto* body = std::get_if<Term>(&clause.body)) {
    if (has_result_fact(f)) {
      Subst s = binders;
      if (!f.sig.value_binder.empty()) s[f.sig.value_binder] = *body;
      out.push_back(make(ObligationKind::ClauseVC, "vc", body->span, ctx.facts, subst(f.sig.result_pred, s), {*body}));
    }
  } else {
    const auto& chain = std::get<ProofChain>(clause.body);
    std::vector<Pred> chain_eqs;
    std::vector<Term> all_seeds{chain.head};
    for (std::size_t k = 1; k <= chain.steps.size(); ++k) {
      const Term& lhs = k == 1 ? chain.head : chain.steps[k - 2].rhs;
      const Term& rhs = chain.steps[k - 1].rhs;
      std::size_t scope = opts.strict_hints ? k : all;
      std::vector<Term> seeds{lhs, rhs};
      hint_seeds(scope, seeds);
      Pred eq = Pred::atom(Rel::Eq, lhs, rhs);
      Obligation ob = make(ObligationKind::ChainStep, "step" + std::to_string(k), chain.steps[k - 1].span,
                           with(hint_facts(scope)), eq, std::move(seeds));
      ob.step = k;
      ob.lhs = lhs;
      ob.rhs = rhs;
      out.push_back(std::move(ob));
      chain_eqs.push_back(eq);
      all_seeds.push_back(rhs);
    }
    if (has_result_fact(f)) {
      Subst s = binders;
      if (!f.sig.value_binder.empty()) s[f.sig.value_binder] = chain.result_term();
      std::vector<Pred> facts = with(hint_facts(all));
      for (auto& e : chain_eqs) push_unique(facts, e);
      hint_seeds(all, all_seeds);
      out.push_back(make(ObligationKind::ClauseVC, "vc", chain.span, std::move(facts), subst(f.sig.result_pred, s),
                         std::move(all_seeds)));
    }
  }

  // Preconditions of every call to a function with refined arguments.
  std::vector<const Term*> calls;
  for (const Term* t : program_terms(clause)) collect_apps(*t, calls);
  for (std::size_t i = 0; i < hints.size(); ++i) {
    if (i != skip) collect_apps(*hints[i].term, calls);
  }
  std::size_t pre = 0;
  for (const Term* c : calls) {
    const FunctionInfo* g = env.function(c->name);
    if (!g || !g->sig.has_refined_params() || c->args.size() != g->sig.arity()) continue;
    Subst s = param_subst(*g, c->args);
    std::vector<Pred> parts;
    for (const auto& p : g->sig.params) {
      if (p.refined) parts.push_back(subst(p.pred, s));
    }
    out.push_back(make(ObligationKind::HintPrecondition, "pre" + std::to_string(++pre), c->span,
                       with(hint_facts(all)), Pred::conj(std::move(parts)), {*c}));
  }
  return out;
}

struct RowRef {
  std::size_t clause;
  PatternRow row;
  std::string label;
};

std::vector<RowRef> rows_of(const TypeEnv& env, const FunctionInfo& f) {
  std::vector<RowRef> out;
  for (std::size_t ci = 0; ci < f.decl.clauses.size(); ++ci) {
    auto rows = residual_rows(f, ci, env);
    for (std::size_t r = 0; r < rows.size(); ++r) out.push_back({ci, rows[r], clause_label(ci, r, rows.size())});
  }
  return out;
}

// Every function name applied in the declaration, signature included.
std::set<std::string> references(const FunctionInfo& f) {
  std::vector<const Term*> apps;
  std::vector<Term> owned;
  std::function<void(const Pred&)> pred = [&](const Pred& p) {
    for (const auto& t : p.terms) owned.push_back(t);
    for (const auto& q : p.parts) pred(q);
  };
  for (const auto& p : f.sig.params) pred(p.pred);
  pred(f.sig.result_pred);
  if (f.decl.metric) {
    for (const auto& t : *f.decl.metric) owned.push_back(t);
  }
  for (const auto& t : owned) collect_apps(t, apps);
  for (const auto& c : f.decl.clauses) {
    for (const Term* t : program_terms(c)) collect_apps(*t, apps);
    for (const auto& h : hints_of(c)) collect_apps(*h.term, apps);
  }
  std::set<std::string> out;
  for (const Term* a : apps) out.insert(a->name);
  return out;
}

Verdict diagnostic(const FunctionInfo& f, ObligationKind kind, const std::string& id, Span span, std::string message) {
  Verdict v;
  v.id = f.name() + "/" + id;
  v.decl = f.name();
  v.kind = kind;
  v.span = span;
  v.status = Status::Failed;
  v.message = std::move(message);
  return v;
}

std::string row_text(const std::string& name, const PatternRow& row) {
  std::string s = name;
  for (const auto& p : row) {
    std::string t = pretty(p);
    bool atomic = p.args.empty() || t.front() == '(' || t.front() == '[';
    s += " " + (atomic ? t : "(" + t + ")");
  }
  return s;
}

}  // namespace

ClauseContext clause_context(const TypeEnv& env, const FunctionInfo& f, const Clause& clause, const PatternRow& row) {
  ClauseContext ctx{clause_frame(env, f, row), {}};
  for (const auto& e : ctx.frame.equalities) push_unique(ctx.facts, e);
  for (const auto& p : f.sig.params) {
    if (p.refined) push_unique(ctx.facts, subst(p.pred, ctx.frame.binders));
  }
  for (const Term* t : program_terms(clause)) call_facts(env, *t, ctx.facts);
  return ctx;
}

Pred lemma_facts(const FunctionInfo& g, const std::vector<Term>& args) {
  Subst s = param_subst(g, args);
  if (!g.sig.value_binder.empty()) s[g.sig.value_binder] = Term::app(g.name(), args);
  return subst(g.sig.result_pred, s);
}

std::vector<Obligation> function_obligations(const TypeEnv& env, const FunctionInfo& f, const CheckOptions& opts) {
  std::vector<Obligation> out;
  for (const auto& r : rows_of(env, f)) {
    for (auto& ob : row_obligations(env, f, r.clause, r.row, r.label, opts)) out.push_back(std::move(ob));
  }
  return out;
}

Verdict discharge(const TypeEnv& env, const Obligation& ob, const CheckOptions& opts) {
  Verdict v;
  v.id = ob.id;
  v.decl = ob.decl;
  v.kind = ob.kind;
  v.step = ob.step;
  v.span = ob.span;
  v.goal = pretty(ob.goal);
  for (const auto& f : ob.facts) v.facts.push_back(pretty(f));
  if (ob.lhs) v.lhs = pretty(*ob.lhs);
  if (ob.rhs) v.rhs = pretty(*ob.rhs);
  try {
    auto r = entails(env, ob.vars, ob.facts, ob.goal, ob.seeds, {ob.ple, opts.ple_fuel, {ob.decl}});
    v.ledger = std::move(r.ledger);
    v.status = r.proved ? Status::Proved : r.fuel_exhausted ? Status::FuelExhausted : Status::Failed;
    if (v.status == Status::FuelExhausted) v.message = "ple fuel exhausted";
  } catch (const std::exception& e) {
    v.status = Status::Failed;
    v.message = e.what();
  }
  return v;
}

std::vector<Verdict> discharge_all(const TypeEnv& env, const std::vector<Obligation>& obs, const CheckOptions& opts) {
  std::vector<Verdict> out(obs.size());
  std::size_t workers = std::min(std::max<std::size_t>(opts.jobs, 1), obs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < obs.size(); ++i) out[i] = discharge(env, obs[i], opts);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < obs.size();) out[i] = discharge(env, obs[i], opts);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

std::vector<Verdict> check_function(const TypeEnv& env, const FunctionInfo& f, const CheckOptions& opts) {
  return discharge_all(env, function_obligations(env, f, opts), opts);
}

Report check_module(const SourceModule& m, const CheckOptions& opts) {
  TypeEnv env = check_types(m);
  check_refinement_wf(env);
  Report report;
  report.file = m.file;


  // Well-formedness per function.
  std::map<std::string, std::vector<Verdict>> wf;
  std::set<std::string> bad;
  for (const auto& name : env.function_order()) {
    const FunctionInfo& f = *env.function(name);
    auto tot = check_totality(f, env);
    if (!tot.total) {
      std::string msg = "missing patterns:";
      for (const auto& row : tot.missing) msg += "\n  " + row_text(name, row);
      wf[name].push_back(diagnostic(f, ObligationKind::Totality, "totality", f.decl.span, msg));
      bad.insert(name);
      continue;
    }
    EntailFn logic = [&env, &name](const std::vector<Pred>& facts, const Pred& goal, const VarSorts& vars) {
      return entails(env, vars, facts, goal, {}, {false, 0, {name}}).proved;
    };
    try {
      auto ev = check_termination(f, env, logic);
      for (const auto& c : ev.checks) {
        Verdict v;
        v.id = name + "/" + clause_label(c.clause, c.row, residual_rows(f, c.clause, env).size()) + "/decrease" +
               std::to_string(c.call + 1);
        v.decl = name;
        v.kind = ObligationKind::TerminationDecrease;
        v.span = c.span;
        v.goal = pretty(c.goal);
        for (const auto& p : c.facts) v.facts.push_back(pretty(p));
        wf[name].push_back(std::move(v));
      }
    } catch (const NonTermination& e) {
      wf[name].push_back(diagnostic(f, ObligationKind::Termination, "termination", e.span(), e.what()));
      bad.insert(name);
    }
  }

  // Users of an ill-formed function are blocked, transitively.
  std::map<std::string, std::string> blocked;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& name : env.function_order()) {
      if (bad.count(name) || blocked.count(name)) continue;
      for (const auto& g : references(*env.function(name))) {
        if (g == name) continue;
        if (bad.count(g) || blocked.count(g)) {
          blocked[name] = bad.count(g) ? g : blocked[g];
          changed = true;
          break;
        }
      }
    }
  }

  // Obligations of the remaining functions, discharged together.
  std::vector<Obligation> obs;
  std::map<std::string, std::pair<std::size_t, std::size_t>> range;
  for (const auto& name : env.function_order()) {
    if (bad.count(name) || blocked.count(name)) continue;
    auto mine = function_obligations(env, *env.function(name), opts);
    range[name] = {obs.size(), obs.size() + mine.size()};
    for (auto& ob : mine) obs.push_back(std::move(ob));
  }
  auto verdicts = discharge_all(env, obs, opts);

  for (const auto& name : env.function_order()) {
    const FunctionInfo& f = *env.function(name);
    for (auto& v : wf[name]) report.verdicts.push_back(std::move(v));
    if (auto b = blocked.find(name); b != blocked.end()) {
      report.verdicts.push_back(diagnostic(f, ObligationKind::Blocked, "blocked", f.decl.span,
                                           "not checked: depends on " + b->second + ", which is not well-formed"));
      continue;
    }
    if (auto r = range.find(name); r != range.end()) {
      for (std::size_t i = r->second.first; i < r->second.second; ++i) report.verdicts.push_back(verdicts[i]);
    }
  }

  // A hint is unused when every obligation of its clause still holds
  // without it. A failed verdict anywhere may stand on a false refinement
  // that others assume, so probing waits for a clean module.
  if (!opts.unused_hints || !report.ok()) return report;
  struct Probe {
    const FunctionInfo* f;
    std::size_t clause, hint;
    std::size_t begin, end;
  };
  std::vector<Probe> probes;
  std::vector<Obligation> probe_obs;
  for (const auto& name : env.function_order()) {
    auto r = range.find(name);
    if (r == range.end()) continue;
    const FunctionInfo& f = *env.function(name);
    auto rows = rows_of(env, f);
    for (std::size_t ci = 0; ci < f.decl.clauses.size(); ++ci) {
      auto hints = hints_of(f.decl.clauses[ci]);
      if (hints.empty()) continue;
      for (std::size_t h = 0; h < hints.size(); ++h) {
        Probe p{&f, ci, h, probe_obs.size(), 0};
        for (const auto& row : rows) {
          if (row.clause != ci) continue;
          for (auto& ob : row_obligations(env, f, ci, row.row, row.label, opts, h)) probe_obs.push_back(std::move(ob));
        }
        p.end = probe_obs.size();
        probes.push_back(p);
      }
    }
  }
  auto probe_verdicts = discharge_all(env, probe_obs, opts);
  for (const auto& p : probes) {
    bool needed = false;
    for (std::size_t i = p.begin; i < p.end; ++i) needed = needed || probe_verdicts[i].status != Status::Proved;
    if (needed) continue;
    const Term& h = *hints_of(p.f->decl.clauses[p.clause])[p.hint].term;
    report.warnings.push_back({p.f->name(), h.span, "hint `" + pretty(h) + "` is not needed"});
  }
  return report;
}

}  // namespace eqcheck

#include "eqcheck/logic/solver.hpp"

#include <algorithm>

#include "eqcheck/syntax/pretty.hpp"

namespace eqcheck {

namespace {

Rel flip(Rel r) {
  switch (r) {
    case Rel::Eq:
      return Rel::Ne;
    case Rel::Ne:
      return Rel::Eq;
    case Rel::Le:
      return Rel::Gt;
    case Rel::Lt:
      return Rel::Ge;
    case Rel::Ge:
      return Rel::Lt;
    case Rel::Gt:
      return Rel::Le;
  }
  return r;
}

Pred negation(const Pred& p) {
  switch (p.kind) {
    case PredKind::True:
      return Pred::falsity();
    case PredKind::False:
      return Pred::truth();
    case PredKind::Not:
      return p.parts[0];
    case PredKind::Atom:
      return Pred::atom(flip(p.rel), p.terms[0], p.terms[1], p.span);
    case PredKind::And:
    case PredKind::Or: {
      std::vector<Pred> parts;
      for (const auto& q : p.parts) parts.push_back(negation(q));
      return p.kind == PredKind::And ? Pred::disj(std::move(parts)) : Pred::conj(std::move(parts));
    }
  }
  return p;
}

// Keeps the constraints connected to `vars` through shared variables.
std::vector<LinConstraint> relevant(const std::vector<LinConstraint>& cs, std::set<int> vars) {
  std::vector<bool> used(cs.size(), false);
  std::vector<LinConstraint> out;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (used[i]) continue;
      bool touches = false;
      for (const auto& [x, a] : cs[i].expr.coeffs) touches = touches || vars.count(x);
      if (!touches) continue;
      used[i] = true;
      grew = true;
      for (const auto& [x, a] : cs[i].expr.coeffs) vars.insert(x);
      out.push_back(cs[i]);
    }
  }
  return out;
}

}  // namespace

Solver::Solver(const TypeEnv& env, VarSorts vars) : env_(env), vars_(std::move(vars)) {}

Sort Solver::sort_of_node(NodeId n) const {
  const Node& nd = g_.node(n);
  switch (nd.kind) {
    case Node::Kind::Const: {
      auto it = vars_.find(nd.sym);
      return it == vars_.end() ? Sort::var("?") : it->second;
    }
    case Node::Kind::Int:
    case Node::Kind::Add:
    case Node::Kind::Sub:
    case Node::Kind::Mul:
      return Sort::integer();
    case Node::Kind::Bool:
      return Sort::boolean();
    case Node::Kind::Unit:
      return Sort::proof();
    case Node::Kind::Con:
    case Node::Kind::App:
      break;
  }
  std::vector<Sort> kids;
  for (NodeId k : nd.kids) kids.push_back(sorts_[k]);
  try {
    return nd.kind == Node::Kind::Con ? env_.constructor_sort(nd.sym, kids) : env_.application_sort(nd.sym, kids);
  } catch (const Error&) {
    if (nd.kind == Node::Kind::Con) return Sort::data(env_.constructor(nd.sym)->data);
    return env_.function(nd.sym)->sig.result;
  }
}

void Solver::note_node(NodeId n, bool seed) {
  while (sorts_.size() < g_.size()) {
    auto id = static_cast<NodeId>(sorts_.size());
    sorts_.push_back(sort_of_node(id));
    is_int_.push_back(sorts_.back().is_int());
    seed_.push_back(false);
  }
  if (seed && g_.node(n).kind == Node::Kind::App) seed_[n] = true;
}

NodeId Solver::add(const Term& t, bool seed, const std::map<std::string, NodeId>& bound) {
  NodeId n;
  switch (t.kind) {
    case TermKind::Var: {
      auto it = bound.find(t.name);
      if (it != bound.end()) return it->second;
      n = g_.make(Node::Kind::Const, t.name);
      break;
    }
    case TermKind::Con:
    case TermKind::App: {
      std::vector<NodeId> kids;
      for (const auto& a : t.args) kids.push_back(add(a, seed, bound));
      n = g_.make(t.kind == TermKind::Con ? Node::Kind::Con : Node::Kind::App, t.name, std::move(kids));
      break;
    }
    case TermKind::PrimOp: {
      NodeId a = add(t.args[0], seed, bound);
      NodeId b = add(t.args[1], seed, bound);
      Node::Kind k = t.op == PrimOpKind::Add   ? Node::Kind::Add
                     : t.op == PrimOpKind::Sub ? Node::Kind::Sub
                                               : Node::Kind::Mul;
      n = g_.make(k, "", {a, b});
      break;
    }
    default:
      n = g_.add(t);
  }
  note_node(n, seed);
  return n;
}

void Solver::add_seed(const Term& t) { add(t, true); }

void Solver::add_terms(const Pred& p) {
  for (const auto& t : p.terms) add(t, false);
  for (const auto& q : p.parts) add_terms(q);
}

void Solver::assert_fact(const Pred& p) {
  switch (p.kind) {
    case PredKind::True:
    case PredKind::Or:
      return;
    case PredKind::False:
      g_.set_contradiction();
      return;
    case PredKind::And:
      for (const auto& q : p.parts) assert_fact(q);
      return;
    case PredKind::Not:
      assert_fact(negation(p.parts[0]));
      return;
    case PredKind::Atom:
      break;
  }
  NodeId a = add(p.terms[0], false);
  NodeId b = add(p.terms[1], false);
  lia_dirty_ = true;
  if (p.rel == Rel::Eq) {
    g_.merge(a, b);
  } else if (p.rel == Rel::Ne) {
    diseqs_.emplace_back(a, b);
  } else {
    atoms_.push_back(Atom{p.rel, a, b});
  }
}

Solver::Match Solver::match(const Pattern& p, NodeId n, std::map<std::string, NodeId>& bound) const {
  if (!p.alias.empty()) bound[p.alias] = n;
  switch (p.kind) {
    case PatternKind::Var:
      bound[p.name] = n;
      return Match::Yes;
    case PatternKind::Wild:
      return Match::Yes;
    default:
      break;
  }
  auto tag = g_.tag(n);
  if (!tag) return Match::Unknown;
  const Node& t = g_.node(*tag);
  switch (p.kind) {
    case PatternKind::Int:
      return t.kind == Node::Kind::Int && t.sym == p.value.str() ? Match::Yes : Match::No;
    case PatternKind::Bool:
      return t.kind == Node::Kind::Bool && t.sym == (p.flag ? "true" : "false") ? Match::Yes : Match::No;
    case PatternKind::Con: {
      if (t.kind != Node::Kind::Con || t.sym != p.name) return Match::No;
      Match out = Match::Yes;
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        Match m = match(p.args[i], t.kids[i], bound);
        if (m == Match::No) return Match::No;
        if (m == Match::Unknown) out = Match::Unknown;
      }
      return out;
    }
    default:
      return Match::Unknown;
  }
}

bool Solver::try_reflect(NodeId n) {
  const Node& nd = g_.node(n);
  const FunctionInfo* f = env_.function(nd.sym);
  if (!f || !f->reflect || fired_.count(n)) return false;
  // An instance congruent to one already unfolded adds nothing new.
  for (NodeId q : fired_) {
    const Node& qd = g_.node(q);
    if (qd.sym != nd.sym) continue;
    bool same = true;
    for (std::size_t i = 0; i < nd.kids.size() && same; ++i) same = g_.equal(nd.kids[i], qd.kids[i]);
    if (same) {
      fired_.insert(n);
      return false;
    }
  }
  for (const auto& clause : f->decl.clauses) {
    std::map<std::string, NodeId> bound;
    Match res = Match::Yes;
    for (std::size_t i = 0; i < clause.patterns.size(); ++i) {
      Match m = match(clause.patterns[i], nd.kids[i], bound);
      if (m == Match::No) {
        res = Match::No;
        break;
      }
      if (m == Match::Unknown) res = Match::Unknown;
    }
    if (res == Match::No) continue;
    if (res == Match::Unknown) return false;
    Term body = clause.is_chain() ? std::get<ProofChain>(clause.body).result_term() : std::get<Term>(clause.body);
    NodeId b = add(body, false, bound);
    fired_.insert(n);
    ++reflect_count_;
    // Show the instance at the matched constructor forms.
    std::vector<Term> args;
    for (NodeId k : g_.node(n).kids) args.push_back(g_.to_term(g_.tag(k).value_or(k)));
    ledger_text_.push_back(pretty(Term::app(g_.node(n).sym, std::move(args))) + " = " + pretty(g_.to_term(b)));
    g_.merge(n, b);
    lia_dirty_ = true;
    return true;
  }
  return false;
}

bool Solver::apply_measures() {
  bool changed = false;
  for (NodeId n = 0; n < g_.size(); ++n) {
    const Node& nd = g_.node(n);
    if (nd.kind == Node::Kind::App) {
      const FunctionInfo* f = env_.function(nd.sym);
      if (f && f->measure && f->sig.result_refined && !unassumed_.count(f->name()) && measured_.insert(n).second) {
        // Measure result refinements hold of every application.
        std::map<std::string, NodeId> bound{{f->sig.params[0].name, nd.kids[0]}};
        if (!f->sig.value_binder.empty()) bound[f->sig.value_binder] = n;
        std::vector<std::pair<Rel, std::pair<NodeId, NodeId>>> todo;
        std::vector<const Pred*> stack{&f->sig.result_pred};
        while (!stack.empty()) {
          const Pred* p = stack.back();
          stack.pop_back();
          if (p->kind == PredKind::And) {
            for (const auto& q : p->parts) stack.push_back(&q);
          } else if (p->kind == PredKind::Atom) {
            NodeId a = add(p->terms[0], false, bound);
            NodeId b = add(p->terms[1], false, bound);
            todo.push_back({p->rel, {a, b}});
          }
        }
        for (auto& [rel, ab] : todo) {
          if (rel == Rel::Eq) {
            g_.merge(ab.first, ab.second);
          } else if (rel == Rel::Ne) {
            diseqs_.push_back(ab);
          } else {
            atoms_.push_back(Atom{rel, ab.first, ab.second});
          }
        }
        lia_dirty_ = true;
        changed = true;
      }
      continue;
    }
    if (nd.kind != Node::Kind::Con || measured_.count(n)) continue;
    measured_.insert(n);
    const ConstructorInfo* c = env_.constructor(nd.sym);
    for (const FunctionInfo* m : env_.measures_on(c->data)) {
      for (const auto& clause : m->decl.clauses) {
        std::map<std::string, NodeId> bound;
        if (match(clause.patterns[0], n, bound) != Match::Yes) continue;
        NodeId app = g_.make(Node::Kind::App, m->name(), {n});
        note_node(app, false);
        NodeId b = add(std::get<Term>(clause.body), false, bound);
        ledger_text_.push_back(pretty(g_.to_term(app)) + " = " + pretty(g_.to_term(b)));
        g_.merge(app, b);
        lia_dirty_ = true;
        changed = true;
        break;
      }
    }
  }
  return changed;
}

bool Solver::reflect_round(bool only_seeds) {
  bool changed = false;
  auto limit = static_cast<NodeId>(g_.size());
  for (NodeId n = 0; n < limit; ++n) {
    if (g_.contradiction()) break;
    if (g_.node(n).kind != Node::Kind::App) continue;
    if (only_seeds && !seed_[n]) continue;
    changed = try_reflect(n) || changed;
  }
  return changed;
}

void Solver::instantiate_axioms() {
  for (;;) {
    bool changed = apply_measures();
    changed = reflect_round(true) || changed;
    if (!changed || g_.contradiction()) return;
  }
}

bool Solver::ple_saturate(std::size_t fuel) {
  for (std::size_t round = 0; round < fuel; ++round) {
    bool changed = apply_measures();
    changed = reflect_round(false) || changed;
    if (!changed || g_.contradiction()) return true;
  }
  if (fuel == 0) return true;
  // Out of rounds: report whether anything was still waiting to unfold.
  for (NodeId n = 0; n < g_.size(); ++n) {
    const Node& nd = g_.node(n);
    if (nd.kind != Node::Kind::App || fired_.count(n)) continue;
    const FunctionInfo* f = env_.function(nd.sym);
    if (!f || !f->reflect) continue;
    for (const auto& clause : f->decl.clauses) {
      std::map<std::string, NodeId> bound;
      Match res = Match::Yes;
      for (std::size_t i = 0; i < clause.patterns.size() && res != Match::No; ++i) {
        Match m = match(clause.patterns[i], nd.kids[i], bound);
        if (m != Match::Yes) res = m;
      }
      if (res == Match::No) continue;
      if (res == Match::Yes) return false;
      break;
    }
  }
  return true;
}

std::size_t Solver::seed_apps() const {
  std::size_t k = 0;
  for (bool s : seed_) k += s;
  return k;
}

LinExpr Solver::lin(NodeId n) const {
  LinExpr e;
  e.coeffs[static_cast<int>(g_.find(n))] = 1;
  return e;
}

std::vector<LinConstraint> Solver::arithmetic() const {
  std::vector<LinConstraint> cs;
  for (NodeId n = 0; n < g_.size(); ++n) {
    if (!is_int_[n]) continue;
    const Node& nd = g_.node(n);
    LinConstraint c;
    c.eq = true;
    c.expr = lin(n);
    switch (nd.kind) {
      case Node::Kind::Int:
        c.expr.constant = -Integer(nd.sym);
        break;
      case Node::Kind::Add:
        c.expr.add(lin(nd.kids[0]), -1).add(lin(nd.kids[1]), -1);
        break;
      case Node::Kind::Sub:
        c.expr.add(lin(nd.kids[0]), -1).add(lin(nd.kids[1]), 1);
        break;
      case Node::Kind::Mul: {
        auto lit = [&](NodeId k) -> std::optional<Integer> {
          auto t = g_.tag(k);
          if (t && g_.node(*t).kind == Node::Kind::Int) return Integer(g_.node(*t).sym);
          return std::nullopt;
        };
        if (auto k = lit(nd.kids[0])) {
          c.expr.add(lin(nd.kids[1]), -*k);
        } else if (auto k2 = lit(nd.kids[1])) {
          c.expr.add(lin(nd.kids[0]), -*k2);
        } else {
          continue;
        }
        break;
      }
      default:
        continue;
    }
    cs.push_back(std::move(c));
  }
  for (const auto& a : atoms_) {
    if (!is_int_[a.a]) continue;
    // a rel b, as expr <= 0
    LinConstraint c;
    switch (a.rel) {
      case Rel::Le:
        c.expr = lin(a.a).add(lin(a.b), -1);
        break;
      case Rel::Lt:
        c.expr = lin(a.a).add(lin(a.b), -1);
        c.expr.constant += 1;
        break;
      case Rel::Ge:
        c.expr = lin(a.b).add(lin(a.a), -1);
        break;
      case Rel::Gt:
        c.expr = lin(a.b).add(lin(a.a), -1);
        c.expr.constant += 1;
        break;
      default:
        continue;
    }
    cs.push_back(std::move(c));
  }
  return cs;
}

bool Solver::lia_consistent() {
  if (lia_dirty_) {
    lia_infeasible_ = lia_infeasible(arithmetic());
    lia_dirty_ = false;
  }
  return !lia_infeasible_;
}

bool Solver::lia_entails(Rel rel, NodeId a, NodeId b) {
  if (!is_int_[a] || !is_int_[b]) return false;
  if (rel == Rel::Eq) return lia_entails(Rel::Le, a, b) && lia_entails(Rel::Ge, a, b);
  LinConstraint neg;
  switch (rel) {
    case Rel::Le:  // a - b >= 1
      neg.expr = lin(b).add(lin(a), -1);
      neg.expr.constant += 1;
      break;
    case Rel::Lt:  // a - b >= 0
      neg.expr = lin(b).add(lin(a), -1);
      break;
    case Rel::Ge:  // a - b <= -1
      neg.expr = lin(a).add(lin(b), -1);
      neg.expr.constant += 1;
      break;
    case Rel::Gt:  // a - b <= 0
      neg.expr = lin(a).add(lin(b), -1);
      break;
    case Rel::Ne:
      neg.expr = lin(a).add(lin(b), -1);
      neg.eq = true;
      break;
    case Rel::Eq:
      break;
  }
  std::set<int> vars{static_cast<int>(g_.find(a)), static_cast<int>(g_.find(b))};
  auto cs = relevant(arithmetic(), vars);
  cs.push_back(std::move(neg));
  return lia_infeasible(std::move(cs));
}

bool Solver::contradiction() {
  if (g_.contradiction()) return true;
  for (const auto& [a, b] : diseqs_) {
    if (g_.equal(a, b)) return true;
  }
  if (!lia_consistent()) return true;
  for (const auto& [a, b] : diseqs_) {
    if (is_int_[a] && lia_entails(Rel::Eq, a, b)) return true;
  }
  return false;
}

bool Solver::holds_atom(Rel rel, NodeId a, NodeId b) {
  switch (rel) {
    case Rel::Eq:
      if (g_.equal(a, b)) return true;
      return is_int_[a] && lia_entails(Rel::Eq, a, b);
    case Rel::Ne: {
      auto ta = g_.tag(a), tb = g_.tag(b);
      if (ta && tb) {
        const Node& x = g_.node(*ta);
        const Node& y = g_.node(*tb);
        if (x.kind != y.kind || x.sym != y.sym) return true;
      }
      for (const auto& [p, q] : diseqs_) {
        if ((g_.equal(p, a) && g_.equal(q, b)) || (g_.equal(p, b) && g_.equal(q, a))) return true;
      }
      return is_int_[a] && lia_entails(Rel::Ne, a, b);
    }
    default:
      return lia_entails(rel, a, b);
  }
}

bool Solver::holds(const Pred& goal) {
  if (contradiction()) return true;
  switch (goal.kind) {
    case PredKind::True:
      return true;
    case PredKind::False:
      return false;
    case PredKind::Not:
      return holds(negation(goal.parts[0]));
    case PredKind::And:
      for (const auto& q : goal.parts) {
        if (!holds(q)) return false;
      }
      return true;
    case PredKind::Or:
      for (const auto& q : goal.parts) {
        if (holds(q)) return true;
      }
      return false;
    case PredKind::Atom:
      break;
  }
  NodeId a = add(goal.terms[0], false);
  NodeId b = add(goal.terms[1], false);
  return holds_atom(goal.rel, a, b);
}

bool Solver::pinch() {
  std::vector<NodeId> cands;
  std::set<NodeId> roots;
  for (NodeId n = 0; n < g_.size(); ++n) {
    const Node& nd = g_.node(n);
    auto consider = [&](NodeId k) {
      if (is_int_[k] && roots.insert(g_.find(k)).second) cands.push_back(g_.find(k));
    };
    if (nd.kind == Node::Kind::App || nd.kind == Node::Kind::Con) {
      for (NodeId k : nd.kids) consider(k);
    } else if (nd.kind == Node::Kind::Int) {
      consider(n);
    }
  }
  if (cands.size() > 40) cands.resize(40);
  bool merged = false;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      if (g_.equal(cands[i], cands[j])) continue;
      if (lia_entails(Rel::Eq, cands[i], cands[j])) {
        g_.merge(cands[i], cands[j]);
        lia_dirty_ = true;
        merged = true;
      }
    }
  }
  return merged;
}

EntailResult entails(const TypeEnv& env, const VarSorts& vars, const std::vector<Pred>& facts, const Pred& goal,
                     const std::vector<Term>& seeds, const EntailOptions& opts) {
  Solver s(env, vars);
  s.set_unassumed(opts.unassumed);
  for (const auto& t : seeds) s.add_seed(t);
  for (const auto& f : facts) s.assert_fact(f);
  s.add_terms(goal);
  EntailResult r;
  auto saturate = [&] {
    if (opts.ple) {
      r.fuel_exhausted = !s.ple_saturate(opts.ple_fuel);
    } else {
      s.instantiate_axioms();
    }
  };
  saturate();
  r.proved = s.holds(goal);
  for (int round = 0; !r.proved && round < 3 && s.pinch(); ++round) {
    saturate();
    r.proved = s.holds(goal);
  }
  if (r.proved) r.fuel_exhausted = false;
  r.ledger = s.ledger();
  return r;
}

}  // namespace eqcheck

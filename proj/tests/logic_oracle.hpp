#pragma once

// Randomized oracles for the logic: a naive congruence closure and
// valuation-based soundness trials over the list functions.

#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "eqcheck/logic/solver.hpp"
#include "eqcheck/semantics/eval.hpp"

namespace oracle {

using namespace eqcheck;

inline int pick(std::mt19937& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

// Builds a random graph over f/2, g/1 and five constants, merges random
// pairs, and compares against closure by repeated pairwise scanning.
inline bool cc_agrees_with_naive(std::mt19937& rng, std::size_t nodes) {
  TermGraph g;
  std::vector<NodeId> ids;
  for (const char* c : {"a", "b", "c", "d", "e"}) ids.push_back(g.make(Node::Kind::Const, c));
  while (ids.size() < nodes) {
    NodeId n = pick(rng, 2) ? g.make(Node::Kind::App, "f", {ids[pick(rng, ids.size())], ids[pick(rng, ids.size())]})
                            : g.make(Node::Kind::App, "g", {ids[pick(rng, ids.size())]});
    if (std::find(ids.begin(), ids.end(), n) == ids.end()) ids.push_back(n);
  }
  std::vector<std::pair<NodeId, NodeId>> eqs;
  for (int k = 1 + pick(rng, 6); k > 0; --k) eqs.emplace_back(ids[pick(rng, ids.size())], ids[pick(rng, ids.size())]);
  for (auto [a, b] : eqs) g.merge(a, b);

  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
  std::vector<std::size_t> cls(ids.size());
  std::iota(cls.begin(), cls.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) { return cls[i] == i ? i : cls[i] = root(cls[i]); };
  auto unite = [&](std::size_t i, std::size_t j) {
    i = root(i);
    j = root(j);
    if (i == j) return false;
    cls[i] = j;
    return true;
  };
  for (auto [a, b] : eqs) unite(index[a], index[b]);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const Node& x = g.node(ids[i]);
        const Node& y = g.node(ids[j]);
        if (x.kind != Node::Kind::App || x.sym != y.sym || x.kids.size() != y.kids.size()) continue;
        bool same = true;
        for (std::size_t k = 0; k < x.kids.size(); ++k) same = same && root(index[x.kids[k]]) == root(index[y.kids[k]]);
        if (same && unite(i, j)) changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if ((root(i) == root(j)) != g.equal(ids[i], ids[j])) return false;
    }
  }
  return true;
}

// Random terms over xs, ys : List Int and n, m : Int.
struct TermGen {
  std::mt19937& rng;

  Term list(int depth) {
    int k = pick(rng, depth == 0 ? 3 : 6);
    switch (k) {
      case 0:
        return Term::var("xs");
      case 1:
        return Term::var("ys");
      case 2:
        return Term::con("Nil", {});
      case 3:
        return Term::con("Cons", {integer(depth - 1), list(depth - 1)});
      case 4:
        return Term::app("append", {list(depth - 1), list(depth - 1)});
      default:
        return Term::app("reverse", {list(depth - 1)});
    }
  }

  Term integer(int depth) {
    int k = pick(rng, depth == 0 ? 3 : 6);
    switch (k) {
      case 0:
        return Term::var("n");
      case 1:
        return Term::var("m");
      case 2:
        return Term::int_lit(pick(rng, 5) - 2);
      case 3:
        return Term::app("length", {list(depth - 1)});
      case 4:
        return Term::prim(PrimOpKind::Add, integer(depth - 1), integer(depth - 1));
      default:
        return Term::prim(PrimOpKind::Sub, integer(depth - 1), integer(depth - 1));
    }
  }

  Pred atom(int depth) {
    if (pick(rng, 2)) return Pred::atom(Rel::Eq, list(depth), list(depth));
    static const Rel rels[] = {Rel::Eq, Rel::Ne, Rel::Le, Rel::Lt, Rel::Ge, Rel::Gt};
    return Pred::atom(rels[pick(rng, 6)], integer(depth), integer(depth));
  }
};

inline bool truth(Evaluator& ev, const Pred& p, const std::map<std::string, Value>& vals) {
  switch (p.kind) {
    case PredKind::True:
      return true;
    case PredKind::False:
      return false;
    case PredKind::Not:
      return !truth(ev, p.parts[0], vals);
    case PredKind::And:
      for (const auto& q : p.parts) {
        if (!truth(ev, q, vals)) return false;
      }
      return true;
    case PredKind::Or:
      for (const auto& q : p.parts) {
        if (truth(ev, q, vals)) return true;
      }
      return false;
    case PredKind::Atom:
      break;
  }
  Value a = ev.eval(p.terms[0], vals);
  Value b = ev.eval(p.terms[1], vals);
  switch (p.rel) {
    case Rel::Eq:
      return a == b;
    case Rel::Ne:
      return !(a == b);
    case Rel::Le:
      return a.as_integer() <= b.as_integer();
    case Rel::Lt:
      return a.as_integer() < b.as_integer();
    case Rel::Ge:
      return a.as_integer() >= b.as_integer();
    case Rel::Gt:
      return a.as_integer() > b.as_integer();
  }
  return false;
}

inline VarSorts trial_vars() {
  Sort l = Sort::data("List", {Sort::integer()});
  return {{"xs", l}, {"ys", l}, {"n", Sort::integer()}, {"m", Sort::integer()}};
}

inline std::map<std::string, Value> random_valuation(Evaluator& ev, std::mt19937& rng) {
  auto list = [&] {
    Term t = Term::con("Nil", {});
    for (int k = pick(rng, 4); k > 0; --k) t = Term::con("Cons", {Term::int_lit(pick(rng, 3)), t});
    return ev.eval(t);
  };
  return {{"xs", list()}, {"ys", list()}, {"n", Value::integer(pick(rng, 5) - 2)}, {"m", Value::integer(pick(rng, 5) - 2)}};
}

// Facts that hold under `vals`: each random atom or its negation.
inline std::vector<Pred> true_facts(Evaluator& ev, TermGen& gen, const std::map<std::string, Value>& vals, int count) {
  std::vector<Pred> out;
  for (int i = 0; i < count; ++i) {
    Pred a = gen.atom(2);
    out.push_back(truth(ev, a, vals) ? a : Pred::negate(a));
  }
  return out;
}

// Goals that reuse fact terms, so that closure has something to find.
inline Pred related_goal(TermGen& gen, const std::vector<Pred>& facts, std::mt19937& rng) {
  std::vector<Term> lists, ints;
  for (const auto& f : facts) {
    const Pred& a = f.kind == PredKind::Not ? f.parts[0] : f;
    for (const auto& t : a.terms) {
      bool is_list = t.kind == TermKind::Con || (t.kind == TermKind::App && t.name != "length") ||
                     (t.kind == TermKind::Var && (t.name == "xs" || t.name == "ys"));
      (is_list ? lists : ints).push_back(t);
    }
  }
  int mode = pick(rng, 3);
  if (mode == 0 && lists.size() >= 2) {
    const char* fn = pick(rng, 2) ? "reverse" : "length";
    Term a = Term::app(fn, {lists[pick(rng, lists.size())]});
    Term b = Term::app(fn, {lists[pick(rng, lists.size())]});
    return Pred::atom(Rel::Eq, a, b);
  }
  if (mode == 1 && !ints.empty()) {
    static const Rel rels[] = {Rel::Eq, Rel::Le, Rel::Lt, Rel::Ne};
    return Pred::atom(rels[pick(rng, 4)], ints[pick(rng, ints.size())], pick(rng, 2) ? ints[pick(rng, ints.size())] : gen.integer(1));
  }
  return gen.atom(2);
}

inline std::vector<Term> seeds_of(const std::vector<Pred>& facts, const Pred& goal) {
  std::vector<Term> out;
  std::function<void(const Pred&)> walk = [&](const Pred& p) {
    for (const auto& t : p.terms) out.push_back(t);
    for (const auto& q : p.parts) walk(q);
  };
  for (const auto& f : facts) walk(f);
  walk(goal);
  return out;
}

struct SoundnessStats {
  int trials = 0;
  int proved = 0;
  int unsound = 0;
  std::string example;
};

inline SoundnessStats soundness_trials(const TypeEnv& env, std::mt19937& rng, int trials) {
  Evaluator ev(env);
  TermGen gen{rng};
  SoundnessStats st;
  for (int i = 0; i < trials; ++i) {
    auto vals = random_valuation(ev, rng);
    auto facts = true_facts(ev, gen, vals, pick(rng, 5));
    Pred goal = related_goal(gen, facts, rng);
    EntailOptions opts{pick(rng, 2) == 0, kDefaultPleFuel};
    auto r = entails(env, trial_vars(), facts, goal, seeds_of(facts, goal), opts);
    ++st.trials;
    if (!r.proved) continue;
    ++st.proved;
    if (!truth(ev, goal, vals)) {
      ++st.unsound;
      if (st.example.empty()) st.example = "goal " + std::to_string(i);
    }
  }
  return st;
}

struct MonotonicityStats {
  int checked = 0;
  int violations = 0;
};

inline MonotonicityStats monotonicity_trials(const TypeEnv& env, std::mt19937& rng, int trials) {
  Evaluator ev(env);
  TermGen gen{rng};
  MonotonicityStats st;
  for (int i = 0; i < trials; ++i) {
    auto vals = random_valuation(ev, rng);
    auto facts = true_facts(ev, gen, vals, 1 + pick(rng, 4));
    Pred goal = related_goal(gen, facts, rng);
    auto seeds = seeds_of(facts, goal);
    if (!entails(env, trial_vars(), facts, goal, seeds).proved) continue;
    auto more = facts;
    for (auto& f : true_facts(ev, gen, vals, 1 + pick(rng, 3))) more.push_back(f);
    ++st.checked;
    if (!entails(env, trial_vars(), more, goal, seeds).proved) ++st.violations;
  }
  return st;
}

}  // namespace oracle

#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "eqcheck/logic/egraph.hpp"
#include "eqcheck/logic/lia.hpp"
#include "eqcheck/types/env.hpp"

namespace eqcheck {

constexpr std::size_t kDefaultPleFuel = 100;

/// One obligation's proof state: a term graph over the obligation's
/// constants, the arithmetic atoms asserted so far, and the ledger of
/// unfolded equation instances.
class Solver {
 public:
  /// `vars` gives the sort of every opaque constant.
  Solver(const TypeEnv& env, VarSorts vars);

  /// Equalities merge classes; order atoms go to the arithmetic store;
  /// disjunctions are dropped (sound, incomplete).
  void assert_fact(const Pred& p);

  /// Refinements of these measures are not assumed at their applications:
  /// the function under check must not lean on its own result type.
  void set_unassumed(std::set<std::string> names) { unassumed_ = std::move(names); }

  /// Adds a program term. In non-PLE mode only applications inside seeds
  /// are unfolded.
  void add_seed(const Term& t);
  /// Adds the terms of `p` without making them seeds.
  void add_terms(const Pred& p);

  /// MEASURE and REFLECT-ONCE to a fixpoint over the seed applications.
  void instantiate_axioms();

  /// Unfolds every decided reflected application, including ones created by
  /// earlier unfoldings, for at most `fuel` rounds. Returns false when
  /// rounds ran out with unfoldings still pending.
  bool ple_saturate(std::size_t fuel = kDefaultPleFuel);

  /// Checks `goal` against the current state without further unfolding.
  bool holds(const Pred& goal);

  bool contradiction();

  /// Merges integer classes that the arithmetic forces equal. Returns true
  /// when something merged.
  bool pinch();

  /// Unfolded instances, as `lhs = rhs` text, in firing order.
  const std::vector<std::string>& ledger() const { return ledger_text_; }
  std::size_t reflect_count() const { return reflect_count_; }
  /// Distinct application nodes reachable from seeds.
  std::size_t seed_apps() const;

  TermGraph& graph() { return g_; }

 private:
  struct Atom {
    Rel rel;
    NodeId a, b;
  };
  enum class Match { Yes, No, Unknown };

  NodeId add(const Term& t, bool seed, const std::map<std::string, NodeId>& bound = {});
  void note_node(NodeId n, bool seed);
  bool is_int(NodeId n) const { return is_int_[n]; }
  Sort sort_of_node(NodeId n) const;

  Match match(const Pattern& p, NodeId n, std::map<std::string, NodeId>& bound) const;
  bool try_reflect(NodeId n);
  bool apply_measures();
  bool reflect_round(bool only_seeds);

  // Arithmetic.
  LinExpr lin(NodeId n) const;
  std::vector<LinConstraint> arithmetic() const;
  bool lia_entails(Rel rel, NodeId a, NodeId b);
  bool lia_consistent();

  bool holds_atom(Rel rel, NodeId a, NodeId b);

  const TypeEnv& env_;
  VarSorts vars_;
  TermGraph g_;
  std::vector<bool> is_int_;
  std::vector<Sort> sorts_;
  std::vector<bool> seed_;
  std::size_t noted_ = 0;
  std::vector<Atom> atoms_;
  std::vector<std::pair<NodeId, NodeId>> diseqs_;
  std::set<std::string> unassumed_;
  std::set<NodeId> measured_;         // constructor nodes given measure equations
  std::set<NodeId> fired_;            // application nodes unfolded
  std::vector<std::string> ledger_text_;
  std::size_t reflect_count_ = 0;
  bool lia_dirty_ = true;
  bool lia_infeasible_ = false;
};

struct EntailOptions {
  bool ple = false;
  std::size_t ple_fuel = kDefaultPleFuel;
  std::set<std::string> unassumed;  // see Solver::set_unassumed
};

struct EntailResult {
  bool proved = false;
  bool fuel_exhausted = false;
  std::vector<std::string> ledger;
};

/// facts |- goal after unfolding: seeds once in default mode, everything to
/// a fixpoint with PLE.
EntailResult entails(const TypeEnv& env, const VarSorts& vars, const std::vector<Pred>& facts, const Pred& goal,
                     const std::vector<Term>& seeds, const EntailOptions& opts = {});

}  // namespace eqcheck

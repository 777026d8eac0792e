#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqcheck/logic/solver.hpp"
#include "eqcheck/types/env.hpp"
#include "eqcheck/wf/frame.hpp"

namespace eqcheck {

enum class ObligationKind {
  ClauseVC,
  ChainStep,
  HintPrecondition,
  TerminationDecrease,
  // Diagnostics from the earlier phases, reported as failed verdicts.
  Totality,
  Termination,
  Blocked,
};

enum class Status { Proved, Failed, FuelExhausted };

std::string to_string(ObligationKind k);
std::string to_string(Status s);

/// One entailment `facts |- goal` over the constants in `vars`. Ids look
/// like `decl/c2/step3`; a clause split into residual rows gets `c2.1`,
/// `c2.2` and so on.
struct Obligation {
  std::string id;
  std::string decl;
  ObligationKind kind = ObligationKind::ClauseVC;
  std::size_t step = 0;  // ChainStep: 1-based
  Span span;
  std::vector<Pred> facts;
  Pred goal;
  VarSorts vars;
  std::vector<Term> seeds;
  bool ple = false;
  std::optional<Term> lhs, rhs;  // ChainStep sides
};

struct Verdict {
  std::string id;
  std::string decl;
  ObligationKind kind = ObligationKind::ClauseVC;
  std::size_t step = 0;
  Span span;
  Status status = Status::Proved;
  std::string goal;
  std::vector<std::string> facts;
  std::string lhs, rhs;
  std::string message;              // phase diagnostics
  std::vector<std::string> ledger;  // unfolded equations
};

struct Warning {
  std::string decl;
  Span span;
  std::string message;
};

struct CheckOptions {
  bool ple_default = false;
  bool strict_hints = false;
  std::size_t ple_fuel = kDefaultPleFuel;
  std::size_t jobs = 1;
  bool unused_hints = true;
};

struct Report {
  std::string file;
  std::vector<Verdict> verdicts;
  std::vector<Warning> warnings;

  bool ok() const;
};

struct ClauseContext {
  ClauseFrame frame;
  std::vector<Pred> facts;
};

/// Pattern equalities, argument refinements, and the result refinement of
/// every refined call in the clause body or chain terms (hints excluded).
ClauseContext clause_context(const TypeEnv& env, const FunctionInfo& f, const Clause& clause, const PatternRow& row);

/// Result predicate of `g` instantiated at `args`; for a refined value the
/// value binder becomes the application itself.
Pred lemma_facts(const FunctionInfo& g, const std::vector<Term>& args);

/// Obligations of every clause of `f`, in clause and step order.
std::vector<Obligation> function_obligations(const TypeEnv& env, const FunctionInfo& f, const CheckOptions& opts);

Verdict discharge(const TypeEnv& env, const Obligation& ob, const CheckOptions& opts);

/// Discharges on `opts.jobs` threads; results come back in input order.
std::vector<Verdict> discharge_all(const TypeEnv& env, const std::vector<Obligation>& obs, const CheckOptions& opts);

/// Plain-body clauses against the refined signature, chain clauses step by
/// step.
std::vector<Verdict> check_function(const TypeEnv& env, const FunctionInfo& f, const CheckOptions& opts);

/// Types, well-formedness, then obligations. A function that is not total
/// or not terminating blocks itself and its dependents only. Throws
/// TypeError or WfError for the whole module.
Report check_module(const SourceModule& m, const CheckOptions& opts);

}  // namespace eqcheck

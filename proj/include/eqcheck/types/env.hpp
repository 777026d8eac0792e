#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqcheck/syntax/ast.hpp"
#include "eqcheck/types/sort.hpp"

namespace eqcheck {

struct DataInfo {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> constructors;  // declaration order
};

struct ConstructorInfo {
  std::string name;
  std::string data;
  std::vector<std::string> params;  // of the data type
  std::vector<Sort> fields;
  std::size_t index = 0;  // position within the data declaration
};

struct ParamInfo {
  std::string name;
  Sort sort;
  Pred pred;  // over earlier parameter names and this one
  bool refined = false;
  Span span;
};

/// Signature with binders normalized: every parameter has a name and each
/// parameter refinement is phrased over parameter names.
struct FunSig {
  std::vector<ParamInfo> params;
  Sort result;
  std::string value_binder;  // empty for `{P}` proofs
  Pred result_pred;
  bool result_refined = false;
  std::vector<std::string> type_vars;

  std::size_t arity() const { return params.size(); }
  bool has_refined_params() const;
};

struct FunctionInfo {
  FunDecl decl;
  FunSig sig;
  bool measure = false;
  bool reflect = false;
  bool ple = false;
  // Sorts of the pattern variables of each clause.
  std::vector<VarSorts> clause_vars;

  const std::string& name() const { return decl.name; }
  bool is_proof() const { return sig.result.kind == Sort::Kind::Proof; }
  /// Measures and reflected functions may appear in refinements.
  bool lifted() const { return measure || reflect; }
};

/// Global environment built once by check_types(); immutable afterwards.
class TypeEnv {
 public:
  const DataInfo* data(const std::string& name) const;
  const ConstructorInfo* constructor(const std::string& name) const;
  const FunctionInfo* function(const std::string& name) const;

  /// Functions in declaration order.
  const std::vector<std::string>& function_order() const { return function_order_; }
  const std::vector<std::string>& data_order() const { return data_order_; }
  std::vector<const FunctionInfo*> measures_on(const std::string& data) const;

  /// Sort of a constructor application given its argument sorts.
  Sort constructor_sort(const std::string& con, std::span<const Sort> args) const;
  /// Result sort of a function application given its argument sorts.
  Sort application_sort(const std::string& fn, std::span<const Sort> args) const;
  /// Infers the sort of `t` in scope `vars`; throws TypeError.
  Sort sort_of(const Term& t, const VarSorts& vars) const;
  /// Sort-checks `p` in scope `vars`; throws TypeError.
  void check_pred(const Pred& p, const VarSorts& vars) const;

  const std::string& file() const { return file_; }

 private:
  friend TypeEnv check_types(const SourceModule& m);

  std::string file_;
  std::map<std::string, DataInfo> data_;
  std::map<std::string, ConstructorInfo> constructors_;
  std::map<std::string, FunctionInfo> functions_;
  std::vector<std::string> function_order_;
  std::vector<std::string> data_order_;
};

/// Sort checks a desugared module and builds the environment. The prelude's
/// `data List a = Nil | Cons a (List a)` is injected first.
///
/// Throws TypeError, or MeasureShapeError for an ill-shaped `measure`.
TypeEnv check_types(const SourceModule& m);

/// Every refinement and metric only applies lifted (measure or reflect)
/// functions and only mentions binders in scope. Throws WfError.
void check_refinement_wf(const TypeEnv& env);

/// Binds the variables of `p` when matched against a value of sort `s`.
void bind_pattern(const TypeEnv& env, const Pattern& p, const Sort& s, VarSorts& out);

}  // namespace eqcheck

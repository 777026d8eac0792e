#pragma once

#include <map>
#include <string>
#include <vector>

#include "eqcheck/errors.hpp"

namespace eqcheck {

/// Erased type of a term. Type variables whose name starts with '?' are
/// unification metavariables; all others are rigid.
struct Sort {
  enum class Kind { Int, Bool, Proof, Var, Data };

  Kind kind = Kind::Proof;
  std::string name;
  std::vector<Sort> args;

  static Sort integer() { return Sort{Kind::Int, {}, {}}; }
  static Sort boolean() { return Sort{Kind::Bool, {}, {}}; }
  static Sort proof() { return Sort{Kind::Proof, {}, {}}; }
  static Sort var(std::string n) { return Sort{Kind::Var, std::move(n), {}}; }
  static Sort data(std::string n, std::vector<Sort> a = {}) {
    return Sort{Kind::Data, std::move(n), std::move(a)};
  }

  bool is_int() const { return kind == Kind::Int; }
  bool is_data() const { return kind == Kind::Data; }
  bool is_meta() const { return kind == Kind::Var && !name.empty() && name[0] == '?'; }

  friend bool operator==(const Sort&, const Sort&) = default;
};

std::string to_string(const Sort& s);

using VarSorts = std::map<std::string, Sort>;

/// First-order unification with metavariables; rigid variables only unify
/// with themselves.
class Unifier {
 public:
  Sort fresh();
  Sort resolve(const Sort& s) const;
  /// Throws TypeError at `span` when the sorts clash.
  void unify(const Sort& expected, const Sort& found, const Span& span);
  bool try_unify(const Sort& a, const Sort& b);
  /// Replaces the named rigid variables by fresh metavariables.
  Sort instantiate(const Sort& s, std::map<std::string, Sort>& mapping);

 private:
  bool occurs(const std::string& meta, const Sort& s) const;

  std::map<std::string, Sort> subst_;
  int counter_ = 0;
};

}  // namespace eqcheck

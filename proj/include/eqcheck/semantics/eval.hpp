#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqcheck/semantics/value.hpp"
#include "eqcheck/types/env.hpp"

namespace eqcheck {

constexpr std::uint64_t kDefaultFuel = 1'000'000;

class EvalError : public std::runtime_error {
 public:
  enum class Kind { FuelExhausted, MatchFailure };
  EvalError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class UnsupportedSort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
struct Program;
}

/// Strict evaluator. Function clauses are compiled once into slot-addressed
/// code; first matching clause wins. A proof chain yields its last
/// right-hand side, or unit after `*** QED`; the other parts are only
/// evaluated when forced with set_force_chains(true).
///
/// An Evaluator is not thread-safe; create one per thread.
class Evaluator {
 public:
  explicit Evaluator(const TypeEnv& env);
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  /// `t` may mention variables bound in `bindings`.
  Value eval(const Term& t, const std::map<std::string, Value>& bindings = {},
             std::uint64_t fuel = kDefaultFuel);

  /// Calls a declared function on argument values.
  Value call(const std::string& fn, std::span<const Value> args, std::uint64_t fuel = kDefaultFuel);

  /// Unfoldings used by the last eval() or call().
  std::uint64_t steps() const { return steps_; }

  const TypeEnv& env() const { return env_; }

  /// Deepest non-tail call nesting before evaluation gives up as if fuel had
  /// run out. Tail calls do not count. Running low on thread stack has the
  /// same effect.
  void set_depth_limit(std::size_t limit) { depth_limit_ = limit; }

  /// Also evaluate every chain step and hint that the chain discards.
  void set_force_chains(bool on) { force_chains_ = on; }

 private:
  struct Machine;

  const TypeEnv& env_;
  std::unique_ptr<detail::Program> prog_;
  std::uint64_t steps_ = 0;
  std::size_t depth_limit_ = 1'000'000;
  bool force_chains_ = false;
};

/// One-shot evaluation of a ground term.
Value evaluate(const TypeEnv& env, const Term& t, std::uint64_t fuel = kDefaultFuel);

/// All values of sort `s` with at most `size` constructor nodes that carry
/// fields (nullary constructors and literals are free), ordered by size and
/// then by constructor order. Ints range over `ints`.
std::vector<Value> enumerate_values(const TypeEnv& env, const Sort& s, std::size_t size,
                                    const std::vector<Integer>& ints = {});

}  // namespace eqcheck

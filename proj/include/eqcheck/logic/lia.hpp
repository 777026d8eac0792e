#pragma once

#include <map>
#include <vector>

#include "eqcheck/syntax/ast.hpp"

namespace eqcheck {

/// sum(coeffs[x] * x) + constant
struct LinExpr {
  std::map<int, Integer> coeffs;
  Integer constant;

  LinExpr& add(const LinExpr& o, const Integer& scale = 1);
};

/// `expr <= 0`, or `expr == 0` when `eq`.
struct LinConstraint {
  LinExpr expr;
  bool eq = false;
};

/// True when the constraints have no integer solution as far as
/// Fourier-Motzkin elimination with integer tightening can tell. False means
/// feasible or undetermined (the row budget ran out); never unsound.
bool lia_infeasible(std::vector<LinConstraint> cs, std::size_t row_limit = 4000);

}  // namespace eqcheck

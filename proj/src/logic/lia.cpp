#include "eqcheck/logic/lia.hpp"

#include <algorithm>
#include <set>

namespace eqcheck {

LinExpr& LinExpr::add(const LinExpr& o, const Integer& scale) {
  for (const auto& [x, c] : o.coeffs) {
    auto& slot = coeffs[x];
    slot += scale * c;
    if (slot == 0) coeffs.erase(x);
  }
  constant += scale * o.constant;
  return *this;
}

namespace {

Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// floor(a / b) for b > 0
Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

enum class Norm { Ok, Trivial, Infeasible };

// Divides by the gcd of the coefficients; `<=` rows round their bound down,
// which keeps exactly the integer solutions.
Norm normalize(LinConstraint& c) {
  Integer g = 0;
  for (const auto& [x, a] : c.expr.coeffs) g = gcd(g, a);
  if (g == 0) {
    if (c.eq) return c.expr.constant == 0 ? Norm::Trivial : Norm::Infeasible;
    return c.expr.constant <= 0 ? Norm::Trivial : Norm::Infeasible;
  }
  if (g != 1) {
    for (auto& [x, a] : c.expr.coeffs) a /= g;
    if (c.eq) {
      if (c.expr.constant % g != 0) return Norm::Infeasible;
      c.expr.constant /= g;
    } else {
      // sum a x <= -k  becomes  sum (a/g) x <= floor(-k/g)
      c.expr.constant = -floor_div(-c.expr.constant, g);
    }
  }
  return Norm::Ok;
}

struct RowKey {
  const LinConstraint* c;
  bool operator<(const RowKey& o) const {
    if (c->expr.coeffs != o.c->expr.coeffs) return c->expr.coeffs < o.c->expr.coeffs;
    return c->expr.constant < o.c->expr.constant;
  }
};

}  // namespace

bool lia_infeasible(std::vector<LinConstraint> cs, std::size_t row_limit) {
  // Normalize and drop trivial rows.
  std::vector<LinConstraint> rows;
  std::vector<LinConstraint> eqs;
  for (auto& c : cs) {
    switch (normalize(c)) {
      case Norm::Infeasible:
        return true;
      case Norm::Trivial:
        continue;
      case Norm::Ok:
        (c.eq ? eqs : rows).push_back(std::move(c));
    }
  }

  // Eliminate equalities by substitution.
  while (!eqs.empty()) {
    LinConstraint e = std::move(eqs.back());
    eqs.pop_back();
    if (e.expr.coeffs.empty()) {
      if (e.expr.constant != 0) return true;
      continue;
    }
    // Prefer a unit coefficient so that no scaling is needed.
    auto pick = e.expr.coeffs.begin();
    for (auto it = e.expr.coeffs.begin(); it != e.expr.coeffs.end(); ++it) {
      if (abs(it->second) == 1) {
        pick = it;
        break;
      }
    }
    int x = pick->first;
    Integer a = pick->second;
    Integer sa = a < 0 ? -1 : 1;
    auto eliminate = [&](LinConstraint& r) -> Norm {
      auto it = r.expr.coeffs.find(x);
      if (it == r.expr.coeffs.end()) return Norm::Ok;
      Integer c = it->second;
      LinExpr n;
      n.add(r.expr, a * sa);
      n.add(e.expr, -c * sa);
      r.expr = std::move(n);
      return normalize(r);
    };
    for (std::vector<LinConstraint>* group : {&eqs, &rows}) {
      std::vector<LinConstraint> kept;
      for (auto& r : *group) {
        switch (eliminate(r)) {
          case Norm::Infeasible:
            return true;
          case Norm::Trivial:
            break;
          case Norm::Ok:
            kept.push_back(std::move(r));
        }
      }
      *group = std::move(kept);
    }
  }

  // Fourier-Motzkin on the inequalities.
  for (;;) {
    std::set<int> vars;
    for (const auto& r : rows) {
      for (const auto& [x, a] : r.expr.coeffs) vars.insert(x);
    }
    if (vars.empty()) return false;

    int best = -1;
    std::size_t best_cost = 0;
    for (int x : vars) {
      std::size_t pos = 0, neg = 0;
      for (const auto& r : rows) {
        auto it = r.expr.coeffs.find(x);
        if (it == r.expr.coeffs.end()) continue;
        (it->second > 0 ? pos : neg)++;
      }
      std::size_t cost = pos * neg;
      if (best < 0 || cost < best_cost) {
        best = x;
        best_cost = cost;
      }
    }

    std::vector<LinConstraint> lower, upper, next;
    for (auto& r : rows) {
      auto it = r.expr.coeffs.find(best);
      if (it == r.expr.coeffs.end()) {
        next.push_back(std::move(r));
      } else if (it->second > 0) {
        upper.push_back(std::move(r));
      } else {
        lower.push_back(std::move(r));
      }
    }
    for (const auto& u : upper) {
      for (const auto& l : lower) {
        Integer cu = u.expr.coeffs.at(best);
        Integer cl = -l.expr.coeffs.at(best);
        LinConstraint c;
        c.expr.add(u.expr, cl);
        c.expr.add(l.expr, cu);
        switch (normalize(c)) {
          case Norm::Infeasible:
            return true;
          case Norm::Trivial:
            break;
          case Norm::Ok:
            next.push_back(std::move(c));
        }
      }
    }
    // Drop duplicates.
    std::set<RowKey> seen;
    rows.clear();
    std::vector<LinConstraint> unique;
    unique.reserve(next.size());
    for (auto& r : next) unique.push_back(std::move(r));
    for (auto& r : unique) {
      if (seen.insert(RowKey{&r}).second) rows.push_back(r);
    }
    if (rows.size() > row_limit) return false;
  }
}

}  // namespace eqcheck

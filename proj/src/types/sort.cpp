#include "eqcheck/types/sort.hpp"

namespace eqcheck {

std::string to_string(const Sort& s) {
  switch (s.kind) {
    case Sort::Kind::Int:
      return "Int";
    case Sort::Kind::Bool:
      return "Bool";
    case Sort::Kind::Proof:
      return "Proof";
    case Sort::Kind::Var:
      return s.name;
    case Sort::Kind::Data:
      break;
  }
  std::string out = s.name;
  for (const auto& a : s.args) {
    std::string inner = to_string(a);
    out += " " + (a.kind == Sort::Kind::Data && !a.args.empty() ? "(" + inner + ")" : inner);
  }
  return out;
}

Sort Unifier::fresh() { return Sort::var("?" + std::to_string(counter_++)); }

Sort Unifier::resolve(const Sort& s) const {
  if (s.is_meta()) {
    auto it = subst_.find(s.name);
    if (it != subst_.end()) return resolve(it->second);
    return s;
  }
  if (s.args.empty()) return s;
  Sort out = s;
  for (auto& a : out.args) a = resolve(a);
  return out;
}

bool Unifier::occurs(const std::string& meta, const Sort& s) const {
  Sort r = resolve(s);
  if (r.is_meta()) return r.name == meta;
  for (const auto& a : r.args) {
    if (occurs(meta, a)) return true;
  }
  return false;
}

bool Unifier::try_unify(const Sort& a0, const Sort& b0) {
  Sort a = resolve(a0), b = resolve(b0);
  if (a.is_meta() && b.is_meta() && a.name == b.name) return true;
  if (a.is_meta()) {
    if (occurs(a.name, b)) return false;
    subst_[a.name] = b;
    return true;
  }
  if (b.is_meta()) return try_unify(b, a);
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!try_unify(a.args[i], b.args[i])) return false;
  }
  return true;
}

void Unifier::unify(const Sort& expected, const Sort& found, const Span& span) {
  if (try_unify(expected, found)) return;
  throw TypeError("sort mismatch: expected " + to_string(resolve(expected)) + ", found " +
                      to_string(resolve(found)),
                  span);
}

Sort Unifier::instantiate(const Sort& s, std::map<std::string, Sort>& mapping) {
  if (s.kind == Sort::Kind::Var && !s.is_meta()) {
    auto it = mapping.find(s.name);
    if (it != mapping.end()) return it->second;
    Sort m = fresh();
    mapping.emplace(s.name, m);
    return m;
  }
  Sort out = s;
  for (auto& a : out.args) a = instantiate(a, mapping);
  return out;
}

}  // namespace eqcheck

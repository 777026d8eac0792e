#include "eqcheck/wf/totality.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace eqcheck {

namespace {

Sort substitute(const Sort& s, const std::map<std::string, Sort>& m) {
  if (s.kind == Sort::Kind::Var) {
    auto it = m.find(s.name);
    return it == m.end() ? s : it->second;
  }
  Sort out = s;
  for (auto& a : out.args) a = substitute(a, m);
  return out;
}

bool is_wild(const Pattern& p) { return p.kind == PatternKind::Var || p.kind == PatternKind::Wild; }

// Constructor names of a finite sort, or empty for Int, Proof and type
// variables.
std::vector<std::string> signature_of(const TypeEnv& env, const Sort& s) {
  if (s.kind == Sort::Kind::Bool) return {"true", "false"};
  if (s.kind == Sort::Kind::Data) {
    if (const auto* d = env.data(s.name)) return d->constructors;
  }
  return {};
}

bool head_is(const Pattern& p, const std::string& c) {
  if (p.kind == PatternKind::Con) return p.name == c;
  if (p.kind == PatternKind::Bool) return (p.flag ? "true" : "false") == c;
  return false;
}

Pattern make_head(const std::string& c, std::vector<Pattern> args) {
  if (c == "true" || c == "false") return Pattern::bool_lit(c == "true");
  return Pattern::con(c, std::move(args));
}

std::vector<Sort> head_fields(const TypeEnv& env, const std::string& c, const Sort& s) {
  if (s.kind == Sort::Kind::Bool) return {};
  return field_sorts(env, *env.constructor(c), s);
}

using Matrix = std::vector<PatternRow>;

PatternRow tail(const PatternRow& r, std::size_t from) { return PatternRow(r.begin() + from, r.end()); }

// Rows uncovered by `m`, one pattern per column.
std::vector<PatternRow> missing(const TypeEnv& env, const Matrix& m, const std::vector<Sort>& sorts) {
  if (sorts.empty()) {
    if (m.empty()) return {PatternRow{}};
    return {};
  }
  if (m.empty()) return {PatternRow(sorts.size(), Pattern::wild())};

  std::vector<Sort> rest_sorts(sorts.begin() + 1, sorts.end());
  bool any_refutable = false;
  for (const auto& r : m) any_refutable = any_refutable || !is_wild(r[0]);

  auto with_default = [&](const Pattern& head) {
    Matrix d;
    for (const auto& r : m) {
      if (is_wild(r[0])) d.push_back(tail(r, 1));
    }
    std::vector<PatternRow> out;
    for (auto& w : missing(env, d, rest_sorts)) {
      PatternRow row{head};
      row.insert(row.end(), w.begin(), w.end());
      out.push_back(std::move(row));
    }
    return out;
  };

  if (!any_refutable) return with_default(Pattern::wild());

  const Sort& s = sorts[0];
  auto cons = signature_of(env, s);
  std::vector<PatternRow> out;
  if (!cons.empty()) {
    for (const auto& c : cons) {
      auto fs = head_fields(env, c, s);
      Matrix spec;
      for (const auto& r : m) {
        if (is_wild(r[0])) {
          PatternRow row(fs.size(), Pattern::wild());
          auto t = tail(r, 1);
          row.insert(row.end(), t.begin(), t.end());
          spec.push_back(std::move(row));
        } else if (head_is(r[0], c)) {
          PatternRow row = r[0].args;
          auto t = tail(r, 1);
          row.insert(row.end(), t.begin(), t.end());
          spec.push_back(std::move(row));
        }
      }
      std::vector<Sort> ss = fs;
      ss.insert(ss.end(), rest_sorts.begin(), rest_sorts.end());
      for (auto& w : missing(env, spec, ss)) {
        PatternRow args(w.begin(), w.begin() + fs.size());
        PatternRow row{make_head(c, std::move(args))};
        row.insert(row.end(), w.begin() + fs.size(), w.end());
        out.push_back(std::move(row));
      }
    }
    return out;
  }

  // Integer literals: each literal column value, then everything else.
  std::vector<Integer> lits;
  for (const auto& r : m) {
    if (r[0].kind == PatternKind::Int &&
        std::find(lits.begin(), lits.end(), r[0].value) == lits.end()) {
      lits.push_back(r[0].value);
    }
  }
  for (const auto& k : lits) {
    Matrix spec;
    for (const auto& r : m) {
      if (is_wild(r[0]) || (r[0].kind == PatternKind::Int && r[0].value == k)) spec.push_back(tail(r, 1));
    }
    for (auto& w : missing(env, spec, rest_sorts)) {
      PatternRow row{Pattern::int_lit(k)};
      row.insert(row.end(), w.begin(), w.end());
      out.push_back(std::move(row));
    }
  }
  auto d = with_default(Pattern::wild());
  out.insert(out.end(), d.begin(), d.end());
  return out;
}

struct Subtractor {
  const TypeEnv& env;
  int counter = 0;

  Pattern fresh(const std::string& base) {
    std::string stem = base.empty() ? "w" : base.substr(0, base.find('#'));
    return Pattern::var(stem + "#" + std::to_string(++counter));
  }

  // Rows covered by `vs` but not by `qs`; columns have sorts `sorts`.
  std::vector<PatternRow> subtract(const PatternRow& vs, const PatternRow& qs, const std::vector<Sort>& sorts) {
    if (vs.empty()) return {};
    const Pattern& v = vs[0];
    const Pattern& q = qs[0];
    PatternRow vrest = tail(vs, 1), qrest = tail(qs, 1);
    std::vector<Sort> srest(sorts.begin() + 1, sorts.end());

    auto prefix = [](const Pattern& head, std::vector<PatternRow> rows) {
      for (auto& r : rows) r.insert(r.begin(), head);
      return rows;
    };

    if (is_wild(q)) return prefix(v, subtract(vrest, qrest, srest));

    if (q.kind == PatternKind::Int) {
      if (v.kind == PatternKind::Int && v.value == q.value) return prefix(v, subtract(vrest, qrest, srest));
      return {vs};
    }

    std::string qc = q.kind == PatternKind::Bool ? (q.flag ? "true" : "false") : q.name;
    if (!is_wild(v)) {
      if (!head_is(v, qc)) return {vs};
      auto fs = head_fields(env, qc, sorts[0]);
      PatternRow vv = v.args, qq = q.args;
      vv.insert(vv.end(), vrest.begin(), vrest.end());
      qq.insert(qq.end(), qrest.begin(), qrest.end());
      fs.insert(fs.end(), srest.begin(), srest.end());
      std::vector<PatternRow> out;
      std::size_t n = v.args.size();
      for (auto& r : subtract(vv, qq, fs)) {
        Pattern head = v;
        head.args.assign(r.begin(), r.begin() + n);
        PatternRow row{head};
        row.insert(row.end(), r.begin() + n, r.end());
        out.push_back(std::move(row));
      }
      return out;
    }

    // Split the variable over every constructor of its sort.
    std::vector<PatternRow> out;
    for (const auto& c : signature_of(env, sorts[0])) {
      auto fs = head_fields(env, c, sorts[0]);
      std::vector<Pattern> args;
      for (std::size_t i = 0; i < fs.size(); ++i) args.push_back(fresh(v.name));
      Pattern head = make_head(c, std::move(args));
      head.span = v.span;
      if (v.kind == PatternKind::Var && v.name.find('#') == std::string::npos) head.alias = v.name;
      PatternRow row{head};
      row.insert(row.end(), vrest.begin(), vrest.end());
      if (c != qc) {
        out.push_back(std::move(row));
      } else {
        for (auto& r : subtract(row, qs, sorts)) out.push_back(std::move(r));
      }
    }
    return out;
  }
};

std::vector<Sort> param_sorts(const FunctionInfo& f) {
  std::vector<Sort> out;
  for (const auto& p : f.sig.params) out.push_back(p.sort);
  return out;
}

}  // namespace

std::vector<Sort> field_sorts(const TypeEnv& env, const ConstructorInfo& con, const Sort& s) {
  (void)env;
  std::map<std::string, Sort> m;
  for (std::size_t i = 0; i < con.params.size() && i < s.args.size(); ++i) m[con.params[i]] = s.args[i];
  std::vector<Sort> out;
  for (const auto& f : con.fields) out.push_back(substitute(f, m));
  return out;
}

TotalityResult check_totality(const FunctionInfo& f, const TypeEnv& env) {
  Matrix m;
  for (const auto& c : f.decl.clauses) m.push_back(c.patterns);
  TotalityResult r;
  r.missing = missing(env, m, param_sorts(f));
  r.total = r.missing.empty();
  return r;
}

std::vector<PatternRow> residual_rows(const FunctionInfo& f, std::size_t index, const TypeEnv& env) {
  auto sorts = param_sorts(f);
  Subtractor sub{env};
  std::vector<PatternRow> rows{f.decl.clauses.at(index).patterns};
  for (std::size_t j = 0; j < index; ++j) {
    std::vector<PatternRow> next;
    for (const auto& r : rows) {
      for (auto& s : sub.subtract(r, f.decl.clauses[j].patterns, sorts)) next.push_back(std::move(s));
    }
    rows = std::move(next);
  }
  return rows;
}

}  // namespace eqcheck

#include "eqcheck/types/env.hpp"

#include <algorithm>
#include <set>

#include "eqcheck/syntax/subst.hpp"

namespace eqcheck {

bool FunSig::has_refined_params() const {
  return std::any_of(params.begin(), params.end(), [](const ParamInfo& p) { return p.refined; });
}

const DataInfo* TypeEnv::data(const std::string& name) const {
  auto it = data_.find(name);
  return it == data_.end() ? nullptr : &it->second;
}

const ConstructorInfo* TypeEnv::constructor(const std::string& name) const {
  auto it = constructors_.find(name);
  return it == constructors_.end() ? nullptr : &it->second;
}

const FunctionInfo* TypeEnv::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

std::vector<const FunctionInfo*> TypeEnv::measures_on(const std::string& data) const {
  std::vector<const FunctionInfo*> out;
  for (const auto& name : function_order_) {
    const auto& f = functions_.at(name);
    if (f.measure && f.sig.arity() == 1 && f.sig.params[0].sort.is_data() &&
        f.sig.params[0].sort.name == data) {
      out.push_back(&f);
    }
  }
  return out;
}

namespace {

// Sort inference over terms and predicates with one Unifier per check.
class Checker {
 public:
  explicit Checker(const TypeEnv& env) : env_(env) {}

  Unifier& unifier() { return u_; }

  Sort infer(const Term& t, const VarSorts& vars) {
    switch (t.kind) {
      case TermKind::Var: {
        auto it = vars.find(t.name);
        if (it != vars.end()) return it->second;
        if (env_.function(t.name)) {
          throw TypeError("function '" + t.name + "' must be fully applied", t.span);
        }
        throw TypeError("unbound variable '" + t.name + "'", t.span);
      }
      case TermKind::IntLit:
        return Sort::integer();
      case TermKind::BoolLit:
        return Sort::boolean();
      case TermKind::UnitLit:
        return Sort::proof();
      case TermKind::PrimOp: {
        for (const auto& a : t.args) u_.unify(Sort::integer(), infer(a, vars), a.span);
        if (t.op == PrimOpKind::Mul && t.args[0].kind != TermKind::IntLit &&
            t.args[1].kind != TermKind::IntLit) {
          throw TypeError("multiplication needs a literal operand", t.span);
        }
        return Sort::integer();
      }
      case TermKind::Con: {
        const auto* c = env_.constructor(t.name);
        if (!c) throw TypeError("unknown constructor '" + t.name + "'", t.span);
        if (c->fields.size() != t.args.size()) {
          throw TypeError("constructor '" + t.name + "' expects " + std::to_string(c->fields.size()) +
                              " arguments, got " + std::to_string(t.args.size()),
                          t.span);
        }
        std::map<std::string, Sort> inst;
        for (std::size_t i = 0; i < t.args.size(); ++i) {
          u_.unify(u_.instantiate(c->fields[i], inst), infer(t.args[i], vars), t.args[i].span);
        }
        return data_result(*c, inst);
      }
      case TermKind::App: {
        const auto* f = env_.function(t.name);
        if (!f) throw TypeError("unknown function '" + t.name + "'", t.span);
        if (f->sig.arity() != t.args.size()) {
          throw TypeError("function '" + t.name + "' expects " + std::to_string(f->sig.arity()) +
                              " arguments, got " + std::to_string(t.args.size()),
                          t.span);
        }
        std::map<std::string, Sort> inst;
        for (std::size_t i = 0; i < t.args.size(); ++i) {
          u_.unify(u_.instantiate(f->sig.params[i].sort, inst), infer(t.args[i], vars),
                   t.args[i].span);
        }
        return u_.instantiate(f->sig.result, inst);
      }
      case TermKind::ListLit:
      case TermKind::ConsSugar:
        throw TypeError("list sugar must be desugared before sort checking", t.span);
    }
    return Sort::proof();
  }

  void check_pred(const Pred& p, const VarSorts& vars) {
    switch (p.kind) {
      case PredKind::True:
      case PredKind::False:
        return;
      case PredKind::And:
      case PredKind::Or:
      case PredKind::Not:
        for (const auto& q : p.parts) check_pred(q, vars);
        return;
      case PredKind::Atom:
        break;
    }
    Sort a = infer(p.terms[0], vars);
    Sort b = infer(p.terms[1], vars);
    if (p.rel == Rel::Eq || p.rel == Rel::Ne) {
      u_.unify(a, b, p.span);
      return;
    }
    u_.unify(Sort::integer(), a, p.terms[0].span);
    u_.unify(Sort::integer(), b, p.terms[1].span);
  }

  void bind(const Pattern& p, const Sort& expected, VarSorts& out) {
    if (!p.alias.empty()) out[p.alias] = expected;
    switch (p.kind) {
      case PatternKind::Var:
        out[p.name] = expected;
        return;
      case PatternKind::Wild:
        return;
      case PatternKind::Int:
        u_.unify(expected, Sort::integer(), p.span);
        return;
      case PatternKind::Bool:
        u_.unify(expected, Sort::boolean(), p.span);
        return;
      case PatternKind::Con:
        break;
    }
    const auto* c = env_.constructor(p.name);
    if (!c) throw TypeError("unknown constructor '" + p.name + "'", p.span);
    if (c->fields.size() != p.args.size()) {
      throw TypeError("constructor '" + p.name + "' expects " + std::to_string(c->fields.size()) +
                          " arguments in pattern, got " + std::to_string(p.args.size()),
                      p.span);
    }
    std::map<std::string, Sort> inst;
    std::vector<Sort> fields;
    for (const auto& f : c->fields) fields.push_back(u_.instantiate(f, inst));
    u_.unify(expected, data_result(*c, inst), p.span);
    for (std::size_t i = 0; i < p.args.size(); ++i) bind(p.args[i], fields[i], out);
  }

  Sort data_result(const ConstructorInfo& c, std::map<std::string, Sort>& inst) {
    std::vector<Sort> args;
    for (const auto& prm : c.params) args.push_back(u_.instantiate(Sort::var(prm), inst));
    return Sort::data(c.data, std::move(args));
  }

  VarSorts resolved(const VarSorts& vars) const {
    VarSorts out;
    for (const auto& [k, v] : vars) out.emplace(k, u_.resolve(v));
    return out;
  }

 private:
  const TypeEnv& env_;
  Unifier u_;
};

Sort to_sort(const BaseType& b, const std::map<std::string, const DataDecl*>& decls,
             const std::set<std::string>* allowed_vars, std::set<std::string>* seen_vars) {
  switch (b.kind) {
    case BaseKind::Int:
      return Sort::integer();
    case BaseKind::Bool:
      return Sort::boolean();
    case BaseKind::Proof:
      return Sort::proof();
    case BaseKind::TyVar:
      if (allowed_vars && !allowed_vars->count(b.name)) {
        throw TypeError("type variable '" + b.name + "' is not in scope", b.span);
      }
      if (seen_vars) seen_vars->insert(b.name);
      return Sort::var(b.name);
    case BaseKind::Data:
      break;
  }
  auto it = decls.find(b.name);
  if (it == decls.end()) throw TypeError("unknown type '" + b.name + "'", b.span);
  if (it->second->params.size() != b.args.size()) {
    throw TypeError("type '" + b.name + "' expects " + std::to_string(it->second->params.size()) +
                        " arguments, got " + std::to_string(b.args.size()),
                    b.span);
  }
  std::vector<Sort> args;
  for (const auto& a : b.args) args.push_back(to_sort(a, decls, allowed_vars, seen_vars));
  return Sort::data(b.name, std::move(args));
}

DataDecl prelude_list() {
  DataDecl d;
  d.name = "List";
  d.params = {"a"};
  BaseType a{BaseKind::TyVar, "a", {}, {}};
  BaseType list{BaseKind::Data, "List", {a}, {}};
  d.constructors.push_back(DataCon{"Nil", {}, {}});
  d.constructors.push_back(DataCon{"Cons", {a, list}, {}});
  return d;
}

bool is_shallow(const Pattern& p) {
  if (p.kind != PatternKind::Con) return false;
  return std::all_of(p.args.begin(), p.args.end(), [](const Pattern& a) {
    return a.kind == PatternKind::Var || a.kind == PatternKind::Wild;
  });
}

bool only_measure_calls(const Term& t, const TypeEnv& env) {
  if (t.kind == TermKind::App) {
    const auto* f = env.function(t.name);
    if (!f || !f->measure) return false;
  }
  return std::all_of(t.args.begin(), t.args.end(),
                     [&](const Term& a) { return only_measure_calls(a, env); });
}

void check_measure_shape(const FunctionInfo& f, const TypeEnv& env, const Span& at) {
  const auto& name = f.name();
  if (f.sig.arity() != 1) {
    throw MeasureShapeError("measure '" + name + "' takes " + std::to_string(f.sig.arity()) +
                                " arguments; a measure takes exactly one",
                            at);
  }
  const Sort& arg = f.sig.params[0].sort;
  const DataInfo* d = arg.is_data() ? env.data(arg.name) : nullptr;
  if (!d) throw MeasureShapeError("measure '" + name + "' must take an algebraic data type", at);
  std::set<std::string> covered;
  for (const auto& c : f.decl.clauses) {
    const Pattern& p = c.patterns[0];
    if (!is_shallow(p)) {
      throw MeasureShapeError("measure '" + name + "' needs one shallow constructor pattern per clause",
                              c.span);
    }
    if (!covered.insert(p.name).second) {
      throw MeasureShapeError("measure '" + name + "' has two clauses for '" + p.name + "'", c.span);
    }
    const auto* body = std::get_if<Term>(&c.body);
    if (!body) throw MeasureShapeError("measure '" + name + "' body must be a plain term", c.span);
    if (!only_measure_calls(*body, env)) {
      throw MeasureShapeError("measure '" + name + "' may only call primitives and measures", c.span);
    }
  }
  for (const auto& con : d->constructors) {
    if (!covered.count(con)) {
      throw MeasureShapeError("measure '" + name + "' has no clause for '" + con + "'", at);
    }
  }
}

}  // namespace

Sort TypeEnv::constructor_sort(const std::string& con, std::span<const Sort> args) const {
  Checker ch(*this);
  const auto* c = constructor(con);
  if (!c || c->fields.size() != args.size()) throw TypeError("bad constructor application '" + con + "'", {});
  std::map<std::string, Sort> inst;
  for (std::size_t i = 0; i < args.size(); ++i) {
    ch.unifier().unify(ch.unifier().instantiate(c->fields[i], inst), args[i], {});
  }
  return ch.unifier().resolve(ch.data_result(*c, inst));
}

Sort TypeEnv::application_sort(const std::string& fn, std::span<const Sort> args) const {
  Checker ch(*this);
  const auto* f = function(fn);
  if (!f || f->sig.arity() != args.size()) throw TypeError("bad application of '" + fn + "'", {});
  std::map<std::string, Sort> inst;
  for (std::size_t i = 0; i < args.size(); ++i) {
    ch.unifier().unify(ch.unifier().instantiate(f->sig.params[i].sort, inst), args[i], {});
  }
  return ch.unifier().resolve(ch.unifier().instantiate(f->sig.result, inst));
}

Sort TypeEnv::sort_of(const Term& t, const VarSorts& vars) const {
  Checker ch(*this);
  return ch.unifier().resolve(ch.infer(t, vars));
}

void TypeEnv::check_pred(const Pred& p, const VarSorts& vars) const {
  Checker ch(*this);
  ch.check_pred(p, vars);
}

void bind_pattern(const TypeEnv& env, const Pattern& p, const Sort& s, VarSorts& out) {
  Checker ch(env);
  VarSorts tmp;
  ch.bind(p, s, tmp);
  for (const auto& [k, v] : ch.resolved(tmp)) out[k] = v;
}

TypeEnv check_types(const SourceModule& m) {
  TypeEnv env;
  env.file_ = m.file;

  // Data declarations.
  std::vector<DataDecl> datas{prelude_list()};
  for (const auto& d : m.decls) {
    if (const auto* dd = std::get_if<DataDecl>(&d)) datas.push_back(*dd);
  }
  std::map<std::string, const DataDecl*> decls;
  for (const auto& d : datas) {
    if (!decls.emplace(d.name, &d).second) throw TypeError("duplicate data type '" + d.name + "'", d.span);
  }
  for (const auto& d : datas) {
    std::set<std::string> params(d.params.begin(), d.params.end());
    if (params.size() != d.params.size()) throw TypeError("repeated type parameter in '" + d.name + "'", d.span);
    DataInfo info{d.name, d.params, {}};
    for (std::size_t i = 0; i < d.constructors.size(); ++i) {
      const auto& c = d.constructors[i];
      ConstructorInfo ci{c.name, d.name, d.params, {}, i};
      for (const auto& f : c.fields) ci.fields.push_back(to_sort(f, decls, &params, nullptr));
      if (env.constructors_.count(c.name) || env.function(c.name)) {
        throw TypeError("duplicate constructor '" + c.name + "'", c.span);
      }
      env.constructors_.emplace(c.name, std::move(ci));
      info.constructors.push_back(c.name);
    }
    env.data_order_.push_back(d.name);
    env.data_.emplace(d.name, std::move(info));
  }

  // Signatures.
  for (const auto& d : m.decls) {
    const auto* fd = std::get_if<FunDecl>(&d);
    if (!fd) continue;
    FunctionInfo fi;
    fi.decl = *fd;
    std::set<std::string> tvs;
    std::set<std::string> names;
    for (std::size_t i = 0; i < fd->signature.params.size(); ++i) {
      const auto& p = fd->signature.params[i];
      ParamInfo pi;
      pi.name = p.name.empty() ? "_arg" + std::to_string(i) : p.name;
      if (!names.insert(pi.name).second) {
        throw TypeError("repeated parameter name '" + pi.name + "'", p.type.span);
      }
      pi.sort = to_sort(p.type.type, decls, nullptr, &tvs);
      pi.refined = p.type.refined && !p.type.pred.is_trivial();
      pi.pred = p.type.pred;
      if (p.type.refined && !p.type.binder.empty() && p.type.binder != pi.name) {
        pi.pred = subst(pi.pred, Subst{{p.type.binder, Term::var(pi.name)}});
      }
      pi.span = p.type.span;
      fi.sig.params.push_back(std::move(pi));
    }
    const auto& r = fd->signature.result;
    fi.sig.result = to_sort(r.type, decls, nullptr, &tvs);
    fi.sig.value_binder = r.binder;
    fi.sig.result_pred = r.pred;
    fi.sig.result_refined = r.refined && !r.pred.is_trivial();
    if (!r.binder.empty() && names.count(r.binder)) {
      throw TypeError("value binder '" + r.binder + "' shadows a parameter", r.span);
    }
    fi.sig.type_vars.assign(tvs.begin(), tvs.end());
    for (const auto& c : fd->clauses) {
      if (c.patterns.size() != fi.sig.arity()) {
        throw TypeError("clause of '" + fd->name + "' has " + std::to_string(c.patterns.size()) +
                            " patterns, signature has arity " + std::to_string(fi.sig.arity()),
                        c.span);
      }
    }
    if (env.constructors_.count(fd->name)) throw TypeError("'" + fd->name + "' is a constructor", fd->span);
    env.function_order_.push_back(fd->name);
    env.functions_.emplace(fd->name, std::move(fi));
  }

  for (const auto& a : m.annotations) {
    auto it = env.functions_.find(a.target);
    if (it == env.functions_.end()) {
      throw TypeError(std::string(to_string(a.kind)) + " annotation names unknown function '" + a.target + "'",
                      a.span);
    }
    switch (a.kind) {
      case AnnotationKind::Measure:
        it->second.measure = true;
        break;
      case AnnotationKind::Reflect:
        it->second.reflect = true;
        break;
      case AnnotationKind::Ple:
        it->second.ple = true;
        break;
    }
  }

  // Refinements, metrics and clause bodies.
  for (const auto& name : env.function_order_) {
    auto& fi = env.functions_.at(name);
    const auto& sig = fi.sig;
    VarSorts scope;
    for (const auto& p : sig.params) {
      scope[p.name] = p.sort;
      Checker ch(env);
      ch.check_pred(p.pred, scope);
    }
    {
      VarSorts rscope = scope;
      if (!sig.value_binder.empty()) rscope[sig.value_binder] = sig.result;
      Checker ch(env);
      ch.check_pred(sig.result_pred, rscope);
    }
    if (fi.decl.metric) {
      for (const auto& t : *fi.decl.metric) {
        Checker ch(env);
        ch.unifier().unify(Sort::integer(), ch.infer(t, scope), t.span);
      }
    }
    for (const auto& c : fi.decl.clauses) {
      Checker ch(env);
      VarSorts vars;
      for (std::size_t i = 0; i < c.patterns.size(); ++i) ch.bind(c.patterns[i], sig.params[i].sort, vars);
      if (const auto* t = std::get_if<Term>(&c.body)) {
        ch.unifier().unify(sig.result, ch.infer(*t, vars), t->span);
      } else {
        const auto& chain = std::get<ProofChain>(c.body);
        Sort s = ch.infer(chain.head, vars);
        for (const auto& step : chain.steps) {
          ch.unifier().unify(s, ch.infer(step.rhs, vars), step.rhs.span);
          for (const auto& h : step.hints) ch.unifier().unify(Sort::proof(), ch.infer(h, vars), h.span);
        }
        if (chain.qed) {
          if (sig.result.kind != Sort::Kind::Proof) {
            throw TypeError("chain ending in QED must belong to a Proof-valued function", chain.span);
          }
        } else {
          ch.unifier().unify(sig.result, s, chain.span);
        }
      }
      fi.clause_vars.push_back(ch.resolved(vars));
    }
    if (fi.ple && !fi.is_proof() && !sig.result_refined) {
      throw TypeError("ple annotation on '" + name + "', which has no refinement to check", fi.decl.span);
    }
  }

  for (const auto& a : m.annotations) {
    if (a.kind == AnnotationKind::Measure) check_measure_shape(env.functions_.at(a.target), env, a.span);
  }
  return env;
}

namespace {

void check_lifted(const Term& t, const TypeEnv& env, const std::string& where) {
  if (t.kind == TermKind::App) {
    const auto* f = env.function(t.name);
    if (!f || !f->lifted()) {
      throw WfError("unlifted function '" + t.name + "' used in " + where +
                        "; annotate it with measure or reflect",
                    t.span);
    }
  }
  for (const auto& a : t.args) check_lifted(a, env, where);
}

void check_lifted(const Pred& p, const TypeEnv& env, const std::string& where) {
  for (const auto& t : p.terms) check_lifted(t, env, where);
  for (const auto& q : p.parts) check_lifted(q, env, where);
}

void check_scope(const Pred& p, const std::set<std::string>& scope, const Span& at) {
  std::set<std::string> fv;
  free_vars(p, fv);
  for (const auto& v : fv) {
    if (!scope.count(v)) throw WfError("refinement mentions '" + v + "', which is not in scope", at);
  }
}

}  // namespace

void check_refinement_wf(const TypeEnv& env) {
  for (const auto& name : env.function_order()) {
    const auto& f = *env.function(name);
    std::set<std::string> scope;
    const std::string where = "the refinement of '" + name + "'";
    for (const auto& p : f.sig.params) {
      scope.insert(p.name);
      check_scope(p.pred, scope, p.span);
      check_lifted(p.pred, env, where);
    }
    std::set<std::string> rscope = scope;
    if (!f.sig.value_binder.empty()) rscope.insert(f.sig.value_binder);
    check_scope(f.sig.result_pred, rscope, f.decl.signature.result.span);
    check_lifted(f.sig.result_pred, env, where);
    if (f.decl.metric) {
      for (const auto& t : *f.decl.metric) {
        std::set<std::string> fv;
        free_vars(t, fv);
        for (const auto& v : fv) {
          if (!scope.count(v)) throw WfError("metric mentions '" + v + "', which is not a parameter", t.span);
        }
        check_lifted(t, env, "the metric of '" + name + "'");
      }
    }
  }
}

}  // namespace eqcheck

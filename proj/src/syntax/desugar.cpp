#include "eqcheck/syntax/desugar.hpp"

#include <set>

namespace eqcheck {
namespace {

struct Desugarer {
  std::set<std::string> nullary_functions;

  Term term(Term t) const {
    for (auto& a : t.args) a = term(std::move(a));
    switch (t.kind) {
      case TermKind::ListLit: {
        Term out = Term::con("Nil", {}, t.span);
        for (auto it = t.args.rbegin(); it != t.args.rend(); ++it) {
          std::vector<Term> args;
          args.push_back(std::move(*it));
          args.push_back(std::move(out));
          out = Term::con("Cons", std::move(args), t.span);
        }
        return out;
      }
      case TermKind::ConsSugar:
        return Term::con("Cons", std::move(t.args), t.span);
      case TermKind::Var:
        if (nullary_functions.count(t.name)) return Term::app(t.name, {}, t.span);
        return t;
      default:
        return t;
    }
  }

  Pred pred(Pred p) const {
    for (auto& t : p.terms) t = term(std::move(t));
    for (auto& q : p.parts) q = pred(std::move(q));
    return p;
  }

  void ref_base(RefBase& r) const { r.pred = pred(std::move(r.pred)); }

  void body(Body& b) const {
    if (auto* t = std::get_if<Term>(&b)) {
      *t = term(std::move(*t));
      return;
    }
    auto& chain = std::get<ProofChain>(b);
    chain.head = term(std::move(chain.head));
    for (auto& s : chain.steps) {
      s.rhs = term(std::move(s.rhs));
      for (auto& h : s.hints) h = term(std::move(h));
    }
  }
};

}  // namespace

SourceModule desugar(SourceModule m) {
  Desugarer d;
  for (const auto& decl : m.decls) {
    if (const auto* f = std::get_if<FunDecl>(&decl); f && f->signature.params.empty()) {
      d.nullary_functions.insert(f->name);
    }
  }
  for (auto& decl : m.decls) {
    auto* f = std::get_if<FunDecl>(&decl);
    if (!f) continue;
    for (auto& p : f->signature.params) d.ref_base(p.type);
    d.ref_base(f->signature.result);
    if (f->metric) {
      for (auto& t : *f->metric) t = d.term(std::move(t));
    }
    for (auto& c : f->clauses) d.body(c.body);
  }
  return m;
}

Term desugar_term(Term t) { return Desugarer{}.term(std::move(t)); }

Pred desugar_pred(Pred p) { return Desugarer{}.pred(std::move(p)); }

bool is_desugared(const Term& t) {
  if (t.kind == TermKind::ListLit || t.kind == TermKind::ConsSugar) return false;
  for (const auto& a : t.args) {
    if (!is_desugared(a)) return false;
  }
  return true;
}

}  // namespace eqcheck

#include "eqcheck/syntax/pretty.hpp"

#include <sstream>

namespace eqcheck {
namespace {

// Precedence levels: 5 for `:`/`++` (right-assoc), 6 for `+`/`-`, 7 for `*`,
// 10 for application, 11 for atoms.
std::string term_at(const Term& t, int ctx);

std::string paren_if(bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; }

std::string int_text(const Integer& v) {
  std::string s = v.str();
  return v < 0 ? "(" + s + ")" : s;
}

std::string infixr5(const Term& lhs, const char* op, const Term& rhs, int ctx) {
  return paren_if(ctx > 5, term_at(lhs, 6) + " " + op + " " + term_at(rhs, 5));
}

std::string apply(const std::string& head, const std::vector<Term>& args, int ctx) {
  if (args.empty()) return head;
  std::string s = head;
  for (const auto& a : args) s += " " + term_at(a, 11);
  return paren_if(ctx > 10, s);
}

std::string term_at(const Term& t, int ctx) {
  switch (t.kind) {
    case TermKind::Var:
      return t.name;
    case TermKind::IntLit:
      return int_text(t.value);
    case TermKind::BoolLit:
      return t.flag ? "true" : "false";
    case TermKind::UnitLit:
      return "()";
    case TermKind::Con:
      if (t.name == "Nil" && t.args.empty()) return "[]";
      if (t.name == "Cons" && t.args.size() == 2) return infixr5(t.args[0], ":", t.args[1], ctx);
      return apply(t.name, t.args, ctx);
    case TermKind::App:
      if (t.name == "append" && t.args.size() == 2) return infixr5(t.args[0], "++", t.args[1], ctx);
      return apply(t.name, t.args, ctx);
    case TermKind::PrimOp: {
      if (t.op == PrimOpKind::Mul) {
        return paren_if(ctx > 7, term_at(t.args[0], 7) + " * " + term_at(t.args[1], 8));
      }
      const char* op = t.op == PrimOpKind::Add ? " + " : " - ";
      return paren_if(ctx > 6, term_at(t.args[0], 6) + op + term_at(t.args[1], 7));
    }
    case TermKind::ListLit: {
      std::string s = "[";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += term_at(t.args[i], 0);
      }
      return s + "]";
    }
    case TermKind::ConsSugar:
      return infixr5(t.args[0], ":", t.args[1], ctx);
  }
  return "?";
}

std::string pred_at(const Pred& p, int ctx) {
  switch (p.kind) {
    case PredKind::True:
      return "true";
    case PredKind::False:
      return "false";
    case PredKind::Atom:
      return paren_if(ctx > 4, term_at(p.terms[0], 0) + " " + to_string(p.rel) + " " +
                                   term_at(p.terms[1], 0));
    case PredKind::Not:
      return paren_if(ctx > 3, "not " + pred_at(p.parts[0], 3));
    case PredKind::And:
    case PredKind::Or: {
      bool is_and = p.kind == PredKind::And;
      int level = is_and ? 2 : 1;
      std::string s;
      for (std::size_t i = 0; i < p.parts.size(); ++i) {
        if (i) s += is_and ? " && " : " || ";
        s += pred_at(p.parts[i], level + 1);
      }
      return paren_if(ctx > level, s);
    }
  }
  return "?";
}

// `level`: 0 = inside a cons chain tail, 1 = cons head (application allowed),
// 2 = atom.
std::string pattern_at(const Pattern& p, int level) {
  switch (p.kind) {
    case PatternKind::Var:
      return p.name;
    case PatternKind::Wild:
      return "_";
    case PatternKind::Int:
      return int_text(p.value);
    case PatternKind::Bool:
      return p.flag ? "true" : "false";
    case PatternKind::Con:
      break;
  }
  if (p.name == "Nil" && p.args.empty()) return "[]";
  if (p.name == "Cons" && p.args.size() == 2) {
    std::string s = pattern_at(p.args[0], 1) + " : " + pattern_at(p.args[1], 0);
    return level == 0 ? s : "(" + s + ")";
  }
  if (p.args.empty()) return p.name;
  std::string s = p.name;
  for (const auto& a : p.args) s += " " + pattern_at(a, 2);
  return level == 2 ? "(" + s + ")" : s;
}

std::string btype_at(const BaseType& b, bool atom) {
  switch (b.kind) {
    case BaseKind::Int:
      return "Int";
    case BaseKind::Bool:
      return "Bool";
    case BaseKind::Proof:
      return "Proof";
    case BaseKind::TyVar:
      return b.name;
    case BaseKind::Data:
      break;
  }
  if (b.args.empty()) return b.name;
  std::string s = b.name;
  for (const auto& a : b.args) s += " " + btype_at(a, true);
  return atom ? "(" + s + ")" : s;
}

std::string ref_base(const RefBase& r) {
  if (!r.refined) return btype_at(r.type, true);
  if (r.binder.empty()) return "{" + pred_at(r.pred, 0) + "}";
  return "{" + r.binder + ":" + btype_at(r.type, false) + " | " + pred_at(r.pred, 0) + "}";
}

}  // namespace

std::string pretty(const Term& t) { return term_at(t, 0); }
std::string pretty(const Pred& p) { return pred_at(p, 0); }
std::string pretty(const Pattern& p) { return pattern_at(p, 2); }
std::string pretty(const BaseType& b) { return btype_at(b, false); }

std::string pretty(const RefType& t) {
  std::string s;
  for (const auto& p : t.params) {
    if (!p.name.empty()) s += p.name + ":";
    s += ref_base(p.type) + " -> ";
  }
  return s + ref_base(t.result);
}

std::string pretty_module(const SourceModule& m) {
  std::ostringstream out;
  for (const auto& decl : m.decls) {
    if (const auto* d = std::get_if<DataDecl>(&decl)) {
      out << "data " << d->name;
      for (const auto& p : d->params) out << ' ' << p;
      out << " =";
      for (std::size_t i = 0; i < d->constructors.size(); ++i) {
        const auto& c = d->constructors[i];
        out << (i ? " | " : " ") << c.name;
        for (const auto& f : c.fields) out << ' ' << btype_at(f, true);
      }
      out << "\n\n";
      continue;
    }
    const auto& f = std::get<FunDecl>(decl);
    out << f.name << " : " << pretty(f.signature);
    if (f.metric) {
      out << " / [";
      for (std::size_t i = 0; i < f.metric->size(); ++i) out << (i ? ", " : "") << pretty((*f.metric)[i]);
      out << ']';
    }
    out << '\n';
    for (const auto& c : f.clauses) {
      out << f.name;
      for (const auto& p : c.patterns) out << ' ' << pretty(p);
      if (const auto* t = std::get_if<Term>(&c.body)) {
        out << " = " << pretty(*t) << '\n';
        continue;
      }
      const auto& chain = std::get<ProofChain>(c.body);
      out << "\n  = " << pretty(chain.head) << '\n';
      for (const auto& s : chain.steps) {
        out << "  ==. " << pretty(s.rhs);
        for (const auto& h : s.hints) out << " ? " << pretty(h);
        out << '\n';
      }
      if (chain.qed) out << "  *** QED\n";
    }
    out << '\n';
  }
  for (const auto& a : m.annotations) out << to_string(a.kind) << ' ' << a.target << '\n';
  return out.str();
}

}  // namespace eqcheck

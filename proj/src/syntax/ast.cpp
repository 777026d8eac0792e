#include "eqcheck/syntax/ast.hpp"

#include <algorithm>
#include <tuple>

namespace eqcheck {

Span Span::cover(const Span& a, const Span& b) {
  Span s = a;
  if (std::tie(b.line, b.col) < std::tie(s.line, s.col)) {
    s.line = b.line;
    s.col = b.col;
  }
  if (std::tie(b.end_line, b.end_col) > std::tie(s.end_line, s.end_col)) {
    s.end_line = b.end_line;
    s.end_col = b.end_col;
  }
  return s;
}

bool Span::contains(const Span& inner) const {
  return std::tie(line, col) <= std::tie(inner.line, inner.col) &&
         std::tie(inner.end_line, inner.end_col) <= std::tie(end_line, end_col);
}

Term Term::var(std::string name, Span span) {
  Term t;
  t.kind = TermKind::Var;
  t.name = std::move(name);
  t.span = span;
  return t;
}

Term Term::int_lit(Integer value, Span span) {
  Term t;
  t.kind = TermKind::IntLit;
  t.value = std::move(value);
  t.span = span;
  return t;
}

Term Term::bool_lit(bool value, Span span) {
  Term t;
  t.kind = TermKind::BoolLit;
  t.flag = value;
  t.span = span;
  return t;
}

Term Term::unit(Span span) {
  Term t;
  t.kind = TermKind::UnitLit;
  t.span = span;
  return t;
}

Term Term::con(std::string name, std::vector<Term> args, Span span) {
  Term t;
  t.kind = TermKind::Con;
  t.name = std::move(name);
  t.args = std::move(args);
  t.span = span;
  return t;
}

Term Term::app(std::string name, std::vector<Term> args, Span span) {
  Term t;
  t.kind = TermKind::App;
  t.name = std::move(name);
  t.args = std::move(args);
  t.span = span;
  return t;
}

Term Term::prim(PrimOpKind op, Term lhs, Term rhs, Span span) {
  Term t;
  t.kind = TermKind::PrimOp;
  t.op = op;
  t.args.push_back(std::move(lhs));
  t.args.push_back(std::move(rhs));
  t.span = span;
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Var:
      return a.name == b.name;
    case TermKind::IntLit:
      return a.value == b.value;
    case TermKind::BoolLit:
      return a.flag == b.flag;
    case TermKind::UnitLit:
      return true;
    case TermKind::PrimOp:
      if (a.op != b.op) return false;
      break;
    default:
      if (a.name != b.name) return false;
      break;
  }
  return a.args == b.args;
}

Pattern Pattern::var(std::string name, Span span) {
  Pattern p;
  p.kind = PatternKind::Var;
  p.name = std::move(name);
  p.span = span;
  return p;
}

Pattern Pattern::wild(Span span) {
  Pattern p;
  p.kind = PatternKind::Wild;
  p.span = span;
  return p;
}

Pattern Pattern::int_lit(Integer value, Span span) {
  Pattern p;
  p.kind = PatternKind::Int;
  p.value = std::move(value);
  p.span = span;
  return p;
}

Pattern Pattern::bool_lit(bool value, Span span) {
  Pattern p;
  p.kind = PatternKind::Bool;
  p.flag = value;
  p.span = span;
  return p;
}

Pattern Pattern::con(std::string name, std::vector<Pattern> args, Span span) {
  Pattern p;
  p.kind = PatternKind::Con;
  p.name = std::move(name);
  p.args = std::move(args);
  p.span = span;
  return p;
}

bool operator==(const Pattern& a, const Pattern& b) {
  return a.kind == b.kind && a.name == b.name && a.value == b.value && a.flag == b.flag &&
         a.alias == b.alias && a.args == b.args;
}

Pred Pred::atom(Rel rel, Term lhs, Term rhs, Span span) {
  Pred p;
  p.kind = PredKind::Atom;
  p.rel = rel;
  p.terms.push_back(std::move(lhs));
  p.terms.push_back(std::move(rhs));
  p.span = span;
  return p;
}

Pred Pred::conj(std::vector<Pred> parts) {
  std::erase_if(parts, [](const Pred& p) { return p.kind == PredKind::True; });
  if (parts.empty()) return truth();
  if (parts.size() == 1) return std::move(parts.front());
  Pred p;
  p.kind = PredKind::And;
  p.parts = std::move(parts);
  return p;
}

Pred Pred::disj(std::vector<Pred> parts) {
  std::erase_if(parts, [](const Pred& p) { return p.kind == PredKind::False; });
  if (parts.empty()) return falsity();
  if (parts.size() == 1) return std::move(parts.front());
  Pred p;
  p.kind = PredKind::Or;
  p.parts = std::move(parts);
  return p;
}

Pred Pred::negate(Pred inner) {
  Pred p;
  p.kind = PredKind::Not;
  p.span = inner.span;
  p.parts.push_back(std::move(inner));
  return p;
}

Pred Pred::truth() {
  Pred p;
  p.kind = PredKind::True;
  return p;
}

Pred Pred::falsity() {
  Pred p;
  p.kind = PredKind::False;
  return p;
}

bool operator==(const Pred& a, const Pred& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == PredKind::Atom) return a.rel == b.rel && a.terms == b.terms;
  return a.parts == b.parts;
}

bool operator==(const BaseType& a, const BaseType& b) {
  return a.kind == b.kind && a.name == b.name && a.args == b.args;
}

Term ProofChain::result_term() const {
  if (qed) return Term::unit(span);
  return steps.empty() ? head : steps.back().rhs;
}

const FunDecl* SourceModule::find_function(const std::string& name) const {
  for (const auto& d : decls) {
    if (const auto* f = std::get_if<FunDecl>(&d); f && f->name == name) return f;
  }
  return nullptr;
}

const char* to_string(Rel rel) {
  switch (rel) {
    case Rel::Eq: return "==";
    case Rel::Ne: return "/=";
    case Rel::Le: return "<=";
    case Rel::Lt: return "<";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

const char* to_string(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::Measure: return "measure";
    case AnnotationKind::Reflect: return "reflect";
    case AnnotationKind::Ple: return "ple";
  }
  return "?";
}

}  // namespace eqcheck

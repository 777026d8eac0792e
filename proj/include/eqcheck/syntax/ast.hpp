#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace eqcheck {

using Integer = boost::multiprecision::cpp_int;

/// 1-based source region. `end_col` is one past the last character.
struct Span {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;

  static Span cover(const Span& a, const Span& b);
  bool contains(const Span& inner) const;
};

enum class TermKind {
  Var,
  IntLit,
  BoolLit,
  UnitLit,
  Con,
  App,
  PrimOp,
  // list sugar, removed by desugar()
  ListLit,
  ConsSugar,
};

enum class PrimOpKind { Add, Sub, Mul };

struct Term {
  TermKind kind = TermKind::UnitLit;
  std::string name;  // Var, Con, App
  Integer value;     // IntLit
  bool flag = false; // BoolLit
  PrimOpKind op = PrimOpKind::Add;
  std::vector<Term> args;
  Span span;

  static Term var(std::string name, Span span = {});
  static Term int_lit(Integer value, Span span = {});
  static Term bool_lit(bool value, Span span = {});
  static Term unit(Span span = {});
  static Term con(std::string name, std::vector<Term> args, Span span = {});
  static Term app(std::string name, std::vector<Term> args, Span span = {});
  static Term prim(PrimOpKind op, Term lhs, Term rhs, Span span = {});

  bool is_var() const { return kind == TermKind::Var; }
  bool is_app() const { return kind == TermKind::App; }
};

/// Structural equality; spans are ignored.
bool operator==(const Term& a, const Term& b);

enum class PatternKind { Var, Wild, Int, Bool, Con };

struct Pattern {
  PatternKind kind = PatternKind::Wild;
  std::string name;  // Var, Con
  Integer value;     // Int
  bool flag = false; // Bool
  std::vector<Pattern> args;
  Span span;
  // Set only on patterns produced by clause splitting: the variable the
  // refined sub-pattern replaced.
  std::string alias;

  static Pattern var(std::string name, Span span = {});
  static Pattern wild(Span span = {});
  static Pattern int_lit(Integer value, Span span = {});
  static Pattern bool_lit(bool value, Span span = {});
  static Pattern con(std::string name, std::vector<Pattern> args, Span span = {});
};

bool operator==(const Pattern& a, const Pattern& b);

enum class Rel { Eq, Ne, Le, Lt, Ge, Gt };
enum class PredKind { Atom, And, Or, Not, True, False };

struct Pred {
  PredKind kind = PredKind::True;
  Rel rel = Rel::Eq;
  std::vector<Term> terms;  // exactly two for Atom
  std::vector<Pred> parts;  // And/Or: n-ary, Not: one
  Span span;

  static Pred atom(Rel rel, Term lhs, Term rhs, Span span = {});
  static Pred conj(std::vector<Pred> parts);
  static Pred disj(std::vector<Pred> parts);
  static Pred negate(Pred p);
  static Pred truth();
  static Pred falsity();

  bool is_trivial() const { return kind == PredKind::True; }
};

bool operator==(const Pred& a, const Pred& b);

enum class BaseKind { Int, Bool, Proof, TyVar, Data };

struct BaseType {
  BaseKind kind = BaseKind::Proof;
  std::string name;  // TyVar, Data
  std::vector<BaseType> args;
  Span span;
};

bool operator==(const BaseType& a, const BaseType& b);

/// `{binder : type | pred}`; `refined == false` for a bare base type.
struct RefBase {
  BaseType type;
  std::string binder;
  Pred pred;
  bool refined = false;
  Span span;
};

struct Param {
  std::string name;  // empty when the binder is omitted
  RefBase type;
};

/// First-order dependent signature: named parameters ending in a refined base.
struct RefType {
  std::vector<Param> params;
  RefBase result;
};

struct ChainStep {
  Term rhs;
  std::vector<Term> hints;
  Span span;
};

struct ProofChain {
  Term head;
  std::vector<ChainStep> steps;
  bool qed = false;
  Span span;

  /// Value of the chain as a program: the last right-hand side, or unit
  /// when terminated with `*** QED`.
  Term result_term() const;
};

using Body = std::variant<Term, ProofChain>;

struct Clause {
  std::vector<Pattern> patterns;
  Body body;
  Span span;

  bool is_chain() const { return std::holds_alternative<ProofChain>(body); }
};

struct DataCon {
  std::string name;
  std::vector<BaseType> fields;
  Span span;
};

struct DataDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<DataCon> constructors;
  Span span;
};

struct FunDecl {
  std::string name;
  RefType signature;
  std::optional<std::vector<Term>> metric;
  std::vector<Clause> clauses;
  Span span;
};

using Decl = std::variant<DataDecl, FunDecl>;

enum class AnnotationKind { Measure, Reflect, Ple };

struct Annotation {
  AnnotationKind kind = AnnotationKind::Reflect;
  std::string target;
  Span span;
};

struct SourceModule {
  std::string file;
  std::vector<Decl> decls;
  std::vector<Annotation> annotations;
  // Extent of the source text, used to validate spans.
  Span extent;

  const FunDecl* find_function(const std::string& name) const;
};

const char* to_string(Rel rel);
const char* to_string(AnnotationKind kind);

}  // namespace eqcheck

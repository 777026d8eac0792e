#include "eqcheck/syntax/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace eqcheck {
namespace {

enum class Tok { Lower, Upper, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
};

// Longest match first.
constexpr std::array<std::string_view, 28> kSymbols = {
    "==.", "***", "->", "==", "/=", "<=", ">=", "&&", "||", "++", "<", ">", "=", "|",
    ":",   "{",   "}",  "(",  ")",  "[",  "]",  ",",  "/",  "+",  "-", "*", "?", "_"};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "{-") {
      Span start{line, col, line, col + 2};
      int depth = 0;
      do {
        if (i >= src.size()) throw ParseError("unterminated block comment", start, {"-}"});
        if (src.substr(i, 2) == "{-") {
          ++depth;
          advance(2);
        } else if (src.substr(i, 2) == "-}") {
          --depth;
          advance(2);
        } else {
          advance(1);
        }
      } while (depth > 0);
      continue;
    }
    Token tok;
    tok.span.line = line;
    tok.span.col = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = Tok::Int;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) ||
               (c == '_' && i + 1 < src.size() && is_ident_char(src[i + 1]))) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::Upper : Tok::Lower;
      advance(j - i);
    } else {
      auto it = std::find_if(kSymbols.begin(), kSymbols.end(),
                             [&](std::string_view s) { return src.substr(i, s.size()) == s; });
      if (it == kSymbols.end()) {
        throw ParseError(std::string("unexpected character '") + c + "'",
                         Span{line, col, line, col + 1});
      }
      tok.kind = Tok::Sym;
      tok.text = std::string(*it);
      advance(it->size());
    }
    tok.span.end_line = line;
    tok.span.end_col = col;
    out.push_back(std::move(tok));
  }
  Token end;
  end.span = Span{line, col, line, col};
  out.push_back(end);
  return out;
}

bool is_reserved(const std::string& s) {
  static const std::set<std::string> kReserved = {"data", "measure", "reflect", "ple",
                                                  "not",  "true",    "false"};
  return kReserved.count(s) > 0;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)), limit_(toks_.size() - 1) {}

  SourceModule module(std::string file) {
    SourceModule m;
    m.file = std::move(file);
    m.extent = Span{1, 1, toks_.back().span.line, toks_.back().span.col};
    std::set<std::string> names;
    pos_ = 0;
    while (toks_[pos_].kind != Tok::End) {
      const Token& t = toks_[pos_];
      if (t.span.col != 1) fail("declaration must start in column 1", {"declaration"});
      set_decl_limit();
      if (t.kind == Tok::Lower && t.text == "data") {
        auto d = data_decl();
        if (!names.insert(d.name).second) fail_at("duplicate declaration '" + d.name + "'", d.span);
        m.decls.emplace_back(std::move(d));
      } else if (t.kind == Tok::Lower &&
                 (t.text == "measure" || t.text == "reflect" || t.text == "ple")) {
        m.annotations.push_back(annotation());
      } else if (t.kind == Tok::Lower && peek(1).kind == Tok::Sym && peek(1).text == ":") {
        auto f = fun_decl();
        if (!names.insert(f.name).second) fail_at("duplicate declaration '" + f.name + "'", f.span);
        m.decls.emplace_back(std::move(f));
      } else if (t.kind == Tok::Lower) {
        fail("clause for '" + t.text + "' without a preceding signature", {"signature"});
      } else {
        fail("unexpected '" + t.text + "'", {"data", "measure", "reflect", "ple", "signature"});
      }
      expect_end_of_decl();
    }
    return m;
  }

  Term standalone_term() {
    Term t = term();
    expect_end_of_decl();
    return t;
  }

  Pred standalone_pred() {
    Pred p = pred();
    expect_end_of_decl();
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t limit_;

  Token end_tok_;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < limit_ ? toks_[k] : end_tok_;
  }
  bool at_end() const { return pos_ >= limit_; }
  Token end_token() const {
    Token t;
    t.kind = Tok::End;
    t.span = toks_[std::min(limit_, toks_.size() - 1)].span;
    return t;
  }

  bool is_sym(std::string_view s) const {
    return !at_end() && toks_[pos_].kind == Tok::Sym && toks_[pos_].text == s;
  }
  bool is_word(std::string_view s) const {
    return !at_end() && toks_[pos_].kind == Tok::Lower && toks_[pos_].text == s;
  }
  bool is_kind(Tok k) const { return !at_end() && toks_[pos_].kind == k; }

  Span here() const { return at_end() ? end_token().span : toks_[pos_].span; }
  Span prev_span() const { return pos_ > 0 ? toks_[pos_ - 1].span : here(); }
  Span from(const Span& start) const { return Span::cover(start, prev_span()); }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    std::string found = at_end() ? "end of declaration" : "'" + toks_[pos_].text + "'";
    throw ParseError(msg + " (found " + found + ")", here(), std::move(expected));
  }
  [[noreturn]] void fail_at(const std::string& msg, Span span) const { throw ParseError(msg, span); }

  Token take() {
    if (at_end()) fail("unexpected end of declaration", {});
    return toks_[pos_++];
  }
  Token expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "'", {std::string(s)});
    return take();
  }
  Token expect_kind(Tok k, const char* what) {
    if (!is_kind(k)) fail(std::string("expected ") + what, {what});
    return take();
  }
  std::string lower_ident(const char* what) {
    if (!is_kind(Tok::Lower) || is_reserved(toks_[pos_].text)) fail(std::string("expected ") + what, {what});
    return take().text;
  }

  void set_decl_limit() {
    std::size_t k = pos_ + 1;
    while (toks_[k].kind != Tok::End && toks_[k].span.col != 1) ++k;
    limit_ = k;
  }
  // Clauses of a function start in column 1 too; extend to the next one.
  void set_clause_limit() { set_decl_limit(); }
  void expect_end_of_decl() {
    if (!at_end()) fail("unexpected token", {"end of declaration"});
    limit_ = toks_.size() - 1;
  }

  // ---- declarations --------------------------------------------------------

  Annotation annotation() {
    Annotation a;
    Token kw = take();
    a.kind = kw.text == "measure" ? AnnotationKind::Measure
             : kw.text == "reflect" ? AnnotationKind::Reflect
                                    : AnnotationKind::Ple;
    a.target = lower_ident("function name");
    a.span = from(kw.span);
    return a;
  }

  DataDecl data_decl() {
    DataDecl d;
    Span start = take().span;
    d.name = expect_kind(Tok::Upper, "type name").text;
    while (is_kind(Tok::Lower)) d.params.push_back(lower_ident("type parameter"));
    expect_sym("=");
    do {
      DataCon c;
      Token name = expect_kind(Tok::Upper, "constructor name");
      c.name = name.text;
      while (starts_btype_atom()) c.fields.push_back(btype_atom());
      c.span = from(name.span);
      d.constructors.push_back(std::move(c));
    } while (is_sym("|") && (take(), true));
    d.span = from(start);
    return d;
  }

  FunDecl fun_decl() {
    FunDecl f;
    Token name = take();
    f.name = name.text;
    expect_sym(":");
    f.signature = reftype();
    if (is_sym("/")) {
      take();
      expect_sym("[");
      std::vector<Term> metric;
      metric.push_back(term());
      while (is_sym(",")) {
        take();
        metric.push_back(term());
      }
      expect_sym("]");
      f.metric = std::move(metric);
    }
    expect_end_of_decl();
    // clauses
    while (toks_[pos_].kind == Tok::Lower && toks_[pos_].text == f.name &&
           !(toks_[pos_ + 1].kind == Tok::Sym && toks_[pos_ + 1].text == ":")) {
      set_clause_limit();
      f.clauses.push_back(clause());
      if (!at_end()) fail("unexpected token after clause body", {"end of clause"});
      limit_ = toks_.size() - 1;
    }
    if (f.clauses.empty()) fail_at("signature for '" + f.name + "' has no clauses", name.span);
    f.span = from(name.span);
    // Leave the parser positioned at the next declaration; the caller checks
    // for the end of the (now exhausted) range.
    limit_ = pos_;
    return f;
  }

  Clause clause() {
    Clause c;
    Span start = take().span;
    while (!is_sym("=")) c.patterns.push_back(pattern_atom());
    take();
    std::set<std::string> seen;
    for (const auto& p : c.patterns) check_linear(p, seen);
    c.body = body();
    c.span = from(start);
    return c;
  }

  void check_linear(const Pattern& p, std::set<std::string>& seen) const {
    if (p.kind == PatternKind::Var && !seen.insert(p.name).second) {
      fail_at("nonlinear pattern: variable '" + p.name + "' bound more than once", p.span);
    }
    for (const auto& sub : p.args) check_linear(sub, seen);
  }

  Body body() {
    Term head = term();
    if (!is_sym("==.")) return head;
    ProofChain chain;
    Span start = head.span;
    chain.head = std::move(head);
    while (is_sym("==.")) {
      Span step_start = take().span;
      ChainStep step;
      step.rhs = term();
      while (is_sym("?")) {
        take();
        step.hints.push_back(term());
      }
      step.span = from(step_start);
      chain.steps.push_back(std::move(step));
    }
    if (is_sym("***")) {
      take();
      Token q = expect_kind(Tok::Upper, "QED");
      if (q.text != "QED") fail_at("expected 'QED' after '***'", q.span);
      chain.qed = true;
    }
    chain.span = from(start);
    return chain;
  }

  // ---- patterns ------------------------------------------------------------

  Pattern pattern_atom() {
    Span start = here();
    if (is_sym("_")) {
      take();
      return Pattern::wild(start);
    }
    if (is_word("true") || is_word("false")) return Pattern::bool_lit(take().text == "true", start);
    if (is_kind(Tok::Lower)) return Pattern::var(lower_ident("pattern variable"), start);
    if (is_kind(Tok::Int)) return Pattern::int_lit(Integer(take().text), start);
    if (is_sym("-") && peek(1).kind == Tok::Int) {
      take();
      Integer v(take().text);
      return Pattern::int_lit(-v, from(start));
    }
    if (is_kind(Tok::Upper)) return Pattern::con(take().text, {}, start);
    if (is_sym("[")) {
      take();
      std::vector<Pattern> elems;
      if (!is_sym("]")) {
        elems.push_back(pattern_cons());
        while (is_sym(",")) {
          take();
          elems.push_back(pattern_cons());
        }
      }
      expect_sym("]");
      Span whole = from(start);
      Pattern p = Pattern::con("Nil", {}, whole);
      for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
        p = Pattern::con("Cons", {std::move(*it), std::move(p)}, whole);
      }
      return p;
    }
    if (is_sym("(")) {
      take();
      Pattern p = pattern_cons();
      expect_sym(")");
      p.span = from(start);
      return p;
    }
    fail("expected pattern", {"variable", "_", "integer", "constructor", "(", "["});
  }

  Pattern pattern_cons() {
    Span start = here();
    Pattern head = pattern_app();
    if (!is_sym(":")) return head;
    take();
    Pattern tail = pattern_cons();
    return Pattern::con("Cons", {std::move(head), std::move(tail)}, from(start));
  }

  Pattern pattern_app() {
    if (!is_kind(Tok::Upper)) return pattern_atom();
    Span start = here();
    std::string name = take().text;
    std::vector<Pattern> args;
    while (!is_sym(":") && !is_sym(")") && !is_sym(",") && !is_sym("]") && !at_end()) {
      args.push_back(pattern_atom());
    }
    return Pattern::con(std::move(name), std::move(args), from(start));
  }

  // ---- types ---------------------------------------------------------------

  bool starts_btype_atom() const {
    return is_kind(Tok::Upper) || (is_kind(Tok::Lower) && !is_reserved(toks_[pos_].text)) ||
           is_sym("(") || is_sym("[");
  }

  BaseType btype_atom() {
    Span start = here();
    BaseType b;
    if (is_sym("(")) {
      take();
      b = btype();
      expect_sym(")");
    } else if (is_sym("[")) {
      take();
      BaseType elem = btype();
      expect_sym("]");
      b.kind = BaseKind::Data;
      b.name = "List";
      b.args.push_back(std::move(elem));
    } else if (is_kind(Tok::Lower)) {
      b.kind = BaseKind::TyVar;
      b.name = lower_ident("type variable");
    } else {
      std::string name = expect_kind(Tok::Upper, "type").text;
      if (name == "Int") {
        b.kind = BaseKind::Int;
      } else if (name == "Bool") {
        b.kind = BaseKind::Bool;
      } else if (name == "Proof") {
        b.kind = BaseKind::Proof;
      } else {
        b.kind = BaseKind::Data;
        b.name = std::move(name);
      }
    }
    b.span = from(start);
    return b;
  }

  BaseType btype() {
    Span start = here();
    if (is_kind(Tok::Upper)) {
      BaseType head = btype_atom();
      if (head.kind == BaseKind::Data) {
        while (starts_btype_atom()) head.args.push_back(btype_atom());
      }
      head.span = from(start);
      return head;
    }
    return btype_atom();
  }

  RefBase rt_atom() {
    Span start = here();
    RefBase r;
    if (is_sym("{")) {
      take();
      std::size_t save = pos_;
      if (is_kind(Tok::Lower) && peek(1).kind == Tok::Sym && peek(1).text == ":") {
        try {
          std::string binder = lower_ident("binder");
          take();
          BaseType b = btype();
          expect_sym("|");
          r.binder = std::move(binder);
          r.type = std::move(b);
          r.pred = pred();
          expect_sym("}");
          r.refined = true;
          r.span = from(start);
          return r;
        } catch (const ParseError&) {
          pos_ = save;
        }
      }
      // `{ p }` abbreviates a refinement of Proof.
      r.type.kind = BaseKind::Proof;
      r.type.span = here();
      r.pred = pred();
      expect_sym("}");
      r.refined = true;
      r.span = from(start);
      return r;
    }
    r.type = btype();
    r.span = from(start);
    return r;
  }

  RefType reftype() {
    RefType t;
    for (;;) {
      std::string name;
      if (is_kind(Tok::Lower) && !is_reserved(toks_[pos_].text) && peek(1).kind == Tok::Sym &&
          peek(1).text == ":") {
        name = take().text;
        take();
      }
      RefBase atom = rt_atom();
      if (is_sym("->")) {
        take();
        t.params.push_back(Param{std::move(name), std::move(atom)});
        continue;
      }
      t.result = std::move(atom);
      return t;
    }
  }

  // ---- terms ---------------------------------------------------------------

  bool starts_atom() const {
    if (at_end()) return false;
    const Token& t = toks_[pos_];
    switch (t.kind) {
      case Tok::Lower:
        return !is_reserved(t.text) || t.text == "true" || t.text == "false";
      case Tok::Upper:
        return t.text != "QED";
      case Tok::Int:
        return true;
      case Tok::Sym:
        return t.text == "(" || t.text == "[";
      default:
        return false;
    }
  }

 public:
  Term term() { return infix5(); }

 private:
  Term infix5() {
    Term lhs = infix6();
    if (is_sym(":")) {
      take();
      Term rhs = infix5();
      Span s = Span::cover(lhs.span, rhs.span);
      Term t;
      t.kind = TermKind::ConsSugar;
      t.args.push_back(std::move(lhs));
      t.args.push_back(std::move(rhs));
      t.span = s;
      return t;
    }
    if (is_sym("++")) {
      take();
      Term rhs = infix5();
      Span s = Span::cover(lhs.span, rhs.span);
      std::vector<Term> args;
      args.push_back(std::move(lhs));
      args.push_back(std::move(rhs));
      return Term::app("append", std::move(args), s);
    }
    return lhs;
  }

  Term infix6() {
    Term lhs;
    if (is_sym("-")) {
      Span start = take().span;
      Term operand = infix7();
      if (operand.kind == TermKind::IntLit) {
        operand.value = -operand.value;
        operand.span = from(start);
        lhs = std::move(operand);
      } else {
        lhs = Term::prim(PrimOpKind::Sub, Term::int_lit(0, start), std::move(operand), from(start));
      }
    } else {
      lhs = infix7();
    }
    while (is_sym("+") || is_sym("-")) {
      PrimOpKind op = take().text == "+" ? PrimOpKind::Add : PrimOpKind::Sub;
      Term rhs = infix7();
      Span s = Span::cover(lhs.span, rhs.span);
      lhs = Term::prim(op, std::move(lhs), std::move(rhs), s);
    }
    return lhs;
  }

  Term infix7() {
    Term lhs = application();
    while (is_sym("*")) {
      take();
      Term rhs = application();
      Span s = Span::cover(lhs.span, rhs.span);
      lhs = Term::prim(PrimOpKind::Mul, std::move(lhs), std::move(rhs), s);
    }
    return lhs;
  }

  Term application() {
    Span start = here();
    if (is_kind(Tok::Lower) && !is_reserved(toks_[pos_].text)) {
      std::string name = take().text;
      std::vector<Term> args;
      while (starts_atom()) args.push_back(atom());
      if (args.empty()) return Term::var(std::move(name), start);
      return Term::app(std::move(name), std::move(args), from(start));
    }
    if (is_kind(Tok::Upper) && toks_[pos_].text != "QED") {
      std::string name = take().text;
      std::vector<Term> args;
      while (starts_atom()) args.push_back(atom());
      return Term::con(std::move(name), std::move(args), from(start));
    }
    return atom();
  }

  Term atom() {
    Span start = here();
    if (is_word("true") || is_word("false")) return Term::bool_lit(take().text == "true", start);
    if (is_kind(Tok::Lower) && !is_reserved(toks_[pos_].text)) return Term::var(take().text, start);
    if (is_kind(Tok::Upper) && toks_[pos_].text != "QED") return Term::con(take().text, {}, start);
    if (is_kind(Tok::Int)) return Term::int_lit(Integer(take().text), start);
    if (is_sym("(")) {
      take();
      if (is_sym(")")) {
        take();
        return Term::unit(from(start));
      }
      Term t = term();
      expect_sym(")");
      t.span = from(start);
      return t;
    }
    if (is_sym("[")) {
      take();
      Term t;
      t.kind = TermKind::ListLit;
      if (!is_sym("]")) {
        t.args.push_back(term());
        while (is_sym(",")) {
          take();
          t.args.push_back(term());
        }
      }
      expect_sym("]");
      t.span = from(start);
      return t;
    }
    fail("expected term", {"identifier", "constructor", "integer", "(", "["});
  }

  // ---- predicates ----------------------------------------------------------

 public:
  Pred pred() {
    Span start = here();
    std::vector<Pred> parts;
    parts.push_back(pred_and());
    while (is_sym("||")) {
      take();
      parts.push_back(pred_and());
    }
    if (parts.size() == 1) return std::move(parts.front());
    Pred p;
    p.kind = PredKind::Or;
    p.parts = std::move(parts);
    p.span = from(start);
    return p;
  }

 private:
  Pred pred_and() {
    Span start = here();
    std::vector<Pred> parts;
    parts.push_back(pred_not());
    while (is_sym("&&")) {
      take();
      parts.push_back(pred_not());
    }
    if (parts.size() == 1) return std::move(parts.front());
    Pred p;
    p.kind = PredKind::And;
    p.parts = std::move(parts);
    p.span = from(start);
    return p;
  }

  Pred pred_not() {
    if (is_word("not")) {
      Span start = take().span;
      Pred inner = pred_not();
      Pred p = Pred::negate(std::move(inner));
      p.span = from(start);
      return p;
    }
    return pred_atom();
  }

  static std::optional<Rel> rel_of(const std::string& s) {
    if (s == "==") return Rel::Eq;
    if (s == "/=") return Rel::Ne;
    if (s == "<=") return Rel::Le;
    if (s == "<") return Rel::Lt;
    if (s == ">=") return Rel::Ge;
    if (s == ">") return Rel::Gt;
    return std::nullopt;
  }

  Pred pred_atom() {
    Span start = here();
    std::size_t save = pos_;
    try {
      Term lhs = term();
      if (!at_end() && toks_[pos_].kind == Tok::Sym) {
        if (auto rel = rel_of(toks_[pos_].text)) {
          take();
          Term rhs = term();
          return Pred::atom(*rel, std::move(lhs), std::move(rhs), from(start));
        }
      }
      if (lhs.kind == TermKind::BoolLit) {
        Pred p = lhs.flag ? Pred::truth() : Pred::falsity();
        p.span = lhs.span;
        return p;
      }
      fail("expected relation", {"==", "/=", "<=", "<", ">=", ">"});
    } catch (const ParseError&) {
      pos_ = save;
      if (!is_sym("(")) throw;
    }
    take();
    Pred p = pred();
    expect_sym(")");
    p.span = from(start);
    return p;
  }
};

}  // namespace

SourceModule parse_module(std::string_view source, std::string file) {
  Parser p(lex(source));
  return p.module(std::move(file));
}

Term parse_term(std::string_view source) {
  Parser p(lex(source));
  return p.standalone_term();
}

Pred parse_pred(std::string_view source) {
  Parser p(lex(source));
  return p.standalone_pred();
}

}  // namespace eqcheck

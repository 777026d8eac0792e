#include "doctest.h"

#include "corpus_util.hpp"
#include "eqcheck/syntax/desugar.hpp"
#include "eqcheck/syntax/parser.hpp"
#include "eqcheck/syntax/pretty.hpp"

using namespace eqcheck;

namespace {

const char* kReverse = R"(
append : xs:(List a) -> ys:(List a) -> List a
append [] ys = ys
append (x:xs) ys = x : (xs ++ ys)

reverse : xs:(List a) -> List a
reverse [] = []
reverse (x:xs) = reverse xs ++ [x]

reflect reverse
)";

void check_spans(const Term& t, const Span& extent) {
  CHECK(extent.contains(t.span));
  for (const auto& a : t.args) check_spans(a, extent);
}

void check_spans(const Pattern& p, const Span& extent) {
  CHECK(extent.contains(p.span));
  for (const auto& a : p.args) check_spans(a, extent);
}

}  // namespace

TEST_CASE("parse: reflect annotation") {
  auto m = parse_module(kReverse);
  REQUIRE(m.annotations.size() == 1);
  CHECK(m.annotations[0].kind == AnnotationKind::Reflect);
  CHECK(m.annotations[0].target == "reverse");
  REQUIRE(m.decls.size() == 2);
  const auto* rev = m.find_function("reverse");
  REQUIRE(rev);
  CHECK(rev->clauses.size() == 2);
}

TEST_CASE("parse: empty file") {
  CHECK(parse_module("").decls.empty());
  CHECK(parse_module("-- only a comment\n{- block {- nested -} -}\n").decls.empty());
}

TEST_CASE("parse: nonlinear pattern") {
  const char* src = "f : x:Int -> y:Int -> Int\nf x x = x\n";
  CHECK_THROWS_AS(parse_module(src), ParseError);
  try {
    parse_module(src);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("nonlinear") != std::string::npos);
    CHECK(e.span().line == 2);
  }
}

TEST_CASE("parse: errors carry position and expected tokens") {
  try {
    parse_module("f : Int -> \nf = 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span().line >= 1);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(parse_module("data = X\n"), ParseError);
  CHECK_THROWS_AS(parse_module("f : Int\nf = (1\n"), ParseError);
  CHECK_THROWS_AS(parse_module("f : Int\nf = 1\nf : Int\nf = 2\n"), ParseError);
}

TEST_CASE("desugar: list sugar") {
  CHECK(desugar_term(parse_term("[x]")) == Term::con("Cons", {Term::var("x"), Term::con("Nil", {})}));
  CHECK(desugar_term(parse_term("[]")) == Term::con("Nil", {}));
  auto t = desugar_term(parse_term("m:n:s"));
  CHECK(t == Term::con("Cons", {Term::var("m"), Term::con("Cons", {Term::var("n"), Term::var("s")})}));
  CHECK(is_desugared(t));
  CHECK_FALSE(is_desugared(parse_term("[1,2]")));
  CHECK(desugar_term(t) == t);
}

TEST_CASE("desugar: ++ is append") {
  auto t = desugar_term(parse_term("xs ++ [x]"));
  REQUIRE(t.kind == TermKind::App);
  CHECK(t.name == "append");
}

TEST_CASE("pretty: examples") {
  CHECK(pretty(Term::con("Cons", {Term::int_lit(1), Term::con("Nil", {})})) == "1 : []");
  CHECK(pretty(Term::app("reverse", {Term::var("xs")})) == "reverse xs");
  CHECK(pretty(Term::prim(PrimOpKind::Add, Term::var("n"), Term::int_lit(1))) == "n + 1");
  CHECK(pretty(desugar_term(parse_term("(a : b) ++ c"))) == "(a : b) ++ c");
  CHECK(pretty(desugar_term(parse_term("a - (b - c)"))) == "a - (b - c)");
  CHECK(pretty(desugar_term(parse_term("f (g x) (-3)"))) == "f (g x) (-3)");
  CHECK(pretty(parse_pred("not (a == b) && (c < d || true)")) == "not a == b && (c < d || true)");
}

TEST_CASE("pretty: term round trip") {
  for (const char* src : {"1 : 2 : []", "f (x : xs) (y ++ z)", "(a ++ b) ++ c", "a + b * 2 - c",
                          "Just (eval x + eval y : s)", "exec (PUSH n : (c ++ d)) s", "x - (-2)"}) {
    Term t = desugar_term(parse_term(src));
    CHECK_MESSAGE(desugar_term(parse_term(pretty(t))) == t, src);
  }
}

TEST_CASE("corpus: parse, pretty, parse is idempotent") {
  for (const auto& f : positive_corpus()) {
    auto src = read_file(corpus_path(f));
    REQUIRE_FALSE(src.empty());
    auto m = desugar(parse_module(src, f));
    auto text = pretty_module(m);
    auto m2 = desugar(parse_module(text, f));
    CHECK_MESSAGE(pretty_module(m2) == text, f);
    REQUIRE(m.decls.size() == m2.decls.size());
    for (std::size_t i = 0; i < m.decls.size(); ++i) {
      const auto* a = std::get_if<FunDecl>(&m.decls[i]);
      const auto* b = std::get_if<FunDecl>(&m2.decls[i]);
      REQUIRE((a == nullptr) == (b == nullptr));
      if (!a) continue;
      REQUIRE(a->clauses.size() == b->clauses.size());
      for (std::size_t c = 0; c < a->clauses.size(); ++c) {
        CHECK(a->clauses[c].patterns == b->clauses[c].patterns);
        CHECK(a->clauses[c].body.index() == b->clauses[c].body.index());
      }
    }
    CHECK(m.annotations.size() == m2.annotations.size());
  }
}

TEST_CASE("corpus: every span lies inside the file extent") {
  for (const auto& f : positive_corpus()) {
    auto m = parse_module(read_file(corpus_path(f)), f);
    for (const auto& d : m.decls) {
      const auto* fd = std::get_if<FunDecl>(&d);
      if (!fd) continue;
      CHECK(m.extent.contains(fd->span));
      for (const auto& c : fd->clauses) {
        CHECK(m.extent.contains(c.span));
        for (const auto& p : c.patterns) check_spans(p, m.extent);
        if (const auto* t = std::get_if<Term>(&c.body)) {
          check_spans(*t, m.extent);
        } else {
          const auto& ch = std::get<ProofChain>(c.body);
          check_spans(ch.head, m.extent);
          for (const auto& s : ch.steps) {
            check_spans(s.rhs, m.extent);
            for (const auto& h : s.hints) check_spans(h, m.extent);
          }
        }
      }
    }
  }
}

TEST_CASE("parse: chain structure") {
  auto m = parse_module(read_file(corpus_path("section2.eq")));
  const auto* f = m.find_function("singletonP");
  REQUIRE(f);
  const auto& chain = std::get<ProofChain>(f->clauses[0].body);
  CHECK(chain.steps.size() == 3);
  CHECK(chain.qed);
  const auto* inv = m.find_function("involutionP");
  REQUIRE(inv);
  REQUIRE(inv->metric);
  CHECK(inv->metric->size() == 1);
  const auto& c2 = std::get<ProofChain>(inv->clauses[1].body);
  CHECK(c2.steps[0].hints.size() == 1);
  CHECK(c2.steps[0].hints[0].name == "distributivityP");
}

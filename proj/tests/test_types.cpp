#include "doctest.h"

#include "corpus_util.hpp"
#include "eqcheck/syntax/desugar.hpp"
#include "eqcheck/syntax/parser.hpp"
#include "eqcheck/types/env.hpp"

using namespace eqcheck;

namespace {

TypeEnv env_of(const std::string& src) { return check_types(desugar(parse_module(src))); }

const char* kLength = R"(
length : xs:(List a) -> {v:Int | 0 <= v}
length [] = 0
length (_:xs) = 1 + length xs

measure length
)";

}  // namespace

TEST_CASE("check_types: length accepted as a measure") {
  auto env = env_of(kLength);
  const auto* f = env.function("length");
  REQUIRE(f);
  CHECK(f->measure);
  CHECK(f->sig.result_refined);
  CHECK(f->sig.value_binder == "v");
  CHECK(env.measures_on("List").size() == 1);
}

TEST_CASE("check_types: measure on a two-argument function") {
  std::string src = std::string(kLength) + R"(
append : xs:(List a) -> ys:(List a) -> List a
append [] ys = ys
append (x:xs) ys = x : (xs ++ ys)

measure append
)";
  CHECK_THROWS_AS(env_of(src), MeasureShapeError);
}

TEST_CASE("check_types: measure shape violations") {
  // deep pattern
  CHECK_THROWS_AS(env_of("f : xs:(List Int) -> Int\nf [] = 0\nf [x] = 1\nf (x:y:ys) = 2\nmeasure f\n"),
                  MeasureShapeError);
  // calls a non-measure
  CHECK_THROWS_AS(env_of("g : x:Int -> Int\ng x = x\nf : xs:(List Int) -> Int\nf [] = 0\nf (x:xs) = g x\nmeasure f\n"),
                  MeasureShapeError);
  // argument not an ADT
  CHECK_THROWS_AS(env_of("f : x:Int -> Int\nf x = x\nmeasure f\n"), MeasureShapeError);
}

TEST_CASE("check_types: sort clash") {
  CHECK_THROWS_AS(env_of("f : List Int\nf = Cons 1 2\n"), TypeError);
  CHECK_THROWS_AS(env_of("f : x:Int -> Bool\nf x = x\n"), TypeError);
  CHECK_THROWS_AS(env_of("f : x:Int -> Int\nf x = g x\n"), TypeError);
  CHECK_THROWS_AS(env_of("f : x:Int -> y:Int -> Int\nf x y = x * y\n"), TypeError);
  CHECK_THROWS_AS(env_of("f : x:Int -> {v:Int | v < true}\nf x = x\n"), TypeError);
  CHECK_THROWS_AS(env_of("f : x:Int -> Int\nf x y = x\n"), TypeError);
  CHECK_THROWS_AS(env_of("reflect g\n"), TypeError);
  CHECK_THROWS_AS(env_of("data T = A Foo\n"), TypeError);
  CHECK_THROWS_AS(env_of("data T = A b\n"), TypeError);
}

TEST_CASE("check_types: rigid type variables") {
  CHECK_THROWS_AS(env_of("f : x:a -> Int\nf x = x\n"), TypeError);
  CHECK_NOTHROW(env_of("f : x:a -> xs:(List a) -> List a\nf x xs = x : xs\n"));
  CHECK_THROWS_AS(env_of("f : x:a -> xs:(List b) -> List a\nf x xs = x : xs\n"), TypeError);
}

TEST_CASE("check_types: polymorphic instantiation and clause variables") {
  auto env = env_of(std::string(kLength) + "n : x:Int -> Int\nn x = length [x, x] + length [true]\n");
  const auto* f = env.function("n");
  REQUIRE(f->clause_vars.size() == 1);
  CHECK(f->clause_vars[0].at("x") == Sort::integer());
  VarSorts vars{{"x", Sort::integer()}};
  auto s = env.sort_of(desugar_term(parse_term("[x]")), vars);
  CHECK(s == Sort::data("List", {Sort::integer()}));
}

TEST_CASE("check_refinement_wf") {
  const char* lifted = R"(
append : xs:(List a) -> ys:(List a) -> List a
append [] ys = ys
append (x:xs) ys = x : (xs ++ ys)

reflect append

reverse : xs:(List a) -> List a
reverse [] = []
reverse (x:xs) = reverse xs ++ [x]

reflect reverse

reverseApp : xs:(List a) -> ys:(List a) -> {zs:List a | zs == reverse xs ++ ys}
reverseApp [] ys = ys
reverseApp (x:xs) ys = reverseApp xs (x : ys)
)";
  CHECK_NOTHROW(check_refinement_wf(env_of(lifted)));
  const char* unlifted = R"(
helper : x:Int -> Int
helper x = x

f : x:Int -> {v:Int | v == helper x}
f x = x
)";
  CHECK_THROWS_AS(check_refinement_wf(env_of(unlifted)), WfError);
  CHECK_NOTHROW(check_refinement_wf(env_of("f : x:Int -> {v:Int | true}\nf x = x\n")));
}

TEST_CASE("check_types: whole corpus") {
  for (const auto& f : positive_corpus()) {
    auto m = desugar(parse_module(read_file(corpus_path(f)), f));
    TypeEnv env;
    CHECK_NOTHROW(env = check_types(m));
    CHECK_NOTHROW(check_refinement_wf(env));
  }
}

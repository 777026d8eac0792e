#include "doctest.h"

#include <random>

#include "corpus_util.hpp"
#include "eqcheck/logic/solver.hpp"
#include "eqcheck/semantics/eval.hpp"
#include "eqcheck/syntax/desugar.hpp"
#include "eqcheck/syntax/parser.hpp"
#include "eqcheck/syntax/pretty.hpp"
#include "logic_oracle.hpp"

using namespace eqcheck;

namespace {

Term T(const char* s) { return desugar_term(parse_term(s)); }
Pred P(const char* s) { return desugar_pred(parse_pred(s)); }

TypeEnv env_of(const std::string& src) { return check_types(desugar(parse_module(src))); }

const TypeEnv& lists() {
  static const TypeEnv env = env_of(read_file(corpus_path("section2.eq")));
  return env;
}

VarSorts list_vars() {
  Sort l = Sort::data("List", {Sort::var("a")});
  return {{"x", Sort::var("a")}, {"y", Sort::var("a")}, {"xs", l}, {"ys", l}, {"zs", l}};
}

}  // namespace

TEST_CASE("term graph: congruence") {
  TermGraph g;
  NodeId a = g.add(T("a")), b = g.add(T("b")), c = g.add(T("c"));
  NodeId fa = g.add(T("f a")), fb = g.add(T("f b"));
  g.merge(a, b);
  g.merge(fa, c);
  CHECK(g.equal(fb, c));
}

TEST_CASE("term graph: constructor clash and injectivity") {
  TermGraph g;
  g.merge(g.add(T("Nil")), g.add(T("Cons x xs")));
  CHECK(g.contradiction());

  TermGraph h;
  h.merge(h.add(T("Cons x xs")), h.add(T("Cons y ys")));
  CHECK_FALSE(h.contradiction());
  CHECK(h.equal(h.add(T("x")), h.add(T("y"))));
  CHECK(h.equal(h.add(T("xs")), h.add(T("ys"))));

  TermGraph k;
  k.merge(k.add(T("1")), k.add(T("n")));
  k.merge(k.add(T("2")), k.add(T("n")));
  CHECK(k.contradiction());
}

TEST_CASE("lia: tightening and elimination") {
  auto v = [](int x, int c) {
    LinExpr e;
    e.coeffs[x] = c;
    return e;
  };
  // 2x == 1 has no integer solution
  LinConstraint odd{v(0, 2), true};
  odd.expr.constant = -1;
  CHECK(lia_infeasible({odd}));
  // x <= 0, x >= 1
  LinConstraint a{v(0, 1), false};
  LinConstraint b{v(0, -1), false};
  b.expr.constant = 1;
  CHECK(lia_infeasible({a, b}));
  CHECK_FALSE(lia_infeasible({a}));
  // x - y <= 0, y - z <= 0, z - x <= -1
  LinConstraint c1{v(0, 1).add(v(1, -1)), false};
  LinConstraint c2{v(1, 1).add(v(2, -1)), false};
  LinConstraint c3{v(2, 1).add(v(0, -1)), false};
  c3.expr.constant = 1;
  CHECK(lia_infeasible({c1, c2, c3}));
  CHECK_FALSE(lia_infeasible({c1, c2}));
}

TEST_CASE("entails: arithmetic from the length case") {
  VarSorts vars{{"v", Sort::integer()}, {"w", Sort::integer()}};
  auto r = entails(lists(), vars, {P("0 <= w"), P("v == 1 + w")}, P("0 <= v"), {});
  CHECK(r.proved);
  CHECK_FALSE(entails(lists(), vars, {P("v == 1 + w")}, P("0 <= v"), {}).proved);
  CHECK(entails(lists(), vars, {P("v < w"), P("w < v + 1")}, P("false"), {}).proved);
}

TEST_CASE("entails: distinct constants are not equal") {
  CHECK_FALSE(entails(lists(), list_vars(), {}, P("xs == ys"), {}).proved);
  CHECK(entails(lists(), list_vars(), {}, P("xs == xs"), {}).proved);
  CHECK(entails(lists(), list_vars(), {}, P("[] /= x : xs"), {}).proved);
}

TEST_CASE("instantiate_axioms: measure equations per constructor") {
  Solver s(lists(), {});
  s.add_seed(T("length [1]"));
  s.instantiate_axioms();
  std::vector<std::string> want{"length (1 : []) = 1 + length []", "length [] = 0"};
  std::vector<std::string> got;
  for (const auto& l : s.ledger()) {
    if (l.rfind("length", 0) == 0) got.push_back(l);
  }
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  CHECK(got == want);
  CHECK(s.holds(P("length [1] == 1")));
}

TEST_CASE("instantiate_axioms: undecided match unfolds nothing") {
  Solver s(lists(), list_vars());
  s.add_seed(T("reverse xs"));
  s.instantiate_axioms();
  CHECK(s.reflect_count() == 0);
}

TEST_CASE("instantiate_axioms: singletonP gets exactly its three equations") {
  Solver s(lists(), list_vars());
  for (const char* t : {"reverse [x]", "reverse [] ++ [x]", "[] ++ [x]", "[x]"}) s.add_seed(T(t));
  s.instantiate_axioms();
  CHECK(s.reflect_count() == 3);
  std::vector<std::string> want{"reverse (x : []) = reverse [] ++ x : []", "reverse [] = []", "[] ++ x : [] = x : []"};
  std::vector<std::string> got;
  for (const auto& l : s.ledger()) {
    if (l.find("length") == std::string::npos) got.push_back(l);
  }
  CHECK(got == want);
  CHECK(s.holds(P("reverse [x] == [x]")));
}

TEST_CASE("entails: singletonP conclusion from its chain terms") {
  std::vector<Term> seeds{T("reverse [x]"), T("reverse [] ++ [x]"), T("[] ++ [x]"), T("[x]")};
  CHECK(entails(lists(), list_vars(), {}, P("reverse [x] == [x]"), seeds).proved);
  CHECK_FALSE(entails(lists(), list_vars(), {}, P("reverse [x] == [x]"), {}).proved);
}

TEST_CASE("ple: rightIdP base case closes with no manual steps") {
  EntailOptions ple{true, kDefaultPleFuel};
  CHECK(entails(lists(), list_vars(), {P("xs == []")}, P("xs ++ [] == xs"), {}, ple).proved);
  CHECK_FALSE(entails(lists(), list_vars(), {P("xs == []")}, P("xs ++ [] == xs"), {}).proved);
}

TEST_CASE("ple: assocP inductive case from the recursive call") {
  EntailOptions ple{true, kDefaultPleFuel};
  VarSorts vars = list_vars();
  vars["as"] = vars["xs"];
  std::vector<Pred> facts{P("as == x : xs"), P("xs ++ (ys ++ zs) == (xs ++ ys) ++ zs")};
  Pred goal = P("as ++ (ys ++ zs) == (as ++ ys) ++ zs");
  CHECK(entails(lists(), vars, facts, goal, {}, ple).proved);
  CHECK_FALSE(entails(lists(), vars, facts, goal, {}).proved);
}

TEST_CASE("ple: zero fuel leaves the state unchanged") {
  Solver s(lists(), list_vars());
  s.add_seed(T("[] ++ xs"));
  std::size_t before = s.graph().size();
  CHECK(s.ple_saturate(0));
  CHECK(s.graph().size() == before);
  CHECK(s.reflect_count() == 0);
}

TEST_CASE("ple: fuel runs out on a long unfolding") {
  Solver s(lists(), list_vars());
  s.add_seed(T("reverse [1, 2, 3, 4, 5, 6, 7, 8]"));
  CHECK_FALSE(s.ple_saturate(2));
  Solver t(lists(), list_vars());
  t.add_seed(T("reverse [1, 2, 3, 4, 5, 6, 7, 8]"));
  CHECK(t.ple_saturate(100));
  CHECK(t.holds(P("reverse [1, 2, 3, 4, 5, 6, 7, 8] == [8, 7, 6, 5, 4, 3, 2, 1]")));
}

TEST_CASE("property: congruence closure agrees with naive closure") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 1000; ++trial) CHECK(oracle::cc_agrees_with_naive(rng, 30));
}

TEST_CASE("property: randomized valuations find no unsound entailment") {
  std::mt19937 rng(11);
  auto stats = oracle::soundness_trials(lists(), rng, 2000);
  CHECK(stats.unsound == 0);
  CHECK(stats.proved > 100);
}

TEST_CASE("property: entailment is monotone in the facts") {
  std::mt19937 rng(5);
  auto stats = oracle::monotonicity_trials(lists(), rng, 300);
  CHECK(stats.violations == 0);
  CHECK(stats.checked > 20);
}

TEST_CASE("property: non-PLE unfoldings stay within the seed applications") {
  const char* seeds[] = {"reverse (reverse [x, y])", "reverse [x] ++ reverse xs", "[] ++ ([x] ++ ys)",
                         "reverse (xs ++ [x])", "length (reverse [1, 2])"};
  for (const char* t : seeds) {
    Solver s(lists(), list_vars());
    s.add_seed(T(t));
    s.instantiate_axioms();
    CHECK(s.reflect_count() <= s.seed_apps());
  }
}

// One line per acceptance criterion; exit status 1 when any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corpus_util.hpp"
#include "enum_util.hpp"
#include "eqcheck/checker/checker.hpp"
#include "eqcheck/cli/cli.hpp"
#include "eqcheck/semantics/eval.hpp"
#include "eqcheck/syntax/desugar.hpp"
#include "eqcheck/syntax/parser.hpp"
#include "eqcheck/syntax/pretty.hpp"
#include "eqcheck/wf/termination.hpp"
#include "eqcheck/wf/totality.hpp"
#include "logic_oracle.hpp"

using namespace eqcheck;

namespace {

SourceModule module_of(const std::string& src, const std::string& file = "<input>") {
  return desugar(parse_module(src, file));
}

struct Result {
  bool pass = true;
  std::string detail;
};

Result fail(const std::string& why) { return {false, why}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_quiet(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  int code = run(args, o, e);
  if (out) *out = o.str();
  return code;
}

Result corpus_acceptance() {
  const std::map<std::string, std::vector<std::string>> proofs{
      {"section2.eq", {"singletonP", "involutionP", "distributivityP", "rightIdP", "assocP"}},
      {"section2_ple.eq", {"rightIdP", "assocP"}},
      {"section4.eq", {"reverseApp", "reverse'", "flatten", "flattenApp", "flatten'"}},
      {"section5.eq",
       {"sequenceP", "generalizedCorrectnessP", "correctnessP", "compApp", "comp'", "equivalenceP",
        "generalizedCorrectnessP'", "correctnessP'"}},
  };
  auto t0 = std::chrono::steady_clock::now();
  std::size_t obligations = 0;
  for (const auto& [file, names] : proofs) {
    std::string path = corpus_path(file);
    if (int code = run_quiet({"check", path}); code != 0) return fail(file + " exits " + std::to_string(code));
    Report r = check_module(module_of(read_file(path), path), {});
    TypeEnv env = check_types(module_of(read_file(path)));
    for (const auto& n : names) {
      if (!env.function(n)) return fail(file + " lacks " + n);
    }
    for (const auto& v : r.verdicts) {
      if (v.status != Status::Proved) return fail(v.id + " " + to_string(v.status));
    }
    obligations += r.verdicts.size();
  }
  double secs = seconds_since(t0);
  if (secs >= 60) return fail("took " + std::to_string(secs) + " s");
  std::ostringstream d;
  d << "4 files, " << obligations << " obligations proved in " << secs << " s";
  return {true, d.str()};
}

Result negative_suite() {
  std::regex header(R"(-- expect-fail: (\S+) (\S+) (\d+))");
  std::size_t files = 0;
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(corpus_path("mutations"))) paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    std::string text = read_file(p.string());
    std::smatch m;
    if (!std::regex_search(text, m, header)) return fail(p.filename().string() + " has no expect-fail header");
    std::string out;
    int code = run_quiet({"check", p.string(), "--json"}, &out);
    if (code != 1) return fail(p.filename().string() + " exits " + std::to_string(code));
    std::istringstream lines(out);
    nlohmann::json first;
    for (std::string line; std::getline(lines, line);) {
      auto j = nlohmann::json::parse(line);
      if (j["status"] != "proved") {
        first = j;
        break;
      }
    }
    if (first.is_null()) return fail(p.filename().string() + " has no failed verdict");
    if (first["id"] != m[1].str() || first["kind"] != m[2].str() || first["span"]["line"] != std::stoi(m[3].str())) {
      return fail(p.filename().string() + ": first failure is " + first["id"].get<std::string>() + " at line " +
                  std::to_string(first["span"]["line"].get<int>()));
    }
    ++files;
  }
  if (files < 20) return fail("only " + std::to_string(files) + " mutation files");
  return {true, std::to_string(files) + " mutation files rejected at the edited obligation"};
}

Result totality() {
  std::string src = read_file(corpus_path("mutations/involutionP_partial.eq"));
  TypeEnv env = check_types(module_of(src));
  auto r = check_totality(*env.function("involutionP"), env);
  if (r.total || r.missing.size() != 1 || r.missing[0].size() != 1) return fail("involutionP reported total");
  const Pattern& p = r.missing[0][0];
  bool cons_wild = p.kind == PatternKind::Con && p.name == "Cons" && p.args.size() == 2 &&
                   p.args[0].kind == PatternKind::Wild && p.args[1].kind == PatternKind::Wild;
  if (!cons_wild) return fail("missing pattern is " + pretty(p));
  Report rep = check_module(module_of(src), {});
  if (rep.verdicts.empty() || rep.ok()) return fail("partial involutionP accepted");
  TypeEnv env5 = check_types(module_of(read_file(corpus_path("section5.eq"))));
  if (!check_totality(*env5.function("exec"), env5).total) return fail("exec reported partial");
  return {true, "involutionP misses Cons _ _; exec with its catch-all is total"};
}

Result termination() {
  auto logic = [](const TypeEnv& env, const std::string& name) -> EntailFn {
    return [&env, name](const std::vector<Pred>& facts, const Pred& goal, const VarSorts& vars) {
      return entails(env, vars, facts, goal, {}, {false, 0, {name}}).proved;
    };
  };
  std::string s2 = read_file(corpus_path("section2.eq"));
  TypeEnv env2 = check_types(module_of(s2));
  TypeEnv env5 = check_types(module_of(read_file(corpus_path("section5.eq"))));
  using K = TerminationEvidence::Kind;
  if (check_termination(*env2.function("length"), env2, logic(env2, "length")).kind != K::Structural)
    return fail("length is not structural");
  if (check_termination(*env5.function("exec"), env5, logic(env5, "exec")).kind != K::Structural)
    return fail("exec is not structural");
  auto inv = check_termination(*env2.function("involutionP"), env2, logic(env2, "involutionP"));
  if (inv.kind != K::Semantic || inv.guessed) return fail("involutionP does not use its declared metric");

  std::string bare = s2;
  bare.erase(bare.find(" / [length xs]"), 14);
  TypeEnv env_bare = check_types(module_of(bare));
  auto guess = check_termination(*env_bare.function("involutionP"), env_bare, logic(env_bare, "involutionP"));
  // Without the metric the recursive call on the tail is already structural.
  if (guess.kind != K::Structural || guess.positions != std::vector<std::size_t>{0})
    return fail("involutionP without a metric is not structural");
  if (!check_module(module_of(bare), {}).ok()) return fail("involutionP without a metric rejected");

  std::string paired = s2 + "\npairs : xs:(List Int) -> Int\npairs (x:y:ys) = pairs (y : ys)\npairs _ = 0\n";
  TypeEnv env_pairs = check_types(module_of(paired));
  auto pg = check_termination(*env_pairs.function("pairs"), env_pairs, logic(env_pairs, "pairs"));
  if (pg.kind != K::Semantic || !pg.guessed || pretty(pg.metric[0]) != "length xs")
    return fail("no guessed first-argument metric for pairs");

  std::string looped = s2 + "\nloop : xs:(List a) -> Int\nloop xs = loop xs\n";
  TypeEnv env_loop = check_types(module_of(looped));
  try {
    check_termination(*env_loop.function("loop"), env_loop, logic(env_loop, "loop"));
    return fail("loop accepted");
  } catch (const NonTermination&) {
  }
  return {true, "length, exec structural; involutionP by its declared length xs, structural without it; pairs by guessed length xs; loop rejected"};
}

Result ple_parity() {
  std::string src = read_file(corpus_path("section2_ple.eq"));
  if (!check_module(module_of(src), {}).ok()) return fail("annotated file rejected");
  std::string bare = src;
  for (const char* a : {"ple rightIdP\n", "ple assocP\n"}) bare.erase(bare.find(a), std::string(a).size());
  Report r = check_module(module_of(bare), {});
  std::set<std::string> failed;
  for (const auto& v : r.verdicts) {
    if (v.status == Status::Failed) failed.insert(v.decl);
  }
  if (failed != std::set<std::string>{"rightIdP", "assocP"}) return fail("unannotated proofs not both rejected");
  return {true, "concise rightIdP and assocP check only with ple"};
}

// Every Expr of depth at most 4 with leaves in [-3, 3], as values.
Result compiler_oracle() {
  TypeEnv env = check_types(module_of(read_file(corpus_path("section5.eq"))));
  Evaluator ev(env);
  const ConstructorInfo* val = env.constructor("Val");
  const ConstructorInfo* add = env.constructor("Add");
  const ConstructorInfo* just = env.constructor("Just");
  const ConstructorInfo* cons = env.constructor("Cons");
  Value nil = Value::con(env.constructor("Nil"));

  std::vector<std::vector<Value>> by_depth(3);  // index k holds depth k + 1
  for (int n = -3; n <= 3; ++n) by_depth[0].push_back(Value::con(val, {Value::integer(n)}));
  for (std::size_t d = 1; d < 3; ++d) {
    std::vector<Value> below;
    for (std::size_t k = 0; k < d; ++k) below.insert(below.end(), by_depth[k].begin(), by_depth[k].end());
    // Depth exactly d + 1: some child at depth d, the tail of `below`.
    for (std::size_t i = 0; i < below.size(); ++i) {
      for (std::size_t j = 0; j < below.size(); ++j) {
        bool left = i >= below.size() - by_depth[d - 1].size();
        bool right = j >= below.size() - by_depth[d - 1].size();
        if (left || right) by_depth[d].push_back(Value::con(add, {below[i], below[j]}));
      }
    }
  }
  std::vector<Value> upto3;
  for (std::size_t k = 0; k < 3; ++k) upto3.insert(upto3.end(), by_depth[k].begin(), by_depth[k].end());

  std::size_t checked = 0, agree = 0;
  auto check = [&](const Value& e) {
    ++checked;
    Value code = ev.call("comp", std::span<const Value>(&e, 1));
    Value args[2] = {code, nil};
    Value run = ev.call("exec", args);
    Value n = ev.call("eval", std::span<const Value>(&e, 1));
    Value want = Value::con(just, {Value::con(cons, {n, nil})});
    Value code2 = ev.call("comp'", std::span<const Value>(&e, 1));
    if (run == want && code2 == code) ++agree;
  };
  for (const auto& e : upto3) check(e);
  const std::size_t deep_from = upto3.size() - by_depth[2].size();
  for (std::size_t i = 0; i < upto3.size(); ++i) {
    for (std::size_t j = 0; j < upto3.size(); ++j) {
      if (i >= deep_from || j >= deep_from) check(Value::con(add, {upto3[i], upto3[j]}));
    }
  }
  if (agree != checked) return fail(std::to_string(checked - agree) + " of " + std::to_string(checked) + " disagree");
  return {true, std::to_string(checked) + " expressions, 100% agreement"};
}

Result list_laws() {
  TypeEnv env = check_types(module_of(read_file(corpus_path("section2.eq"))));
  Evaluator ev(env);
  Sort list = Sort::data("List", {Sort::integer()});
  // Every cons cell costs one, so size is length here.
  auto lists = enumerate_values(env, list, 5, {0, 1, 2});
  std::size_t pairs = 0;
  for (const auto& xs : lists) {
    Value r = ev.call("reverse", std::span<const Value>(&xs, 1));
    if (!(ev.call("reverse", std::span<const Value>(&r, 1)) == xs)) return fail("involution fails at " + to_string(xs));
    for (const auto& ys : lists) {
      Value a[2] = {xs, ys};
      Value app = ev.call("append", a);
      Value lhs = ev.call("reverse", std::span<const Value>(&app, 1));
      Value b[2] = {ev.call("reverse", std::span<const Value>(&ys, 1)), r};
      if (!(lhs == ev.call("append", b))) return fail("distributivity fails at " + to_string(xs) + ", " + to_string(ys));
      ++pairs;
    }
  }
  return {true, std::to_string(lists.size()) + " lists, " + std::to_string(pairs) + " pairs"};
}

Result logic_soundness() {
  TypeEnv env = check_types(module_of(read_file(corpus_path("section2.eq"))));
  std::mt19937 rng(2024);
  auto st = oracle::soundness_trials(env, rng, 10000);
  if (st.unsound != 0) return fail(std::to_string(st.unsound) + " unsound entailments, first " + st.example);
  std::mt19937 rng2(17);
  for (int i = 0; i < 1000; ++i) {
    if (!oracle::cc_agrees_with_naive(rng2, 30)) return fail("congruence closure disagrees on graph " + std::to_string(i));
  }
  return {true, std::to_string(st.trials) + " trials (" + std::to_string(st.proved) +
                    " proved), 0 unsound; 1000 graphs agree"};
}

Result derivation_coherence() {
  const std::string cleaned4 = R"(
reverseAppClean : xs:(List a) -> ys:(List a) -> List a
reverseAppClean [] ys = ys
reverseAppClean (x:xs) ys = reverseAppClean xs (x : ys)

flattenAppClean : t:Tree -> ns:(List Int) -> List Int
flattenAppClean (Leaf n) ns = n : ns
flattenAppClean (Node l r) ns = flattenAppClean l (flattenAppClean r ns)
)";
  const std::string cleaned5 = R"(
compAppClean : e:Expr -> c:(List Op) -> List Op
compAppClean (Val n) c = PUSH n : c
compAppClean (Add x y) c = compAppClean x (compAppClean y (ADD : c))
)";
  struct Case {
    std::string file, extra, name;
  };
  std::vector<Case> cases{{"section4.eq", cleaned4, "reverseApp"},
                          {"section4.eq", cleaned4, "flattenApp"},
                          {"section5.eq", cleaned5, "compApp"}};
  std::ostringstream d;
  for (const auto& c : cases) {
    TypeEnv env = check_types(module_of(read_file(corpus_path(c.file)) + c.extra));
    Evaluator ev(env);
    ev.set_force_chains(true);
    const FunctionInfo& f = *env.function(c.name);
    std::vector<std::vector<Value>> pools;
    for (const auto& p : f.sig.params) pools.push_back(enumerate_values(env, enum_util::ground(p.sort), 5, {0, 1}));
    std::size_t inputs = 0;
    for (const auto& a : pools[0]) {
      for (const auto& b : pools[1]) {
        Value args[2] = {a, b};
        if (!(ev.call(c.name, args) == ev.call(c.name + "Clean", args)))
          return fail(c.name + " differs at " + to_string(a) + ", " + to_string(b));
        ++inputs;
      }
    }
    d << (d.tellp() ? ", " : "") << c.name << " " << inputs;
  }
  return {true, d.str() + " inputs agree"};
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"corpus acceptance", corpus_acceptance},
      {"negative suite", negative_suite},
      {"totality", totality},
      {"termination", termination},
      {"ple parity", ple_parity},
      {"compiler differential oracle", compiler_oracle},
      {"list-law oracle", list_laws},
      {"logic soundness", logic_soundness},
      {"derivation/program coherence", derivation_coherence},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = fail(std::string("exception: ") + e.what());
    }
    all = all && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << r.detail
              << " [" << static_cast<long>(seconds_since(t0) * 1000) << " ms]" << std::endl;
  }
  return all ? 0 : 1;
}

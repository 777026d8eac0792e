#include "eqcheck/cli/cli.hpp"

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eqcheck/syntax/desugar.hpp"
#include "eqcheck/syntax/parser.hpp"
#include "eqcheck/syntax/pretty.hpp"

namespace eqcheck {

namespace {

std::string where(const std::string& file, const Span& s) {
  return file + ":" + std::to_string(s.line) + ":" + std::to_string(s.col);
}

std::string paint(bool color, const char* code, const std::string& text) {
  return color ? std::string("\x1b[") + code + "m" + text + "\x1b[0m" : text;
}

bool read_source(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

bool want_color(std::ostream& out) {
  const char* v = std::getenv("EQCHECK_COLOR");
  std::string mode = v ? v : "auto";
  if (mode == "always") return true;
  if (mode == "never") return false;
  return &out == &std::cout && isatty(STDOUT_FILENO);
}

void report_error(std::ostream& err, const std::string& file, const Error& e, bool color) {
  err << where(file, e.span()) << ": " << paint(color, "1;31", "error") << ": " << e.what() << "\n";
  if (const auto* pe = dynamic_cast<const ParseError*>(&e); pe && !pe->expected().empty()) {
    err << "  expected one of:";
    for (const auto& x : pe->expected()) err << " " << x;
    err << "\n";
  }
}

const Verdict* find_verdict(const std::vector<Report>& reports, const std::string& id) {
  for (const auto& r : reports) {
    for (const auto& v : r.verdicts) {
      if (v.id == id) return &v;
    }
  }
  return nullptr;
}

void dump_facts(std::ostream& out, const Verdict& v) {
  out << "obligation " << v.id << " (" << to_string(v.kind) << ", " << to_string(v.status) << ")\n";
  out << "facts:\n";
  for (const auto& f : v.facts) out << "  " << f << "\n";
  out << "unfolded:\n";
  for (const auto& l : v.ledger) out << "  " << l << "\n";
  out << "goal:\n  " << v.goal << "\n";
}

int run_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int code = 0;
  std::vector<Report> reports;
  for (const auto& path : cfg.inputs) {
    std::string text;
    if (!read_source(path, text)) {
      err << path << ": " << paint(cfg.color, "1;31", "error") << ": cannot read file\n";
      code = 2;
      continue;
    }
    try {
      Report r = check_module(desugar(parse_module(text, path)), cfg.check);
      out << (cfg.format == OutputFormat::Json ? render_json(r) : render_human(r, cfg.color));
      if (cfg.format == OutputFormat::Json) {
        for (const auto& w : r.warnings) {
          err << where(path, w.span) << ": warning: " << w.message << "\n";
        }
      }
      if (!r.ok() && code == 0) code = 1;
      reports.push_back(std::move(r));
    } catch (const Error& e) {
      report_error(err, path, e, cfg.color);
      code = 2;
    }
  }
  if (!cfg.dump_facts.empty()) {
    const Verdict* v = find_verdict(reports, cfg.dump_facts);
    if (!v) {
      err << "error: no obligation " << cfg.dump_facts << "\n";
      return 2;
    }
    dump_facts(out, *v);
  }
  return code;
}

int run_eval(const std::string& path, const std::string& expr, std::uint64_t fuel, bool color, std::ostream& out,
             std::ostream& err) {
  std::string text;
  if (!read_source(path, text)) {
    err << path << ": " << paint(color, "1;31", "error") << ": cannot read file\n";
    return 2;
  }
  try {
    TypeEnv env = check_types(desugar(parse_module(text, path)));
    Term t = desugar_term(parse_term(expr));
    env.sort_of(t, {});
    out << to_string(evaluate(env, t, fuel)) << "\n";
    return 0;
  } catch (const Error& e) {
    report_error(err, path, e, color);
    return 2;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

std::string render_json(const Report& r) {
  std::string out;
  for (const auto& v : r.verdicts) {
    nlohmann::ordered_json j;
    j["file"] = r.file;
    j["decl"] = v.decl;
    j["id"] = v.id;
    j["kind"] = to_string(v.kind);
    if (v.kind == ObligationKind::ChainStep) j["step"] = v.step;
    j["span"] = {{"line", v.span.line}, {"col", v.span.col}, {"end_line", v.span.end_line}, {"end_col", v.span.end_col}};
    j["status"] = to_string(v.status);
    j["goal"] = v.goal;
    j["facts"] = v.facts;
    if (v.kind == ObligationKind::ChainStep) {
      j["lhs"] = v.lhs;
      j["rhs"] = v.rhs;
    }
    if (!v.message.empty()) j["message"] = v.message;
    out += j.dump() + "\n";
  }
  return out;
}

std::string render_human(const Report& r, bool color) {
  std::ostringstream out;
  std::size_t proved = 0;
  for (const auto& v : r.verdicts) {
    if (v.status == Status::Proved) {
      ++proved;
      continue;
    }
    out << where(r.file, v.span) << ": " << paint(color, "1;31", "error") << ": " << to_string(v.kind) << " " << v.id
        << " " << to_string(v.status) << "\n";
    if (v.kind == ObligationKind::ChainStep) {
      out << "      " << v.lhs << "\n  ==. " << v.rhs << "\n";
    } else if (!v.goal.empty()) {
      out << "  goal: " << v.goal << "\n";
    }
    if (!v.message.empty()) {
      std::istringstream lines(v.message);
      for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
    }
  }
  for (const auto& w : r.warnings) {
    out << where(r.file, w.span) << ": " << paint(color, "1;33", "warning") << ": " << w.message << "\n";
  }
  out << r.file << ": " << proved << "/" << r.verdicts.size() << " obligations proved";
  if (!r.warnings.empty()) out << ", " << r.warnings.size() << " warning" << (r.warnings.size() == 1 ? "" : "s");
  out << "\n";
  return out.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"eqcheck: checks equational proofs and refinement signatures"};
  app.require_subcommand(1);

  RunConfig cfg;
  bool json = false;
  auto* check = app.add_subcommand("check", "check source files");
  check->add_option("files", cfg.inputs, "source files")->required();
  check->add_flag("--ple-default", cfg.check.ple_default, "unfold with ple in every declaration");
  check->add_flag("--strict-hints", cfg.check.strict_hints, "a step sees only hints attached at or before it");
  check->add_option("--fuel", cfg.eval_fuel, "evaluation fuel")->check(CLI::PositiveNumber);
  check->add_option("--ple-fuel", cfg.check.ple_fuel, "ple rounds per obligation")->check(CLI::PositiveNumber);
  check->add_flag("--json", json, "one JSON object per verdict");
  check->add_option("--jobs", cfg.check.jobs, "worker threads")->check(CLI::PositiveNumber);
  check->add_option("--dump-facts", cfg.dump_facts, "print the facts of one obligation");

  std::string eval_file, eval_term;
  std::uint64_t eval_fuel = kDefaultFuel;
  auto* eval = app.add_subcommand("eval", "evaluate a closed term against a source file");
  eval->add_option("file", eval_file, "source file")->required();
  eval->add_option("term", eval_term, "term")->required();
  eval->add_option("--fuel", eval_fuel, "evaluation fuel")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  cfg.color = want_color(out);
  if (*eval) return run_eval(eval_file, eval_term, eval_fuel, cfg.color, out, err);
  cfg.format = json ? OutputFormat::Json : OutputFormat::Human;
  return run_check(cfg, out, err);
}

}  // namespace eqcheck

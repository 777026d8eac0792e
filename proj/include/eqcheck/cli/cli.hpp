#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eqcheck/checker/checker.hpp"
#include "eqcheck/semantics/eval.hpp"

namespace eqcheck {

enum class OutputFormat { Human, Json };

struct RunConfig {
  std::vector<std::string> inputs;
  CheckOptions check;
  std::uint64_t eval_fuel = kDefaultFuel;
  OutputFormat format = OutputFormat::Human;
  std::string dump_facts;  // obligation id, empty for none
  bool color = false;
};

/// `args` excludes the program name. Exit codes: 0 when every obligation is
/// proved, 1 when some verdict failed, 2 on usage, read, parse or type
/// errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One JSON object per line for each verdict.
std::string render_json(const Report& r);
std::string render_human(const Report& r, bool color);

}  // namespace eqcheck

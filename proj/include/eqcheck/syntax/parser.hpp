#pragma once

#include <string>
#include <string_view>

#include "eqcheck/errors.hpp"
#include "eqcheck/syntax/ast.hpp"

namespace eqcheck {

/// Parses a `.eq` source file. Declarations start in column 1; any line
/// indented further continues the current declaration.
///
/// Throws ParseError (with the set of expected tokens) on malformed input,
/// including non-linear clause patterns.
SourceModule parse_module(std::string_view source, std::string file = "<input>");

/// Parses a single term, as used by tests and the REPL-style helpers.
Term parse_term(std::string_view source);

/// Parses a single refinement predicate.
Pred parse_pred(std::string_view source);

}  // namespace eqcheck

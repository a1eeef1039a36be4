#pragma once

#include <string>

#include "maxreal/ltl.hpp"

namespace maxreal::spec {

/// Parses the line-oriented spec file format (see README): `inputs:`,
/// `outputs:`, repeated `hard:` and `soft:` lines with optional bracket
/// options, and an `options:` line. Throws std::runtime_error with a line
/// number on malformed input; the result has been validated.
ltl::SpecProblem parse_spec_file(const std::string& text);

/// Inverse of parse_spec_file up to formula printing: parsing the emitted
/// text yields an identical SpecProblem.
std::string emit_spec_file(const ltl::SpecProblem& p);

}  // namespace maxreal::spec

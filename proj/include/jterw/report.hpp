#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jterw/suites.hpp"
#include "jterw/terwilliger.hpp"

namespace jterw {

/// JSON object for one report. Rationals are "p/q" strings, so parsing the output gives back
/// an equal report.
std::string report_to_json(const SuiteReport& report, int indent = 2);
/// Throws std::runtime_error on malformed input.
SuiteReport report_from_json(std::string_view text);

/// {"reports": [...], "passed": bool}
std::string reports_to_json(std::span<const SuiteReport> reports, int indent = 2);
std::vector<SuiteReport> reports_from_json(std::string_view text);

/// Human-readable block, one line per fact and note.
std::string report_to_text(const SuiteReport& report);

/// {"n", "d", "regime", "blocks": [{"r","s","e","block_size"}], "dim_T_formula", "dim_T_closure", "match"}
std::string decomposition_to_json(const Decomposition& dec, int indent = 2);
std::string decomposition_to_text(const Decomposition& dec);

}  // namespace jterw

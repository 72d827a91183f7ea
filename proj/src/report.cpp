#include "jterw/report.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace jterw {

namespace {

using nlohmann::json;

json residual_json(const ResidualSummary& r) {
  return {{"row", r.row}, {"col", r.col}, {"value", to_string(r.value)}, {"nonzeros", r.nonzeros}};
}

json to_json_value(const SuiteReport& report) {
  json j;
  j["suite"] = report.name;
  j["label"] = report.label;
  j["sweep"] = report.sweep;
  j["cases_run"] = report.cases_run;
  j["cases_passed"] = report.cases_passed;
  j["passed"] = report.passed();
  if (report.counterexample) {
    const auto& c = *report.counterexample;
    json cj{{"parameters", c.parameters}, {"message", c.message}, {"residual", nullptr}};
    if (c.residual) cj["residual"] = residual_json(*c.residual);
    j["counterexample"] = std::move(cj);
  } else {
    j["counterexample"] = nullptr;
  }
  j["wall_time_ms"] = report.wall_time_ms;
  j["facts"] = report.facts;
  j["notes"] = report.notes;
  return j;
}

SuiteReport from_json_value(const json& j) {
  SuiteReport r;
  r.name = j.at("suite").get<std::string>();
  r.label = j.at("label").get<std::string>();
  r.sweep = j.at("sweep").get<std::string>();
  r.cases_run = j.at("cases_run").get<std::size_t>();
  r.cases_passed = j.at("cases_passed").get<std::size_t>();
  const auto& cj = j.at("counterexample");
  if (!cj.is_null()) {
    Counterexample c;
    c.parameters = cj.at("parameters").get<std::string>();
    c.message = cj.at("message").get<std::string>();
    const auto& rj = cj.at("residual");
    if (!rj.is_null()) {
      ResidualSummary s;
      s.row = rj.at("row").get<std::size_t>();
      s.col = rj.at("col").get<std::size_t>();
      s.value = parse_rational(rj.at("value").get<std::string>());
      s.nonzeros = rj.at("nonzeros").get<std::size_t>();
      c.residual = s;
    }
    r.counterexample = std::move(c);
  }
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  r.facts = j.at("facts").get<std::map<std::string, std::string>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid JSON: ") + e.what());
  }
}

template <class F>
auto guard(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace

std::string report_to_json(const SuiteReport& report, int indent) { return to_json_value(report).dump(indent); }

SuiteReport report_from_json(std::string_view text) {
  const auto j = parse(text);
  return guard([&] { return from_json_value(j); });
}

std::string reports_to_json(std::span<const SuiteReport> reports, int indent) {
  json arr = json::array();
  bool passed = true;
  for (const auto& r : reports) {
    arr.push_back(to_json_value(r));
    passed = passed && r.passed();
  }
  return json{{"reports", std::move(arr)}, {"passed", passed}}.dump(indent);
}

std::vector<SuiteReport> reports_from_json(std::string_view text) {
  const auto j = parse(text);
  return guard([&] {
    std::vector<SuiteReport> out;
    for (const auto& r : j.at("reports")) out.push_back(from_json_value(r));
    return out;
  });
}

std::string report_to_text(const SuiteReport& report) {
  std::ostringstream out;
  out << (report.passed() ? "PASS " : "FAIL ") << report.name << " [" << report.label << "] "
      << report.cases_passed << "/" << report.cases_run << " cases, " << std::fixed << std::setprecision(1)
      << report.wall_time_ms << " ms\n" << std::defaultfloat;
  out << "  sweep: " << report.sweep << "\n";
  if (report.counterexample) {
    const auto& c = *report.counterexample;
    out << "  counterexample: " << c.parameters << ": " << c.message << "\n";
    if (c.residual) {
      out << "    largest residual " << to_string(c.residual->value) << " at (" << c.residual->row << ", "
          << c.residual->col << "), " << c.residual->nonzeros << " nonzero residual entries\n";
    }
  }
  for (const auto& [key, value] : report.facts) out << "  " << key << ": " << value << "\n";
  for (const auto& note : report.notes) out << "  note: " << note << "\n";
  return out.str();
}

std::string decomposition_to_json(const Decomposition& dec, int indent) {
  json blocks = json::array();
  for (const auto& b : dec.blocks) {
    blocks.push_back({{"r", b.r}, {"s", b.s}, {"e", b.e}, {"block_size", b.block_size()}});
  }
  json j;
  j["n"] = dec.n;
  j["d"] = dec.d;
  j["regime"] = std::string(regime_name(dec.regime));
  j["blocks"] = std::move(blocks);
  j["dim_T_formula"] = dec.dim_formula;
  j["dim_T_closure"] = dec.dim_closure;
  j["match"] = dec.match;
  return j.dump(indent);
}

std::string decomposition_to_text(const Decomposition& dec) {
  std::ostringstream out;
  out << "J(" << dec.n << "," << dec.d << ") regime " << regime_name(dec.regime) << "\n";
  out << "  r s e size\n";
  for (const auto& b : dec.blocks) {
    out << "  " << b.r << " " << b.s << " " << b.e << " " << b.block_size() << "\n";
  }
  out << "  dim T: formula " << dec.dim_formula << ", closure " << dec.dim_closure << " -> "
      << (dec.match ? "match" : "MISMATCH") << "\n";
  return out.str();
}

}  // namespace jterw

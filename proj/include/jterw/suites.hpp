#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jterw/johnson.hpp"
#include "jterw/rational_matrix.hpp"
#include "jterw/terwilliger.hpp"

namespace jterw {

struct SchemeParams {
  int n;
  int d;
  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// Parameter ranges for a suite run. Unset fields fall back to the suite's defaults.
struct Sweep {
  std::optional<int> v_max;                  // identity suites over J(v, k) building blocks
  std::vector<SchemeParams> schemes;         // scheme-level suites; empty means the defaults
  std::optional<std::vector<int>> base_point;  // applied to every scheme; default {1..d}
  std::optional<EntryFlip> flip;             // fixture corruption of one intersection matrix
};

struct Counterexample {
  std::string parameters;
  std::string message;
  std::optional<ResidualSummary> residual;
  // Full matrices for dumping; not part of the serialized report.
  std::optional<RationalMatrix> actual;
  std::optional<RationalMatrix> expected;
};

struct SuiteReport {
  std::string name;
  std::string label;
  std::string sweep;
  std::size_t cases_run = 0;
  std::size_t cases_passed = 0;
  std::optional<Counterexample> counterexample;
  double wall_time_ms = 0.0;
  std::map<std::string, std::string> facts;
  std::vector<std::string> notes;

  bool passed() const { return cases_passed == cases_run; }
};

/// Compares every serialized field; counterexample matrices are ignored.
bool operator==(const SuiteReport& a, const SuiteReport& b);

class UnknownSuiteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleSweepError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SuiteKind {
  Identity,  // sweeps v <= v_max
  Scheme,    // sweeps (n, d) pairs
};

struct SuiteInfo {
  std::string_view name;
  std::string_view label;
  SuiteKind kind;
  int default_v_max;                 // Identity suites only
  std::vector<Regime> regimes;       // Scheme suites only
};

std::span<const SuiteInfo> suite_registry();
/// Throws UnknownSuiteError.
const SuiteInfo& suite_info(std::string_view name);
bool suite_applies(const SuiteInfo& info, SchemeParams scheme);

/// (4,2) (5,2) (6,3) (7,3) (6,2) (8,3) (8,4) (9,4).
std::vector<SchemeParams> default_schemes();

/// Runs one suite exhaustively over the sweep. Deterministic apart from wall time.
/// Throws UnknownSuiteError, or InfeasibleSweepError when an explicitly requested scheme is
/// outside the suite's regime, violates n >= 2d, or the base point is not a d-subset of [n].
SuiteReport run_suite(std::string_view name, const Sweep& sweep = {});

}  // namespace jterw

#include "jterw/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "jterw/johnson.hpp"
#include "jterw/report.hpp"
#include "jterw/suites.hpp"
#include "jterw/terwilliger.hpp"

namespace jterw {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SchemeOptions {
  int n = -1;
  int d = -1;
  std::vector<int> base_point;
};

BasePointContext make_context(const SchemeOptions& o) {
  try {
    SchemeSpec spec(o.n, o.d);
    if (o.base_point.empty()) return BasePointContext(spec);
    return BasePointContext(spec, KSubset(o.n, o.base_point));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// A<m>, E<j>, Estar<i> or E*<i>, H<r>_<i>_<j> (over [n]).
RationalMatrix emit_matrix(const std::string& name, const BasePointContext& ctx, bool sphere_order) {
  static const std::regex adjacency(R"(A(\d+))");
  static const std::regex idempotent(R"(E(\d+))");
  static const std::regex dual(R"(E(?:star|\*)(\d+))");
  static const std::regex intersection(R"(H(\d+)_(\d+)_(\d+))");
  const int n = ctx.n();
  const int d = ctx.d();
  std::smatch m;
  RationalMatrix colex;
  bool square_scheme_matrix = true;
  if (std::regex_match(name, m, adjacency)) {
    const int k = std::stoi(m[1]);
    if (k > d) throw UsageError("A" + std::to_string(k) + ": relation index exceeds d = " + std::to_string(d));
    colex = adjacency_matrix(n, d, k);
  } else if (std::regex_match(name, m, dual)) {
    const int i = std::stoi(m[1]);
    if (i > d) throw UsageError(name + ": sphere index exceeds d = " + std::to_string(d));
    const auto duals = dual_idempotents(ctx);
    return sphere_order ? duals[static_cast<std::size_t>(i)] : ctx.to_colex_order(duals[static_cast<std::size_t>(i)]);
  } else if (std::regex_match(name, m, idempotent)) {
    const int j = std::stoi(m[1]);
    if (j >= idempotent_count(n, d)) {
      throw UsageError(name + ": J(" + std::to_string(n) + "," + std::to_string(d) + ") has only " +
                       std::to_string(idempotent_count(n, d)) + " primitive idempotents");
    }
    colex = primitive_idempotents(n, d)[static_cast<std::size_t>(j)];
  } else if (std::regex_match(name, m, intersection)) {
    const int r = std::stoi(m[1]);
    const int i = std::stoi(m[2]);
    const int j = std::stoi(m[3]);
    if (i > n || j > n) throw UsageError(name + ": subset sizes exceed n = " + std::to_string(n));
    colex = intersection_matrix(n, i, j, r);
    square_scheme_matrix = i == d && j == d;
  } else {
    throw UsageError("unknown matrix name '" + name + "' (expected A<m>, E<j>, Estar<i>, H<r>_<i>_<j>)");
  }
  if (!sphere_order) return colex;
  if (!square_scheme_matrix) throw UsageError(name + ": sphere order applies only to d-subset matrices");
  return ctx.to_sphere_order(colex);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write " + path.string());
  file << content;
  if (!file) throw UsageError("failed writing " + path.string());
}

std::string matrix_text(const RationalMatrix& m) {
  std::ostringstream s;
  write_matrix(s, m);
  return s.str();
}

int cmd_scheme(const SchemeOptions& so, const std::vector<std::string>& emits, const std::string& order,
               const std::string& out_path, std::ostream& out) {
  const auto ctx = make_context(so);
  const bool sphere = order == "sphere";
  std::vector<std::pair<std::string, RationalMatrix>> matrices;
  for (const auto& name : emits) matrices.emplace_back(name, emit_matrix(name, ctx, sphere));
  if (out_path.empty()) {
    if (matrices.size() > 1) throw UsageError("emitting several matrices requires --out <directory>");
    out << matrix_text(matrices.front().second);
    return kExitPass;
  }
  if (matrices.size() == 1 && !std::filesystem::is_directory(out_path)) {
    write_file(out_path, matrix_text(matrices.front().second));
    return kExitPass;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_path, ec);
  if (!std::filesystem::is_directory(out_path)) throw UsageError("cannot create directory " + out_path);
  for (const auto& [name, m] : matrices) {
    write_file(std::filesystem::path(out_path) / (name + ".mtx"), matrix_text(m));
  }
  return kExitPass;
}

void deliver(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    write_file(out_path, text.back() == '\n' ? text : text + "\n");
  }
}

int cmd_decompose(const SchemeOptions& so, const std::string& format, const std::string& out_path,
                  std::ostream& out) {
  const auto ctx = make_context(so);
  const auto dec = decompose(ctx);
  deliver(format == "json" ? decomposition_to_json(dec) : decomposition_to_text(dec), out_path, out);
  return dec.match ? kExitPass : kExitCounterexample;
}

EntryFlip parse_flip(const std::vector<int>& f) {
  if (f.size() != 6 || std::any_of(f.begin(), f.end(), [](int x) { return x < 0; })) {
    throw UsageError("--flip expects six nonnegative integers v,i,j,r,row,col");
  }
  return EntryFlip{{f[0], f[1], f[2], f[3]}, static_cast<std::size_t>(f[4]), static_cast<std::size_t>(f[5])};
}

int cmd_verify(std::vector<std::string> suites, std::optional<int> v_max, const SchemeOptions& so,
               const std::vector<int>& flip, const std::string& format, const std::string& out_path,
               const std::string& dump_dir, std::ostream& out) {
  const bool have_scheme = so.n >= 0 || so.d >= 0;
  if (have_scheme && (so.n < 0 || so.d < 0)) throw UsageError("--n and --d must be given together");
  if (!so.base_point.empty() && !have_scheme) throw UsageError("--base-point requires --n and --d");

  Sweep sweep;
  sweep.v_max = v_max;
  if (have_scheme) {
    if (so.n < 2 * so.d) throw UsageError("J(" + std::to_string(so.n) + "," + std::to_string(so.d) + ") violates n >= 2d");
    sweep.schemes.push_back({so.n, so.d});
  }
  if (!so.base_point.empty()) sweep.base_point = so.base_point;
  if (!flip.empty()) sweep.flip = parse_flip(flip);

  bool run_all = false;
  std::vector<std::string> names;
  for (const auto& s : suites) {
    if (s == "all") {
      run_all = true;
    } else {
      (void)suite_info(s);
      names.push_back(s);
    }
  }
  if (run_all) {
    names.clear();
    for (const auto& info : suite_registry()) {
      if (have_scheme && !suite_applies(info, {so.n, so.d})) continue;
      names.emplace_back(info.name);
    }
  }

  std::vector<SuiteReport> reports;
  for (const auto& name : names) reports.push_back(run_suite(name, sweep));

  bool passed = true;
  for (const auto& r : reports) passed = passed && r.passed();

  if (format == "json") {
    deliver(reports_to_json(reports), out_path, out);
  } else {
    std::string text;
    for (const auto& r : reports) text += report_to_text(r);
    text += passed ? "all suites passed\n" : "verification FAILED\n";
    deliver(text, out_path, out);
  }

  if (!dump_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dump_dir, ec);
    for (const auto& r : reports) {
      if (!r.counterexample) continue;
      const auto& c = *r.counterexample;
      if (c.actual) write_file(std::filesystem::path(dump_dir) / (r.name + ".actual.mtx"), matrix_text(*c.actual));
      if (c.expected) {
        write_file(std::filesystem::path(dump_dir) / (r.name + ".expected.mtx"), matrix_text(*c.expected));
      }
    }
  }
  return passed ? kExitPass : kExitCounterexample;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Terwilliger algebras of Johnson schemes", "jterw"};
  app.require_subcommand(1);

  SchemeOptions so;
  std::vector<std::string> emits;
  std::string order = "colex";
  std::string format = "text";
  std::string out_path;
  std::vector<std::string> suites;
  std::optional<int> v_max;
  std::vector<int> flip;
  std::string dump_dir;

  auto add_scheme = [&](CLI::App* sub, bool required) {
    auto* n = sub->add_option("--n", so.n, "ground set size");
    auto* d = sub->add_option("--d", so.d, "subset size");
    if (required) {
      n->required();
      d->required();
    }
    sub->add_option("--base-point", so.base_point, "base point as a comma list (default 1..d)")->delimiter(',');
  };

  auto* scheme = app.add_subcommand("scheme", "write scheme matrices in the exchange format");
  add_scheme(scheme, true);
  scheme->add_option("--emit", emits, "A<m>, E<j>, Estar<i>, H<r>_<i>_<j>; repeatable")->required();
  scheme->add_option("--order", order, "vertex order")->check(CLI::IsMember({"colex", "sphere"}));
  scheme->add_option("--out", out_path, "output file, or directory for several matrices");

  auto* dec = app.add_subcommand("decompose", "block profile and dimension check");
  add_scheme(dec, true);
  dec->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  dec->add_option("--out", out_path, "output file");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suites, "suite name or 'all'; repeatable")->required();
  verify->add_option("--v-max", v_max, "largest ground set for identity suites");
  add_scheme(verify, false);
  verify->add_option("--flip", flip, "fixture: flip entry (row,col) of H^r_{i,j}(v), as v,i,j,r,row,col")
      ->delimiter(',');
  verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out_path, "report file");
  verify->add_option("--dump-dir", dump_dir, "write counterexample matrices here");

  std::vector<const char*> argv{"jterw"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (scheme->parsed()) return cmd_scheme(so, emits, order, out_path, out);
    if (dec->parsed()) return cmd_decompose(so, format, out_path, out);
    return cmd_verify(suites, v_max, so, flip, format, out_path, dump_dir, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownSuiteError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleSweepError& e) {
    err << "error: infeasible sweep: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace jterw

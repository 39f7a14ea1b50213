#pragma once

/// \file cli.hpp
/// Command-line front end: argument parsing into a RunSpec and the command
/// runners. The runners write to a stream and return the process exit code.
///
/// Exit codes: 0 success (including verify with every entry passing),
/// 1 usage error, 2 verify with any FAIL or ERROR, 3 runtime failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gpsrad/golden.hpp"
#include "gpsrad/parallel.hpp"
#include "gpsrad/solver.hpp"
#include "gpsrad/table.hpp"

namespace gpsrad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;
inline constexpr int kExitRuntime = 3;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; what() is the help text.
class HelpRequested : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Command { solve, sweep, converge, verify, density };
enum class SweepAxis { B, C };

struct RunSpec {
  Command command = Command::solve;
  double A = 1.0;
  std::optional<double> B;
  std::optional<double> C;
  SolveConfig config;
  // grid flags given explicitly on the command line (verify overrides)
  bool order_set = false;
  bool r_max_set = false;
  bool alpha_set = false;
  std::optional<SweepAxis> axis;
  std::vector<double> values;
  std::vector<int> orders;
  std::optional<int> table;  // verify; nullopt means all tables
  std::optional<int> n;      // density: which state
  bool list_golden = false;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;  // empty: standard output
};

namespace detail {

/// Splits "a,b,c" and parses every item strictly; empty items are errors.
inline std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (item.empty()) throw UsageError(flag + ": empty item in list '" + text + "'");
    try {
      out.push_back(parse_double(item));
    } catch (const std::invalid_argument&) {
      throw UsageError(flag + ": malformed number '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline void add_common(CLI::App& sub, RunSpec& spec, std::string& format, bool potential) {
  if (potential) {
    sub.add_option("--A", spec.A, "Coulomb strength A (> 0)")->capture_default_str();
    sub.add_option("--B", spec.B, "Yukawa strength B");
    sub.add_option("--C", spec.C, "screening parameter C (>= 0)");
    sub.add_option("--ell", spec.config.ell, "angular momentum")->capture_default_str();
    sub.add_option("--states", spec.config.num_states, "number of states")
        ->capture_default_str();
  }
  sub.add_option("--N", spec.config.order, "polynomial order N")->capture_default_str();
  sub.add_option("--rmax", spec.config.r_max, "box radius r_max (bohr)")->capture_default_str();
  sub.add_option("--alpha", spec.config.alpha, "mapping parameter alpha")
      ->capture_default_str();
  sub.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub.add_option("--out", spec.out_path, "output file (default: standard output)");
}

}  // namespace detail

/// Parses argv (argv[0] is the program name). Throws UsageError or
/// HelpRequested.
inline RunSpec parse(int argc, const char* const* argv) {
  RunSpec spec;
  std::string format = "csv";
  std::string axis;
  std::string table = "all";
  std::string values_text;
  std::string orders_text;

  CLI::App app{"Bound states of the Hellmann potential by the generalized pseudospectral method",
               "gpsrad"};
  app.require_subcommand(1, 1);

  auto* solve = app.add_subcommand("solve", "lowest states for one parameter set");
  detail::add_common(*solve, spec, format, true);

  auto* sweep = app.add_subcommand("sweep", "solve over a list of B or C values");
  detail::add_common(*sweep, spec, format, true);
  sweep->add_option("--sweep", axis, "swept parameter")
      ->check(CLI::IsMember({"B", "C"}))
      ->required();
  sweep->add_option("--values", values_text, "comma-separated values")->required();

  auto* converge = app.add_subcommand("converge", "energies against polynomial order");
  detail::add_common(*converge, spec, format, true);
  converge->add_option("--orders", orders_text, "comma-separated ascending orders")
      ->required();

  auto* verify = app.add_subcommand("verify", "recompute the reference tables");
  detail::add_common(*verify, spec, format, false);
  verify->add_option("--table", table, "table id 1..5 or all")->capture_default_str();
  verify->add_flag("--list", spec.list_golden, "print the reference data as CSV, no solving");

  auto* density = app.add_subcommand("density", "radial density psi^2 of one state");
  detail::add_common(*density, spec, format, true);
  density->add_option("--n", spec.n, "principal quantum number (default ell+1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CLI::App* used = app.get_subcommands().front();
  const std::string name = used->get_name();
  if (name == "solve") spec.command = Command::solve;
  else if (name == "sweep") spec.command = Command::sweep;
  else if (name == "converge") spec.command = Command::converge;
  else if (name == "verify") spec.command = Command::verify;
  else spec.command = Command::density;

  spec.format = (format == "json") ? OutputFormat::json : OutputFormat::csv;
  spec.order_set = used->count("--N") > 0;
  spec.r_max_set = used->count("--rmax") > 0;
  spec.alpha_set = used->count("--alpha") > 0;

  if (spec.command == Command::sweep) {
    spec.axis = (axis == "B") ? SweepAxis::B : SweepAxis::C;
    spec.values = detail::parse_list("--values", values_text);
  }
  if (spec.command == Command::converge) {
    for (double v : detail::parse_list("--orders", orders_text)) {
      if (v != std::floor(v) || v < 20 || v > 100000) {
        throw UsageError("--orders: expected integers >= 20, got " + format_15g(v));
      }
      if (!spec.orders.empty() && v <= spec.orders.back()) {
        throw UsageError("--orders: orders must be ascending");
      }
      spec.orders.push_back(static_cast<int>(v));
    }
  }

  if (spec.command == Command::verify) {
    if (table != "all") {
      int id = 0;
      try {
        std::size_t pos = 0;
        id = std::stoi(table, &pos);
        if (pos != table.size()) throw std::invalid_argument(table);
      } catch (const std::exception&) {
        throw UsageError("--table: expected 1..5 or all, got '" + table + "'");
      }
      if (id < 1 || id > 5) throw UsageError("--table: expected 1..5 or all");
      spec.table = id;
    }
  } else {
    const bool swept_b = spec.axis == SweepAxis::B;
    const bool swept_c = spec.axis == SweepAxis::C;
    if (!spec.B && !swept_b) throw UsageError("--B is required");
    if (!spec.C && !swept_c) throw UsageError("--C is required");
    if (!(spec.A > 0)) throw UsageError("--A must be > 0");
    if (spec.C && !(*spec.C >= 0)) throw UsageError("--C must be >= 0");
    if (swept_c) {
      for (double c : spec.values) {
        if (!(c >= 0)) throw UsageError("--values: C must be >= 0");
      }
    }
    try {
      spec.config.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (spec.command == Command::verify && spec.order_set && spec.config.order < 20) {
    throw UsageError("--N must be >= 20");
  }
  return spec;
}

inline RunSpec parse(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"gpsrad"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse(static_cast<int>(argv.size()), argv.data());
}

// ---------------------------------------------------------------------------
// runners

inline const std::vector<std::string>& state_header() {
  static const std::vector<std::string> h{"A", "B", "C", "ell", "n", "energy_au",
                                          "nodes", "residual", "box_limited"};
  return h;
}

inline void append_state_rows(Table& t, double A, double B, double C, const Spectrum& spec) {
  for (const auto& s : spec.states) {
    t.add({A, B, C, std::int64_t{s.ell}, std::int64_t{s.n}, s.energy,
           std::int64_t{s.nodes_count}, s.residual, s.box_limited});
  }
}

struct CommandResult {
  Table table;
  int exit_code = kExitOk;
  std::vector<std::string> diagnostics;  // for standard error
};

inline CommandResult run_solve(const RunSpec& spec) {
  CommandResult out{{state_header(), {}}, kExitOk, {}};
  const auto sp = solve(spec.config, PotentialParams(spec.A, *spec.B, *spec.C));
  append_state_rows(out.table, spec.A, *spec.B, *spec.C, sp);
  if (sp.shortfall > 0) {
    out.diagnostics.push_back("only " + std::to_string(sp.states.size()) + " of " +
                              std::to_string(spec.config.num_states) +
                              " requested states are bound");
  }
  return out;
}

/// One row per (value, state) in input order; failing points produce an
/// error row and the run continues.
inline CommandResult run_sweep(const RunSpec& spec) {
  CommandResult out{{state_header(), {}}, kExitOk, {}};
  const std::size_t count = spec.values.size();
  std::vector<std::optional<Spectrum>> results(count);
  std::vector<std::string> errors(count);
  auto point = [&](std::size_t i) {
    const double b = spec.axis == SweepAxis::B ? spec.values[i] : *spec.B;
    const double c = spec.axis == SweepAxis::C ? spec.values[i] : *spec.C;
    return std::pair{b, c};
  };
  parallel_for(count, [&](std::size_t i) {
    try {
      const auto [b, c] = point(i);
      results[i] = solve(spec.config, PotentialParams(spec.A, b, c));
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });
  for (std::size_t i = 0; i < count; ++i) {
    const auto [b, c] = point(i);
    if (!results[i]) {
      out.table.add({spec.A, b, c, std::int64_t{spec.config.ell}, {}, {}, {}, {},
                     std::string("error: " + errors[i])});
      out.diagnostics.push_back("B=" + format_15g(b) + " C=" + format_15g(c) + ": " + errors[i]);
      continue;
    }
    append_state_rows(out.table, spec.A, b, c, *results[i]);
    if (results[i]->shortfall > 0) {
      out.diagnostics.push_back("B=" + format_15g(b) + " C=" + format_15g(c) + ": only " +
                                std::to_string(results[i]->states.size()) + " bound states");
    }
  }
  return out;
}

inline CommandResult run_converge(const RunSpec& spec) {
  CommandResult out{
      {{"N", "A", "B", "C", "ell", "n", "energy_au", "stable_digits"}, {}}, kExitOk, {}};
  std::vector<int> ns;
  for (int k = 0; k < spec.config.num_states; ++k) ns.push_back(spec.config.ell + 1 + k);
  const auto table = converge_study(spec.config, PotentialParams(spec.A, *spec.B, *spec.C),
                                    spec.orders, ns);
  for (const auto& row : table.rows) {
    for (std::size_t s = 0; s < ns.size(); ++s) {
      Cell energy = row.energies[s] ? Cell{*row.energies[s]} : Cell{};
      Cell digits = row.stability_digits[s] ? Cell{std::int64_t{*row.stability_digits[s]}}
                                            : Cell{};
      out.table.add({std::int64_t{row.order}, spec.A, *spec.B, *spec.C,
                     std::int64_t{spec.config.ell}, std::int64_t{ns[s]}, energy, digits});
    }
  }
  return out;
}

inline std::vector<GoldenEntry> selected_entries(const RunSpec& spec) {
  return spec.table ? golden_table(*spec.table) : all_golden();
}

inline CommandResult run_verify(const RunSpec& spec) {
  CommandResult out;
  const auto entries = selected_entries(spec);
  if (spec.list_golden) {
    out.table.header = {"table", "A", "B", "C", "ell", "n", "minus_E", "digits"};
    for (const auto& e : entries) {
      out.table.add({std::int64_t{e.table_id}, e.A, e.B, e.C, std::int64_t{e.ell},
                     std::int64_t{e.n}, e.minus_e, std::int64_t{e.digits}});
    }
    return out;
  }
  SolverOverrides overrides;
  if (spec.order_set) overrides.order = spec.config.order;
  if (spec.r_max_set) overrides.r_max = spec.config.r_max;
  if (spec.alpha_set) overrides.alpha = spec.config.alpha;
  const auto report = verify(entries, overrides);

  out.table.header = {"table", "B",        "C",        "ell",     "n",     "N",
                      "rmax",  "alpha",    "printed",  "computed", "agree_digits",
                      "status", "reason"};
  for (const auto& r : report.results) {
    const auto& e = r.entry;
    out.table.add({std::int64_t{e.table_id}, e.B, e.C, std::int64_t{e.ell}, std::int64_t{e.n},
                   std::int64_t{r.config.order}, r.config.r_max, r.config.alpha, e.minus_e,
                   r.computed_minus_e ? Cell{r.computed_truncated} : Cell{},
                   std::int64_t{r.agreement}, std::string(to_string(r.status)), r.reason});
  }
  out.diagnostics.push_back(std::to_string(report.passed) + " passed, " +
                            std::to_string(report.failed) + " failed, " +
                            std::to_string(report.errors) + " errors; hydrogen 5g check " +
                            (report.hydrogen.pass ? "PASS" : "FAIL") + " (-E = " +
                            format_15g(report.hydrogen.computed_minus_e) + ")");
  out.exit_code = report.all_passed() ? kExitOk : kExitVerifyFailed;
  return out;
}

inline CommandResult run_density(const RunSpec& spec) {
  CommandResult out{{{"r", "psi_sq"}, {}}, kExitOk, {}};
  const int n = spec.n.value_or(spec.config.ell + 1);
  if (n <= spec.config.ell) {
    throw UsageError("--n must exceed --ell");
  }
  SolveConfig cfg = spec.config;
  cfg.num_states = std::min(n - cfg.ell, cfg.order - 1);
  const auto sp = solve(cfg, PotentialParams(spec.A, *spec.B, *spec.C));
  const auto* st = sp.find(n);
  if (!st) {
    throw std::runtime_error("state n=" + std::to_string(n) + " ell=" +
                             std::to_string(cfg.ell) + " is not bound for these parameters");
  }
  for (const auto& [r, rho] : density(*st, sp.grid)) out.table.add({r, rho});
  if (st->box_limited) out.diagnostics.push_back("warning: state is box-limited");
  return out;
}

inline CommandResult execute(const RunSpec& spec) {
  switch (spec.command) {
    case Command::solve: return run_solve(spec);
    case Command::sweep: return run_sweep(spec);
    case Command::converge: return run_converge(spec);
    case Command::verify: return run_verify(spec);
    case Command::density: return run_density(spec);
  }
  throw std::logic_error("unknown command");
}

/// Full program: parse, run, write. Returns the exit code.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  RunSpec spec;
  try {
    spec = parse(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n(run with --help for usage)\n";
    return kExitUsage;
  }

  CommandResult result;
  try {
    result = execute(spec);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  for (const auto& d : result.diagnostics) err << d << '\n';
  if (spec.out_path.empty()) {
    write_table(out, result.table, spec.format);
  } else {
    std::ofstream file(spec.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << spec.out_path << '\n';
      return kExitRuntime;
    }
    write_table(file, result.table, spec.format);
  }
  return result.exit_code;
}

}  // namespace gpsrad::cli

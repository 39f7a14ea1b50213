// Acceptance checks, one per criterion. Usage: gpsrad_acceptance [criterion...]
// Prints one PASS/FAIL line per criterion; exit status is nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "gpsrad/gpsrad.hpp"

namespace fs = std::filesystem;
using namespace gpsrad;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Case {
  SolveConfig config;
  PotentialParams params;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string first_failure(const VerifyReport& rep) {
  for (const auto& r : rep.results) {
    if (r.status != VerifyStatus::pass) {
      std::ostringstream os;
      os << "; first miss: table " << r.entry.table_id << " B=" << r.entry.B
         << " C=" << r.entry.C << " n=" << r.entry.n << " ell=" << r.entry.ell << " ("
         << r.reason << ")";
      return os.str();
    }
  }
  return {};
}

SolveConfig with_ell(int ell, int states) {
  SolveConfig c;
  c.ell = ell;
  c.num_states = states;
  return c;
}

// Solves behind the golden entries, one per (parameters, ell, grid).
std::vector<Case> golden_cases(const std::vector<GoldenEntry>& entries) {
  std::map<std::tuple<double, double, int, int, double, double>, Case> groups;
  for (const auto& e : entries) {
    auto cfg = config_for(e, {});
    const auto key = std::tuple{e.B, e.C, e.ell, cfg.order, cfg.r_max, cfg.alpha};
    cfg.num_states = e.n - e.ell;
    auto [it, inserted] = groups.try_emplace(key, Case{cfg, PotentialParams(e.A, e.B, e.C)});
    it->second.config.num_states = std::max(it->second.config.num_states, cfg.num_states);
  }
  std::vector<Case> out;
  for (auto& [k, c] : groups) out.push_back(c);
  return out;
}

std::vector<Case> hydrogen_cases() {
  std::vector<Case> out;
  for (int ell = 0; ell <= 4; ++ell) out.push_back({with_ell(ell, 5 - ell), PotentialParams(1, 0, 0)});
  out.push_back({with_ell(0, 2), PotentialParams(1, 0.5, 0)});
  return out;
}

std::vector<Case> screening_cases() {
  std::vector<Case> out;
  for (double b : {5.0, -5.0}) {
    out.push_back({with_ell(3, 1), PotentialParams(1, b, 100)});
    out.push_back({with_ell(4, 1), PotentialParams(1, b, 100)});
  }
  return out;
}

// Every solve performed by criteria 1 through 4.
std::vector<Case> criteria_cases() {
  auto out = golden_cases(all_golden());
  for (auto& c : hydrogen_cases()) out.push_back(c);
  for (auto& c : screening_cases()) out.push_back(c);
  return out;
}

Outcome table1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = verify(golden_table(1));
  const double dt = seconds_since(t0);
  Outcome o;
  bool defaults = true;
  for (const auto& r : rep.results) {
    defaults = defaults && r.config.order == 200 && r.config.r_max == 200.0 &&
               r.config.alpha == 25.0 && r.mode == ToleranceMode::truncated;
  }
  o.pass = rep.passed == 12 && rep.results.size() == 12 && defaults && dt < 10.0;
  o.detail = std::to_string(rep.passed) + "/12 entries, grid N=200 rmax=200 alpha=25" +
             (defaults ? "" : " (not at defaults)") + ", " + sci(dt) + " s (limit 10 s)" +
             first_failure(rep);
  return o;
}

Outcome tables2to5() {
  std::vector<GoldenEntry> entries;
  for (int t = 2; t <= 5; ++t) {
    auto part = golden_table(t);
    entries.insert(entries.end(), part.begin(), part.end());
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = verify(entries);
  const double dt = seconds_since(t0);
  int min_digits = 99;
  for (const auto& r : rep.results) min_digits = std::min(min_digits, r.agreement);
  Outcome o;
  o.pass = rep.passed == static_cast<int>(entries.size()) && dt < 60.0;
  o.detail = std::to_string(rep.passed) + "/" + std::to_string(entries.size()) +
             " entries with >= min(11, printed) digits, fewest agreeing digits " +
             std::to_string(min_digits) + ", " + sci(dt) + " s (limit 60 s)" +
             first_failure(rep);
  return o;
}

Outcome hydrogen_limit() {
  double worst = 0;
  int count = 0;
  for (int ell = 0; ell <= 4; ++ell) {
    const auto spec = solve(with_ell(ell, 5 - ell), PotentialParams(1, 0, 0));
    for (int n = ell + 1; n <= 5; ++n) {
      const auto* st = spec.find(n);
      if (!st) return {false, "hydrogen state n=" + std::to_string(n) + " missing"};
      worst = std::max(worst, std::abs(st->energy + 1.0 / (2.0 * n * n)));
      ++count;
    }
  }
  const auto c0 = solve(with_ell(0, 2), PotentialParams(1, 0.5, 0));
  const auto* s2 = c0.find(2);
  const double err2 = s2 ? std::abs(s2->energy + 0.03125) : INFINITY;
  Outcome o;
  o.pass = count == 15 && worst <= 1e-12 && err2 <= 1e-12;
  o.detail = std::to_string(count) + " hydrogen states, max error " + sci(worst) +
             "; B=0.5 C=0 2s error " + sci(err2) + " (limit 1e-12)";
  return o;
}

Outcome screening_limit() {
  Outcome o;
  std::ostringstream os;
  for (double b : {5.0, -5.0}) {
    const auto sf = solve(with_ell(3, 1), PotentialParams(1, b, 100));
    const auto sg = solve(with_ell(4, 1), PotentialParams(1, b, 100));
    const auto* f = sf.find(4);
    const auto* g = sg.find(5);
    const double ef = f ? std::abs(-f->energy - 0.03125) : INFINITY;
    const double eg = g ? std::abs(-g->energy - 0.02) : INFINITY;
    o.pass = o.pass && ef <= 1e-10 && eg <= 1e-10;
    os << "B=" << b << ": 4f error " << sci(ef) << ", 5g error " << sci(eg) << "; ";
  }
  o.detail = os.str() + "limit 1e-10";
  return o;
}

Outcome vm_identity() {
  // 50 interior points: the interior nodes of a 51st-order grid
  // the difference quotients run in extended precision to keep roundoff
  // in r(x) well below the tolerance
  const auto base = lgl_grid<double>(51);
  const long double h = 1e-4L;
  double worst_fd = 0;
  int nonzero = 0;
  int points = 0;
  for (const auto& [r_max, alpha] : std::vector<std::pair<double, double>>{
           {200.0, 25.0}, {2000.0, 5.0}, {200.0, 0.5}}) {
    const MapParams<double> p(r_max, alpha);
    const MapParams<long double> pl(r_max, alpha);
    const auto r = [&](long double x) { return map_point(x, pl).r; };
    for (int j = 1; j < 51; ++j) {
      // keep the stencil inside [-1, 1]
      const long double x = std::clamp<long double>(base.nodes[j], -1 + 2 * h, 1 - 2 * h);
      if (vm_term(base.nodes[j], p) != 0.0) ++nonzero;
      const long double d1 = (r(x + h) - r(x - h)) / (2 * h);
      const long double d2 = (r(x + h) - 2 * r(x) + r(x - h)) / (h * h);
      const long double d3 =
          (r(x + 2 * h) - 2 * r(x + h) + 2 * r(x - h) - r(x - 2 * h)) / (2 * h * h * h);
      const long double vm = std::abs(3 * d2 * d2 - 2 * d3 * d1) / (8 * std::pow(d1, 4));
      worst_fd = std::max(worst_fd, static_cast<double>(vm));
      ++points;
    }
  }
  Outcome o;
  o.pass = nonzero == 0 && worst_fd <= 1e-8;
  o.detail = std::to_string(points) + " points over 3 maps, " + std::to_string(nonzero) +
             " non-zero returns, finite-difference max " + sci(worst_fd) + " (limit 1e-8)";
  return o;
}

Outcome eigen_quality() {
  const auto cases = criteria_cases();
  double res = 0, orth = 0, tr = 0;
  for (const auto& c : cases) {
    const auto q = solve(c.config, c.params).quality;
    res = std::max(res, q.max_residual / q.frobenius_norm);
    orth = std::max(orth, q.max_orthonormality_error);
    tr = std::max(tr, q.trace_error / q.frobenius_norm);
  }
  Outcome o;
  o.pass = res <= 1e-12 && orth <= 1e-12 && tr <= 1e-11;
  o.detail = std::to_string(cases.size()) + " decompositions: residual/||H|| " + sci(res) +
             ", orthonormality " + sci(orth) + ", trace/||H|| " + sci(tr);
  return o;
}

Outcome node_theorem() {
  auto cases = criteria_cases();
  cases.push_back({with_ell(0, 3), PotentialParams(1, 1, 10)});
  int states = 0;
  std::string bad;
  for (const auto& c : cases) {
    const auto spec = solve(c.config, c.params);
    for (std::size_t k = 0; k < spec.states.size(); ++k) {
      const auto& st = spec.states[k];
      ++states;
      // the k-th level of a given ell has k radial nodes
      const bool ok = st.nodes_count == static_cast<int>(k) &&
                      st.nodes_count == st.n - st.ell - 1;
      if (!ok && bad.empty()) {
        bad = "; B=" + shortest_repr(c.params.B()) + " C=" + shortest_repr(c.params.C()) +
              " ell=" + std::to_string(st.ell) + " level " + std::to_string(k) + " has " +
              std::to_string(st.nodes_count) + " nodes";
      }
    }
  }
  const auto fig = solve(with_ell(0, 3), PotentialParams(1, 1, 10));
  bool fig_ok = fig.states.size() == 3;
  for (int k = 0; fig_ok && k < 3; ++k) fig_ok = count_sign_changes(fig.states[k].psi) == k;
  Outcome o;
  o.pass = bad.empty() && fig_ok;
  o.detail = std::to_string(states) + " states in " + std::to_string(cases.size()) +
             " solves; B=1 C=10 s-states with 0/1/2 nodes " + (fig_ok ? "ok" : "wrong") + bad;
  return o;
}

Outcome convergence() {
  double worst = 0;
  int over = 0;
  std::string where;
  for (const auto& e : golden_table(1)) {
    const auto t = converge_study(with_ell(e.ell, e.n - e.ell), PotentialParams(e.A, e.B, e.C),
                                  {150, 200}, {e.n});
    const auto& a = t.rows[0].energies[0];
    const auto& b = t.rows[1].energies[0];
    const double d = (a && b) ? std::abs(*a - *b) : INFINITY;
    if (!(d <= 1e-12)) ++over;
    if (d > worst) {
      worst = d;
      where = "B=" + shortest_repr(e.B) + " C=" + shortest_repr(e.C);
    }
  }
  Outcome o;
  o.pass = worst <= 1e-12;
  o.detail = std::to_string(over) + "/12 cases over the limit; max |E(150) - E(200)| = " +
             sci(worst) + " at " + where + " (limit 1e-12)";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const std::vector<std::string> commands{
      "solve --B 0.5 --C 2",
      "solve --B -2 --C 0.005 --ell 1 --format json",
      "sweep --sweep C --values 0.01,0.1,1,10 --B 0.5",
      "sweep --sweep B --values -10,-1,1,100 --C 0.25 --states 6 --format json",
      "converge --B 0.5 --C 0.001 --orders 100,150,200",
      "density --B 1 --C 10 --n 3",
      "verify",
      "verify --list",
  };
  const auto dir = fs::temp_directory_path() / ("gpsrad_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  Outcome o;
  int compared = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep));
      const std::string cmd = std::string(GPSRAD_CLI_PATH) + " " + commands[i] + " --out " +
                              out.string() + " 2>/dev/null";
      const int status = std::system(cmd.c_str());
      const auto text = slurp(out);
      if (status != 0 || text.empty()) {
        o.pass = false;
        o.detail += "'" + commands[i] + "' did not run cleanly; ";
        break;
      }
      if (rep == 0) {
        first = text;
      } else if (text != first) {
        o.pass = false;
        o.detail += "'" + commands[i] + "' differs between runs; ";
      } else {
        ++compared;
      }
    }
  }
  fs::remove_all(dir);
  o.detail += std::to_string(compared) + "/" + std::to_string(commands.size()) +
              " commands byte-identical across two runs";
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"Table 1 reproduction", table1},
      {"Tables 2-5 reproduction", tables2to5},
      {"hydrogen limit", hydrogen_limit},
      {"large-screening limit", screening_limit},
      {"v_m identity", vm_identity},
      {"eigensolver quality", eigen_quality},
      {"node theorem", node_theorem},
      {"convergence stability", convergence},
      {"determinism", determinism},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion '" << argv[i] << "'\n";
      return 64;
    }
    selected.push_back(k);
  }
  if (selected.empty()) {
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);
  }

  int failures = 0;
  for (int k : selected) {
    Outcome o;
    try {
      o = criteria[k - 1].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << " ("
              << criteria[k - 1].title << "): " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

// Command line front end: tables for the continuous/discrete comparisons,
// shooting and critical solves, and the verification suites.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emdenflow/continuous.hpp"
#include "emdenflow/critical.hpp"
#include "emdenflow/discrete.hpp"
#include "emdenflow/errors.hpp"
#include "emdenflow/shooting.hpp"
#include "emdenflow/verify.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct Cell {
  enum class Kind { null, number, text };
  Kind kind = Kind::null;
  double num = 0.0;
  std::string text;
};

Cell cell(double v) { return {Cell::Kind::number, v, {}}; }
Cell cell(const std::string& s) { return {Cell::Kind::text, 0.0, s}; }
Cell null_cell() { return {}; }
Cell cell_if_finite(double v) { return std::isfinite(v) ? cell(v) : null_cell(); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    os << (i ? "," : "") << t.header[i];
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      switch (row[i].kind) {
        case Cell::Kind::number: os << format_value(row[i].num); break;
        case Cell::Kind::text: os << row[i].text; break;
        case Cell::Kind::null: break;
      }
    }
    os << "\n";
  }
}

void write_json(const Table& t, std::ostream& os) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      switch (row[i].kind) {
        case Cell::Kind::number: obj[t.header[i]] = row[i].num; break;
        case Cell::Kind::text: obj[t.header[i]] = row[i].text; break;
        case Cell::Kind::null: obj[t.header[i]] = nullptr; break;
      }
    }
    rows.push_back(obj);
  }
  os << rows.dump(2) << "\n";
}

std::vector<double> geometric_grid(double lo, double hi, std::uint64_t steps) {
  std::vector<double> g;
  if (steps <= 1 || lo == hi) {
    g.push_back(lo);
    return g;
  }
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(steps - 1));
  double x = lo;
  for (std::uint64_t i = 0; i + 1 < steps; ++i) {
    g.push_back(x);
    x *= ratio;
  }
  g.push_back(hi);
  return g;
}

// Evaluates fn(k) for every k in parallel; results come back in list order,
// so output assembly does not depend on scheduling.
template <class Fn>
auto ordered_parallel(const std::vector<double>& ks, Fn&& fn) {
  using Result = decltype(fn(0.0));
  std::vector<std::future<Result>> futures;
  futures.reserve(ks.size());
  for (double k : ks) {
    futures.push_back(std::async(std::launch::async, fn, k));
  }
  std::vector<Result> out;
  out.reserve(ks.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

struct RunConfig {
  std::string command;
  std::vector<double> k;
  double t_min = 1.0;
  double t_max = 500.0;
  std::uint64_t t_steps = 200;
  std::uint64_t j_max = 100;
  double tol = 1e-12;
  std::string format = "csv";
  std::string output;
};

const char* regime_name(emdenflow::critical::Regime r) {
  return r == emdenflow::critical::Regime::below_critical ? "below_critical"
                                                          : "above_critical";
}

Table run_eval(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "t", "f", "g", "ratio"};
  const auto grid = geometric_grid(cfg.t_min, cfg.t_max, cfg.t_steps);

  auto blocks = ordered_parallel(cfg.k, [&grid, &cfg](double k) {
    std::vector<std::vector<Cell>> rows;
    const auto sr = emdenflow::shooting::solve_w(k, cfg.tol);
    const emdenflow::continuous::ModelParams p(k, 1.0, sr.w);
    for (double tv : grid) {
      const double f = emdenflow::continuous::f_eval(tv, p);
      if (tv < 1.0) {
        rows.push_back({cell(k), cell(tv), cell(f), null_cell(), null_cell()});
        continue;
      }
      const double g = emdenflow::continuous::g_eval(tv, k);
      rows.push_back({cell(k), cell(tv), cell(f), cell(g),
                      g > 0.0 ? cell(f / g) : null_cell()});
    }
    return rows;
  });
  for (auto& b : blocks) {
    for (auto& row : b) t.rows.push_back(std::move(row));
  }
  return t;
}

Table run_solve_w(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "w", "residual", "iterations"};
  auto results = ordered_parallel(cfg.k, [&cfg](double k) {
    return emdenflow::shooting::solve_w(k, cfg.tol);
  });
  for (const auto& res : results) {
    t.rows.push_back({cell(res.k), cell(res.w), cell(res.residual),
                      cell(static_cast<double>(res.iterations))});
  }
  return t;
}

Table run_critical(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "w", "t0", "F_at_t0", "regime", "t1", "t2",
              "lower_ratio_bound", "upper_ratio_bound"};
  auto reports = ordered_parallel(cfg.k, [](double k) {
    return emdenflow::critical::critical_report(k);
  });
  for (const auto& rep : reports) {
    t.rows.push_back({cell(rep.k), cell(rep.w), cell(rep.t0), cell(rep.F_at_t0),
                      cell(std::string(regime_name(rep.regime))),
                      rep.t1 ? cell(*rep.t1) : null_cell(),
                      rep.t2 ? cell(*rep.t2) : null_cell(),
                      cell_if_finite(rep.lower_ratio_bound),
                      cell_if_finite(rep.upper_ratio_bound)});
  }
  return t;
}

Table run_crossings(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "t1", "t2", "t2_lower_bound"};
  const double kc = emdenflow::critical::solve_kc();
  auto results = ordered_parallel(cfg.k, [](double k) {
    return emdenflow::critical::crossings(k);
  });
  for (std::size_t i = 0; i < cfg.k.size(); ++i) {
    const double k = cfg.k[i];
    const double bound = std::exp(std::exp(2.0 - kc) / (2.0 * k));
    t.rows.push_back(
        {cell(k), cell(results[i].first), cell(results[i].second), cell(bound)});
  }
  return t;
}

Table run_recursion(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "j", "V", "dV"};
  for (double k : cfg.k) {
    const auto tr = emdenflow::discrete::recursion_trace(k, cfg.j_max);
    for (std::uint64_t j = 0; j <= tr.n; ++j) {
      t.rows.push_back({cell(k), cell(static_cast<double>(j)), cell(tr.values[j]),
                        j < tr.n ? cell(tr.first_differences[j]) : null_cell()});
    }
  }
  return t;
}

Table run_compare(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "j", "V", "W", "ratio", "log_identity_quotient"};
  for (double k : cfg.k) {
    const auto tr = emdenflow::discrete::recursion_trace(k, cfg.j_max + 1);
    for (std::uint64_t j = 1; j <= cfg.j_max; ++j) {
      const double W = emdenflow::discrete::w_sequence(j, k);
      t.rows.push_back(
          {cell(k), cell(static_cast<double>(j)), cell(tr.values[j]), cell(W),
           W > 0.0 ? cell(tr.values[j] / W) : null_cell(),
           j >= 2 ? cell(emdenflow::discrete::log_identity_quotient(tr, j))
                  : null_cell()});
    }
  }
  return t;
}

Table run_sweep(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "w", "W", "t0", "F_at_t0", "regime"};
  auto rows = ordered_parallel(cfg.k, [&cfg](double k) {
    const auto sr = emdenflow::shooting::solve_w(k, cfg.tol);
    const double t0 = emdenflow::critical::solve_t0(k, sr.w);
    const double F0 = emdenflow::critical::F_of(t0, k, sr.w);
    return std::vector<Cell>{
        cell(k), cell(sr.w), cell(sr.w / std::sqrt(2.0 * k)), cell(t0), cell(F0),
        cell(std::string(F0 > 0.0 ? "below_critical" : "above_critical"))};
  });
  for (auto& row : rows) t.rows.push_back(std::move(row));
  return t;
}

int run_verify(std::ostream& os) {
  const auto results = emdenflow::verify::run_all();
  for (const auto& c : results) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.module << "." << c.name;
    if (!c.pass) {
      std::cerr << "  expected " << c.expected << " +/- " << c.tolerance
                << ", got " << c.actual;
    }
    if (!c.detail.empty()) std::cerr << "  [" << c.detail << "]";
    std::cerr << "\n";
  }
  os << emdenflow::verify::report_json(results) << "\n";
  return emdenflow::verify::all_passed(results) ? 0 : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous and discrete analysis of f'' = k/f and its voltage recursion"};

  RunConfig cfg;
  bool seedless = false;
  app.add_option("--command", cfg.command,
                 "one of: eval, solve-w, critical, crossings, recursion, compare, verify, sweep")
      ->required();
  app.add_option("--k", cfg.k, "coefficient k (repeatable)")->check(CLI::PositiveNumber);
  app.add_option("--t-min", cfg.t_min, "start of the t grid");
  app.add_option("--t-max", cfg.t_max, "end of the t grid");
  app.add_option("--t-steps", cfg.t_steps, "number of t grid points");
  app.add_option("--j-max", cfg.j_max, "largest recursion index");
  app.add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", cfg.output, "output path (default: stdout)");
  app.add_flag("--seedless", seedless, "reserved");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (seedless) {
    std::cerr << "error: --seedless is reserved and not accepted\n";
    return kExitUsage;
  }
  const std::vector<std::string> commands = {"eval",      "solve-w",   "critical",
                                             "crossings", "recursion", "compare",
                                             "verify",    "sweep"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
    std::cerr << "error: unknown command '" << cfg.command << "'\n";
    return kExitUsage;
  }
  if (cfg.t_steps < 1 || !(cfg.t_min > 0.0) || cfg.t_max < cfg.t_min) {
    std::cerr << "error: bad t range\n";
    return kExitUsage;
  }
  if (cfg.j_max < 1) {
    std::cerr << "error: --j-max must be >= 1\n";
    return kExitUsage;
  }

  if (cfg.k.empty()) {
    if (cfg.command == "compare") {
      cfg.k = {0.001, 0.01, 0.1};
    } else if (cfg.command == "recursion") {
      cfg.k = {1.0};
    } else if (cfg.command == "crossings") {
      cfg.k = {0.5, 1.0};
    } else if (cfg.command == "critical") {
      cfg.k = {0.5, 2.0};
    } else if (cfg.command == "sweep") {
      cfg.k = geometric_grid(0.1, 3.0, 25);
    } else {
      cfg.k = {0.5, 1.0, 2.0};
    }
  }

  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open output file '" << cfg.output << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& os = cfg.output.empty() ? std::cout : file;

  try {
    if (cfg.command == "verify") {
      return run_verify(os);
    }
    Table table;
    if (cfg.command == "eval") {
      table = run_eval(cfg);
    } else if (cfg.command == "solve-w") {
      table = run_solve_w(cfg);
    } else if (cfg.command == "critical") {
      table = run_critical(cfg);
    } else if (cfg.command == "crossings") {
      table = run_crossings(cfg);
    } else if (cfg.command == "recursion") {
      table = run_recursion(cfg);
    } else if (cfg.command == "compare") {
      table = run_compare(cfg);
    } else if (cfg.command == "sweep") {
      table = run_sweep(cfg);
    }
    if (cfg.format == "json") {
      write_json(table, os);
    } else {
      write_csv(table, os);
    }
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}

// End-to-end checks of the command line tool: golden-file regressions,
// output determinism, schema stability, exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CsvTable {
  std::string header;
  std::vector<std::vector<std::string>> rows;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      t.header = line;
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    t.rows.push_back(cells);
  }
  return t;
}

int run_cli(const std::string& args, const std::string& out_path) {
  const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " --output " +
                          out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

int run_cli_nofile(const std::string& args) {
  const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

double to_d(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const char* tmp1 = "cli_out_1.csv";
const char* tmp2 = "cli_out_2.csv";

} // namespace

TEST_CASE("eval golden regression at k = 0.5") {
  // frozen from the implicit-solution oracle
  const double expect_f[] = {2.338356463038472, 13.508565450727006,
                             204.56616676565461};
  const double expect_g[] = {1.6651092223153955, 15.174271293851464,
                             214.59660262893472};
  const double ts[] = {2.0, 10.0, 100.0};
  for (int i = 0; i < 3; ++i) {
    std::ostringstream args;
    args << "--command eval --k 0.5 --t-min " << ts[i] << " --t-max " << ts[i]
         << " --t-steps 1";
    REQUIRE(run_cli(args.str(), tmp1) == 0);
    const auto table = parse_csv(slurp(tmp1));
    CHECK(table.header == "k,t,f,g,ratio");
    REQUIRE(table.rows.size() == 1);
    CHECK(rel(to_d(table.rows[0][2]), expect_f[i]) < 1e-9);
    CHECK(rel(to_d(table.rows[0][3]), expect_g[i]) < 1e-12);
    CHECK(rel(to_d(table.rows[0][4]), expect_f[i] / expect_g[i]) < 1e-9);
  }
}

TEST_CASE("eval ratio is unity at the critical coefficient's peak point") {
  REQUIRE(run_cli("--command eval --k 1.0384 --t-min 18.3798 --t-max 18.3798 "
                  "--t-steps 1",
                  tmp1) == 0);
  const auto table = parse_csv(slurp(tmp1));
  REQUIRE(table.rows.size() == 1);
  CHECK(std::abs(to_d(table.rows[0][4]) - 1.0) < 1e-3);
}

TEST_CASE("eval emits a null ratio cell at t = 1") {
  REQUIRE(run_cli("--command eval --k 1 --t-min 1 --t-max 2 --t-steps 2", tmp1) == 0);
  const auto table = parse_csv(slurp(tmp1));
  REQUIRE(table.rows.size() == 2);
  CHECK(to_d(table.rows[0][1]) == 1.0);
  CHECK(to_d(table.rows[0][3]) == 0.0);
  CHECK(table.rows[0][4].empty());
  CHECK(!table.rows[1][4].empty());
}

TEST_CASE("compare golden table at k = 0.01") {
  REQUIRE(run_cli("--command compare --k 0.01 --j-max 100", tmp1) == 0);
  const auto got = parse_csv(slurp(tmp1));
  const auto want = parse_csv(slurp(std::string(GOLDEN_DIR) + "/compare_k0.01.csv"));
  CHECK(got.header == want.header);
  REQUIRE(got.rows.size() == want.rows.size());
  for (std::size_t i = 0; i < want.rows.size(); ++i) {
    REQUIRE(got.rows[i].size() == want.rows[i].size());
    for (std::size_t c = 0; c < want.rows[i].size(); ++c) {
      if (want.rows[i][c].empty()) {
        CHECK(got.rows[i][c].empty());
      } else {
        const double w = to_d(want.rows[i][c]);
        const double g = to_d(got.rows[i][c]);
        if (w == 0.0) {
          CHECK(g == 0.0);
        } else {
          CHECK(rel(g, w) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("output is byte-identical across runs") {
  REQUIRE(run_cli("--command compare --k 0.01 --k 0.1 --j-max 50", tmp1) == 0);
  REQUIRE(run_cli("--command compare --k 0.01 --k 0.1 --j-max 50", tmp2) == 0);
  CHECK(slurp(tmp1) == slurp(tmp2));

  REQUIRE(run_cli("--command sweep --k 0.3 --k 0.7 --k 1.4", tmp1) == 0);
  REQUIRE(run_cli("--command sweep --k 0.3 --k 0.7 --k 1.4", tmp2) == 0);
  CHECK(slurp(tmp1) == slurp(tmp2));
}

TEST_CASE("headers are stable per command") {
  REQUIRE(run_cli("--command solve-w --k 1", tmp1) == 0);
  CHECK(parse_csv(slurp(tmp1)).header == "k,w,residual,iterations");
  REQUIRE(run_cli("--command recursion --k 1 --j-max 5", tmp1) == 0);
  CHECK(parse_csv(slurp(tmp1)).header == "k,j,V,dV");
  REQUIRE(run_cli("--command critical --k 0.5 --k 2", tmp1) == 0);
  const auto crit = parse_csv(slurp(tmp1));
  CHECK(crit.header == "k,w,t0,F_at_t0,regime,t1,t2,lower_ratio_bound,upper_ratio_bound");
  REQUIRE(crit.rows.size() == 2);
  CHECK(crit.rows[0][4] == "below_critical");
  CHECK(!crit.rows[0][5].empty());
  CHECK(crit.rows[1][4] == "above_critical");
  CHECK(crit.rows[1][5].empty());  // no t1 above critical
  REQUIRE(run_cli("--command crossings --k 0.5", tmp1) == 0);
  CHECK(parse_csv(slurp(tmp1)).header == "k,t1,t2,t2_lower_bound");
}

TEST_CASE("json format emits null cells") {
  REQUIRE(run_cli("--command compare --k 0.01 --j-max 2 --format json", tmp1) == 0);
  const std::string text = slurp(tmp1);
  CHECK(text.find("\"ratio\": null") != std::string::npos);
  CHECK(text.find("\"V\":") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run_cli_nofile("--command bogus") == 2);
  CHECK(run_cli_nofile("") == 2);
  CHECK(run_cli_nofile("--command eval --k 1 --seedless") == 2);
  CHECK(run_cli_nofile("--command eval --k 1 --t-min 5 --t-max 2") == 2);
  // crossings above the critical coefficient is a numerical-domain failure
  CHECK(run_cli_nofile("--command crossings --k 2.5") == 3);
  CHECK(run_cli_nofile("--command eval --k 1 --t-min 1 --t-max 10 --t-steps 3") == 0);
}

TEST_CASE("recursion table shape") {
  REQUIRE(run_cli("--command recursion --k 1 --j-max 3", tmp1) == 0);
  const auto t = parse_csv(slurp(tmp1));
  REQUIRE(t.rows.size() == 4);
  CHECK(to_d(t.rows[0][2]) == 1.0);
  CHECK(to_d(t.rows[1][2]) == 2.0);
  CHECK(to_d(t.rows[2][2]) == 3.5);
  CHECK(to_d(t.rows[2][3]) == doctest::Approx(5.2857142857142857 - 3.5));
  CHECK(t.rows[3][3].empty());  // last row has no forward difference
}

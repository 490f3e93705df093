#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qdist/moments.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QDIST_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("density command emits the documented CSV") {
  RunResult r = run_cli("density --family fN --q 0.5 --from -2.8 --to 2.8 --points 200");
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 201);
  CHECK(lines[0] == "x,density");
  CHECK(split_csv(lines[1])[0] == "-2.7999999999999998");

  // byte-identical on a second run
  RunResult again = run_cli("density --family fN --q 0.5 --from -2.8 --to 2.8 --points 200");
  CHECK(again.output == r.output);

  RunResult single = run_cli("density --family fN --q 0 --from 0 --to 0 --points 1");
  auto rows = lines_of(single.output);
  REQUIRE(rows.size() == 2);
  const double v = std::strtod(split_csv(rows[1])[1].c_str(), nullptr);
  CHECK(v == doctest::Approx(1.0 / 3.14159265358979323846).epsilon(1e-13));
}

TEST_CASE("moments command reports Catalan values at q = 0") {
  RunResult r = run_cli("moments --family fN --q 0 --max-order 6");
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "n,closed_form,oracle,abs_diff");
  CHECK(split_csv(lines[3])[1] == "1");  // n = 2
  CHECK(split_csv(lines[5])[1] == "2");  // n = 4
  CHECK(split_csv(lines[7])[1] == "5");  // n = 6
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(std::strtod(split_csv(lines[i])[3].c_str(), nullptr) < 1e-8);
  }
}

TEST_CASE("mgf command emits JSON with the documented keys") {
  RunResult r = run_cli("mgf --family fh --q 0 --t 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"series_value\": ") != std::string::npos);
  CHECK(r.output.find("\"oracle_value\": ") != std::string::npos);
  CHECK(r.output.find("\"outer_terms\": ") != std::string::npos);
  CHECK(r.output.find("\"inner_terms\": ") != std::string::npos);
  // q = 0, t = 2: series collapses to I_1(2)
  const std::string key = "\"series_value\": ";
  const double v =
      std::strtod(r.output.substr(r.output.find(key) + key.size()).c_str(), nullptr);
  CHECK(v == doctest::Approx(qdist::bessel_i(1, 2.0)).epsilon(1e-12));
}

TEST_CASE("tabulate command lists c coefficients") {
  RunResult r = run_cli("tabulate --what c-coefficients --n 8 --q 0.4");
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 6);  // header + m = 0..4
  CHECK(lines[0] == "m,value");
  CHECK(split_csv(lines[1])[1] == "1");
}

TEST_CASE("verify command runs a suite and exits 0") {
  RunResult r = run_cli("verify --suite normalization");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PASS") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);
  auto lines = lines_of(r.output);
  CHECK(lines.back() == "48/48 checks passed");
}

TEST_CASE("verify exits 1 when a check fails") {
  // an absurdly tight tolerance scale cannot be met by the oracle
  RunResult r = run_cli("verify --suite transfer --tol 1e-12");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("FAIL") != std::string::npos);
}

TEST_CASE("numerical non-convergence exits 3") {
  // q this close to 1 needs more product factors than the default cap allows
  RunResult r = run_cli("density --family fN --q 0.99999 --from 0 --to 0 --points 1");
  CHECK(r.exit_code == 3);
}

TEST_CASE("usage errors exit 2 and name the offending parameter") {
  CHECK(run_cli("density --family fX --q 0.5 --from 0 --to 1").exit_code == 2);
  CHECK(run_cli("density --family fN --from 0 --to 1").exit_code == 2);  // missing --q
  CHECK(run_cli("mgf --family fN --q 0.5 --t 1 --a 0.2").exit_code == 2);
  CHECK(run_cli("moments --family fQ --q 0.5 --a 0.2 --max-order 4").exit_code == 2);
  CHECK(run_cli("density --family fN --q 1.5 --from 0 --to 1").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("verify --suite bogus").exit_code == 2);
  CHECK(run_cli("tabulate --what spectra --n 4 --q 0.2").exit_code == 2);
}

TEST_CASE("QDIST_OUTPUT_DIR provides the default output directory") {
  const std::string dir = "/tmp/qdist_cli_test";
  REQUIRE(std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) == 0);
  RunResult r = run_cli("density --family fh --q 0.2 --from -1 --to 1 --points 5 "
                        "--output fh.csv");
  // relative --output without the env var lands in the working directory;
  // with it, under the named directory
  std::remove("fh.csv");
  const std::string cmd = "QDIST_OUTPUT_DIR=" + dir + " " + QDIST_CLI_PATH +
                          " density --family fh --q 0.2 --from -1 --to 1 --points 5 "
                          "--output fh.csv 2>/dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  std::ifstream f(dir + "/fh.csv");
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "x,density");
}

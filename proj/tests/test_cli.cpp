#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = "cli_test_stdout.tmp";
  const std::string cmd =
      std::string(QSL_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(out_path.c_str());
  return {WEXITSTATUS(status), ss.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("run emits the documented closed-form values") {
  const auto r = run_cli(
      "run --scenario spont_emission --tau 1 --param gamma=1 "
      "--bounds sup,int --p 1 --w-index 1 --basis energy");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 4);  // seed header, csv header, two records
  CHECK(lines[0] == "# seed=0");
  CHECK(lines[1].rfind("scenario,", 0) == 0);
  const auto sup = fields_of(lines[2]);
  const auto integral = fields_of(lines[3]);
  CHECK(sup[3] == "sup");
  CHECK(std::stod(sup[4]) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-8));
  CHECK(integral[3] == "int");
  CHECK(std::stod(integral[4]) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sup[10] == "1");  // degenerate tie reported
}

TEST_CASE("sweep output is byte-identical across runs and worker counts") {
  const std::string args =
      "sweep --scenario spont_emission --tau 1 --axis gamma "
      "--values 0.2:2.0:7 --bounds sup,int --p 1 --w-index 1 "
      "--basis canonical --seed 5";
  const auto a = run_cli(args + " --jobs 1");
  const auto b = run_cli(args + " --jobs 4");
  const auto c = run_cli(args + " --jobs 4");
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(b.output == c.output);
  CHECK(lines_of(a.output).size() == 2 + 7 * 2);
  // records are ordered by axis value
  const auto lines = lines_of(a.output);
  double prev = -1.0;
  for (size_t k = 2; k < lines.size(); k += 2) {
    const double gamma = std::stod(fields_of(lines[k])[2]);
    CHECK(gamma > prev);
    prev = gamma;
  }
}

TEST_CASE("jsonl format carries the same records") {
  const auto r = run_cli(
      "run --scenario qubit_ti --tau 1.0 --bounds mt --format jsonl");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].find("\"bound\":\"mt\"") != std::string::npos);
  CHECK(lines[0].find("\"scenario\":\"qubit_ti\"") != std::string::npos);
  CHECK(lines[0].find("\"seed\":0") != std::string::npos);
}

TEST_CASE("config errors exit with code 2") {
  CHECK(run_cli("run --scenario spont_emission --tau 1").exit_code == 2);
  CHECK(run_cli("run --scenario nope --tau 1 --bounds int").exit_code == 2);
  CHECK(run_cli("run --scenario qubit_ti --bounds int").exit_code == 2);
  CHECK(run_cli("run --scenario qubit_ti --tau 1 --bounds bogus").exit_code ==
        2);
  CHECK(run_cli("run --scenario qubit_ti --tau 1 --bounds int --w-index 9")
            .exit_code == 2);
  CHECK(run_cli("run --scenario qubit_ti --tau 1 --bounds tq").exit_code == 2);
  CHECK(run_cli("run --scenario dephasing --tau 1 --bounds mt").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("optimize finds the tight value on the precessing qubit") {
  const auto r = run_cli(
      "optimize --scenario qubit_ti --tau 2.0 --bounds opt_int "
      "--basis-samples 20 --hillclimb-iters 200 --seed 1");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 3);
  CHECK(std::stod(fields_of(lines[2])[4]) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("output file and config file round trip") {
  const std::string cfg_path = "cli_test_params.tmp";
  {
    std::ofstream out(cfg_path);
    out << "gamma = 1.0\ntau = 1.0\n";
  }
  const std::string out_path = "cli_test_out.tmp";
  const auto r = run_cli("run --scenario spont_emission --config " + cfg_path +
                         " --bounds sup --p 1 --w-index 1 --out " + out_path);
  REQUIRE(r.exit_code == 0);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto lines = lines_of(ss.str());
  REQUIRE(lines.size() == 3);
  CHECK(std::stod(fields_of(lines[2])[4]) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-8));
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("selftest passes clean and fails under the tightening hook") {
  const auto ok = run_cli("selftest");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("[FAIL]") == std::string::npos);
  CHECK(ok.output.find("[PASS]") != std::string::npos);

  const std::string out_path = "cli_test_stdout.tmp";
  const std::string cmd = std::string("QSL_SELFTEST_TIGHTEN=1 ") +
                          QSL_CLI_PATH + " selftest > " + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(out_path.c_str());
  CHECK(WEXITSTATUS(status) != 0);
  CHECK(ss.str().find("[FAIL]") != std::string::npos);
}

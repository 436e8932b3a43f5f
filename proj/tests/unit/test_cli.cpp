#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QPSA_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string scalar_manifest() {
  return std::string(QPSA_FIXTURE_DIR) + "/scalar/manifest.json";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("psa command reproduces the scalar abscissa") {
  const auto res = run_cli("psa --manifest " + scalar_manifest());
  CHECK(res.exit_code == 0);
  // alpha_eps for |z^2+z+1| <= 0.3 (grid-oracle value, frozen)
  CHECK(res.output.find("alpha_eps = -0.326794919") != std::string::npos);
  CHECK(res.output.find("status = converged") != std::string::npos);
}

TEST_CASE("psa subspace method agrees with the criss-cross") {
  const auto a = run_cli("psa --manifest " + scalar_manifest());
  const auto b =
      run_cli("psa --manifest " + scalar_manifest() + " --method subspace");
  CHECK(b.exit_code == 0);
  CHECK(b.output.find("alpha_eps = -0.326794919") != std::string::npos);
}

TEST_CASE("psa csv output is stable across reruns") {
  const auto dir = fs::temp_directory_path() / "qpsa_cli_csv";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string csv1 = (dir / "a.csv").string();
  const std::string csv2 = (dir / "b.csv").string();
  REQUIRE(run_cli("psa --manifest " + scalar_manifest() + " --csv " + csv1)
              .exit_code == 0);
  REQUIRE(run_cli("psa --manifest " + scalar_manifest() + " --csv " + csv2)
              .exit_code == 0);
  CHECK(read_file(csv1) == read_file(csv2));
  CHECK(read_file(csv1).rfind("k,x,z_re,z_im\n", 0) == 0);
}

TEST_CASE("boundary command emits verified points and eigenvalues") {
  const auto res = run_cli("boundary --manifest " + scalar_manifest() +
                           " --count 21");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("x,y") != std::string::npos);
  CHECK(res.output.find("eigenvalue_re,eigenvalue_im") != std::string::npos);

  // a range entirely right of the pseudospectrum has an empty point section
  const auto empty = run_cli("boundary --manifest " + scalar_manifest() +
                             " --xmin 5 --xmax 6 --count 5");
  CHECK(empty.exit_code == 0);
  const auto head = empty.output.substr(0, empty.output.find("eigenvalue_re"));
  CHECK(head.find("5,") == std::string::npos);
}

TEST_CASE("malformed input yields exit code 2") {
  const auto res = run_cli("psa --manifest /nonexistent/manifest.json");
  CHECK(res.exit_code == 2);

  // manifest with a bad coefficient expression
  const auto dir = fs::temp_directory_path() / "qpsa_cli_bad";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream mm(dir / "one.mtx");
    mm << "%%MatrixMarket matrix array real general\n1 1\n1.0\n";
    std::ofstream out(dir / "manifest.json");
    out << R"({"n": 1, "d": 1, "epsilon": 0.3, "weights": [0,0,1],
               "box": {"lower": [0], "upper": [1]},
               "stiffness_terms": [{"file": "one.mtx", "coeff": "nu("}]})";
  }
  const auto bad = run_cli("psa --manifest " + (dir / "manifest.json").string());
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("column 3") != std::string::npos);
}

TEST_CASE("minimize command on the ex5_1 fixture") {
  const std::string manifest =
      std::string(QPSA_FIXTURE_DIR) + "/ex5_1/manifest.json";
  const auto res = run_cli("minimize --manifest " + manifest +
                           " --method direct --gamma -20");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("nu* = (4.667") != std::string::npos);
  CHECK(res.output.find("certified gap") != std::string::npos);
}

TEST_CASE("demo rejects unknown names") {
  const auto res = run_cli("demo --name ex9_9");
  CHECK(res.exit_code == 2);
}

TEST_SUITE_END();

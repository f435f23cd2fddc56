#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "qlim/cli.hpp"
#include "qlim/scene.hpp"

using namespace qlim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("qlim_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" QLIM_CLI_PATH "\" " + args + " >" +
                          (scratch_dir() / "stdout.txt").string() + " 2>" +
                          (scratch_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("grid_points: endpoints and count") {
  const std::vector<double> g = grid_points({});
  REQUIRE(g.size() == 126);
  CHECK(g.front() == 0.05);
  CHECK(g.back() == 6.28);
  CHECK(grid_points({1.0, 2.0, 1}) == std::vector<double>{1.0});
}

TEST_CASE("write_csv: header and formatting") {
  std::vector<ScanRow> rows(2);
  rows[0] = {1.0, 0.5, 0.5, 0.5, 0.25, 0.9, 0.95, {}};
  rows[1] = {2.0, 0.5, std::nan(""), 0.5, 0.25, 0.9, 0.95, {"qfi_fid:NonFinite", "cfi:InvariantBroken"}};
  std::ostringstream out;
  write_csv(out, rows);
  const auto ls = lines(out.str());
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == kCsvHeader);
  CHECK(fields(ls[1]).back() == "ok");
  CHECK(fields(ls[2])[2] == "nan");
  CHECK(fields(ls[2]).back() == "qfi_fid:NonFinite|cfi:InvariantBroken");
}

TEST_CASE("scan: grid order and thread independence") {
  const GridSpec grid{0.5, 3.0, 9};
  const auto a = scan(fig1_scene(), grid, {}, 1);
  const auto b = scan(fig1_scene(), grid, {}, 4);
  std::ostringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  CHECK(sa.str() == sb.str());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].theta_scaled == grid_points(grid)[i]);
}

TEST_CASE("qlim fig1: single point at pi") {
  const fs::path out = scratch_dir() / "pi.csv";
  REQUIRE(run("fig1 --points 1 --theta 3.141592653589793 --out " + out.string()) == kExitOk);
  const auto ls = lines(slurp(out));
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == kCsvHeader);
  const auto f = fields(ls[1]);
  REQUIRE(f.size() == 8);
  CHECK(std::stod(f[1]) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(std::stod(f[3]) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(f[7] == "ok");
}

TEST_CASE("qlim fig1: byte-identical output across runs and thread counts") {
  const fs::path a = scratch_dir() / "a.csv";
  const fs::path b = scratch_dir() / "b.csv";
  const fs::path svg = scratch_dir() / "a.svg";
  REQUIRE(run("fig1 --points 40 --out " + a.string() + " --svg " + svg.string(), "QLIM_THREADS=1") ==
          kExitOk);
  REQUIRE(run("fig1 --points 40 --out " + b.string(), "QLIM_THREADS=3") == kExitOk);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(lines(text).size() == 41);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
}

TEST_CASE("qlim fig1: usage and I/O errors") {
  CHECK(run("fig1 --out /nonexistent_dir/x.csv") == kExitUsage);
  CHECK(run("fig1 --config /nonexistent_dir/scene.json --out " +
            (scratch_dir() / "c.csv").string()) == kExitUsage);
  const fs::path bad = scratch_dir() / "bad.json";
  std::ofstream(bad) << R"({"sources": [{"x": 0, "w": 2}], "collectors": [0]})";
  CHECK(run("fig1 --config " + bad.string() + " --out " + (scratch_dir() / "c.csv").string()) ==
        kExitUsage);
  CHECK(run("fig1 --points abc") == kExitUsage);
  CHECK(run("nosuchcommand") == kExitUsage);
}

TEST_CASE("qlim fig1: configured symmetric scene") {
  const fs::path cfg = scratch_dir() / "sym.json";
  std::ofstream(cfg) << R"({"sources": [{"x": 0, "w": 0.5}, {"x": 0, "w": 0.5}],
                            "collectors": [-0.5, 0.5], "binding": "SymmetricSeparation"})";
  const fs::path out = scratch_dir() / "sym.csv";
  REQUIRE(run("fig1 --config " + cfg.string() + " --points 12 --out " + out.string()) == kExitOk);
  const auto ls = lines(slurp(out));
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    const double q = std::stod(f[1]);
    CHECK(std::abs(q - std::stod(f[4])) <= 1e-6 * std::max(1.0, q));
  }
}

TEST_CASE("qlim counterexample") {
  const fs::path out = scratch_dir() / "cex.csv";
  REQUIRE(run("counterexample --out " + out.string()) == kExitOk);
  const auto ls = lines(slurp(out));
  REQUIRE(ls.size() == 3);
  CHECK(slurp(scratch_dir() / "stdout.txt").find("[asymmetric]") != std::string::npos);

  const auto rows = counterexample_rows(fig1_scene(), {});
  REQUIRE(rows.size() == 2);
  const CounterexampleRow& sym = rows[0].variant == "symmetric" ? rows[0] : rows[1];
  const CounterexampleRow& asym = rows[0].variant == "symmetric" ? rows[1] : rows[0];
  CHECK(sym.gram_offdiag <= 1e-10);
  CHECK(std::abs(sym.qfi_minus_cfi_qr) <= 1e-6);
  CHECK(asym.gram_offdiag > 1e-5);
  CHECK(asym.qr_plan_residual > 1e-5);
  CHECK(asym.fc_qr_minus_f > 0.0);
  CHECK(asym.qfi_minus_cfi_qr > 0.01);
  // The classical fidelity excess is the Fisher gap at second order.
  CHECK(8.0 * asym.fc_qr_minus_f / 1e-6 == doctest::Approx(asym.qfi_minus_cfi_qr).epsilon(0.01));

  CHECK(run("counterexample --config /nonexistent_dir/scene.json") == kExitUsage);
}

TEST_CASE("qlim selfcheck") {
  REQUIRE(run("selfcheck --seed 7 --cases 30") == kExitOk);
  const std::string first = slurp(scratch_dir() / "stdout.txt");
  CHECK(first.find("FAIL") == std::string::npos);
  REQUIRE(run("selfcheck --seed 7 --cases 30", "QLIM_THREADS=2") == kExitOk);
  CHECK(slurp(scratch_dir() / "stdout.txt") == first);

  CHECK(run("selfcheck --seed 7 --cases 10 --strict 1e-16") == kExitInvariant);
  CHECK(slurp(scratch_dir() / "stdout.txt").find("FAIL") != std::string::npos);
}

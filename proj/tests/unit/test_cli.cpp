#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "birkhoff/cli.hpp"
#include "birkhoff/excursion_law.hpp"

namespace fs = std::filesystem;
using birkhoff::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("birkhoff-cli-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("law writes the table and prints c") {
  const auto dir = scratch("law");
  const auto r = cli({"law", "--kind", "log-squared", "--nmax", "1000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("c = ") != std::string::npos);
  const auto rows = csv_rows(dir / "law.csv");
  REQUIRE(rows.size() == 1000);
  CHECK(rows[0] == std::vector<std::string>{"n", "pmf", "tail", "hazard"});
  const birkhoff::ExcursionLaw law(birkhoff::LawSpec::log_squared(), 16);
  const double l2 = std::log(2.0);
  CHECK(rows[1][0] == "2");
  CHECK(std::stod(rows[1][1]) == doctest::Approx(law.c() / (2 * l2 * l2)).epsilon(1e-12));
  const auto m = manifest(dir);
  CHECK(m["output_files"].size() == 2);
  CHECK(slurp(dir / "law.csv").find('\r') == std::string::npos);
}

TEST_CASE("law rejects a diverging power law") {
  const auto dir = scratch("law-bad");
  const auto r = cli({"law", "--kind", "power", "--gamma", "1.0", "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("diverg") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "law.csv"));
}

TEST_CASE("bad flags exit 1") {
  CHECK(cli({"law", "--nmax", "abc"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("renewal brute check and heights") {
  const auto dir = scratch("renewal");
  const auto r = cli({"renewal", "--nmax", "30", "--brute-check", "--out", dir.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"renewal.csv", "heights-30.csv", "nagaev.csv", "windows.csv", "manifest.json"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto rows = csv_rows(dir / "heights-30.csv");
  double sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) sum += std::stod(rows[i][1]);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(csv_rows(dir / "renewal.csv").size() == 32);
}

TEST_CASE("renewal windows move toward beta") {
  const auto dir = scratch("renewal-win");
  const auto r = cli({"renewal", "--nmax", "10000", "--heights", "1000", "--heights", "10000", "--beta", "0.5",
                      "--window-n", "100", "--window-n", "1000", "--window-n", "10000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(dir / "windows.csv");
  REQUIRE(rows.size() == 4);
  double prev = 1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dev = std::abs(std::stod(rows[i][2]) - 0.5);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(fs::exists(dir / "heights-1000.csv"));
}

TEST_CASE("simulate is byte-deterministic and writes a manifest") {
  const auto a = scratch("sim-a");
  const auto b = scratch("sim-b");
  const std::vector<std::string> common{"simulate", "--scenario", "stretched", "--n", "100000",
                                        "--samples", "3000", "--seed", "77", "--workers", "3"};
  auto args_a = common;
  args_a.insert(args_a.end(), {"--out", a.string(), "--svg"});
  auto args_b = common;
  args_b.insert(args_b.end(), {"--out", b.string()});
  REQUIRE(cli(args_a).code == 0);
  REQUIRE(cli(args_b).code == 0);
  CHECK(slurp(a / "samples.csv") == slurp(b / "samples.csv"));
  const auto rows = csv_rows(a / "samples.csv");
  REQUIRE(rows.size() == 3001);
  CHECK(rows[0] == std::vector<std::string>{"sample_id", "ratio_sign", "ratio_logmag", "ratio_value", "height",
                                            "excursions", "mark"});
  CHECK(rows[1].back().empty());
  const auto m = manifest(a);
  CHECK(m["seed"] == 77);
  CHECK(m["workers"] == 3);
  CHECK(m["config"]["scenario"] == "stretched");
  CHECK(m.contains("wall_time_ms"));
  std::vector<std::string> files;
  for (const auto& f : m["output_files"]) files.push_back(f.get<std::string>());
  CHECK(files == std::vector<std::string>{"samples.csv", "histogram.svg", "manifest.json"});
  for (const auto& f : files) CHECK(fs::exists(a / f));
  CHECK(slurp(a / "histogram.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("simulate rejects bad configurations without leaving files") {
  const auto dir = scratch("sim-bad");
  CHECK(cli({"simulate", "--alpha", "1.0", "--out", dir.string()}).code == 1);
  CHECK(cli({"simulate", "--samples", "0", "--out", dir.string()}).code == 1);
  CHECK(cli({"simulate", "--scenario", "sideways", "--out", dir.string()}).code == 1);
  CHECK(cli({"simulate", "--scenario", "degenerate", "--gamma", "0.9", "--out", dir.string()}).code == 1);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("parity with odd n records the halved normalization") {
  const auto dir = scratch("sim-parity");
  REQUIRE(cli({"simulate", "--scenario", "parity", "--n", "1001", "--start", "q1", "--samples", "50", "--out",
               dir.string()})
              .code == 0);
  const auto m = manifest(dir);
  CHECK(m["config"]["normalization"] == "exp(n^alpha)/2");
  CHECK(std::stod(m["config"]["normalization_logmag"].get<std::string>()) ==
        doctest::Approx(std::sqrt(1001.0) - std::log(2.0)));
}

TEST_CASE("decorated samples carry marks") {
  const auto dir = scratch("sim-dec");
  REQUIRE(cli({"simulate", "--scenario", "decorated", "--n", "1000", "--samples", "20", "--out", dir.string()})
              .code == 0);
  const auto rows = csv_rows(dir / "samples.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK_FALSE(rows[i][6].empty());
}

TEST_CASE("growth families") {
  const auto dir = scratch("growth");
  auto r = cli({"growth", "--family", "exp", "--base", "2", "--N", "1000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("inconsistent with conservative limit theorem") != std::string::npos);
  r = cli({"growth", "--family", "stretched", "--alpha", "0.5", "--N", "10000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "growth-report.json"));
  const double a = std::stod(rep["stretched_alpha"].get<std::string>());
  CHECK(a >= 0.45);
  CHECK(a <= 0.55);
  r = cli({"growth", "--family", "parity", "--alpha", "0.5", "--N", "10000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("does not converge") != std::string::npos);
  const auto par = nlohmann::json::parse(slurp(dir / "growth-report.json"));
  CHECK(std::stod(par["density_violation"][2]["density"].get<std::string>()) < 0.01);
  CHECK(cli({"growth", "--family", "power", "--N", "10", "--out", dir.string()}).code == 1);
  CHECK(cli({"growth", "--out", dir.string()}).code == 1);
}

TEST_CASE("growth reads a CSV of log B_n") {
  const auto dir = scratch("growth-csv");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "seq.csv");
    f << "n,log_B_n\n";
    for (int n = 1; n <= 200; ++n) f << n << "," << 2.0 * std::log(n) << "\n";
  }
  const auto r = cli({"growth", "--input", (dir / "seq.csv").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("polynomial regime") != std::string::npos);
  {
    std::ofstream f(dir / "bad.csv");
    f << "n,log_B_n\n1,0.0\n2,zebra\n";
  }
  CHECK(cli({"growth", "--input", (dir / "bad.csv").string(), "--out", dir.string()}).code == 1);
  {
    std::ofstream f(dir / "gap.csv");
    for (int n = 1; n <= 40; ++n) f << (n == 20 ? 21 : n) << "," << n << "\n";
  }
  CHECK(cli({"growth", "--input", (dir / "gap.csv").string(), "--out", dir.string()}).code == 1);
  CHECK(cli({"growth", "--input", (dir / "missing.csv").string(), "--out", dir.string()}).code == 1);
}

TEST_CASE("verify dispatch") {
  const auto dir = scratch("verify");
  const auto bad = cli({"verify", "nonsense", "--out", dir.string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("usage") != std::string::npos);
  CHECK(cli({"verify"}).code == 1);
  const auto ok = cli({"verify", "clt", "--out", dir.string()});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("PASS clt") != std::string::npos);
  const auto m = manifest(dir);
  CHECK(m["config"]["parameters"]["samples"] == "100000");
}

TEST_CASE("worker default follows the environment") {
  ::setenv("BIRKHOFF_LAB_THREADS", "3", 1);
  CHECK(birkhoff::cli::default_workers() == 3);
  ::setenv("BIRKHOFF_LAB_THREADS", "zero", 1);
  CHECK(birkhoff::cli::default_workers() == 4);
  ::unsetenv("BIRKHOFF_LAB_THREADS");
  CHECK(birkhoff::cli::default_workers() == 4);
}

TEST_CASE("atomic writes leave no temporary files") {
  const auto dir = scratch("atomic");
  fs::create_directories(dir);
  birkhoff::cli::write_atomic(dir / "x.txt", "hello\n");
  birkhoff::cli::write_atomic(dir / "x.txt", "world\n");
  CHECK(slurp(dir / "x.txt") == "world\n");
  int count = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++count;
  CHECK(count == 1);
}

}

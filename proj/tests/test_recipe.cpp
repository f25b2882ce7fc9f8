#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "irntc/recipe.hpp"
#include "json.hpp"

using namespace irntc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("irntc_recipe_" + tag);
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("preset catalogue and bundled benchmark schedules") {
  std::vector<std::string> names = recipe_names();
  std::vector<std::string> want = {"capacity", "table1", "table2",  "table3",
                                   "fig4",     "fig12",  "outage", "sim-smoke"};
  CHECK(names == want);

  std::vector<IncrementSchedule> sched = benchmark_schedules_awgn2db();
  REQUIRE(sched.size() == 5);
  std::vector<int> ks = {16, 32, 64, 128, 256};
  std::vector<std::vector<int>> incs = {{19, 4, 4, 4, 8},
                                        {38, 8, 8, 8, 12},
                                        {85, 12, 8, 12, 16},
                                        {176, 14, 14, 14, 28},
                                        {352, 24, 24, 24, 48}};
  for (size_t i = 0; i < sched.size(); ++i) {
    CHECK(sched[i].k == ks[i]);
    CHECK(sched[i].increments() == incs[i]);
    CHECK(sched[i].m() == 5);
  }

  CHECK_THROWS_AS(run_recipe("nope", fresh_dir("bad").string(), 1),
                  std::invalid_argument);
}

TEST_CASE("capacity preset writes a well-formed, byte-deterministic bundle") {
  fs::path d1 = fresh_dir("cap1"), d2 = fresh_dir("cap2");
  RecipeReport r1 = run_recipe("capacity", d1.string(), 7);
  RecipeReport r2 = run_recipe("capacity", d2.string(), 7);
  CHECK(r1.ok());
  CHECK(r1.preset == "capacity");
  REQUIRE(!r1.files.empty());

  nlohmann::json manifest = nlohmann::json::parse(slurp(r1.manifest_path));
  CHECK(manifest["version"] == kVersion);
  CHECK(manifest["preset"] == "capacity");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["files"].size() == r1.files.size());
  CHECK(manifest["wall_seconds"].get<double>() >= 0.0);
  CHECK(manifest["tasks"].is_array());

  for (const std::string& f : r1.files) {
    CAPTURE(f);
    REQUIRE(fs::exists(d1 / f));
    CHECK(slurp(d1 / f) == slurp(d2 / f));  // analysis presets are byte-stable
  }

  auto rows = parse_csv(slurp(d1 / "capacity.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"channel", "parameter", "capacity_bits"});
  CHECK(rows[1][0] == "bsc");
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.601708637034).epsilon(1e-9));
  CHECK(rows[2][0] == "awgn");
  CHECK(std::stod(rows[2][2]) == doctest::Approx(0.685052334875).epsilon(1e-9));

  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("ARQ preset reproduces the optimizer's blocklengths") {
  fs::path d = fresh_dir("arq");
  RecipeReport r = run_recipe("table1", d.string(), 1);
  REQUIRE(r.ok());
  auto rows = parse_csv(slurp(d / "arq_blocklengths.csv"));
  REQUIRE(rows.size() == 6);
  std::vector<std::string> n1 = {"31", "60", "116", "222", "429"};
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] == n1[i - 1]);
    double k = std::stod(rows[i][0]), ell = std::stod(rows[i][2]);
    CHECK(std::stod(rows[i][3]) == doctest::Approx(k / ell).epsilon(1e-9));
  }
  fs::remove_all(d);
}

TEST_CASE("simulation preset is seed-deterministic and records its seed") {
  fs::path d1 = fresh_dir("sim1"), d2 = fresh_dir("sim2");
  RecipeReport r1 = run_recipe("sim-smoke", d1.string(), 99);
  RecipeReport r2 = run_recipe("sim-smoke", d2.string(), 99);
  REQUIRE(r1.ok());
  REQUIRE(r1.files.size() == 2);
  for (const std::string& f : r1.files) CHECK(slurp(d1 / f) == slurp(d2 / f));

  nlohmann::json manifest = nlohmann::json::parse(slurp(r1.manifest_path));
  CHECK(manifest["seed"] == 99);
  bool found = false;
  for (const auto& t : manifest["tasks"])
    if (t.contains("parameters") && t["parameters"].contains("seed")) {
      CHECK(t["parameters"]["seed"] == 99);
      found = true;
    }
  CHECK(found);

  auto rows = parse_csv(slurp(d1 / "sim_point.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "16");
  CHECK(std::stod(rows[1][3]) > 16.0);  // ell_hat beyond the first attempt
  fs::remove_all(d1);
  fs::remove_all(d2);
}

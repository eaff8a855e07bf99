#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ramanpass/sweep.hpp"

using namespace raman;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("ramanpass_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepGrid small_grid() {
  SweepGrid grid;
  grid.families = {Family::A, Family::B};
  grid.etas = {1.0, 2.0, 3.0};
  grid.samples = 61;
  return grid;
}

}  // namespace

TEST_CASE("grid expansion is the cross product in declaration order") {
  const auto jobs = expand_grid(small_grid());
  REQUIRE(jobs.size() == 6);
  CHECK(jobs[0].file_name == "sweep_a_eta1_frac1_thr0.9999.csv");
  CHECK(jobs[3].file_name == "sweep_b_eta1_frac1_thr0.9999.csv");
  CHECK(jobs[5].eta == 3.0);
}

TEST_CASE("invalid grids fail before any job runs") {
  SweepGrid grid = small_grid();
  grid.etas = {};
  CHECK_THROWS_AS(expand_grid(grid), ValidationError);
  grid = small_grid();
  grid.etas = {0.0};
  CHECK_THROWS_AS(expand_grid(grid), ValidationError);
  grid = small_grid();
  grid.fractions = {1.5};
  CHECK_THROWS_AS(expand_grid(grid), ValidationError);
}

TEST_CASE("sweep writes one CSV per job plus an index") {
  TempDir dir("basic");
  std::ostringstream log;
  const int rc = run_sweep(small_grid(), dir.path.string(), 1, log);
  CHECK(rc == 0);

  const auto index =
      nlohmann::json::parse(slurp(dir.path / "index.json"));
  REQUIRE(index.at("jobs").size() == 6);
  for (const auto& job : index.at("jobs")) {
    CHECK(job.at("status") == "ok");
    CHECK(fs::exists(dir.path / job.at("csv").get<std::string>()));
    CHECK(job.at("summary").contains("effective_duration"));
    CHECK(job.at("summary").contains("max_p2"));
    if (job.at("eta").get<double>() == 1.0)
      CHECK(job.at("summary").contains("truncation"));
  }
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
  TempDir d1("w1"), d2("w4"), d3("rep");
  std::ostringstream log;
  REQUIRE(run_sweep(small_grid(), d1.path.string(), 1, log) == 0);
  REQUIRE(run_sweep(small_grid(), d2.path.string(), 4, log) == 0);
  REQUIRE(run_sweep(small_grid(), d3.path.string(), 1, log) == 0);

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(d1.path)) {
    const std::string name = entry.path().filename().string();
    CHECK(slurp(entry.path()) == slurp(d2.path / name));
    CHECK(slurp(entry.path()) == slurp(d3.path / name));
    ++compared;
  }
  CHECK(compared == 7);  // 6 job CSVs + index.json
}

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtraj/execute.hpp"
#include "qtraj/io.hpp"

using namespace qtraj;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qtraj_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig coherent_config(Mode mode, const std::string& out) {
  RunConfig c;
  c.mode = mode;
  c.initial = InitialState::coherent({1.0, 0.0});
  c.params = ModelParams{1.0, 0.5, 0};
  c.grid = TimeGrid{1.0, 1000};
  c.seed = 3;
  c.output = out;
  return c;
}

}  // namespace

TEST_CASE("diffusive run writes the series and its metadata") {
  const auto dir = fresh_dir("run");
  std::ostringstream log;
  const int rc = execute(coherent_config(Mode::Diffusive, dir.string()), log);
  CHECK(rc == kExitOk);

  const std::string csv = slurp(dir / "trajectory.csv");
  CHECK(csv.rfind("t,meanX,meanY,meanN,dX,dY,norm2log,jump\n", 0) == 0);
  // one header + 1001 records
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1002);

  const std::string meta = slurp(dir / "metadata.json");
  CHECK(meta.find("philox4x64-10") != std::string::npos);
  CHECK(meta.find("\"dim\": 31") != std::string::npos);
  CHECK(meta.find("tail_mass") != std::string::npos);
}

TEST_CASE("reruns are byte-identical") {
  const auto d1 = fresh_dir("rerun_a");
  const auto d2 = fresh_dir("rerun_b");
  std::ostringstream log;
  CHECK(execute(coherent_config(Mode::Diffusive, d1.string()), log) == kExitOk);
  CHECK(execute(coherent_config(Mode::Diffusive, d2.string()), log) == kExitOk);
  CHECK(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));
}

TEST_CASE("ensemble output is identical across thread counts") {
  const auto d1 = fresh_dir("ens1");
  const auto d2 = fresh_dir("ens2");
  RunConfig c = coherent_config(Mode::Ensemble, d1.string());
  c.n_trajectories = 48;
  c.record_every = 250;
  std::ostringstream log;
  CHECK(execute(c, log, 1) == kExitOk);
  c.output = d2.string();
  CHECK(execute(c, log, 2) == kExitOk);
  CHECK(slurp(d1 / "ensemble.csv") == slurp(d2 / "ensemble.csv"));
  CHECK(slurp(d1 / "ensemble_stats.json") == slurp(d2 / "ensemble_stats.json"));
}

TEST_CASE("compare mode passes the coherent benchmark and reports deviations") {
  const auto dir = fresh_dir("compare");
  RunConfig c = coherent_config(Mode::Compare, dir.string());
  std::ostringstream log;
  const int rc = execute(c, log);
  CHECK(rc == kExitOk);
  const std::string rep = slurp(dir / "report.json");
  CHECK(rep.find("\"pass\": true") != std::string::npos);
  CHECK(fs::exists(dir / "oracle.csv"));

  // an absurd tolerance turns the same run into a tolerance failure
  c.tol.max_mean_n = 1e-12;
  c.output = fresh_dir("compare_fail").string();
  CHECK(execute(c, log) == kExitToleranceExceeded);
}

TEST_CASE("survival mode emits the closed-form versus frequency table") {
  const auto dir = fresh_dir("survival");
  RunConfig c;
  c.mode = Mode::Survival;
  c.initial = InitialState::cat_odd({1.0, 0.0});
  c.params = ModelParams{1.0, 0.5, 0};
  c.grid = TimeGrid{4.0, 800};
  c.n_trajectories = 400;
  c.record_every = 200;
  c.seed = 8;
  c.output = dir.string();
  std::ostringstream log;
  CHECK(execute(c, log) == kExitOk);
  const std::string csv = slurp(dir / "survival.csv");
  CHECK(csv.rfind("t,survivalClosed,zeroJumpFreq,binomSE,meanJumps\n", 0) == 0);
}

TEST_CASE("lindblad mode writes the master series") {
  const auto dir = fresh_dir("master");
  RunConfig c = coherent_config(Mode::Lindblad, dir.string());
  c.record_every = 100;
  std::ostringstream log;
  CHECK(execute(c, log) == kExitOk);
  CHECK(slurp(dir / "master.csv").rfind(io::kSeriesHeader, 0) == 0);
}

TEST_CASE("invalid configs fail with exit code 2 and write nothing") {
  const auto dir = fresh_dir("invalid");
  RunConfig c = coherent_config(Mode::Diffusive, (dir / "sub").string());
  c.grid.n_steps = 0;  // invalid
  std::ostringstream log;
  CHECK(execute(c, log) == kExitConfigError);
  CHECK(!fs::exists(dir / "sub"));
}

TEST_CASE("17-significant-digit cells reparse exactly") {
  CHECK(io::format_g17(1.0 / 3.0) == "0.33333333333333331");
  const double v = 0.1234567890123456789;
  CHECK(std::stod(io::format_g17(v)) == v);
}

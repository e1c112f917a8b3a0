// Copyright 2026 The giesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"
#include "giesim/io.hpp"
#include "giesim/riccati.hpp"

namespace fs = std::filesystem;
using doctest::Approx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "giesim");
  std::ostringstream out, err;
  const int code = gie::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("giesim_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("steady") {
    TempDir dir;
    const Run r = cli({"--out", dir.str(), "steady"});
    CHECK(r.code == 0);
    CHECK(r.out.find("criterion margin") != std::string::npos);
    REQUIRE(fs::exists(dir / "steady.json"));
    const auto j = gie::load_json(dir / "steady.json");
    CHECK(j["criterion_met"] == true);
    const auto m = gie::load_json(dir / "steady.json.manifest.json");
    CHECK(m["command"] == "steady");
    CHECK(m["outputs"][0] == "steady.json");
    CHECK(gie::parse_config(m["config"]).params.T == 1.0);
  }

  TEST_CASE("evolve") {
    TempDir dir;
    const Run r = cli({"--out", dir.str(), "evolve", "--points", "50"});
    CHECK(r.code == 0);
    const gie::CsvTable t = gie::read_csv(dir / "trajectory.csv");
    CHECK(t.rows.size() == 51);
    const std::size_t pp = t.column("Vpp_plus");
    CHECK(t.rows.front()[pp] == Approx(1.85e3).epsilon(1e-3));
    CHECK(t.rows.back()[pp] == Approx(2.48).epsilon(2e-3));
    CHECK(t.column("EN") > 0);
    CHECK(t.column("squeeze_angle_minus") > 0);
    CHECK(fs::exists(dir / "trajectory.csv.manifest.json"));
  }

  TEST_CASE("evolve with t_end zero") {
    TempDir dir;
    CHECK(cli({"--out", dir.str(), "evolve", "--t-end", "0"}).code == 0);
    const gie::CsvTable t = gie::read_csv(dir / "trajectory.csv");
    REQUIRE(t.rows.size() == 1);
    const auto v0 = gie::initial_covariance(gie::derive(gie::ExperimentParams::reference())).first;
    CHECK(t.rows[0][0] == 0.0);
    CHECK(t.rows[0][1] == v0.qq);
    CHECK(t.rows[0][3] == v0.pp);
  }

  TEST_CASE("evolve steady mode") {
    TempDir dir;
    CHECK(cli({"--out", dir.str(), "evolve", "--mode", "steady"}).code == 0);
    CHECK(fs::exists(dir / "steady.json"));
    CHECK_FALSE(fs::exists(dir / "trajectory.csv"));
  }

  TEST_CASE("figure") {
    TempDir dir;
    CHECK(cli({"--out", dir.str(), "figure", "fig2", "--points", "20"}).code == 0);
    CHECK(gie::read_csv(dir / "fig2.csv").rows.size() == 20);
    CHECK(fs::exists(dir / "fig2.csv.manifest.json"));
    const Run bad = cli({"--out", dir.str(), "figure", "fig7"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("fig7") != std::string::npos);
  }

  TEST_CASE("budget") {
    TempDir dir;
    const Run r = cli({"--out", dir.str(), "--seed", "3", "budget", "--mc-samples", "1000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("N repetitions         7287") != std::string::npos);
    CHECK(r.out.find("plus pp_pp") != std::string::npos);
    const auto j = gie::load_json(dir / "budget.json");
    CHECK(j["n_meas"] == 7287);
    CHECK(j["monte_carlo"].size() == 12);
    CHECK(gie::load_json(dir / "budget.json.manifest.json")["options"]["seed"] == 3);

    const Run strict = cli({"--out", dir.str(), "--strict-paper-moments", "budget"});
    CHECK(strict.code == 0);
    CHECK(gie::load_json(dir / "budget.json")["n_meas"] < 7287);

    const Run quad = cli({"--out", dir.str(), "budget", "--target-snr", "2"});
    CHECK(quad.code == 0);
    CHECK(gie::load_json(dir / "budget.json")["n_meas_exact"].get<double>() ==
          Approx(4 * j["n_meas_exact"].get<double>()));
  }

  TEST_CASE("budget when separable") {
    TempDir dir;
    write_file(dir / "hot.json", R"({"T_K": 10})");
    const Run r = cli({"--config", (dir / "hot.json").string(), "--out", dir.str(), "budget"});
    CHECK(r.code == 3);
    CHECK(r.err.find("criterion margin 0.229") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "budget.json"));
  }

  TEST_CASE("sweep") {
    TempDir dir;
    write_file(dir / "spec.json", R"({"axes": [{"name": "kappa_over_2pi_Hz",
        "values": [1e6, 1e7, 1e8]}], "pipeline": "full_evolution",
        "integrator": {"points": 100}})");
    const Run r = cli({"--out", dir.str(), "sweep", (dir / "spec.json").string(), "--workers", "2"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "sweep.csv.manifest.json"));
    const auto j = gie::load_json(dir / "sweep.json");
    CHECK(j["points"] == 3);
    CHECK(j["spec"]["workers"] == 2);
    // the echoed spec reproduces the run
    write_file(dir / "echo.json", j["spec"].dump());
    TempDir again;
    CHECK(cli({"--out", again.str(), "sweep", (dir / "echo.json").string()}).code == 0);
    CHECK(gie::load_json(again / "sweep.json")["rows"] == j["rows"]);
  }

  TEST_CASE("exit codes") {
    TempDir dir;
    write_file(dir / "unknown.json", R"({"mass": 1})");
    write_file(dir / "negative.json", R"({"m_kg": -1})");
    write_file(dir / "broken.json", "{");
    const auto with_config = [&](const std::string& name) {
      return cli({"--config", (dir / name).string(), "--out", dir.str(), "steady"}).code;
    };
    CHECK(with_config("unknown.json") == 2);
    CHECK(with_config("broken.json") == 2);
    CHECK(with_config("missing.json") == 2);
    CHECK(with_config("negative.json") == 3);
    CHECK(cli({"--out", dir.str(), "evolve", "--rel-tol", "1e-30", "--abs-tol", "1e-30"}).code == 4);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"steady", "--bogus"}).code == 2);
    CHECK(cli({"sweep", (dir / "nothing.json").string()}).code == 2);
    const Run help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("budget") != std::string::npos);
    CHECK(cli({"--version"}).code == 0);
  }
}

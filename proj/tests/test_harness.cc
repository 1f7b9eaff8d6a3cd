// Copyright 2026 The rpdhg-lab Authors
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

#include "doctest.h"
#include "json.hpp"
#include "rpdhg/error.h"
#include "rpdhg/harness.h"
#include "rpdhg/rng.h"

namespace rpdhg {
namespace {

ExperimentConfig Small(int threads) {
  PresetOptions o;
  o.max_n = 16;
  o.instance_count = 6;
  ExperimentConfig cfg = MakePreset(Preset::kDims, o);
  cfg.master_seed = 99;
  cfg.threads = threads;
  cfg.delta_grid = {0.1, 0.5};
  return cfg;
}

TEST_SUITE("harness") {

TEST_CASE("presets") {
  const ExperimentConfig tail = MakePreset(Preset::kTail);
  CHECK(tail.cells.size() == 1);
  CHECK(tail.cells[0].m == 50);
  CHECK(tail.cells[0].n == 100);
  CHECK(tail.instance_count == 1000);
  CHECK(tail.delta_grid.front() == doctest::Approx(0.005));
  CHECK(tail.delta_grid.back() == doctest::Approx(0.5));
  const ExperimentConfig dims = MakePreset(Preset::kDims);
  CHECK(dims.cells.size() == 7);
  CHECK(dims.cells.front().n == 4);
  CHECK(dims.cells.back().n == 256);
  for (const Cell& c : dims.cells) CHECK(c.m * 2 == c.n);
  const ExperimentConfig disp = MakePreset(Preset::kDisparity);
  CHECK(disp.cells.size() == 11);
  CHECK(disp.cells.back().level == 10);
  CHECK(disp.cells.back().n == 100);
  CHECK_THROWS_AS(MakePreset(Preset::kCustom), Error);
  PresetOptions o;
  o.m = 3;
  o.n = 7;
  CHECK(MakePreset(Preset::kCustom, o).cells.front().n == 7);
  CHECK(ParsePreset("disparity") == Preset::kDisparity);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = Small(1);
  cfg.instance_count = 0;
  CHECK_THROWS_AS(run_batch(cfg), Error);
  cfg = Small(1);
  cfg.cells.clear();
  CHECK_THROWS_AS(run_batch(cfg), Error);
  cfg = Small(1);
  cfg.cells[0].m = cfg.cells[0].n;
  CHECK_THROWS_AS(run_batch(cfg), Error);
}

TEST_CASE("smallest batch") {
  PresetOptions o;
  o.m = 2;
  o.n = 4;
  ExperimentConfig cfg = MakePreset(Preset::kCustom, o);
  const ExperimentResult r = run_batch(cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].solved);
  CHECK(r.rows[0].seed == MixSeed(0, {0, 0, 0}));
  const std::string csv = RunTableCsv(r.rows);
  CHECK(csv.rfind("cell_id,seed,m,n,l,phi,kappa,Phi,T_basis,T_local,T_total,epochs,"
                  "final_dist,solved\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("dims cell n = 4 solves 100 instances") {
  PresetOptions o;
  o.max_n = 4;
  ExperimentConfig cfg = MakePreset(Preset::kDims, o);
  const ExperimentResult r = run_batch(cfg);
  CHECK(r.rows.size() == 100);
  CHECK(r.unsolved == 0);
  for (const RunRow& row : r.rows) {
    CHECK(row.t_basis + row.t_local == row.t_total);
    CHECK(row.m == 2);
  }
}

TEST_CASE("CSV output is byte-identical across worker counts") {
  const ExperimentResult one = run_batch(Small(1));
  const ExperimentResult many = run_batch(Small(8));
  CHECK(RunTableCsv(one.rows) == RunTableCsv(many.rows));
  CHECK(TailTableCsv(one.tail_curves) == TailTableCsv(many.tail_curves));
  CHECK(QuantileTableCsv(one.quantile_tables) == QuantileTableCsv(many.quantile_tables));
  CHECK(SlopeTableCsv(one.slope_fits) == SlopeTableCsv(many.slope_fits));
}

TEST_CASE("rows are reproducible from their cell and seed alone") {
  const ExperimentResult r = run_batch(Small(2));
  const nlohmann::json manifest = nlohmann::json::parse(ManifestJson(r));
  CHECK(manifest["master_seed"] == 99);
  CHECK(manifest["cells"].size() == r.config.cells.size());
  const RunRow& row = r.rows[7];
  CHECK(manifest["cells"][row.cell_index]["seeds"][row.index] == row.seed);
  GeneratorSpec spec;
  spec.m = row.m;
  spec.n = row.n;
  spec.seed = row.seed;
  spec.presolve = true;
  const RunRecord again = solve(generate_instance(spec), r.config.solver);
  CHECK(again.total_iters == row.t_total);
  CHECK(again.t_basis == row.t_basis);
}

TEST_CASE("disparity cells carry their level") {
  PresetOptions o;
  o.m = 4;
  o.max_level = 2;
  o.instance_count = 3;
  const ExperimentResult r = run_batch(MakePreset(Preset::kDisparity, o));
  CHECK(r.rows.size() == 9);
  CHECK(r.rows.back().level == 2);
  CHECK(r.rows.back().phi == doctest::Approx((1.0 + 16) / 2));
  const std::string csv = RunTableCsv(r.rows);
  CHECK(csv.find("l2,") != std::string::npos);
  bool has_fit = false;
  for (const NamedSlope& s : r.slope_fits) has_fit |= s.curve == "stage1_median_vs_phi";
  CHECK(has_fit);
}

TEST_CASE("unsolved runs are recorded, not fatal") {
  ExperimentConfig cfg = Small(1);
  cfg.solver.max_iters = 10;
  const ExperimentResult r = run_batch(cfg);
  CHECK(r.unsolved == static_cast<std::int64_t>(r.rows.size()));
  CHECK(r.tail_curves.empty());
  CHECK(!r.notes.empty());
  CHECK_THROWS_AS(tail_curve(r.rows, Stage::kBasis, cfg.delta_grid), Error);
  const std::string csv = RunTableCsv(r.rows);
  CHECK(csv.find(",,10,") != std::string::npos);  // empty stage fields
}

TEST_CASE("non-finite values serialize as words") {
  CHECK(FormatDouble(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(FormatDouble(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(FormatDouble(0.1) == "0.10000000000000001");
  RunRow row;
  row.cell_id = "c";
  row.Phi = std::numeric_limits<double>::infinity();
  CHECK(RunTableCsv({row}).find(",inf,") != std::string::npos);
}

TEST_CASE("outputs land on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "rpdhg_harness_out";
  std::filesystem::remove_all(dir);
  const ExperimentResult r = run_batch(Small(1));
  WriteExperimentOutputs(r, dir.string());
  for (const char* f : {"runs.csv", "tail.csv", "quantiles.csv", "slopes.csv", "manifest.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::ifstream in(dir / "slopes.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "curve,slope,intercept,r2,fit_lo,fit_hi");
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE

}  // namespace
}  // namespace rpdhg

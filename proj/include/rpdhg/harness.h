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

#ifndef RPDHG_HARNESS_H_
#define RPDHG_HARNESS_H_

// Seeded batch runs over grids of LP instances, plus the statistics and CSV
// files derived from them.
//
// Instance (cell c, index i) uses seed MixSeed(master_seed, {c, i, attempt}),
// where attempt counts certification failures for that slot. Jobs go to
// workers round-robin and results land in an ordered buffer, so the output
// does not depend on the number of workers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpdhg/instance.h"
#include "rpdhg/solver.h"
#include "rpdhg/stats.h"

namespace rpdhg {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Preset { kTail, kDims, kDisparity, kCustom };

std::string_view PresetName(Preset preset);
Preset ParsePreset(std::string_view name);

struct Cell {
  std::string id;
  std::size_t m = 0;
  std::size_t n = 0;
  int level = -1;  // disparity level; -1 for ordinary cells
};

struct ExperimentConfig {
  Preset preset = Preset::kCustom;
  std::vector<Cell> cells;
  std::int64_t instance_count = 1;
  std::uint64_t master_seed = 0;
  MatrixDistribution matrix;
  SolutionDistribution solution;
  bool presolve = true;
  SolverConfig solver;
  int threads = 1;
  std::string output_dir;
  // Tail-curve deltas and the window the tail slopes are fitted on.
  std::vector<double> delta_grid;
  double delta_fit_lo = 0.01;
  double delta_fit_hi = 0.1;
  // Certification failures tolerated per slot before the batch aborts.
  int max_resamples = 100;
  bool condition_reports = true;
};

// Throws kArgument on empty grids, instance_count < 1 and the like.
void validate_experiment(const ExperimentConfig& cfg);

struct PresetOptions {
  std::optional<std::int64_t> instance_count;
  std::optional<std::size_t> m;
  std::optional<std::size_t> n;
  // dims: largest n of the doubling grid; disparity: largest level.
  std::optional<std::size_t> max_n;
  std::optional<int> max_level;
};

// tail: m = 50, n = 100, 1000 instances, 25 deltas log-spaced in
// [0.005, 0.5]. dims: n = 4, 8, ..., 256, m = n / 2, 100 each. disparity:
// m = 50, l = 0..10, 100 each. custom: one cell from options.m/n.
ExperimentConfig MakePreset(Preset preset, const PresetOptions& options = {});

enum class Stage { kBasis, kLocal, kTotal };

std::string_view StageName(Stage stage);

struct RunRow {
  std::size_t cell_index = 0;
  std::string cell_id;
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> rejected_seeds;  // certification failures
  std::size_t m = 0;
  std::size_t n = 0;
  int level = -1;
  double phi = 0.0;
  double kappa = 0.0;
  double Phi = 0.0;
  bool solved = false;
  bool stages_available = false;
  bool settled = false;
  std::int64_t t_basis = 0;
  std::int64_t t_local = 0;
  std::int64_t t_total = 0;
  std::int64_t epochs = 0;
  double final_dist = 0.0;
  std::string error;  // non-empty if the solve threw
};

struct StageTail {
  Stage stage = Stage::kBasis;
  std::vector<TailPoint> points;
};

struct StageQuartiles {
  std::string cell_id;
  Stage stage = Stage::kBasis;
  QuartileSummary q;
};

struct NamedSlope {
  std::string curve;
  SlopeFit fit;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRow> rows;  // ordered by (cell, index)
  std::vector<StageTail> tail_curves;
  std::vector<StageQuartiles> quantile_tables;
  std::vector<NamedSlope> slope_fits;
  std::vector<std::string> notes;  // fits that could not be made, etc.
  std::int64_t unsolved = 0;
};

// Never aborts on an unsolved or diverging run; those rows carry
// solved = false.
ExperimentResult run_batch(const ExperimentConfig& cfg);

// Stage count of a row. Requires stages_available.
std::int64_t StageCount(const RunRow& row, Stage stage);

// Throws kUnsolvedRun listing the offending rows if any is unsolved.
std::vector<TailPoint> tail_curve(const std::vector<RunRow>& rows, Stage stage,
                                  std::span<const double> delta_grid);
QuartileSummary quantiles(const std::vector<RunRow>& rows, Stage stage);

// CSV text of the four tables.
std::string RunTableCsv(const std::vector<RunRow>& rows);
std::string TailTableCsv(const std::vector<StageTail>& tails);
std::string QuantileTableCsv(const std::vector<StageQuartiles>& tables);
std::string SlopeTableCsv(const std::vector<NamedSlope>& fits);
std::string ManifestJson(const ExperimentResult& result);

// Writes runs.csv, tail.csv, quantiles.csv, slopes.csv and manifest.json
// into `dir` (created if missing).
void WriteExperimentOutputs(const ExperimentResult& result, const std::string& dir);

// %.17g, with "inf" / "-inf" / "nan" for non-finite values.
std::string FormatDouble(double v);

}  // namespace rpdhg

#endif  // RPDHG_HARNESS_H_

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

#include "rpdhg/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rpdhg/error.h"
#include "rpdhg/metrics.h"
#include "rpdhg/rng.h"

namespace rpdhg {
namespace {

using Json = nlohmann::json;

struct Job {
  std::size_t cell_index;
  std::int64_t index;
};

std::string StopRuleName(StopRule rule) {
  return rule == StopRule::kDistanceToOptimum ? "distance" : "kkt";
}

Json SolverJson(const SolverConfig& s) {
  return {{"beta", s.beta},
          {"check_period", s.check_period},
          {"dist_tol", s.dist_tol},
          {"max_iters", s.max_iters},
          {"spectral_rel_tol", s.spectral_rel_tol},
          {"gap_bisect_tol", s.gap_bisect_tol},
          {"trace_stride", s.trace_stride},
          {"stop_rule", StopRuleName(s.stop_rule)},
          {"kkt_tol", s.kkt_tol}};
}

RunRow RunOne(const ExperimentConfig& cfg, const Job& job) {
  const Cell& cell = cfg.cells[job.cell_index];
  RunRow row;
  row.cell_index = job.cell_index;
  row.cell_id = cell.id;
  row.index = job.index;
  row.m = cell.m;
  row.n = cell.n;
  row.level = cell.level;

  LpInstance inst;
  for (int attempt = 0;; ++attempt) {
    const std::uint64_t seed =
        MixSeed(cfg.master_seed, {job.cell_index, static_cast<std::uint64_t>(job.index),
                                  static_cast<std::uint64_t>(attempt)});
    try {
      if (cell.level >= 0) {
        inst = gen_disparity(cell.m, cell.level, cfg.matrix, seed, cfg.presolve).instance;
      } else {
        GeneratorSpec spec;
        spec.m = cell.m;
        spec.n = cell.n;
        spec.matrix = cfg.matrix;
        spec.solution = cfg.solution;
        spec.seed = seed;
        spec.presolve = cfg.presolve;
        inst = generate_instance(spec);
      }
      if (!inst.meta.certificate.certified()) {
        Fail(ErrorKind::kCertificationFailed, "planted solution not strictly complementary");
      }
      row.seed = seed;
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kCertificationFailed) throw;
      row.rejected_seeds.push_back(seed);
      if (attempt + 1 > cfg.max_resamples) {
        Fail(ErrorKind::kCertificationFailed,
             "cell " + cell.id + ": too many certification failures");
      }
    }
  }

  if (cfg.condition_reports) {
    const ConditionReport rep = condition_report(inst);
    row.phi = rep.phi;
    row.kappa = rep.kappa;
    row.Phi = rep.Phi;
  }
  try {
    const RunRecord rec = solve(inst, cfg.solver);
    row.solved = rec.solved;
    row.stages_available = rec.stages_available;
    row.settled = rec.settled;
    row.t_basis = rec.t_basis;
    row.t_local = rec.t_local;
    row.t_total = rec.total_iters;
    row.epochs = rec.epochs;
    row.final_dist = rec.final_dist;
  } catch (const DivergenceError& e) {
    row.solved = false;
    row.t_total = e.iteration();
    row.final_dist = std::numeric_limits<double>::infinity();
    row.error = e.what();
  }
  return row;
}

std::vector<const RunRow*> CellRows(const std::vector<RunRow>& rows, std::size_t cell) {
  std::vector<const RunRow*> out;
  for (const RunRow& r : rows) {
    if (r.cell_index == cell) out.push_back(&r);
  }
  return out;
}

std::vector<RunRow> Usable(const std::vector<RunRow>& rows) {
  std::vector<RunRow> out;
  for (const RunRow& r : rows) {
    if (r.solved && r.stages_available) out.push_back(r);
  }
  return out;
}

// Fits ln(y) on ln(x), dropping points with y <= 0 (a zero stage median has
// no logarithm) and noting the omission.
void FitCurve(const std::string& name, std::vector<LogLogPoint> points, double lo,
              double hi, ExperimentResult& result) {
  const std::size_t before = points.size();
  std::erase_if(points, [](const LogLogPoint& p) { return !(p.y > 0.0); });
  if (points.size() != before) {
    result.notes.push_back(name + ": dropped " + std::to_string(before - points.size()) +
                           " point(s) with zero iterations");
  }
  try {
    result.slope_fits.push_back({name, loglog_slope(points, lo, hi)});
  } catch (const Error& e) {
    result.notes.push_back(name + ": no fit (" + e.what() + ")");
  }
}

void Summarize(ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  const std::vector<RunRow> usable = Usable(result.rows);

  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    std::vector<RunRow> cell_rows;
    for (const RunRow* r : CellRows(usable, c)) cell_rows.push_back(*r);
    if (cell_rows.empty()) {
      result.notes.push_back("cell " + cfg.cells[c].id + ": no solved runs");
      continue;
    }
    for (Stage stage : {Stage::kBasis, Stage::kLocal, Stage::kTotal}) {
      result.quantile_tables.push_back({cfg.cells[c].id, stage, quantiles(cell_rows, stage)});
    }
  }

  if (!cfg.delta_grid.empty()) {
    if (result.unsolved > 0) {
      result.notes.push_back("tail curves skipped: " + std::to_string(result.unsolved) +
                             " unsolved run(s)");
    } else if (!usable.empty()) {
      for (Stage stage : {Stage::kBasis, Stage::kLocal}) {
        StageTail tail{stage, tail_curve(usable, stage, cfg.delta_grid)};
        std::vector<LogLogPoint> pts;
        for (const TailPoint& p : tail.points) {
          pts.push_back({1.0 / p.delta, static_cast<double>(p.iters)});
        }
        FitCurve(std::string(StageName(stage)) + "_tail_vs_inv_delta", pts,
                 1.0 / cfg.delta_fit_hi, 1.0 / cfg.delta_fit_lo, result);
        result.tail_curves.push_back(std::move(tail));
      }
    }
  }

  if (cfg.cells.size() >= 2) {
    const bool by_phi = cfg.preset == Preset::kDisparity;
    for (Stage stage : {Stage::kBasis, Stage::kLocal}) {
      std::vector<LogLogPoint> pts;
      for (const StageQuartiles& q : result.quantile_tables) {
        if (q.stage != stage) continue;
        const Cell& cell = *std::find_if(cfg.cells.begin(), cfg.cells.end(),
                                         [&](const Cell& c) { return c.id == q.cell_id; });
        const double x = by_phi ? disparity_phi(cell.m, cell.level)
                                : static_cast<double>(cell.n);
        pts.push_back({x, q.q.q50});
      }
      if (pts.empty()) continue;
      double lo = pts.front().x;
      double hi = pts.front().x;
      for (const LogLogPoint& p : pts) {
        lo = std::min(lo, p.x);
        hi = std::max(hi, p.x);
      }
      FitCurve(std::string(StageName(stage)) + (by_phi ? "_median_vs_phi" : "_median_vs_n"),
               pts, lo, hi, result);
    }
  }
}

}  // namespace

std::string_view PresetName(Preset preset) {
  switch (preset) {
    case Preset::kTail: return "tail";
    case Preset::kDims: return "dims";
    case Preset::kDisparity: return "disparity";
    case Preset::kCustom: return "custom";
  }
  return "unknown";
}

Preset ParsePreset(std::string_view name) {
  for (Preset p : {Preset::kTail, Preset::kDims, Preset::kDisparity, Preset::kCustom}) {
    if (name == PresetName(p)) return p;
  }
  Fail(ErrorKind::kArgument, "unknown preset '" + std::string(name) + "'");
}

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kBasis: return "stage1";
    case Stage::kLocal: return "stage2";
    case Stage::kTotal: return "total";
  }
  return "unknown";
}

void validate_experiment(const ExperimentConfig& cfg) {
  Require(!cfg.cells.empty(), "experiment: empty grid");
  Require(cfg.instance_count >= 1, "experiment: instance_count must be at least 1");
  Require(cfg.threads >= 1, "experiment: threads must be at least 1");
  Require(cfg.max_resamples >= 0, "experiment: max_resamples must be nonnegative");
  for (const Cell& c : cfg.cells) {
    Require(c.m >= 1 && c.m < c.n, "experiment: cell " + c.id + " needs 1 <= m < n");
    if (c.level >= 0) {
      Require(c.n == 2 * c.m, "experiment: disparity cell " + c.id + " needs n = 2m");
    }
  }
  for (double d : cfg.delta_grid) {
    Require(d > 0.0 && d < 1.0, "experiment: deltas must lie in (0, 1)");
  }
  Require(cfg.delta_fit_lo > 0.0 && cfg.delta_fit_lo <= cfg.delta_fit_hi &&
              cfg.delta_fit_hi < 1.0,
          "experiment: bad delta fit window");
  validate_config(cfg.solver);
}

ExperimentConfig MakePreset(Preset preset, const PresetOptions& options) {
  ExperimentConfig cfg;
  cfg.preset = preset;
  cfg.matrix.kind = MatrixKind::kGaussian;
  cfg.solution.kind = SolutionKind::kFoldedGaussian;
  cfg.presolve = true;
  switch (preset) {
    case Preset::kTail: {
      const std::size_t m = options.m.value_or(50);
      const std::size_t n = options.n.value_or(100);
      cfg.cells.push_back({"m" + std::to_string(m) + "_n" + std::to_string(n), m, n, -1});
      cfg.instance_count = options.instance_count.value_or(1000);
      cfg.delta_grid = LogSpaced(0.005, 0.5, 25);
      break;
    }
    case Preset::kDims: {
      const std::size_t max_n = options.max_n.value_or(256);
      for (std::size_t n = 4; n <= max_n; n *= 2) {
        cfg.cells.push_back({"n" + std::to_string(n), n / 2, n, -1});
      }
      cfg.instance_count = options.instance_count.value_or(100);
      break;
    }
    case Preset::kDisparity: {
      const std::size_t m = options.m.value_or(50);
      const int max_level = options.max_level.value_or(10);
      for (int l = 0; l <= max_level; ++l) {
        cfg.cells.push_back({"l" + std::to_string(l), m, 2 * m, l});
      }
      cfg.solution.kind = SolutionKind::kDisparityLevel;
      cfg.instance_count = options.instance_count.value_or(100);
      break;
    }
    case Preset::kCustom: {
      Require(options.m.has_value() && options.n.has_value(),
              "custom preset needs m and n");
      cfg.cells.push_back({"m" + std::to_string(*options.m) + "_n" +
                               std::to_string(*options.n),
                           *options.m, *options.n, -1});
      cfg.instance_count = options.instance_count.value_or(1);
      break;
    }
  }
  return cfg;
}

std::int64_t StageCount(const RunRow& row, Stage stage) {
  Require(row.stages_available, "stage counts are only defined for solved runs");
  switch (stage) {
    case Stage::kBasis: return row.t_basis;
    case Stage::kLocal: return row.t_local;
    case Stage::kTotal: return row.t_total;
  }
  return 0;
}

std::vector<TailPoint> tail_curve(const std::vector<RunRow>& rows, Stage stage,
                                  std::span<const double> delta_grid) {
  std::vector<std::int64_t> counts;
  std::string bad;
  for (const RunRow& r : rows) {
    if (!r.solved || !r.stages_available) {
      bad += (bad.empty() ? "" : ", ") + r.cell_id + "#" + std::to_string(r.index);
    } else {
      counts.push_back(StageCount(r, stage));
    }
  }
  if (!bad.empty()) Fail(ErrorKind::kUnsolvedRun, "tail_curve: unsolved records: " + bad);
  return tail_curve(std::span<const std::int64_t>(counts), delta_grid);
}

QuartileSummary quantiles(const std::vector<RunRow>& rows, Stage stage) {
  Require(!rows.empty(), "quantiles: no records");
  std::vector<double> v;
  for (const RunRow& r : rows) v.push_back(static_cast<double>(StageCount(r, stage)));
  return quartiles(v);
}

ExperimentResult run_batch(const ExperimentConfig& cfg) {
  validate_experiment(cfg);
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    for (std::int64_t i = 0; i < cfg.instance_count; ++i) jobs.push_back({c, i});
  }
  std::vector<RunRow> rows(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), jobs.size());
  auto work = [&](std::size_t w) {
    for (std::size_t k = w; k < jobs.size(); k += workers) {
      try {
        rows[k] = RunOne(cfg, jobs[k]);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ExperimentResult result;
  result.config = cfg;
  result.rows = std::move(rows);
  for (const RunRow& r : result.rows) {
    if (!r.solved) ++result.unsolved;
  }
  Summarize(result);
  return result;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string RunTableCsv(const std::vector<RunRow>& rows) {
  std::ostringstream out;
  out << "cell_id,seed,m,n,l,phi,kappa,Phi,T_basis,T_local,T_total,epochs,final_dist,solved\n";
  for (const RunRow& r : rows) {
    out << r.cell_id << ',' << r.seed << ',' << r.m << ',' << r.n << ',';
    if (r.level >= 0) out << r.level;
    out << ',' << FormatDouble(r.phi) << ',' << FormatDouble(r.kappa) << ','
        << FormatDouble(r.Phi) << ',';
    if (r.stages_available) out << r.t_basis << ',' << r.t_local;
    else out << ',';
    out << ',' << r.t_total << ',' << r.epochs << ',' << FormatDouble(r.final_dist) << ','
        << (r.solved ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string TailTableCsv(const std::vector<StageTail>& tails) {
  std::ostringstream out;
  out << "stage,delta,iters\n";
  for (const StageTail& t : tails) {
    for (const TailPoint& p : t.points) {
      out << StageName(t.stage) << ',' << FormatDouble(p.delta) << ',' << p.iters << '\n';
    }
  }
  return out.str();
}

std::string QuantileTableCsv(const std::vector<StageQuartiles>& tables) {
  std::ostringstream out;
  out << "cell_id,stage,q25,q50,q75\n";
  for (const StageQuartiles& t : tables) {
    out << t.cell_id << ',' << StageName(t.stage) << ',' << FormatDouble(t.q.q25) << ','
        << FormatDouble(t.q.q50) << ',' << FormatDouble(t.q.q75) << '\n';
  }
  return out.str();
}

std::string SlopeTableCsv(const std::vector<NamedSlope>& fits) {
  std::ostringstream out;
  out << "curve,slope,intercept,r2,fit_lo,fit_hi\n";
  for (const NamedSlope& f : fits) {
    out << f.curve << ',' << FormatDouble(f.fit.slope) << ','
        << FormatDouble(f.fit.intercept) << ',' << FormatDouble(f.fit.r2) << ','
        << FormatDouble(f.fit.fit_lo) << ',' << FormatDouble(f.fit.fit_hi) << '\n';
  }
  return out.str();
}

std::string ManifestJson(const ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  Json cells = Json::array();
  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    const Cell& cell = cfg.cells[c];
    Json seeds = Json::array();
    Json rejected = Json::array();
    for (const RunRow* r : CellRows(result.rows, c)) {
      seeds.push_back(r->seed);
      for (std::uint64_t s : r->rejected_seeds) {
        rejected.push_back({{"index", r->index}, {"seed", s}});
      }
    }
    Json entry = {{"id", cell.id},
                  {"cell_index", c},
                  {"m", cell.m},
                  {"n", cell.n},
                  {"seeds", seeds},
                  {"rejected_seeds", rejected}};
    if (cell.level >= 0) entry["level"] = cell.level;
    cells.push_back(std::move(entry));
  }
  Json manifest = {
      {"tool", "rpdhg"},
      {"tool_version", kToolVersion},
      {"preset", PresetName(cfg.preset)},
      {"master_seed", cfg.master_seed},
      {"seed_rule", "MixSeed(master_seed, {cell_index, index, attempt})"},
      {"instance_count", cfg.instance_count},
      {"matrix", MatrixKindName(cfg.matrix.kind)},
      {"sigma_A", cfg.matrix.sigma_a},
      {"solution", SolutionKindName(cfg.solution.kind)},
      {"presolve", cfg.presolve},
      {"solver", SolverJson(cfg.solver)},
      {"delta_grid", cfg.delta_grid},
      // The delta range is a project choice, not read off any reference.
      {"delta_grid_is_project_choice", !cfg.delta_grid.empty()},
      {"delta_fit_window", {cfg.delta_fit_lo, cfg.delta_fit_hi}},
      {"max_resamples", cfg.max_resamples},
      {"condition_reports", cfg.condition_reports},
      {"unsolved", result.unsolved},
      {"notes", result.notes},
      {"cells", cells}};
  return manifest.dump(2) + "\n";
}

void WriteExperimentOutputs(const ExperimentResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorKind::kArgument, "cannot create output directory " + dir);
  auto write = [&](const char* name, const std::string& text) {
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) Fail(ErrorKind::kArgument, "cannot write " + path.string());
  };
  write("runs.csv", RunTableCsv(result.rows));
  write("tail.csv", TailTableCsv(result.tail_curves));
  write("quantiles.csv", QuantileTableCsv(result.quantile_tables));
  write("slopes.csv", SlopeTableCsv(result.slope_fits));
  write("manifest.json", ManifestJson(result));
}

}  // namespace rpdhg

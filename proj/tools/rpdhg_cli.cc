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

// rpdhg: command-line front end.
//
//   rpdhg generate   --m 50 --n 100 --dist gaussian --seed 1 --presolve --out inst.json
//   rpdhg solve      --instance inst.json --csv run.csv
//   rpdhg analyze    --instance inst.json
//   rpdhg probe      phi --n 50 --trials 20000 --t-lo 1e4 --t-hi 1e6 --out phi.csv
//   rpdhg experiment tail --count 1000 --seed 1 --threads 4 --out results/
//
// Exit status: 0 success, 1 usage error, 2 runtime failure. Every command that
// writes output also writes a JSON manifest next to it.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rpdhg/error.h"
#include "rpdhg/harness.h"
#include "rpdhg/instance.h"
#include "rpdhg/instance_io.h"
#include "rpdhg/kernels.h"
#include "rpdhg/metrics.h"
#include "rpdhg/probes.h"
#include "rpdhg/solver.h"
#include "rpdhg/stats.h"

namespace {

using Json = nlohmann::json;
using rpdhg::FormatDouble;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct SolverFlags {
  std::optional<std::int64_t> max_iters;
  std::optional<double> dist_tol;
  std::optional<std::int64_t> check_period;
  std::optional<double> beta;
  std::optional<std::int64_t> trace_stride;
  std::string stop_rule = "distance";
  std::optional<double> kkt_tol;

  void Register(CLI::App* app) {
    app->add_option("--max-iters", max_iters, "Iteration cap (default 1e7)");
    app->add_option("--dist-tol", dist_tol, "Distance-to-optimum tolerance (default 1e-4)");
    app->add_option("--check-period", check_period, "Steps between restart checks (default 64)");
    app->add_option("--beta", beta, "Restart fraction in (0, 1) (default 1/e)");
    app->add_option("--trace-stride", trace_stride, "Support sampling stride (default 1)");
    app->add_option("--stop-rule", stop_rule, "distance | kkt")
        ->check(CLI::IsMember({"distance", "kkt"}));
    app->add_option("--kkt-tol", kkt_tol, "Relative KKT tolerance for --stop-rule kkt");
  }

  rpdhg::SolverConfig Build() const {
    rpdhg::SolverConfig cfg;
    if (max_iters) cfg.max_iters = *max_iters;
    if (dist_tol) cfg.dist_tol = *dist_tol;
    if (check_period) cfg.check_period = *check_period;
    if (beta) cfg.beta = *beta;
    if (trace_stride) cfg.trace_stride = *trace_stride;
    if (kkt_tol) cfg.kkt_tol = *kkt_tol;
    cfg.stop_rule = stop_rule == "kkt" ? rpdhg::StopRule::kKktResidual
                                       : rpdhg::StopRule::kDistanceToOptimum;
    rpdhg::validate_config(cfg);
    return cfg;
  }
};

Json SolverJson(const rpdhg::SolverConfig& s) {
  return {{"beta", s.beta},           {"check_period", s.check_period},
          {"dist_tol", s.dist_tol},   {"max_iters", s.max_iters},
          {"trace_stride", s.trace_stride},
          {"stop_rule", s.stop_rule == rpdhg::StopRule::kKktResidual ? "kkt" : "distance"},
          {"kkt_tol", s.kkt_tol},     {"spectral_rel_tol", s.spectral_rel_tol},
          {"gap_bisect_tol", s.gap_bisect_tol}};
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) rpdhg::Fail(rpdhg::ErrorKind::kArgument, "cannot write " + path.string());
}

// out.csv -> out.manifest.json
void WriteManifest(const std::filesystem::path& output, Json manifest) {
  manifest["tool"] = "rpdhg";
  manifest["tool_version"] = rpdhg::kToolVersion;
  manifest["kernel_isa"] = std::string(rpdhg::kernels::IsaName(rpdhg::kernels::ActiveIsa()));
  std::filesystem::path path = output;
  path.replace_extension(".manifest.json");
  WriteText(path, manifest.dump(2) + "\n");
}

std::string RunCsvRow(const rpdhg::LpInstance& inst, const rpdhg::RunRecord& rec,
                      const rpdhg::ConditionReport& rep, const std::string& cell_id) {
  std::ostringstream out;
  out << cell_id << ',' << inst.seed << ',' << inst.m << ',' << inst.n << ',';
  if (inst.meta.solution.kind == rpdhg::SolutionKind::kDisparityLevel) {
    out << inst.meta.solution.level;
  }
  out << ',' << FormatDouble(rep.phi) << ',' << FormatDouble(rep.kappa) << ','
      << FormatDouble(rep.Phi) << ',';
  if (rec.stages_available) out << rec.t_basis << ',' << rec.t_local;
  else out << ',';
  out << ',' << rec.total_iters << ',' << rec.epochs << ',' << FormatDouble(rec.final_dist)
      << ',' << (rec.solved ? 1 : 0) << '\n';
  return out.str();
}

Json ReportJson(const rpdhg::ConditionReport& r) {
  auto num = [](double v) -> Json {
    if (std::isfinite(v)) return v;
    return FormatDouble(v);
  };
  return {{"m", r.m},
          {"n", r.n},
          {"kappa", num(r.kappa)},
          {"Phi", num(r.Phi)},
          {"phi", num(r.phi)},
          {"phi_raw", num(r.phi_raw)},
          {"min_xs", num(r.min_xs)},
          {"norm_Binv_times_normA", num(r.norm_binv_times_norm_a)},
          {"norm_Binv_A", num(r.norm_binv_a)},
          {"lemma7_bound", num(r.lemma7_bound)},
          {"Z_p", num(r.z_p)},
          {"Z_d", num(r.z_d)},
          {"sigma_max_A", num(r.sigma_max_a)},
          {"sigma_min_A", num(r.sigma_min_a)},
          {"sigma_min_B", num(r.sigma_min_b)},
          {"unique_optimum", r.unique_optimum},
          {"bound_chain_holds", rpdhg::verify_bound_chain(r)}};
}

std::vector<double> Grid(const std::vector<double>& explicit_values, double lo, double hi,
                         int count) {
  if (!explicit_values.empty()) return explicit_values;
  return rpdhg::LogSpaced(lo, hi, count);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restarted PDHG experiments on random LPs with planted optima"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rpdhg::kToolVersion);

  // generate
  CLI::App* gen = app.add_subcommand("generate", "Sample an LP instance with a known optimum");
  std::size_t g_m = 0, g_n = 0;
  std::string g_dist = "gaussian", g_solution = "folded-gaussian", g_out, g_mps;
  std::uint64_t g_seed = 0;
  int g_level = 0;
  std::vector<double> g_fixed;
  bool g_presolve = false, g_shuffle = false;
  gen->add_option("--m", g_m, "Constraints")->required();
  gen->add_option("--n", g_n, "Variables")->required();
  gen->add_option("--dist", g_dist, "gaussian | rademacher | uniform");
  gen->add_option("--solution", g_solution, "folded-gaussian | fixed | disparity");
  gen->add_option("--level", g_level, "Disparity level (n must equal 2m)");
  gen->add_option("--values", g_fixed, "Planted u for --solution fixed (length n)");
  gen->add_option("--seed", g_seed, "Instance seed");
  gen->add_flag("--presolve", g_presolve, "Replace c by its minimum-norm representative");
  gen->add_flag("--shuffle", g_shuffle, "Randomly permute the variables");
  gen->add_option("--out", g_out, "Instance JSON path")->required();
  gen->add_option("--mps", g_mps, "Also export fixed-format MPS");

  // solve
  CLI::App* sol = app.add_subcommand("solve", "Run rPDHG on an instance file");
  std::string s_instance, s_csv, s_out;
  SolverFlags s_flags;
  sol->add_option("--instance", s_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  sol->add_option("--csv", s_csv, "One-row run table");
  sol->add_option("--out", s_out, "Run record JSON (summary, traces, final iterate)");
  s_flags.Register(sol);

  // analyze
  CLI::App* ana = app.add_subcommand("analyze", "Condition-measure report of an instance");
  std::string a_instance, a_out;
  ana->add_option("--instance", a_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  ana->add_option("--out", a_out, "Report JSON (default: stdout)");

  // probe
  CLI::App* probe = app.add_subcommand("probe", "Monte-Carlo tail probes");
  std::string p_kind, p_dist = "gaussian", p_out;
  std::size_t p_m = 25, p_n = 50;
  std::int64_t p_trials = 1000;
  std::uint64_t p_seed = 0;
  std::vector<double> p_grid;
  double p_lo = 0.0, p_hi = 0.0;
  int p_points = 9;
  probe->add_option("kind", p_kind, "sigma-max | sigma-min | kappa | phi")
      ->required()
      ->check(CLI::IsMember({"sigma-max", "sigma-min", "kappa", "phi"}));
  probe->add_option("--m", p_m, "Rows");
  probe->add_option("--n", p_n, "Columns (vector length for phi)");
  probe->add_option("--dist", p_dist, "gaussian | rademacher | uniform");
  probe->add_option("--trials", p_trials, "Monte-Carlo trials");
  probe->add_option("--seed", p_seed, "Master seed");
  probe->add_option("--grid", p_grid, "Explicit eps (sigma-min) or t (phi) values");
  probe->add_option("--lo", p_lo, "Grid start (log-spaced)");
  probe->add_option("--hi", p_hi, "Grid end (log-spaced)");
  probe->add_option("--points", p_points, "Grid size");
  probe->add_option("--out", p_out, "CSV path (default: stdout)");

  // experiment
  CLI::App* exp = app.add_subcommand("experiment", "Seeded batch runs");
  std::string e_preset, e_out, e_dist = "gaussian";
  std::optional<std::int64_t> e_count;
  std::optional<std::size_t> e_m, e_n, e_max_n;
  std::optional<int> e_max_level;
  std::uint64_t e_seed = 0;
  int e_threads = 1;
  bool e_no_presolve = false, e_no_reports = false;
  SolverFlags e_flags;
  exp->add_option("preset", e_preset, "tail | dims | disparity | custom")
      ->required()
      ->check(CLI::IsMember({"tail", "dims", "disparity", "custom"}));
  exp->add_option("--count", e_count, "Instances per cell");
  exp->add_option("--m", e_m, "Constraints (tail, disparity, custom)");
  exp->add_option("--n", e_n, "Variables (tail, custom)");
  exp->add_option("--max-n", e_max_n, "Largest n of the dims grid (default 256)");
  exp->add_option("--max-level", e_max_level, "Largest disparity level (default 10)");
  exp->add_option("--dist", e_dist, "gaussian | rademacher | uniform");
  exp->add_option("--seed", e_seed, "Master seed");
  exp->add_option("--threads", e_threads, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_flag("--no-presolve", e_no_presolve, "Keep the raw objective");
  exp->add_flag("--no-reports", e_no_reports, "Skip condition reports");
  exp->add_option("--out", e_out, "Output directory")->required();
  e_flags.Register(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      rpdhg::GeneratorSpec spec;
      spec.m = g_m;
      spec.n = g_n;
      spec.matrix.kind = rpdhg::ParseMatrixKind(g_dist);
      spec.solution.kind = rpdhg::ParseSolutionKind(g_solution);
      spec.solution.level = g_level;
      spec.solution.fixed_values = g_fixed;
      spec.seed = g_seed;
      spec.presolve = g_presolve;
      spec.shuffle = g_shuffle;
      const rpdhg::LpInstance inst = rpdhg::generate_instance(spec);
      rpdhg::save_instance(inst, g_out);
      if (!g_mps.empty()) rpdhg::export_mps(inst, g_mps);
      WriteManifest(g_out, {{"command", "generate"},
                            {"m", g_m},
                            {"n", g_n},
                            {"dist", g_dist},
                            {"solution", g_solution},
                            {"level", g_level},
                            {"seed", g_seed},
                            {"presolve", g_presolve},
                            {"shuffle", g_shuffle},
                            {"certified", inst.meta.certificate.certified()}});
      std::cerr << "wrote " << g_out << " (certified: "
                << (inst.meta.certificate.certified() ? "yes" : "no") << ")\n";
    } else if (*sol) {
      const rpdhg::SolverConfig cfg = s_flags.Build();
      const rpdhg::LpInstance inst = rpdhg::load_instance(s_instance);
      const rpdhg::RunRecord rec = rpdhg::solve(inst, cfg);
      const rpdhg::ConditionReport rep = rpdhg::condition_report(inst);
      std::cout << "solved=" << (rec.solved ? 1 : 0) << " iters=" << rec.total_iters
                << " epochs=" << rec.epochs << " final_dist=" << FormatDouble(rec.final_dist);
      if (rec.stages_available) {
        std::cout << " T_basis=" << rec.t_basis << " T_local=" << rec.t_local;
      }
      std::cout << '\n';
      const Json manifest = {{"command", "solve"},
                             {"instance", s_instance},
                             {"instance_seed", inst.seed},
                             {"solver", SolverJson(cfg)}};
      if (!s_csv.empty()) {
        WriteText(s_csv,
                  "cell_id,seed,m,n,l,phi,kappa,Phi,T_basis,T_local,T_total,epochs,"
                  "final_dist,solved\n" +
                      RunCsvRow(inst, rec, rep, "single"));
        WriteManifest(s_csv, manifest);
      }
      if (!s_out.empty()) {
        Json basis = Json::array();
        for (const auto& p : rec.basis_trace) basis.push_back({p.iter, p.on_basis});
        Json restarts = Json::array();
        for (const auto& r : rec.restarts) {
          restarts.push_back({r.iter, r.gap_average, r.gap_epoch_start});
        }
        Json dist = Json::array();
        for (const auto& d : rec.dist_trace) dist.push_back({d.iter, d.dist});
        const Json record = {{"solved", rec.solved},
                             {"total_iters", rec.total_iters},
                             {"stages_available", rec.stages_available},
                             {"settled", rec.settled},
                             {"T_basis", rec.t_basis},
                             {"T_local", rec.t_local},
                             {"epochs", rec.epochs},
                             {"final_dist", rec.final_dist},
                             {"matvec_count", rec.matvec_count},
                             {"tau", rec.steps.tau},
                             {"sigma", rec.steps.sigma},
                             {"sigma_max", rec.spectrum.sigma_max},
                             {"sigma_min_nonzero", rec.spectrum.sigma_min_nonzero},
                             {"basis_trace", basis},
                             {"restarts", restarts},
                             {"dist_trace", dist},
                             {"x", rec.x},
                             {"y", rec.y}};
        WriteText(s_out, record.dump(2) + "\n");
        if (s_csv.empty()) WriteManifest(s_out, manifest);
      }
    } else if (*ana) {
      const rpdhg::LpInstance inst = rpdhg::load_instance(a_instance);
      const std::string text = ReportJson(rpdhg::condition_report(inst)).dump(2) + "\n";
      if (a_out.empty()) {
        std::cout << text;
      } else {
        WriteText(a_out, text);
        WriteManifest(a_out, {{"command", "analyze"}, {"instance", a_instance}});
      }
    } else if (*probe) {
      rpdhg::MatrixDistribution dist;
      dist.kind = rpdhg::ParseMatrixKind(p_dist);
      std::ostringstream csv;
      if (p_kind == "kappa") {
        const rpdhg::KappaQuantiles q = rpdhg::probe_kappa(p_m, p_n, dist, p_trials, p_seed);
        csv << "probe,m,n,trials,q50,q90,q99\n"
            << "kappa," << p_m << ',' << p_n << ',' << q.trials << ',' << FormatDouble(q.q50)
            << ',' << FormatDouble(q.q90) << ',' << FormatDouble(q.q99) << '\n';
      } else {
        std::vector<rpdhg::TailProbeResult> results;
        if (p_kind == "sigma-max") {
          results.push_back(rpdhg::probe_sigma_max(p_m, p_n, dist, p_trials, p_seed));
        } else if (p_kind == "sigma-min") {
          const auto grid = Grid(p_grid, p_lo > 0 ? p_lo : 0.01, p_hi > 0 ? p_hi : 1.0, p_points);
          results = rpdhg::probe_sigma_min(p_m, p_n, dist, p_trials, grid, p_seed);
        } else {
          const auto grid = Grid(p_grid, p_lo > 0 ? p_lo : 1e4, p_hi > 0 ? p_hi : 1e6, p_points);
          results = rpdhg::probe_phi(p_n, p_trials, grid, p_seed);
        }
        csv << "probe,parameter,threshold,trials,exceed_count,empirical_rate,bound_rate\n";
        for (const auto& r : results) {
          csv << p_kind << ',' << FormatDouble(r.parameter) << ',' << FormatDouble(r.threshold)
              << ',' << r.trials << ',' << r.exceed_count << ','
              << FormatDouble(r.empirical_rate) << ','
              << (r.bound_rate ? FormatDouble(*r.bound_rate) : "") << '\n';
        }
      }
      if (p_out.empty()) {
        std::cout << csv.str();
      } else {
        WriteText(p_out, csv.str());
        WriteManifest(p_out, {{"command", "probe"},
                              {"kind", p_kind},
                              {"m", p_m},
                              {"n", p_n},
                              {"dist", p_dist},
                              {"trials", p_trials},
                              {"seed", p_seed},
                              {"trial_seed_rule", "MixSeed(seed, {trial})"}});
      }
    } else if (*exp) {
      rpdhg::PresetOptions opts;
      opts.instance_count = e_count;
      opts.m = e_m;
      opts.n = e_n;
      opts.max_n = e_max_n;
      opts.max_level = e_max_level;
      rpdhg::ExperimentConfig cfg = rpdhg::MakePreset(rpdhg::ParsePreset(e_preset), opts);
      cfg.master_seed = e_seed;
      cfg.threads = e_threads;
      cfg.matrix.kind = rpdhg::ParseMatrixKind(e_dist);
      cfg.presolve = !e_no_presolve;
      cfg.condition_reports = !e_no_reports;
      cfg.solver = e_flags.Build();
      cfg.output_dir = e_out;
      const rpdhg::ExperimentResult result = rpdhg::run_batch(cfg);
      rpdhg::WriteExperimentOutputs(result, e_out);
      std::cout << result.rows.size() << " runs, " << result.unsolved << " unsolved\n";
      for (const auto& f : result.slope_fits) {
        std::cout << "  " << f.curve << ": slope " << FormatDouble(f.fit.slope) << " (r2 "
                  << FormatDouble(f.fit.r2) << ")\n";
      }
      for (const auto& note : result.notes) std::cout << "  note: " << note << '\n';
    }
  } catch (const rpdhg::Error& e) {
    std::cerr << "error [" << rpdhg::ErrorKindName(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == rpdhg::ErrorKind::kArgument ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

// Copyright 2026 The specjacobi Authors.
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


#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

#include "specjacobi/bench.hpp"
#include "specjacobi/config_json.hpp"
#include "specjacobi/oracle.hpp"

namespace sj = specjacobi;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitOracleFailed = 4;

int fail(std::string_view kind, const std::string& message, int code) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
  return code;
}

// Flags shared by decode / bench / sweep. Unset options leave the config alone.
struct RunFlags {
  std::string config_path;
  std::optional<std::string> model;
  std::optional<std::string> mode;
  std::optional<std::size_t> window;
  std::optional<std::size_t> top_k;
  std::optional<double> temperature;
  std::optional<double> tau;
  std::optional<double> cfg;
  std::optional<std::string> init;
  std::optional<std::string> grid;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seeds;
  std::optional<unsigned> threads;
  bool no_refine = false;
  std::string out;
  std::string pgm;

  std::vector<std::string> sweep_mode;
  std::vector<std::size_t> sweep_window;
  std::vector<double> sweep_tau;
  std::vector<std::size_t> sweep_topk;
  std::vector<double> sweep_sharpness;
  std::vector<std::string> sweep_init;
};

void add_run_flags(CLI::App& cmd, RunFlags& f, bool multi_seed) {
  cmd.add_option("--config", f.config_path, "JSON bench config file (model, decode, seeds, sweep, ...)");
  cmd.add_option("--model", f.model, "Model: preset name, inline JSON, or path to a JSON file");
  cmd.add_option("--mode", f.mode, "ar | jacobi | sjd | sjdpp");
  cmd.add_option("--window", f.window, "Jacobi window length W");
  cmd.add_option("--topk", f.top_k, "Top-K filter (clamped to the vocabulary)");
  cmd.add_option("--temp", f.temperature, "Sampling temperature");
  cmd.add_option("--tau", f.tau, "SJD++ reuse threshold");
  cmd.add_option("--cfg", f.cfg, "Classifier-free guidance weight");
  cmd.add_option("--init", f.init, "random | h_repeat | v_repeat | h_sample | v_sample");
  cmd.add_option("--grid", f.grid, "Token grid as HxW");
  cmd.add_option("--seed", f.seed, multi_seed ? "First seed" : "Run seed");
  if (multi_seed) cmd.add_option("--seeds", f.seeds, "Number of consecutive seeds, starting at --seed");
  cmd.add_option("--threads", f.threads, "Worker threads (0 = hardware count)");
  cmd.add_flag("--no-refine", f.no_refine, "Replace unaccepted drafts with fresh initializations");
  cmd.add_option("--out", f.out, "Output directory for report.json, trace.csv, timing.json");
}

void add_sweep_flags(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--sweep-mode", f.sweep_mode, "Comma-separated modes")->delimiter(',');
  cmd.add_option("--sweep-window", f.sweep_window, "Comma-separated window lengths")->delimiter(',');
  cmd.add_option("--sweep-tau", f.sweep_tau, "Comma-separated reuse thresholds")->delimiter(',');
  cmd.add_option("--sweep-topk", f.sweep_topk, "Comma-separated top-K values")->delimiter(',');
  cmd.add_option("--sweep-sharpness", f.sweep_sharpness, "Comma-separated HashLogit sharpness values")
      ->delimiter(',');
  cmd.add_option("--sweep-init", f.sweep_init, "Comma-separated init strategies")->delimiter(',');
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sj::ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw sj::ConfigError("config '" + path + "': invalid JSON: " + e.what());
  }
}

sj::BenchConfig build_config(const RunFlags& f) {
  sj::BenchConfig c;
  if (!f.config_path.empty()) c = sj::bench_config_from_json(read_json_file(f.config_path));
  if (f.model) c.model = sj::resolve_model(*f.model);
  auto& d = c.decode;
  if (f.mode) d.mode = sj::parse_decode_mode(*f.mode);
  if (f.window) d.window = *f.window;
  if (f.top_k) d.top_k = *f.top_k;
  if (f.temperature) d.temperature = *f.temperature;
  if (f.tau) d.reuse_threshold = *f.tau;
  if (f.cfg) d.cfg_weight = *f.cfg;
  if (f.init) d.init = sj::parse_init_strategy(*f.init);
  if (f.grid) d.grid = sj::parse_grid(*f.grid);
  if (f.no_refine) d.refine = false;
  if (f.seeds) {
    if (*f.seeds == 0) throw sj::ConfigError("--seeds must be >= 1");
    c.seeds = sj::seed_range(f.seed.value_or(0), *f.seeds);
  } else if (f.seed) {
    c.seeds = {*f.seed};
  }
  if (f.threads) c.threads = *f.threads;
  if (!f.out.empty()) c.output_dir = f.out;

  auto& ax = c.sweep;
  for (const auto& m : f.sweep_mode) ax.mode.push_back(sj::parse_decode_mode(m));
  if (!f.sweep_window.empty()) ax.window = f.sweep_window;
  if (!f.sweep_tau.empty()) ax.reuse_threshold = f.sweep_tau;
  if (!f.sweep_topk.empty()) ax.top_k = f.sweep_topk;
  if (!f.sweep_sharpness.empty()) ax.sharpness = f.sweep_sharpness;
  for (const auto& s : f.sweep_init) ax.init.push_back(sj::parse_init_strategy(s));
  sj::validate(c);
  return c;
}

json summary(const sj::BenchReport& report) {
  json cells = json::array();
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& cell = report.cells[i];
    cells.push_back({{"cell", i},
                     {"mode", sj::to_string(cell.decode.mode)},
                     {"window", cell.decode.window},
                     {"top_k", cell.decode.top_k},
                     {"reuse_threshold", cell.decode.reuse_threshold},
                     {"init", sj::to_string(cell.decode.init)},
                     {"runs", cell.stats.runs},
                     {"mean_step_compression", cell.stats.mean_step_compression},
                     {"std_step_compression", cell.stats.std_step_compression},
                     {"mean_nfe", cell.stats.mean_nfe},
                     {"logprob_mean", cell.stats.logprob_mean}});
    if (cell.model.kind == sj::ModelKind::HashLogit) cells.back()["sharpness"] = cell.model.hash.sharpness;
  }
  return {{"cells", cells}, {"best_cell", report.best_cell}, {"wall_seconds", report.wall_seconds}};
}

void write_outputs(const sj::BenchReport& report, const std::string& dir) {
  if (!dir.empty()) sj::emit_report(report, dir);
}

int run_decode(const RunFlags& f) {
  auto config = build_config(f);
  if (config.seeds.size() != 1) config.seeds.resize(1);
  if (!config.sweep.empty()) throw sj::ConfigError("decode: sweep axes are not allowed; use 'sweep'");
  const auto report = sj::run_bench(config);
  write_outputs(report, config.output_dir);
  const auto& cell = report.cells.front();
  const auto& run = report.runs.front().result;
  if (!f.pgm.empty())
    sj::write_file(f.pgm, sj::token_grid_pgm(run.tokens, cell.decode.grid, cell.model.vocab_size));
  const json out = {{"mode", sj::to_string(cell.decode.mode)},
                    {"seed", report.runs.front().seed},
                    {"tokens", run.tokens},
                    {"steps", run.steps},
                    {"step_compression", run.step_compression},
                    {"logprob_mean", run.logprob_mean},
                    {"logprob_std", run.logprob_std}};
  std::cout << out.dump() << '\n';
  return 0;
}

int run_bench(const RunFlags& f, bool is_sweep) {
  const auto config = build_config(f);
  const auto report = is_sweep ? sj::sweep(config) : sj::run_bench(config);
  write_outputs(report, config.output_dir);
  std::cout << summary(report).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speculative Jacobi decoding on synthetic token-grid models", "sjd"};
  app.require_subcommand(1);

  RunFlags decode_flags, bench_flags, sweep_flags;
  auto* decode_cmd = app.add_subcommand("decode", "Decode one grid and report steps, trace and tokens");
  add_run_flags(*decode_cmd, decode_flags, false);
  decode_cmd->add_option("--pgm", decode_flags.pgm, "Write the final token grid as a binary PGM");

  auto* bench_cmd = app.add_subcommand("bench", "Run seeded decodes and aggregate statistics");
  add_run_flags(*bench_cmd, bench_flags, true);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a bench over the product of parameter axes");
  add_run_flags(*sweep_cmd, sweep_flags, true);
  add_sweep_flags(*sweep_cmd, sweep_flags);

  std::uint64_t trials = 500'000;
  unsigned oracle_threads = 0;
  auto* oracle_cmd = app.add_subcommand("oracle", "Check decoders against exact enumeration on a tiny model");
  oracle_cmd->add_option("--trials", trials, "Monte Carlo runs per decoder")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--threads", oracle_threads, "Worker threads (0 = hardware count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), kExitConfig);
  }

  try {
    if (*decode_cmd) return run_decode(decode_flags);
    if (*bench_cmd) return run_bench(bench_flags, false);
    if (*sweep_cmd) return run_bench(sweep_flags, true);
    const auto verdict = sj::run_oracle_suite(trials, oracle_threads);
    std::cout << json{{"identity_max_err", verdict.identity_max_err},
                      {"tv_sjd", verdict.tv_sjd},
                      {"tv_sjdpp", verdict.tv_sjdpp},
                      {"pass", verdict.pass}}
                     .dump()
              << '\n';
    return verdict.pass ? 0 : kExitOracleFailed;
  } catch (const sj::ConfigError& e) {
    return fail("config", e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), kExitRuntime);
  }
}

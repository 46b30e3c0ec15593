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

#include "specjacobi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "specjacobi/config_json.hpp"

namespace specjacobi {

using nlohmann::json;

bool SweepAxes::empty() const noexcept {
  return mode.empty() && window.empty() && reuse_threshold.empty() && top_k.empty() && sharpness.empty() &&
         init.empty();
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = base + i;
  return seeds;
}

void validate(const BenchConfig& config) {
  validate(config.model);
  validate(config.decode, config.model.vocab_size);
  if (config.seeds.empty()) throw ConfigError("bench: at least one seed is required");
  if (!config.sweep.sharpness.empty() && config.model.kind != ModelKind::HashLogit)
    throw ConfigError("bench: sharpness axis requires a hash_logit model");
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

template <typename T, typename F>
json axis_to_json(const std::vector<T>& values, F convert) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(convert(v));
  return arr;
}

template <typename T, typename F>
void axis_from_json(const json& sweep, const char* key, std::vector<T>& out, F convert) {
  const auto it = sweep.find(key);
  if (it == sweep.end()) return;
  if (!it->is_array() || it->empty())
    throw ConfigError(std::string("bench.sweep: axis '") + key + "' must be a non-empty array");
  for (const auto& v : *it) {
    try {
      out.push_back(convert(v));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(std::string("bench.sweep: bad value in axis '") + key + "'");
    }
  }
}

std::size_t as_count(const json& v) {
  if (!is_non_negative_integer(v)) throw ConfigError("bench.sweep: expected a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

json bench_config_to_json(const BenchConfig& config) {
  json j;
  j["model"] = model_spec_to_json(config.model);
  j["decode"] = decode_config_to_json(config.decode);
  j["seeds"] = config.seeds;
  json sweep = json::object();
  const auto& ax = config.sweep;
  if (!ax.mode.empty()) sweep["mode"] = axis_to_json(ax.mode, [](DecodeMode m) { return std::string(to_string(m)); });
  if (!ax.window.empty()) sweep["window"] = ax.window;
  if (!ax.reuse_threshold.empty()) sweep["reuse_threshold"] = ax.reuse_threshold;
  if (!ax.top_k.empty()) sweep["top_k"] = ax.top_k;
  if (!ax.sharpness.empty()) sweep["sharpness"] = ax.sharpness;
  if (!ax.init.empty()) sweep["init"] = axis_to_json(ax.init, [](InitStrategy s) { return std::string(to_string(s)); });
  j["sweep"] = sweep;
  j["output_dir"] = config.output_dir;
  j["threads"] = config.threads;
  return j;
}

BenchConfig bench_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("bench: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "model" && key != "decode" && key != "seeds" && key != "sweep" && key != "output_dir" &&
        key != "threads")
      throw ConfigError("bench: unknown key '" + key + "'");
  }
  BenchConfig config;
  if (const auto it = j.find("model"); it != j.end()) {
    config.model = it->is_string() ? resolve_model(it->get<std::string>()) : model_spec_from_json(*it);
  }
  if (const auto it = j.find("decode"); it != j.end()) config.decode = decode_config_from_json(*it);
  if (const auto it = j.find("seeds"); it != j.end()) {
    config.seeds.clear();
    if (it->is_array()) {
      for (const auto& s : *it) {
        if (!is_non_negative_integer(s)) throw ConfigError("bench: seeds must be non-negative integers");
        config.seeds.push_back(s.get<std::uint64_t>());
      }
    } else if (it->is_object()) {
      const auto base = it->value("base", json(0));
      const auto count = it->value("count", json(1));
      if (!is_non_negative_integer(base) || !is_non_negative_integer(count))
        throw ConfigError("bench: seeds {base, count} must be non-negative integers");
      config.seeds = seed_range(base.get<std::uint64_t>(), count.get<std::size_t>());
    } else {
      throw ConfigError("bench: seeds must be an array or {base, count}");
    }
  }
  if (const auto it = j.find("sweep"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("bench.sweep: expected an object");
    for (const auto& [key, value] : it->items()) {
      if (key != "mode" && key != "window" && key != "reuse_threshold" && key != "top_k" && key != "sharpness" &&
          key != "init")
        throw ConfigError("bench.sweep: unknown axis '" + key + "'");
    }
    auto& ax = config.sweep;
    axis_from_json(*it, "mode", ax.mode, [](const json& v) { return parse_decode_mode(v.get<std::string>()); });
    axis_from_json(*it, "window", ax.window, as_count);
    axis_from_json(*it, "reuse_threshold", ax.reuse_threshold, [](const json& v) { return v.get<double>(); });
    axis_from_json(*it, "top_k", ax.top_k, as_count);
    axis_from_json(*it, "sharpness", ax.sharpness, [](const json& v) { return v.get<double>(); });
    axis_from_json(*it, "init", ax.init, [](const json& v) { return parse_init_strategy(v.get<std::string>()); });
  }
  if (const auto it = j.find("output_dir"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("bench: output_dir must be a string");
    config.output_dir = it->get<std::string>();
  }
  if (const auto it = j.find("threads"); it != j.end()) {
    if (!is_non_negative_integer(*it)) throw ConfigError("bench: threads must be a non-negative integer");
    config.threads = it->get<unsigned>();
  }
  validate(config);
  return config;
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(std::span<const double> xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(sq / static_cast<double>(xs.size()));
  return out;
}

}  // namespace

RunStats compute_stats(std::span<const RunResult> runs) {
  if (runs.empty()) throw std::invalid_argument("compute_stats: no runs");
  RunStats stats;
  stats.runs = runs.size();
  std::vector<double> compression, nfe, logprobs;
  for (const auto& r : runs) {
    compression.push_back(r.step_compression);
    nfe.push_back(static_cast<double>(r.steps));
    logprobs.insert(logprobs.end(), r.committed_logprobs.begin(), r.committed_logprobs.end());
    for (const auto& rec : r.trace) {
      ++stats.commit_histogram[rec.committed()];
      ++stats.total_iterations;
      stats.reused_total += rec.reused_count;
      stats.resampled_total += rec.resampled_count;
    }
  }
  const auto s = mean_std(compression);
  const auto n = mean_std(nfe);
  const auto lp = mean_std(logprobs);
  stats.mean_step_compression = s.mean;
  stats.std_step_compression = s.std;
  stats.mean_nfe = n.mean;
  stats.std_nfe = n.std;
  stats.logprob_mean = lp.mean;
  stats.logprob_std = lp.std;
  return stats;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace {

std::vector<CellReport> expand_cells(const BenchConfig& config) {
  const auto& ax = config.sweep;
  auto or_default = [](const auto& axis, auto fallback) {
    using T = typename std::decay_t<decltype(axis)>::value_type;
    return axis.empty() ? std::vector<T>{static_cast<T>(fallback)} : axis;
  };
  const auto modes = or_default(ax.mode, config.decode.mode);
  const auto windows = or_default(ax.window, config.decode.window);
  const auto taus = or_default(ax.reuse_threshold, config.decode.reuse_threshold);
  const auto topks = or_default(ax.top_k, config.decode.top_k);
  const auto sharps = or_default(ax.sharpness, config.model.hash.sharpness);
  const auto inits = or_default(ax.init, config.decode.init);

  std::size_t total = 1;
  for (std::size_t n : {modes.size(), windows.size(), taus.size(), topks.size(), sharps.size(), inits.size()}) {
    total *= n;
    if (total > kMaxSweepCells) throw ConfigError("sweep: more than 10^4 cells");
  }

  std::vector<CellReport> cells;
  cells.reserve(total);
  for (auto mode : modes)
    for (auto w : windows)
      for (auto tau : taus)
        for (auto k : topks)
          for (auto beta : sharps)
            for (auto init : inits) {
              CellReport cell;
              cell.model = config.model;
              if (!ax.sharpness.empty()) cell.model.hash.sharpness = beta;
              cell.decode = config.decode;
              cell.decode.mode = mode;
              cell.decode.window = w;
              cell.decode.reuse_threshold = tau;
              cell.decode.top_k = k;
              cell.decode.init = init;
              validate(cell.model);
              validate(cell.decode, cell.model.vocab_size);
              cells.push_back(std::move(cell));
            }
  return cells;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  BenchReport report;
  report.config = config;
  report.cells = expand_cells(config);

  // Build each distinct model once.
  std::map<std::string, LoadedModel> models;
  std::vector<const LoadedModel*> cell_model(report.cells.size());
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    const std::string key = model_spec_to_json(report.cells[c].model).dump();
    auto it = models.find(key);
    if (it == models.end()) it = models.emplace(key, load_model(report.cells[c].model)).first;
    cell_model[c] = &it->second;
  }

  const std::size_t seeds = config.seeds.size();
  report.runs.resize(report.cells.size() * seeds);
  for (std::size_t c = 0; c < report.cells.size(); ++c)
    for (std::size_t s = 0; s < seeds; ++s) {
      RunRow& row = report.runs[c * seeds + s];
      row.run_id = c * seeds + s;
      row.cell = c;
      row.seed = config.seeds[s];
    }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < report.runs.size(); i = next++) {
      RunRow& row = report.runs[i];
      DecodeConfig run = report.cells[row.cell].decode;
      run.seed = row.seed;
      row.result = decode(*cell_model[row.cell], run);
    }
  };
  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, report.runs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    std::vector<RunResult> results;
    results.reserve(seeds);
    for (std::size_t s = 0; s < seeds; ++s) results.push_back(report.runs[c * seeds + s].result);
    report.cells[c].stats = compute_stats(results);
    if (report.cells[c].stats.mean_nfe < report.cells[report.best_cell].stats.mean_nfe) report.best_cell = c;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

BenchReport sweep(const BenchConfig& config) {
  if (config.sweep.empty()) throw ConfigError("sweep: at least one sweep axis is required");
  return run_bench(config);
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

json report_to_json(const BenchReport& report) {
  json j;
  j["config"] = bench_config_to_json(report.config);
  json cells = json::array();
  for (const auto& cell : report.cells) {
    const auto& st = cell.stats;
    json hist = json::array();
    for (const auto& [len, count] : st.commit_histogram) hist.push_back({len, count});
    const double tokens = static_cast<double>(cell.decode.total_tokens());
    cells.push_back({{"model", model_spec_to_json(cell.model)},
                     {"decode", decode_config_to_json(cell.decode)},
                     {"stats",
                      {{"runs", st.runs},
                       {"mean_step_compression", st.mean_step_compression},
                       {"std_step_compression", st.std_step_compression},
                       {"mean_nfe", st.mean_nfe},
                       {"std_nfe", st.std_nfe},
                       {"nfe_per_token", st.mean_nfe / tokens},
                       {"logprob_mean", st.logprob_mean},
                       {"logprob_std", st.logprob_std},
                       {"commit_histogram", hist},
                       {"total_iterations", st.total_iterations},
                       {"reused_total", st.reused_total},
                       {"resampled_total", st.resampled_total}}}});
  }
  j["cells"] = cells;
  j["best_cell"] = report.best_cell;
  json runs = json::array();
  for (const auto& row : report.runs) {
    runs.push_back({{"run_id", row.run_id},
                    {"cell", row.cell},
                    {"seed", row.seed},
                    {"steps", row.result.steps},
                    {"model_nfe", row.result.model_nfe},
                    {"tokens", row.result.tokens.size()},
                    {"step_compression", row.result.step_compression},
                    {"logprob_mean", row.result.logprob_mean},
                    {"logprob_std", row.result.logprob_std},
                    {"iterations", row.result.trace.size()}});
  }
  j["runs"] = runs;
  return j;
}

std::string trace_csv(const BenchReport& report) {
  std::ostringstream out;
  out << kTraceCsvHeader << '\n';
  for (const auto& row : report.runs) {
    for (const auto& rec : row.result.trace) {
      out << row.run_id << ',' << rec.j << ',' << rec.accepted_count << ',' << rec.committed_by_resample << ','
          << rec.reused_count << ',' << rec.resampled_count << ',' << rec.fresh_count << ',' << rec.nfe_so_far
          << ',' << rec.n_so_far << '\n';
    }
  }
  return out.str();
}

std::string token_grid_pgm(std::span<const TokenId> tokens, const GridGeom& grid, std::size_t vocab_size) {
  if (tokens.size() != grid.cells()) throw std::invalid_argument("pgm: token count does not match grid");
  if (vocab_size < 2) throw std::invalid_argument("pgm: vocab_size must be >= 2");
  std::string out = "P5\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n255\n";
  for (TokenId t : tokens) {
    const auto gray = static_cast<unsigned>((static_cast<std::uint64_t>(t) * 255) / (vocab_size - 1));
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::min(gray, 255u))));
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void emit_report(const BenchReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_file(dir / "report.json", report_to_json(report).dump(2) + "\n");
  write_file(dir / "trace.csv", trace_csv(report));
  const json timing = {{"wall_seconds", report.wall_seconds}};
  write_file(dir / "timing.json", timing.dump(2) + "\n");
}

}  // namespace specjacobi

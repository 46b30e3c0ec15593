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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specjacobi/config.hpp"
#include "specjacobi/decoder.hpp"
#include "specjacobi/model.hpp"

namespace specjacobi {

/// Optional parameter axes; the bench runs their Cartesian product.
struct SweepAxes {
  std::vector<DecodeMode> mode;
  std::vector<std::size_t> window;
  std::vector<double> reuse_threshold;
  std::vector<std::size_t> top_k;
  std::vector<double> sharpness;
  std::vector<InitStrategy> init;

  bool empty() const noexcept;
  friend bool operator==(const SweepAxes&, const SweepAxes&) = default;
};

/// Upper bound on the number of sweep cells.
inline constexpr std::size_t kMaxSweepCells = 10'000;

struct BenchConfig {
  ModelSpec model;
  /// Template for every run; its seed field is replaced per run.
  DecodeConfig decode;
  std::vector<std::uint64_t> seeds{0};
  SweepAxes sweep;
  /// Directory for report.json / trace.csv; empty means no files.
  std::string output_dir;
  /// Worker threads for independent runs; 0 picks the hardware count.
  unsigned threads = 1;

  friend bool operator==(const BenchConfig&, const BenchConfig&) = default;
};

/// Seeds base, base + 1, ..., base + count - 1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

/// Throws ConfigError on an empty seed list, an empty sweep axis given
/// explicitly, or an invalid model/decode template.
void validate(const BenchConfig& config);

nlohmann::json bench_config_to_json(const BenchConfig& config);
BenchConfig bench_config_from_json(const nlohmann::json& j);

/// Aggregates over a set of runs.
struct RunStats {
  std::size_t runs = 0;
  double mean_step_compression = 0.0;
  double std_step_compression = 0.0;
  double mean_nfe = 0.0;
  double std_nfe = 0.0;
  /// Pooled over every committed token of every run.
  double logprob_mean = 0.0;
  double logprob_std = 0.0;
  /// Tokens committed per iteration -> number of iterations.
  std::map<std::size_t, std::uint64_t> commit_histogram;
  std::uint64_t total_iterations = 0;
  std::uint64_t reused_total = 0;
  std::uint64_t resampled_total = 0;
};

/// Throws std::invalid_argument on empty input.
RunStats compute_stats(std::span<const RunResult> runs);

struct CellReport {
  ModelSpec model;
  DecodeConfig decode;
  RunStats stats;
};

struct RunRow {
  std::size_t run_id = 0;
  std::size_t cell = 0;
  std::uint64_t seed = 0;
  RunResult result;
};

struct BenchReport {
  BenchConfig config;
  std::vector<CellReport> cells;
  std::vector<RunRow> runs;
  /// Cell with the lowest mean NFE (first on ties).
  std::size_t best_cell = 0;
  double wall_seconds = 0.0;
};

/// Executes decode() for every (cell, seed); deterministic given config.
BenchReport run_bench(const BenchConfig& config);
/// Same as run_bench but requires at least one sweep axis and rejects
/// products larger than kMaxSweepCells.
BenchReport sweep(const BenchConfig& config);

/// Report without wall-clock fields; byte-stable for a given config.
nlohmann::json report_to_json(const BenchReport& report);

inline constexpr const char* kTraceCsvHeader =
    "run_id,j,accepted_count,committed_by_resample,reused_count,resampled_count,fresh_count,"
    "nfe_so_far,n_so_far";

std::string trace_csv(const BenchReport& report);

/// Binary PGM (P5) with gray = floor(token * 255 / (V - 1)).
std::string token_grid_pgm(std::span<const TokenId> tokens, const GridGeom& grid, std::size_t vocab_size);

/// Writes report.json, trace.csv and timing.json into `dir` (created if
/// missing). Throws std::runtime_error on I/O failure.
void emit_report(const BenchReport& report, const std::filesystem::path& dir);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace specjacobi

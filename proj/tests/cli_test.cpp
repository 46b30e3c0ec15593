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


#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("specjacobi_cli_" + name + "_" + std::to_string(getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run(const std::string& args) {
  const auto err_path = fs::temp_directory_path() / ("specjacobi_cli_stderr_" + std::to_string(getpid()) + ".txt");
  const std::string cmd = std::string(SJD_CLI_PATH) + " " + args + " 2>" + err_path.string();
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

void expect_config_error(const CliResult& r) {
  EXPECT_EQ(r.code, 2) << r.err;
  const auto j = json::parse(r.err);
  EXPECT_EQ(j.at("error").at("kind"), "config");
  EXPECT_FALSE(j.at("error").at("message").get<std::string>().empty());
}

TEST(CliTest, DecodePrintsRunSummary) {
  const auto r = run("decode --model hash-tiny --grid 2x3 --mode sjd --window 4 --seed 7");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("tokens").size(), 6u);
  EXPECT_EQ(j.at("mode"), "sjd");
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_GE(j.at("step_compression").get<double>(), 1.0);
}

TEST(CliTest, DecodeWritesArtifacts) {
  const auto dir = scratch("decode");
  const auto r = run("decode --model grid-rects --grid 4x4 --window 6 --init h_repeat --out " + dir.string() +
                     " --pgm " + (dir / "grid.pgm").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "timing.json"));
  const std::string csv = slurp(dir / "trace.csv");
  EXPECT_EQ(csv.rfind("run_id,j,accepted_count,committed_by_resample,", 0), 0u);
  const std::string pgm = slurp(dir / "grid.pgm");
  EXPECT_EQ(pgm.rfind("P5\n4 4\n255\n", 0), 0u);
  EXPECT_EQ(pgm.size(), 11u + 16u);
  fs::remove_all(dir);
}

TEST(CliTest, BenchAggregatesSeeds) {
  const auto r = run("bench --model hash-sharp --grid 4x4 --mode sjdpp --seeds 3 --seed 10");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j.at("cells").size(), 1u);
  EXPECT_EQ(j.at("cells")[0].at("runs"), 3);
}

TEST(CliTest, SweepOverWindows) {
  const auto r = run("sweep --model hash-flat --grid 4x4 --mode sjd --seeds 2 --sweep-window 1,4,8");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j.at("cells").size(), 3u);
  EXPECT_DOUBLE_EQ(j.at("cells")[0].at("mean_step_compression").get<double>(), 1.0);
}

TEST(CliTest, ConfigFileWithOverrides) {
  const auto dir = scratch("config");
  {
    std::ofstream cfg(dir / "bench.json");
    cfg << R"({"model": "hash-tiny", "decode": {"mode": "jacobi", "grid": "3x3", "top_k": 1}, "seeds": [1, 2]})";
  }
  const auto r = run("bench --config " + (dir / "bench.json").string() + " --mode ar");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cell = json::parse(r.out).at("cells")[0];
  EXPECT_EQ(cell.at("mode"), "ar");
  EXPECT_EQ(cell.at("top_k"), 1);
  EXPECT_EQ(cell.at("runs"), 2);
  fs::remove_all(dir);
}

TEST(CliTest, RepeatedBenchIsByteIdentical) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const std::string args = "bench --model grid-rects --grid 6x6 --mode sjdpp --init h_sample --seeds 4 --out ";
  ASSERT_EQ(run(args + a.string()).code, 0);
  ASSERT_EQ(run(args + b.string() + " --threads 3").code, 0);
  EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
  auto ja = json::parse(slurp(a / "report.json"));
  auto jb = json::parse(slurp(b / "report.json"));
  for (auto* j : {&ja, &jb}) {
    (*j)["config"].erase("threads");
    (*j)["config"].erase("output_dir");
  }
  EXPECT_EQ(ja.dump(), jb.dump());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(CliTest, OracleReportsVerdict) {
  const auto r = run("oracle --trials 2000 --threads 1");
  ASSERT_TRUE(r.code == 0 || r.code == 4) << r.err;
  const auto j = json::parse(r.out);
  for (const char* key : {"identity_max_err", "tv_sjd", "tv_sjdpp", "pass"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_LT(j.at("identity_max_err").get<double>(), 1e-12);
}

TEST(CliTest, ConfigErrorsAreMachineReadable) {
  expect_config_error(run("decode --model hash-tiny --mode turbo"));
  expect_config_error(run("decode --model hash-tiny --init diagonal"));
  expect_config_error(run("decode --model hash-tiny --grid 4by4"));
  expect_config_error(run("decode --model hash-tiny --window 0"));
  expect_config_error(run("decode --model hash-tiny --window -3"));
  expect_config_error(run("decode --model no-such-model"));
  expect_config_error(run("decode --model hash-tiny --bogus"));
  expect_config_error(run("sweep --model hash-tiny"));
  expect_config_error(run("bench --model hash-tiny --seeds 0"));
  expect_config_error(run("bench --config /nonexistent/bench.json"));
  expect_config_error(run("sweep --model grid-rects --sweep-sharpness 1,2"));
  expect_config_error(run(""));
}

}  // namespace

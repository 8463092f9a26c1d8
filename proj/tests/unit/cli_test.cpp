/*
 * Copyright 2026 The kgrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Runs the kgrank binary end to end and checks exit codes.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string command = std::string(KGRANK_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("kgrank_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("toy.tsv", "b\tr\ta\na\ts\tb\na\ts\tc\na\ts\td\n");
    write("test.tsv", "a\ts\tb\n");
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return (dir_ / name).string();
  }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, EvalLpSucceeds) {
  const auto r = run("eval-lp --train " + p("toy.tsv") + " --test " + p("test.tsv") +
                     " --scorer oracle --ks 1,3");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("adjusted_mean_rank_index"), 1.0);
  EXPECT_EQ(j.at("hits_at_k").size(), 2u);
}

TEST_F(CliTest, ToyGraphFilteredAndRaw) {
  const std::string base = "eval-lp --train " + p("toy.tsv") + " --test " + p("test.tsv") +
                           " --scorer constant --format csv";
  const auto filtered = run(base + " --filtered");
  const auto raw = run(base + " --unfiltered");
  ASSERT_EQ(filtered.code, 0);
  ASSERT_EQ(raw.code, 0);
  // Constant scores: realistic rank is (C+1)/2, C = 2 filtered tails, 4 raw.
  EXPECT_NE(filtered.out.find("\nright,realistic,1,1.5,"), std::string::npos) << filtered.out;
  EXPECT_NE(raw.out.find("\nright,realistic,1,2.5,"), std::string::npos) << raw.out;
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  EXPECT_EQ(run("eval-lp --train " + p("missing.tsv") + " --test " + p("test.tsv")).code, 1);
  EXPECT_EQ(run("eval-lp --train " + p("toy.tsv") + " --test " + p("test.tsv") +
                " --variant average").code,
            1);
  EXPECT_EQ(run("eval-lp --seed abc").code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
  EXPECT_EQ(run("").code, 1);
  write("bad.tsv", "a\tr\n");
  EXPECT_EQ(run("eval-lp --train " + p("bad.tsv") + " --test " + p("test.tsv")).code, 1);
  write("dump.jsonl", "{\"scores\": [NaN], \"true_index\": 0}\n");
  EXPECT_EQ(run("rank --scores " + p("dump.jsonl")).code, 1);
}

TEST_F(CliTest, RuntimeErrorsExitTwo) {
  write("g.tsv", "a\tr\tb\nc\tr\td\n");
  write("al.tsv", "a\ta\nb\tb\nc\tc\n");
  // Every aligned entity has degree 1: the correlation is undefined.
  EXPECT_EQ(run("analyze-degrees --kg-left " + p("g.tsv") + " --kg-right " + p("g.tsv") +
                " --alignment " + p("al.tsv")).code,
            2);
  write("dump.jsonl", "{\"scores\": [1, 0], \"true_index\": 0}\n");
  EXPECT_EQ(run("rank --scores " + p("dump.jsonl") + " --out " + p("no/such/dir/r.json")).code,
            2);
}

TEST_F(CliTest, RunConfigFileAndFlagsAgree) {
  const auto config = write("c.json", "{\"task\": \"eval-lp\", \"train\": \"" + p("toy.tsv") +
                                          "\", \"test\": \"" + p("test.tsv") +
                                          "\", \"scorer\": \"random\", \"seed\": 9}");
  const auto from_file = run("run " + config);
  const auto from_flags = run("eval-lp --train " + p("toy.tsv") + " --test " + p("test.tsv") +
                              " --scorer random --seed 9");
  const auto base_and_override = run("eval-lp --config " + config + " --seed 9");
  ASSERT_EQ(from_file.code, 0);
  EXPECT_EQ(from_file.out, from_flags.out);
  EXPECT_EQ(from_file.out, base_and_override.out);
  write("unknown.json", "{\"task\": \"eval-lp\", \"colour\": 1}");
  EXPECT_EQ(run("run " + p("unknown.json")).code, 1);
}

TEST_F(CliTest, WritesOutputAndManifest) {
  const auto r = run("eval-lp --train " + p("toy.tsv") + " --test " + p("test.tsv") +
                     " --scorer random --out " + p("out.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(fs::exists(dir_ / "out.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out.json.manifest.json"));
}

}  // namespace

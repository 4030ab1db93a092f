/*
 * Copyright 2026 The HSA Toolkit Authors.
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

#include "hsa/cli.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hsa/protocol.h"
#include "hsa/scheme.h"
#include "oracles.h"

namespace hsa {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(HSA_DATA_DIR) + "/" + name;
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          (std::string("hsa_cli_test_") + name))
      .string();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunTool(std::vector<std::string> args) {
  args.insert(args.begin(), "hsa_cli");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliTest, RatesCsvAndJson) {
  Result r = RunTool({"rates", "--U", "2", "--V", "3", "--T", "1"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("2,3,1,true,1,1,1,4,5,V+T"), std::string::npos);
  r = RunTool({"rates", "--U", "2", "--V", "3", "--T", "3", "--json"});
  EXPECT_EQ(r.code, kExitOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j[0]["feasible"].get<bool>());
}

TEST(CliTest, RatesSweep) {
  Result r = RunTool({"rates", "--sweep", "U=4", "V=3", "T=0..9"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("4,3,8,true,1,1,1,11,11,V+T"), std::string::npos);
  EXPECT_NE(r.out.find("4,3,9,false,,,,,11,none"), std::string::npos);
  EXPECT_EQ(RunTool({"rates", "--sweep", "U=4", "V=3"}).code, kExitDomain);
}

TEST(CliTest, DomainErrors) {
  EXPECT_EQ(RunTool({"rates", "--U", "1", "--V", "3", "--T", "0"}).code,
            kExitDomain);
  EXPECT_EQ(RunTool({"rates"}).code, kExitDomain);
  EXPECT_EQ(RunTool({"bogus"}).code, kExitDomain);
  EXPECT_EQ(RunTool({"build", "--U", "2"}).code, kExitDomain);
}

TEST(CliTest, BuildThenAuditClean) {
  const std::string path = TempPath("s322.json");
  Result r =
      RunTool({"build", "--U", "3", "--V", "2", "--T", "2", "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("gamma="), std::string::npos);
  EXPECT_NE(r.out.find("n_source=4"), std::string::npos);
  const CoefficientScheme s = *ImportScheme(testing::ReadJson(path));
  EXPECT_EQ(s.coefficients.rows(), 6u);
  EXPECT_EQ(s.coefficients.cols(), 4u);
  r = RunTool({"audit", "--scheme", path});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["relay_ok"].get<bool>());
  std::remove(path.c_str());
}

TEST(CliTest, BuildInfeasible) {
  Result r = RunTool({"build", "--U", "2", "--V", "3", "--T", "3", "--out",
                      TempPath("never.json")});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.err.find("(U-1)V"), std::string::npos);
  EXPECT_EQ(RunTool({"compare", "--U", "2", "--V", "3", "--T", "3"}).code,
            kExitInfeasible);
}

TEST(CliTest, SimulateReportsRates) {
  const std::string path = TempPath("s231.json");
  const std::string transcript = TempPath("t231.json");
  ASSERT_EQ(
      RunTool({"build", "--U", "2", "--V", "3", "--T", "1", "--out", path})
          .code,
      kExitOk);
  Result r = RunTool(
      {"simulate", "--scheme", path, "--L", "3", "--transcript", transcript});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("(1,1,1,4)"), std::string::npos) << r.out;
  const CoefficientScheme s = *ImportScheme(testing::ReadJson(path));
  EXPECT_TRUE(TranscriptFromJson(s, testing::ReadJson(transcript)).ok());
  std::remove(path.c_str());
  std::remove(transcript.c_str());
}

TEST(CliTest, CorruptSchemeFile) {
  const std::string path = TempPath("corrupt.json");
  std::ofstream(path) << "{not json";
  EXPECT_EQ(RunTool({"simulate", "--scheme", path}).code, kExitCorrupt);
  EXPECT_EQ(RunTool({"audit", "--scheme", path}).code, kExitCorrupt);
  nlohmann::json j = testing::ReadJson(DataPath("example2_q17.json"));
  j["H"]["data"][0] = 2;  // breaks the zero row sum
  std::ofstream(path) << j.dump();
  Result r = RunTool({"audit", "--scheme", path});
  EXPECT_EQ(r.code, kExitCorrupt);
  EXPECT_NE(r.err.find("CorrectnessViolation"), std::string::npos);
  EXPECT_EQ(RunTool({"audit", "--scheme", TempPath("missing.json")}).code,
            kExitCorrupt);
  std::remove(path.c_str());
}

TEST(CliTest, TamperedSchemeIsInsecure) {
  // Example 1 with user (1,2) given the key row of user (1,1); the parity
  // row is adjusted so the keys still cancel.
  nlohmann::json j = testing::ReadJson(DataPath("example1_f3.json"));
  std::vector<int> data = j["H"]["data"].get<std::vector<int>>();
  for (int c = 0; c < 4; ++c) data[4 + c] = data[c];
  for (int c = 0; c < 4; ++c) {
    int sum = 0;
    for (int r = 0; r < 5; ++r) sum += data[r * 4 + c];
    data[20 + c] = (3 - sum % 3) % 3;
  }
  j["H"]["data"] = data;
  const std::string path = TempPath("tampered.json");
  std::ofstream(path) << j.dump();
  Result r = RunTool({"audit", "--scheme", path, "--json"});
  EXPECT_EQ(r.code, kExitInsecure);
  const nlohmann::json report = nlohmann::json::parse(r.out);
  ASSERT_FALSE(report["violations"].empty());
  EXPECT_EQ(report["violations"][0]["kind"], "relay");
  EXPECT_EQ(report["violations"][0]["relay"], 1);
  r = RunTool({"audit", "--scheme", path, "--exact", "--json"});
  EXPECT_EQ(r.code, kExitInsecure);
  EXPECT_FALSE(
      nlohmann::json::parse(r.out)["exact"]["independent"].get<bool>());
  std::remove(path.c_str());
}

TEST(CliTest, AuditBudget) {
  Result r = RunTool(
      {"audit", "--scheme", DataPath("example2_q17.json"), "--budget", "10"});
  EXPECT_EQ(r.code, kExitBudget);
  EXPECT_NE(r.err.find("10"), std::string::npos);
  r = RunTool({"audit", "--scheme", DataPath("example2_q17.json"), "--exact"});
  EXPECT_EQ(r.code, kExitBudget);
}

TEST(CliTest, AttackOnForcedScheme) {
  const std::string path = TempPath("forced.json");
  Result r = RunTool({"build", "--U", "2", "--V", "3", "--T", "3",
                      "--force-infeasible", "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("insecure_by_construction"), std::string::npos);
  r = RunTool({"attack", "--scheme", path, "--json"});
  EXPECT_EQ(r.code, kExitOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["successes"], 100);
  EXPECT_EQ(j["colluders"], 3);
  r = RunTool({"attack", "--scheme", path, "--zero-inputs", "--json"});
  EXPECT_EQ(nlohmann::json::parse(r.out)["last_recovered"], 0);
  std::remove(path.c_str());
}

TEST(CliTest, Compare) {
  Result r = RunTool({"compare", "--U", "3", "--V", "2", "--T", "2", "--json"});
  EXPECT_EQ(r.code, kExitOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["gap"], 1);
  EXPECT_EQ(j["baseline_R_Zsigma"], 5);
  r = RunTool({"compare", "--U", "2", "--V", "3", "--T", "1"});
  EXPECT_NE(r.out.find("gap       1"), std::string::npos);
}

TEST(CliTest, DeterministicBuild) {
  const std::string a = TempPath("det_a.json");
  const std::string b = TempPath("det_b.json");
  RunTool({"build", "--U", "3", "--V", "2", "--T", "1", "--out", a});
  RunTool({"build", "--U", "3", "--V", "2", "--T", "1", "--out", b});
  EXPECT_EQ(testing::ReadJson(a), testing::ReadJson(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

}  // namespace
}  // namespace hsa

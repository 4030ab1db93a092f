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

#include "hsa/protocol.h"

#include <gtest/gtest.h>

#include <vector>

#include "oracles.h"

namespace hsa {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(HSA_DATA_DIR) + "/" + name;
}

CoefficientScheme ExampleOne() {
  return *ImportScheme(testing::ReadJson(DataPath("example1_f3.json")));
}

TEST(SampleRoundTest, DeterministicPerSeed) {
  const CoefficientScheme s = *BuildScheme({3, 2, 2});
  const SampledRound a = SampleRound(s, 5, 7);
  const SampledRound b = SampleRound(s, 5, 7);
  const SampledRound c = SampleRound(s, 5, 8);
  EXPECT_EQ(a.inputs.values, b.inputs.values);
  EXPECT_EQ(a.source_keys, b.source_keys);
  EXPECT_NE(a.inputs.values, c.inputs.values);
  ASSERT_EQ(a.inputs.values.size(), 6u);
  ASSERT_EQ(a.source_keys.size(), 5u);
  EXPECT_EQ(a.source_keys[0].size(), 4u);
}

TEST(SampleRoundTest, UniformOverField) {
  // 2e4 positions x (6 inputs + 4 source symbols) = 2e5 draws over F_11.
  const CoefficientScheme s = *BuildScheme({3, 2, 2});
  const uint64_t q = s.field().modulus();
  ASSERT_EQ(q, 11u);
  const SampledRound r = SampleRound(s, 20000, 1);
  std::vector<double> counts(q, 0);
  double total = 0;
  for (const auto& w : r.inputs.values) {
    for (Residue x : w) ++counts[x], ++total;
  }
  for (const auto& n : r.source_keys) {
    for (Residue x : n) ++counts[x], ++total;
  }
  double chi2 = 0;
  const double expected = total / q;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Upper 0.1% point of chi-square with 10 degrees of freedom.
  EXPECT_LT(chi2, 29.59);
}

TEST(RunRoundTest, ExampleOneHandComputed) {
  const CoefficientScheme s = ExampleOne();
  RoundInputs in{1, 0, std::vector<SymbolVector>(6, SymbolVector{1})};
  absl::StatusOr<RoundTranscript> t =
      RunRound(s, in, {SymbolVector{1, 0, 0, 0}});
  ASSERT_TRUE(t.ok()) << t.status();
  EXPECT_EQ(t->user_messages,
            (std::vector<SymbolVector>{{2}, {1}, {1}, {0}, {1}, {1}}));
  EXPECT_EQ(t->relay_messages, (std::vector<SymbolVector>{{1}, {2}}));
  EXPECT_EQ(t->decoded, SymbolVector{0});
}

TEST(RunRoundTest, RatesForBuiltAndBaselineSchemes) {
  const CoefficientScheme hsa = *BuildScheme({2, 3, 1});
  const CoefficientScheme base = *BuildBaseline({2, 3, 1});
  for (int length : {1, 4}) {
    const SampledRound r = SampleRound(hsa, length, 3);
    const ObservedRates rates =
        MeasureRates(*RunRound(hsa, r.inputs, r.source_keys));
    EXPECT_EQ(rates.message, 1.0);
    EXPECT_EQ(rates.relay_message, 1.0);
    EXPECT_EQ(rates.key, 1.0);
    EXPECT_EQ(rates.source_key, 4.0);

    const SampledRound rb = SampleRound(base, length, 3);
    const ObservedRates rb_rates =
        MeasureRates(*RunRound(base, rb.inputs, rb.source_keys));
    EXPECT_EQ(rb_rates.source_key, 5.0);
    EXPECT_EQ(rb_rates.key, 1.0);
  }
}

TEST(RunRoundTest, DecodesSumForEveryInputAtTinySize) {
  // All 3^4 input vectors and all 3^3 source keys for U = V = 2 over F_3.
  const CoefficientScheme s = *BuildBaseline({2, 2, 0}, 3);
  const PrimeField& f = s.field();
  for (int w = 0; w < 81; ++w) {
    RoundInputs in{1, 0, {}};
    int code = w;
    Residue sum = 0;
    for (int i = 0; i < 4; ++i, code /= 3) {
      in.values.push_back({static_cast<Residue>(code % 3)});
      sum = f.Add(sum, static_cast<Residue>(code % 3));
    }
    for (int n = 0; n < 27; ++n) {
      SymbolVector key{static_cast<Residue>(n % 3),
                       static_cast<Residue>(n / 3 % 3),
                       static_cast<Residue>(n / 9)};
      absl::StatusOr<RoundTranscript> t = RunRound(s, in, {key});
      ASSERT_TRUE(t.ok()) << t.status();
      ASSERT_EQ(t->decoded, SymbolVector{sum});
    }
  }
}

TEST(RunRoundTest, RejectsBadDimensions) {
  const CoefficientScheme s = ExampleOne();
  RoundInputs in{1, 0, std::vector<SymbolVector>(5, SymbolVector{1})};
  EXPECT_EQ(RunRound(s, in, {SymbolVector{0, 0, 0, 0}}).status().code(),
            absl::StatusCode::kInvalidArgument);
  in.values.push_back({1});
  EXPECT_FALSE(RunRound(s, in, {SymbolVector{0, 0, 0}}).ok());
  EXPECT_FALSE(RunRound(s, in, {}).ok());
  in.values[0] = {3};
  EXPECT_FALSE(RunRound(s, in, {SymbolVector{0, 0, 0, 0}}).ok());
}

TEST(TranscriptTest, JsonReplay) {
  const CoefficientScheme s = *BuildScheme({3, 2, 2});
  const SampledRound r = SampleRound(s, 3, 20240917);
  RoundTranscript t = *RunRound(s, r.inputs, r.source_keys);
  t.scheme_ref = "s.json";
  const nlohmann::json j = TranscriptToJson(s, t);
  EXPECT_EQ(j["L"], 3);
  EXPECT_EQ(j["Y"].size(), 3u);
  absl::StatusOr<RoundTranscript> back = TranscriptFromJson(s, j);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->user_messages, t.user_messages);
  EXPECT_EQ(back->decoded, t.decoded);
  EXPECT_EQ(back->scheme_ref, "s.json");

  nlohmann::json tampered = j;
  tampered["Y"]["1"][0] = (j["Y"]["1"][0].get<Residue>() + 1) % 11;
  EXPECT_EQ(TranscriptFromJson(s, tampered).status().code(),
            absl::StatusCode::kDataLoss);
  tampered = j;
  tampered.erase("N");
  EXPECT_FALSE(TranscriptFromJson(s, tampered).ok());
}

}  // namespace
}  // namespace hsa

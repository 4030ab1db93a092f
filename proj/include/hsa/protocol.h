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

#ifndef HSA_PROTOCOL_H_
#define HSA_PROTOCOL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "hsa/scheme.h"
#include "json.hpp"

namespace hsa {

using SymbolVector = std::vector<Residue>;

// Per-user inputs of `length` symbols, indexed by UserIndex.
struct RoundInputs {
  int length = 1;
  uint64_t seed = 0;
  std::vector<SymbolVector> values;
};

struct SampledRound {
  RoundInputs inputs;
  // One fresh source key per symbol position.
  std::vector<SymbolVector> source_keys;
};

// Draws inputs and `length` independent source keys uniformly from F_q with a
// generator seeded by `seed`. Same seed, same draw.
SampledRound SampleRound(const CoefficientScheme& scheme, int length,
                         uint64_t seed);

struct RoundTranscript {
  std::string scheme_ref;
  RoundInputs inputs;
  std::vector<KeyMaterial> keys;             // one per symbol position
  std::vector<SymbolVector> user_messages;   // X, by UserIndex
  std::vector<SymbolVector> relay_messages;  // Y, by relay - 1
  SymbolVector decoded;
};

// Masks every input with its key (X = W + Z), sums each cluster at its relay
// (Y_u = sum_v X_{u,v}) and sums the relay messages at the server. Dimension
// mismatches are InvalidArgument; a decoded value that differs from the true
// input sum is DataLoss (CorrectnessViolation).
absl::StatusOr<RoundTranscript> RunRound(
    const CoefficientScheme& scheme, const RoundInputs& inputs,
    const std::vector<SymbolVector>& source_keys);

struct ObservedRates {
  double message = 0;
  double relay_message = 0;
  double key = 0;
  double source_key = 0;
};

// Symbol counts of the transcript divided by the input length.
ObservedRates MeasureRates(const RoundTranscript& transcript);

// Element-wise sum of all inputs.
SymbolVector InputSum(const PrimeField& field, const RoundInputs& inputs);

// {"scheme_ref","L","seed","W","N","Z","X","Y","decoded"}; W, Z and X are
// keyed by "u,v", Y by relay number.
nlohmann::json TranscriptToJson(const CoefficientScheme& scheme,
                                const RoundTranscript& transcript);

// Replays W and N through `scheme` and checks that X, Y and decoded match.
absl::StatusOr<RoundTranscript> TranscriptFromJson(
    const CoefficientScheme& scheme, const nlohmann::json& j);

}  // namespace hsa

#endif  // HSA_PROTOCOL_H_

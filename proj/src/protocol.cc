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

#include <random>

#include "absl/strings/str_cat.h"

namespace hsa {
namespace {

SymbolVector DrawUniform(std::mt19937_64& rng, const PrimeField& field,
                         size_t count) {
  std::uniform_int_distribution<Residue> dist(0, field.modulus() - 1);
  SymbolVector out(count);
  for (Residue& r : out) r = dist(rng);
  return out;
}

absl::StatusOr<SymbolVector> ParseResidues(const nlohmann::json& j,
                                           const PrimeField& field,
                                           size_t expected) {
  if (!j.is_array() || j.size() != expected) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected an array of ", expected, " residues"));
  }
  SymbolVector out;
  for (const auto& e : j) {
    if (!IsNonNegativeJsonInteger(e) || !field.IsCanonical(e.get<Residue>())) {
      return absl::InvalidArgumentError("transcript entry is not a residue");
    }
    out.push_back(e.get<Residue>());
  }
  return out;
}

}  // namespace

SampledRound SampleRound(const CoefficientScheme& scheme, int length,
                         uint64_t seed) {
  std::mt19937_64 rng(seed);
  const PrimeField& field = scheme.field();
  SampledRound round;
  round.inputs.length = length;
  round.inputs.seed = seed;
  for (size_t i = 0; i < scheme.row_of_user.size(); ++i) {
    round.inputs.values.push_back(
        DrawUniform(rng, field, static_cast<size_t>(length)));
  }
  for (int l = 0; l < length; ++l) {
    round.source_keys.push_back(
        DrawUniform(rng, field, scheme.coefficients.cols()));
  }
  return round;
}

SymbolVector InputSum(const PrimeField& field, const RoundInputs& inputs) {
  SymbolVector sum(static_cast<size_t>(inputs.length), 0);
  for (const SymbolVector& w : inputs.values) {
    for (size_t l = 0; l < sum.size() && l < w.size(); ++l) {
      sum[l] = field.Add(sum[l], w[l]);
    }
  }
  return sum;
}

absl::StatusOr<RoundTranscript> RunRound(
    const CoefficientScheme& scheme, const RoundInputs& inputs,
    const std::vector<SymbolVector>& source_keys) {
  const HsaConfig& cfg = scheme.cfg();
  const PrimeField& f = scheme.field();
  const size_t users = static_cast<size_t>(cfg.total_users());
  const size_t length = static_cast<size_t>(inputs.length);
  if (inputs.length < 1) {
    return absl::InvalidArgumentError("input length must be at least 1");
  }
  if (inputs.values.size() != users) {
    return absl::InvalidArgumentError(absl::StrCat(
        "got inputs for ", inputs.values.size(), " users, expected ", users));
  }
  for (const SymbolVector& w : inputs.values) {
    if (w.size() != length) {
      return absl::InvalidArgumentError(
          absl::StrCat("every input must have ", length, " symbols"));
    }
    for (Residue r : w) {
      if (!f.IsCanonical(r)) {
        return absl::InvalidArgumentError("input symbol is not a residue");
      }
    }
  }
  if (source_keys.size() != length) {
    return absl::InvalidArgumentError(
        absl::StrCat("need one source key per symbol: ", source_keys.size(),
                     " != ", length));
  }

  RoundTranscript t;
  t.inputs = inputs;
  t.user_messages.assign(users, SymbolVector(length));
  t.relay_messages.assign(static_cast<size_t>(cfg.relays),
                          SymbolVector(length, 0));
  t.decoded.assign(length, 0);
  for (size_t l = 0; l < length; ++l) {
    absl::StatusOr<KeyMaterial> keys = DeriveKeys(scheme, source_keys[l]);
    if (!keys.ok()) return keys.status();
    for (size_t i = 0; i < users; ++i) {
      const Residue x = f.Add(inputs.values[i][l], keys->individual[i]);
      t.user_messages[i][l] = x;
      const size_t relay = static_cast<size_t>(UserAt(cfg, i).relay - 1);
      t.relay_messages[relay][l] = f.Add(t.relay_messages[relay][l], x);
    }
    t.keys.push_back(*std::move(keys));
  }
  for (const SymbolVector& y : t.relay_messages) {
    for (size_t l = 0; l < length; ++l)
      t.decoded[l] = f.Add(t.decoded[l], y[l]);
  }

  if (t.decoded != InputSum(f, inputs)) {
    return absl::DataLossError(
        "CorrectnessViolation: decoded sum differs from the input sum; the "
        "scheme's keys do not cancel");
  }
  return t;
}

ObservedRates MeasureRates(const RoundTranscript& transcript) {
  const double length = static_cast<double>(transcript.inputs.length);
  ObservedRates rates;
  if (!transcript.user_messages.empty()) {
    rates.message = transcript.user_messages.front().size() / length;
  }
  if (!transcript.relay_messages.empty()) {
    rates.relay_message = transcript.relay_messages.front().size() / length;
  }
  // Each position contributes one key symbol per user and a full source key.
  size_t key_symbols = 0, source_symbols = 0;
  for (const KeyMaterial& k : transcript.keys) {
    if (!k.individual.empty()) ++key_symbols;
    source_symbols += k.source.size();
  }
  rates.key = key_symbols / length;
  rates.source_key = source_symbols / length;
  return rates;
}

nlohmann::json TranscriptToJson(const CoefficientScheme& scheme,
                                const RoundTranscript& transcript) {
  const HsaConfig& cfg = scheme.cfg();
  nlohmann::json w = nlohmann::json::object();
  nlohmann::json z = nlohmann::json::object();
  nlohmann::json x = nlohmann::json::object();
  for (size_t i = 0; i < transcript.user_messages.size(); ++i) {
    const std::string label = UserLabel(UserAt(cfg, i));
    w[label] = transcript.inputs.values[i];
    SymbolVector key;
    for (const KeyMaterial& k : transcript.keys) key.push_back(k.individual[i]);
    z[label] = key;
    x[label] = transcript.user_messages[i];
  }
  nlohmann::json y = nlohmann::json::object();
  for (size_t u = 0; u < transcript.relay_messages.size(); ++u) {
    y[std::to_string(u + 1)] = transcript.relay_messages[u];
  }
  nlohmann::json n = nlohmann::json::array();
  for (const KeyMaterial& k : transcript.keys) n.push_back(k.source);
  return nlohmann::json{
      {"scheme_ref", transcript.scheme_ref},
      {"L", transcript.inputs.length},
      {"seed", transcript.inputs.seed},
      {"W", std::move(w)},
      {"N", std::move(n)},
      {"Z", std::move(z)},
      {"X", std::move(x)},
      {"Y", std::move(y)},
      {"decoded", transcript.decoded},
  };
}

absl::StatusOr<RoundTranscript> TranscriptFromJson(
    const CoefficientScheme& scheme, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("L") || !j["L"].is_number_integer() ||
      j["L"].get<int>() < 1 || !j.contains("W") || !j["W"].is_object() ||
      !j.contains("N") || !j["N"].is_array()) {
    return absl::InvalidArgumentError(
        "transcript needs integer L >= 1, object W and array N");
  }
  const HsaConfig& cfg = scheme.cfg();
  const PrimeField& f = scheme.field();
  RoundInputs inputs;
  inputs.length = j["L"].get<int>();
  if (j.contains("seed") && IsNonNegativeJsonInteger(j["seed"])) {
    inputs.seed = j["seed"].get<uint64_t>();
  }
  const size_t length = static_cast<size_t>(inputs.length);
  for (size_t i = 0; i < static_cast<size_t>(cfg.total_users()); ++i) {
    const std::string label = UserLabel(UserAt(cfg, i));
    if (!j["W"].contains(label)) {
      return absl::InvalidArgumentError(
          absl::StrCat("transcript lacks W for user ", label));
    }
    absl::StatusOr<SymbolVector> w = ParseResidues(j["W"][label], f, length);
    if (!w.ok()) return w.status();
    inputs.values.push_back(*std::move(w));
  }
  if (j["N"].size() != length) {
    return absl::InvalidArgumentError("transcript needs one N per symbol");
  }
  std::vector<SymbolVector> sources;
  for (const auto& n : j["N"]) {
    absl::StatusOr<SymbolVector> s =
        ParseResidues(n, f, scheme.coefficients.cols());
    if (!s.ok()) return s.status();
    sources.push_back(*std::move(s));
  }
  absl::StatusOr<RoundTranscript> t = RunRound(scheme, inputs, sources);
  if (!t.ok()) return t.status();
  if (j.contains("scheme_ref") && j["scheme_ref"].is_string()) {
    t->scheme_ref = j["scheme_ref"].get<std::string>();
  }
  const nlohmann::json replay = TranscriptToJson(scheme, *t);
  for (const char* key : {"X", "Y", "decoded"}) {
    if (j.contains(key) && j[key] != replay[key]) {
      return absl::DataLossError(absl::StrCat(
          "transcript field '", key, "' does not match a replay of W and N"));
    }
  }
  return t;
}

}  // namespace hsa

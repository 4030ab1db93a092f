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

#include "hsa/audit.h"

#include <algorithm>
#include <tuple>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"

namespace hsa {
namespace {

bool Contains(const CollusionSet& set, UserId user) {
  return std::binary_search(set.begin(), set.end(), user);
}

void AppendColluderRows(const CoefficientScheme& scheme,
                        const CollusionSet& colluders, MatrixBuilder& out) {
  for (UserId user : colluders) out.AppendRow(scheme.KeyRow(user));
}

// Mixed-radix code of a residue vector.
uint64_t Encode(std::span<const Residue> values, uint64_t q) {
  uint64_t code = 0;
  for (Residue v : values) code = code * q + v;
  return code;
}

SymbolVector Decode(uint64_t code, size_t width, uint64_t q) {
  SymbolVector out(width);
  for (size_t i = width; i > 0; --i) {
    out[i - 1] = code % q;
    code /= q;
  }
  return out;
}

// Returns false on overflow past `cap`.
bool CheckedPower(uint64_t base, uint64_t exponent, uint64_t cap,
                  uint64_t* out) {
  uint64_t result = 1;
  for (uint64_t i = 0; i < exponent; ++i) {
    if (result > cap / base) return false;
    result *= base;
  }
  *out = result;
  return true;
}

uint64_t Binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  uint64_t r = 1;
  for (uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

nlohmann::json CollusionToJson(const CollusionSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (UserId user : set) out.push_back({user.relay, user.index});
  return out;
}

}  // namespace

FqMatrix RelayConditionMatrix(const CoefficientScheme& scheme, int relay,
                              const CollusionSet& colluders) {
  MatrixBuilder builder(scheme.field(), scheme.coefficients.cols());
  for (int v = 1; v <= scheme.cfg().users_per_relay; ++v) {
    const UserId user{relay, v};
    if (!Contains(colluders, user)) builder.AppendRow(scheme.KeyRow(user));
  }
  AppendColluderRows(scheme, colluders, builder);
  return std::move(builder).Build();
}

FqMatrix ServerConditionMatrix(const CoefficientScheme& scheme,
                               const CollusionSet& colluders) {
  const HsaConfig& cfg = scheme.cfg();
  const PrimeField& f = scheme.field();
  const size_t cols = scheme.coefficients.cols();
  std::vector<int> uncovered;
  for (int u = 1; u <= cfg.relays; ++u) {
    for (int v = 1; v <= cfg.users_per_relay; ++v) {
      if (!Contains(colluders, UserId{u, v})) {
        uncovered.push_back(u);
        break;
      }
    }
  }
  MatrixBuilder builder(f, cols);
  std::vector<Residue> sum(cols);
  for (size_t k = 0; k + 1 < uncovered.size(); ++k) {
    std::fill(sum.begin(), sum.end(), 0);
    for (int v = 1; v <= cfg.users_per_relay; ++v) {
      std::span<const Residue> row = scheme.KeyRow(UserId{uncovered[k], v});
      for (size_t c = 0; c < cols; ++c) sum[c] = f.Add(sum[c], row[c]);
    }
    builder.AppendRow(sum);
  }
  AppendColluderRows(scheme, colluders, builder);
  return std::move(builder).Build();
}

uint64_t AuditCheckCount(const HsaConfig& cfg, int level) {
  const uint64_t users = static_cast<uint64_t>(cfg.total_users());
  const uint64_t top =
      std::min<uint64_t>(static_cast<uint64_t>(std::max(level, 0)), users);
  uint64_t sets = 0;
  for (uint64_t k = 0; k <= top; ++k) sets += Binomial(users, k);
  return sets * static_cast<uint64_t>(cfg.relays + 1);
}

absl::StatusOr<AuditReport> Audit(const CoefficientScheme& scheme,
                                  const AuditOptions& options) {
  const HsaConfig& cfg = scheme.cfg();
  const int level = options.collusion_level.value_or(cfg.max_colluders);
  const uint64_t planned = AuditCheckCount(cfg, level);
  if (planned > options.max_rank_checks) {
    return absl::ResourceExhaustedError(absl::StrCat("audit needs ", planned,
                                                     " rank checks, budget is ",
                                                     options.max_rank_checks));
  }

  AuditReport report;
  ForEachCollusionSet(cfg, level, [&](const CollusionSet& colluders) {
    for (int u = 1; u <= cfg.relays; ++u) {
      const FqMatrix m = RelayConditionMatrix(scheme, u, colluders);
      const size_t rank = Rank(m);
      ++report.checks_performed;
      if (rank < m.rows()) {
        report.violations.push_back(
            Violation{ViolationKind::kRelay, u, colluders, rank, m.rows()});
      }
    }
    const FqMatrix m = ServerConditionMatrix(scheme, colluders);
    const size_t rank = Rank(m);
    ++report.checks_performed;
    if (rank < m.rows()) {
      report.violations.push_back(
          Violation{ViolationKind::kServer, 0, colluders, rank, m.rows()});
    }
    return true;
  });

  std::sort(report.violations.begin(), report.violations.end());
  for (const Violation& v : report.violations) {
    if (v.kind == ViolationKind::kRelay) report.relay_ok = false;
    if (v.kind == ViolationKind::kServer) report.server_ok = false;
  }
  return report;
}

nlohmann::json AuditReportToJson(const AuditReport& report) {
  nlohmann::json violations = nlohmann::json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({
        {"kind", v.kind == ViolationKind::kRelay ? "relay" : "server"},
        {"relay", v.kind == ViolationKind::kRelay ? nlohmann::json(v.relay)
                                                  : nlohmann::json(nullptr)},
        {"collusion", CollusionToJson(v.collusion)},
        {"observed_rank", v.observed_rank},
        {"required_rank", v.required_rank},
    });
  }
  return nlohmann::json{{"relay_ok", report.relay_ok},
                        {"server_ok", report.server_ok},
                        {"checks_performed", report.checks_performed},
                        {"violations", std::move(violations)}};
}

absl::StatusOr<IndependenceVerdict> ExactIndependenceCheck(
    const CoefficientScheme& scheme, Observer observer,
    const CollusionSet& colluders, uint64_t max_tuples) {
  const HsaConfig& cfg = scheme.cfg();
  const PrimeField& f = scheme.field();
  const uint64_t q = f.modulus();
  const size_t users = static_cast<size_t>(cfg.total_users());
  const size_t n = scheme.coefficients.cols();
  if (observer.kind == Observer::Kind::kRelay &&
      (observer.relay < 1 || observer.relay > cfg.relays)) {
    return absl::InvalidArgumentError(
        absl::StrCat("no relay ", observer.relay));
  }

  uint64_t input_space = 0, key_space = 0, tuples = 0;
  if (!CheckedPower(q, users, max_tuples, &input_space) ||
      !CheckedPower(q, n, max_tuples, &key_space) ||
      input_space > max_tuples / key_space) {
    return absl::ResourceExhaustedError(
        absl::StrCat("exact check needs q^(UV+n) = ", q, "^", users + n,
                     " tuples, cap is ", max_tuples));
  }
  tuples = input_space * key_space;

  std::vector<size_t> colluder_index;
  for (UserId user : colluders) colluder_index.push_back(UserIndex(cfg, user));

  using Key3 = std::tuple<uint64_t, uint64_t, uint64_t>;
  using Key2 = std::pair<uint64_t, uint64_t>;
  absl::flat_hash_map<Key3, uint64_t> joint;
  absl::flat_hash_map<Key2, uint64_t> observed_given;
  absl::flat_hash_map<Key2, uint64_t> inputs_given;
  absl::flat_hash_map<uint64_t, uint64_t> given;

  const size_t observed_width = observer.kind == Observer::Kind::kRelay
                                    ? static_cast<size_t>(cfg.users_per_relay)
                                    : static_cast<size_t>(cfg.relays);
  const size_t given_width =
      2 * colluders.size() + (observer.kind == Observer::Kind::kServer ? 1 : 0);

  SymbolVector observed(observed_width), given_values(given_width);
  for (uint64_t wc = 0; wc < input_space; ++wc) {
    const SymbolVector w = Decode(wc, users, q);
    Residue total = 0;
    for (Residue r : w) total = f.Add(total, r);
    for (uint64_t nc = 0; nc < key_space; ++nc) {
      const SymbolVector source = Decode(nc, n, q);
      const KeyMaterial keys = *DeriveKeys(scheme, source);
      if (observer.kind == Observer::Kind::kRelay) {
        for (int v = 1; v <= cfg.users_per_relay; ++v) {
          const size_t i = UserIndex(cfg, UserId{observer.relay, v});
          observed[v - 1] = f.Add(w[i], keys.individual[i]);
        }
      } else {
        std::fill(observed.begin(), observed.end(), 0);
        for (size_t i = 0; i < users; ++i) {
          const size_t relay = static_cast<size_t>(UserAt(cfg, i).relay - 1);
          observed[relay] =
              f.Add(observed[relay], f.Add(w[i], keys.individual[i]));
        }
      }
      size_t g = 0;
      if (observer.kind == Observer::Kind::kServer) given_values[g++] = total;
      for (size_t i : colluder_index) {
        given_values[g++] = w[i];
        given_values[g++] = keys.individual[i];
      }
      const uint64_t a = Encode(observed, q);
      const uint64_t c = Encode(given_values, q);
      ++joint[Key3{a, wc, c}];
      ++observed_given[Key2{a, c}];
      ++inputs_given[Key2{wc, c}];
      ++given[c];
    }
  }

  // Independence given c means count(a,b,c) * count(c) = count(a,c) *
  // count(b,c) for every cell, including cells whose joint count is zero.
  absl::flat_hash_map<uint64_t, std::vector<std::pair<uint64_t, uint64_t>>>
      observed_by_c, inputs_by_c;
  for (const auto& [key, count] : observed_given) {
    observed_by_c[key.second].push_back({key.first, count});
  }
  for (const auto& [key, count] : inputs_given) {
    inputs_by_c[key.second].push_back({key.first, count});
  }

  std::vector<uint64_t> conditions;
  for (const auto& [c, count] : given) conditions.push_back(c);
  std::sort(conditions.begin(), conditions.end());

  IndependenceVerdict verdict;
  verdict.tuples = tuples;
  for (uint64_t c : conditions) {
    auto& as = observed_by_c[c];
    auto& bs = inputs_by_c[c];
    std::sort(as.begin(), as.end());
    std::sort(bs.begin(), bs.end());
    const uint64_t nc = given[c];
    for (const auto& [a, nac] : as) {
      for (const auto& [b, nbc] : bs) {
        auto it = joint.find(Key3{a, b, c});
        const uint64_t nabc = it == joint.end() ? 0 : it->second;
        if (nabc * nc != nac * nbc) {
          verdict.independent = false;
          verdict.witness = IndependenceWitness{
              .observed = Decode(a, observed_width, q),
              .inputs = Decode(b, users, q),
              .conditioning = Decode(c, given_width, q),
              .joint = nabc,
              .conditioning_count = nc,
              .observed_count = nac,
              .inputs_count = nbc,
          };
          return verdict;
        }
      }
    }
  }
  verdict.independent = true;
  return verdict;
}

absl::StatusOr<AttackResult> InfeasibilityAttack(
    const CoefficientScheme& scheme, const RoundTranscript& transcript) {
  const HsaConfig& cfg = scheme.cfg();
  const PrimeField& f = scheme.field();
  const size_t users = static_cast<size_t>(cfg.total_users());
  const size_t length = static_cast<size_t>(transcript.inputs.length);
  if (transcript.inputs.values.size() != users ||
      transcript.keys.size() != length || transcript.relay_messages.empty()) {
    return absl::InvalidArgumentError("transcript does not match the scheme");
  }

  AttackResult result;
  result.recovered.assign(length, 0);
  result.truth.assign(length, 0);
  for (size_t l = 0; l < length; ++l) {
    Residue other_relays = 0;     // Y_2 + ... + Y_U rebuilt from colluders
    Residue colluded_inputs = 0;  // sum of W over clusters 2..U
    for (size_t i = 0; i < users; ++i) {
      const Residue w = transcript.inputs.values[i][l];
      if (UserAt(cfg, i).relay == 1) {
        result.truth[l] = f.Add(result.truth[l], w);
        continue;
      }
      const Residue z = transcript.keys[l].individual[i];
      other_relays = f.Add(other_relays, f.Add(w, z));
      colluded_inputs = f.Add(colluded_inputs, w);
    }
    // Keys cancel across all relays, so Y_1 + ... + Y_U is the input sum.
    const Residue total = f.Add(transcript.relay_messages[0][l], other_relays);
    result.recovered[l] = f.Sub(total, colluded_inputs);
  }
  result.success = result.recovered == result.truth;
  return result;
}

}  // namespace hsa

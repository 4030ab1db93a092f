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

#ifndef HSA_AUDIT_H_
#define HSA_AUDIT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "hsa/matrix.h"
#include "hsa/protocol.h"
#include "hsa/scheme.h"
#include "json.hpp"

namespace hsa {

// Users whose inputs and keys leak to an observer. Kept sorted.
using CollusionSet = std::vector<UserId>;

// Calls fn(set) for every collusion set of size 0..max_size, ordered by size
// and then lexicographically. Stops early if fn returns false.
template <typename Fn>
void ForEachCollusionSet(const HsaConfig& cfg, int max_size, Fn&& fn);

// Rows of relay `relay`'s users outside `colluders`, then the colluders' rows.
FqMatrix RelayConditionMatrix(const CoefficientScheme& scheme, int relay,
                              const CollusionSet& colluders);

// Per-cluster row sums of all but the last cluster not fully inside
// `colluders`, then the colluders' rows. The dropped cluster sum is implied by
// the zero row sum.
FqMatrix ServerConditionMatrix(const CoefficientScheme& scheme,
                               const CollusionSet& colluders);

enum class ViolationKind { kRelay, kServer };

struct Violation {
  ViolationKind kind = ViolationKind::kRelay;
  int relay = 0;  // 0 for server violations
  CollusionSet collusion;
  size_t observed_rank = 0;
  size_t required_rank = 0;

  auto operator<=>(const Violation&) const = default;
};

struct AuditReport {
  bool relay_ok = true;
  bool server_ok = true;
  std::vector<Violation> violations;  // sorted by (kind, relay, collusion)
  uint64_t checks_performed = 0;

  bool clean() const { return relay_ok && server_ok; }
};

struct AuditOptions {
  uint64_t max_rank_checks = 1'000'000;
  // Defaults to the scheme's T.
  std::optional<int> collusion_level;
};

// Number of rank checks a full audit at `level` performs.
uint64_t AuditCheckCount(const HsaConfig& cfg, int level);

// Checks every relay and server condition matrix for every collusion set of
// size <= T. Exceeding the budget is ResourceExhausted; nothing is sampled.
absl::StatusOr<AuditReport> Audit(const CoefficientScheme& scheme,
                                  const AuditOptions& options = {});

nlohmann::json AuditReportToJson(const AuditReport& report);

struct Observer {
  enum class Kind { kRelay, kServer };
  Kind kind = Kind::kServer;
  int relay = 0;

  static Observer Relay(int u) { return {Kind::kRelay, u}; }
  static Observer Server() { return {Kind::kServer, 0}; }
};

// A cell (a, b, c) where count(a,b,c) * count(c) != count(a,c) * count(b,c):
// a = what the observer sees, b = all inputs, c = what it conditions on.
struct IndependenceWitness {
  std::vector<Residue> observed;
  std::vector<Residue> inputs;
  std::vector<Residue> conditioning;
  uint64_t joint = 0;
  uint64_t conditioning_count = 0;
  uint64_t observed_count = 0;
  uint64_t inputs_count = 0;
};

struct IndependenceVerdict {
  bool independent = false;
  uint64_t tuples = 0;
  std::optional<IndependenceWitness> witness;
};

// Enumerates every (inputs, source key) pair for a single input symbol and
// decides by exact counting whether the observer's view is independent of the
// inputs given the colluders' inputs and keys (and, for the server, the input
// sum). Refuses with ResourceExhausted above `max_tuples`.
absl::StatusOr<IndependenceVerdict> ExactIndependenceCheck(
    const CoefficientScheme& scheme, Observer observer,
    const CollusionSet& colluders, uint64_t max_tuples = 10'000'000);

struct AttackResult {
  std::vector<Residue> recovered;
  std::vector<Residue> truth;
  bool success = false;
};

// Relay 1 colluding with every user of clusters 2..U: rebuilds Y_2..Y_U from
// the colluders' inputs and keys, adds its own Y_1 to get the total, and
// strips the colluders' inputs to expose the sum of cluster 1's inputs.
absl::StatusOr<AttackResult> InfeasibilityAttack(
    const CoefficientScheme& scheme, const RoundTranscript& transcript);

// Implementation of the template above.
template <typename Fn>
void ForEachCollusionSet(const HsaConfig& cfg, int max_size, Fn&& fn) {
  const int total = cfg.total_users();
  if (max_size > total) max_size = total;
  std::vector<int> pick;
  CollusionSet set;
  for (int size = 0; size <= max_size; ++size) {
    pick.resize(size);
    for (int i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      set.clear();
      for (int i : pick) set.push_back(UserAt(cfg, static_cast<size_t>(i)));
      if (!fn(static_cast<const CollusionSet&>(set))) return;
      int pos = size - 1;
      while (pos >= 0 && pick[pos] == total - size + pos) --pos;
      if (pos < 0) break;
      ++pick[pos];
      for (int i = pos + 1; i < size; ++i) pick[i] = pick[i - 1] + 1;
    }
  }
}

}  // namespace hsa

#endif  // HSA_AUDIT_H_

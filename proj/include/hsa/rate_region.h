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

#ifndef HSA_RATE_REGION_H_
#define HSA_RATE_REGION_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace hsa {

// Network shape: `relays` relays, each serving `users_per_relay` users, with
// up to `max_colluders` users colluding with any relay or the server.
struct HsaConfig {
  int relays = 2;
  int users_per_relay = 1;
  int max_colluders = 0;

  int total_users() const { return relays * users_per_relay; }
  bool operator==(const HsaConfig&) const = default;
};

// InvalidArgument unless relays >= 2, users_per_relay >= 1, max_colluders >= 0.
// A single relay sees exactly what the server sees, so relay security cannot
// hold there.
absl::Status ValidateConfig(const HsaConfig& cfg);

// True iff max_colluders < (relays - 1) * users_per_relay.
bool IsFeasible(const HsaConfig& cfg);

// Which term of max{V+T, min{UV-1, U+T-1}} sets the source key rate.
enum class RateBranch {
  kInfeasible,
  kClusterPlusColluders,
  kAllButOne,
  kRelaysPlusColluders
};

absl::string_view RateBranchName(RateBranch branch);

struct RateRegion {
  bool feasible = false;
  // Minimum symbols per input symbol; meaningless when !feasible.
  int message_rate = 0;        // user-to-relay
  int relay_message_rate = 0;  // relay-to-server
  int key_rate = 0;            // per-user key
  int source_key_rate = 0;
  RateBranch branch = RateBranch::kInfeasible;
};

absl::StatusOr<RateRegion> OptimalRates(const HsaConfig& cfg);

// Source key size of the one-hop style construction: UV - 1.
absl::StatusOr<int> BaselineSourceRate(const HsaConfig& cfg);

struct IntRange {
  int first = 0;
  int last = 0;  // inclusive
};

struct RateTableRow {
  HsaConfig cfg;
  RateRegion region;
  int baseline = 0;
};

// One row per (U, V, T) in the given ranges, U-major. Ranges that contain a
// U < 2 or are empty are InvalidArgument.
absl::StatusOr<std::vector<RateTableRow>> RateTable(IntRange relays,
                                                    IntRange users_per_relay,
                                                    IntRange colluders);

// Header: U,V,T,feasible,R_X,R_Y,R_Z,R_Zsigma,baseline,active_branch.
// Rate cells of infeasible rows are left empty.
std::string RateTableCsv(const std::vector<RateTableRow>& rows);

}  // namespace hsa

#endif  // HSA_RATE_REGION_H_

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

#include "hsa/rate_region.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace hsa {

absl::Status ValidateConfig(const HsaConfig& cfg) {
  if (cfg.relays < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("U = ", cfg.relays, ": at least two relays are required"));
  }
  if (cfg.users_per_relay < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("V = ", cfg.users_per_relay, " must be at least 1"));
  }
  if (cfg.max_colluders < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("T = ", cfg.max_colluders, " must be nonnegative"));
  }
  return absl::OkStatus();
}

bool IsFeasible(const HsaConfig& cfg) {
  return cfg.max_colluders < (cfg.relays - 1) * cfg.users_per_relay;
}

absl::string_view RateBranchName(RateBranch branch) {
  switch (branch) {
    case RateBranch::kInfeasible:
      return "none";
    case RateBranch::kClusterPlusColluders:
      return "V+T";
    case RateBranch::kAllButOne:
      return "UV-1";
    case RateBranch::kRelaysPlusColluders:
      return "U+T-1";
  }
  return "none";
}

absl::StatusOr<RateRegion> OptimalRates(const HsaConfig& cfg) {
  if (absl::Status s = ValidateConfig(cfg); !s.ok()) return s;
  RateRegion region;
  if (!IsFeasible(cfg)) return region;

  const int u = cfg.relays, v = cfg.users_per_relay, t = cfg.max_colluders;
  const int cluster_term = v + t;
  const int inner = std::min(u * v - 1, u + t - 1);
  region.feasible = true;
  region.message_rate = 1;
  region.relay_message_rate = 1;
  region.key_rate = 1;
  region.source_key_rate = std::max(cluster_term, inner);
  // Ties resolve to the leftmost term.
  if (cluster_term >= inner) {
    region.branch = RateBranch::kClusterPlusColluders;
  } else if (u + t - 1 <= u * v - 1) {
    region.branch = RateBranch::kRelaysPlusColluders;
  } else {
    region.branch = RateBranch::kAllButOne;
  }
  return region;
}

absl::StatusOr<int> BaselineSourceRate(const HsaConfig& cfg) {
  if (absl::Status s = ValidateConfig(cfg); !s.ok()) return s;
  return cfg.total_users() - 1;
}

absl::StatusOr<std::vector<RateTableRow>> RateTable(IntRange relays,
                                                    IntRange users_per_relay,
                                                    IntRange colluders) {
  for (const IntRange& r : {relays, users_per_relay, colluders}) {
    if (r.first > r.last) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty range ", r.first, "..", r.last));
    }
  }
  std::vector<RateTableRow> rows;
  for (int u = relays.first; u <= relays.last; ++u) {
    for (int v = users_per_relay.first; v <= users_per_relay.last; ++v) {
      for (int t = colluders.first; t <= colluders.last; ++t) {
        RateTableRow row;
        row.cfg = HsaConfig{u, v, t};
        absl::StatusOr<RateRegion> region = OptimalRates(row.cfg);
        if (!region.ok()) return region.status();
        row.region = *region;
        row.baseline = u * v - 1;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string RateTableCsv(const std::vector<RateTableRow>& rows) {
  std::string out =
      "U,V,T,feasible,R_X,R_Y,R_Z,R_Zsigma,baseline,active_branch\n";
  for (const RateTableRow& row : rows) {
    absl::StrAppend(&out, row.cfg.relays, ",", row.cfg.users_per_relay, ",",
                    row.cfg.max_colluders, ",",
                    row.region.feasible ? "true" : "false", ",");
    if (row.region.feasible) {
      absl::StrAppend(&out, row.region.message_rate, ",",
                      row.region.relay_message_rate, ",", row.region.key_rate,
                      ",", row.region.source_key_rate, ",");
    } else {
      absl::StrAppend(&out, ",,,,");
    }
    absl::StrAppend(&out, row.baseline, ",", RateBranchName(row.region.branch),
                    "\n");
  }
  return out;
}

}  // namespace hsa

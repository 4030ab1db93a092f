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

#include "hsa/scheme.h"

#include <algorithm>
#include <set>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "hsa/audit.h"

namespace hsa {
namespace {

absl::Status CorrectnessViolation(absl::string_view detail) {
  return absl::DataLossError(absl::StrCat("CorrectnessViolation: ", detail));
}

absl::Status Infeasible(const HsaConfig& cfg) {
  const int boundary = (cfg.relays - 1) * cfg.users_per_relay;
  return absl::FailedPreconditionError(
      absl::StrCat("InfeasibleConfiguration: T = ", cfg.max_colluders,
                   " >= (U-1)V = ", boundary, "; no secure scheme exists"));
}

// The largest collusion level with a secure scheme.
HsaConfig ClampToFeasible(HsaConfig cfg) {
  cfg.max_colluders =
      std::min(cfg.max_colluders, (cfg.relays - 1) * cfg.users_per_relay - 1);
  return cfg;
}

// Advances `pick` to the next k-combination of [0, n) in lexicographic order.
bool NextCombination(std::vector<size_t>& pick, size_t n) {
  const size_t k = pick.size();
  size_t pos = k;
  while (pos > 0 && pick[pos - 1] == n - k + pos - 1) --pos;
  if (pos == 0) return false;
  ++pick[pos - 1];
  for (size_t i = pos; i < k; ++i) pick[i] = pick[i - 1] + 1;
  return true;
}

CoefficientScheme AssembleVandermondeScheme(const HsaConfig& cfg,
                                            const PrimeField& field,
                                            Residue gamma, ElementSet elements,
                                            FqMatrix h) {
  const size_t users = static_cast<size_t>(cfg.total_users());
  std::vector<size_t> row_of_user(users);
  // The parity row goes to the last user, (U, V).
  for (size_t i = 0; i + 1 < users; ++i) row_of_user[i] = i + 1;
  row_of_user[users - 1] = 0;
  const int n_source = static_cast<int>(h.cols());
  return CoefficientScheme{
      .params = SchemeParams{.cfg = cfg,
                             .field = field,
                             .gamma = gamma,
                             .elements = std::move(elements),
                             .n_source = n_source},
      .coefficients = std::move(h),
      .row_of_user = std::move(row_of_user),
      .kind = SchemeKind::kExtendedVandermonde,
  };
}

std::optional<Residue> SearchGammaFrom(const PrimeField& field, size_t m,
                                       size_t n, Residue start) {
  if (m > field.modulus()) return std::nullopt;
  for (Residue gamma = std::max<Residue>(start, 2); gamma < field.modulus();
       ++gamma) {
    ElementSet elements = BuildElements(gamma, m, field);
    if (!AllDistinct(elements)) continue;
    if (ExtendedVandermondeIsMds(field, elements, n)) return gamma;
  }
  return std::nullopt;
}

}  // namespace

size_t UserIndex(const HsaConfig& cfg, UserId user) {
  return static_cast<size_t>((user.relay - 1) * cfg.users_per_relay +
                             (user.index - 1));
}

UserId UserAt(const HsaConfig& cfg, size_t index) {
  const int i = static_cast<int>(index);
  return UserId{i / cfg.users_per_relay + 1, i % cfg.users_per_relay + 1};
}

std::string UserLabel(UserId user) {
  return absl::StrCat(user.relay, ",", user.index);
}

absl::string_view SchemeKindName(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kExtendedVandermonde:
      return "extended_vandermonde";
    case SchemeKind::kBaseline:
      return "baseline";
    case SchemeKind::kExternal:
      return "external";
  }
  return "external";
}

ElementSet BuildElements(Residue gamma, size_t count, const PrimeField& field) {
  ElementSet elements;
  elements.reserve(count);
  Residue x = 0;
  Residue power = 1 % field.modulus();
  for (size_t i = 0; i < count; ++i) {
    elements.push_back(x);
    power = field.Mul(power, gamma);
    x = field.Add(x, power);
  }
  return elements;
}

bool ExtendedVandermondeIsMds(const PrimeField& field,
                              std::span<const Residue> elements, size_t n) {
  const size_t m = elements.size();
  if (n == 0 || n > m || !AllDistinct(elements)) return false;
  std::vector<size_t> pick(n - 1);
  for (size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  do {
    absl::StatusOr<Residue> det =
        ExtendedVandermondeSubdet(field, elements, pick);
    if (!det.ok() || *det == 0) return false;
  } while (NextCombination(pick, m));
  return true;
}

std::optional<Residue> SearchGamma(const HsaConfig& cfg,
                                   const PrimeField& field) {
  absl::StatusOr<RateRegion> region = OptimalRates(cfg);
  if (!region.ok() || !region->feasible) return std::nullopt;
  return SearchGammaFrom(field, static_cast<size_t>(cfg.total_users() - 1),
                         static_cast<size_t>(region->source_key_rate), 2);
}

absl::StatusOr<CoefficientScheme> BuildScheme(const HsaConfig& cfg,
                                              const BuildOptions& options) {
  if (absl::Status s = ValidateConfig(cfg); !s.ok()) return s;
  const bool feasible = IsFeasible(cfg);
  if (!feasible && !options.force_infeasible) return Infeasible(cfg);
  const HsaConfig build_cfg = feasible ? cfg : ClampToFeasible(cfg);

  absl::StatusOr<RateRegion> region = OptimalRates(build_cfg);
  if (!region.ok()) return region.status();
  const size_t n = static_cast<size_t>(region->source_key_rate);
  const size_t m = static_cast<size_t>(build_cfg.total_users() - 1);

  uint64_t q;
  if (options.q_hint.has_value()) {
    if (!IsPrime(*options.q_hint)) {
      return absl::InvalidArgumentError(
          absl::StrCat("q hint ", *options.q_hint, " is not prime"));
    }
    q = *options.q_hint;
  } else {
    q = NextPrime(static_cast<uint64_t>(build_cfg.total_users()) + 1);
  }

  for (; q <= options.max_modulus; q = NextPrime(q + 1)) {
    absl::StatusOr<PrimeField> field = PrimeField::Create(q);
    if (!field.ok()) return field.status();
    std::optional<Residue> gamma = SearchGammaFrom(*field, m, n, 2);
    while (gamma.has_value()) {
      ElementSet elements = BuildElements(*gamma, m, *field);
      absl::StatusOr<FqMatrix> h = ExtendedVandermonde(*field, elements, n);
      if (!h.ok()) return h.status();
      CoefficientScheme scheme = AssembleVandermondeScheme(
          build_cfg, *field, *gamma, std::move(elements), *std::move(h));
      // Certify against the rank conditions when the audit is affordable;
      // beyond that the MDS property is the certificate.
      absl::StatusOr<AuditReport> report = Audit(scheme);
      if (!report.ok() || report->clean()) {
        if (!feasible) {
          scheme.params.cfg = cfg;
          scheme.insecure_by_construction = true;
        }
        return scheme;
      }
      gamma = SearchGammaFrom(*field, m, n, *gamma + 1);
    }
    if (options.fixed_modulus) {
      return absl::NotFoundError(absl::StrCat("no valid gamma over F_", q,
                                              "; next prime to try is ",
                                              NextPrime(q + 1)));
    }
  }
  return absl::NotFoundError(
      absl::StrCat("no valid (q, gamma) with q <= ", options.max_modulus,
                   "; next prime to try is ", q));
}

absl::StatusOr<CoefficientScheme> BuildBaseline(const HsaConfig& cfg,
                                                std::optional<uint64_t> q,
                                                bool force_infeasible) {
  if (absl::Status s = ValidateConfig(cfg); !s.ok()) return s;
  const bool feasible = IsFeasible(cfg);
  if (!feasible && !force_infeasible) return Infeasible(cfg);
  absl::StatusOr<PrimeField> field = PrimeField::Create(
      q.value_or(NextPrime(static_cast<uint64_t>(cfg.total_users()) + 1)));
  if (!field.ok()) return field.status();

  const size_t users = static_cast<size_t>(cfg.total_users());
  const size_t n = users - 1;
  MatrixBuilder builder(*field, n);
  std::vector<Residue> row(n);
  for (size_t i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0);
    row[i] = 1 % field->modulus();
    builder.AppendRow(row);
  }
  std::fill(row.begin(), row.end(), field->Neg(1 % field->modulus()));
  builder.AppendRow(row);

  std::vector<size_t> row_of_user(users);
  for (size_t i = 0; i < users; ++i) row_of_user[i] = i;
  return CoefficientScheme{
      .params = SchemeParams{.cfg = cfg,
                             .field = *field,
                             .gamma = std::nullopt,
                             .elements = {},
                             .n_source = static_cast<int>(n)},
      .coefficients = std::move(builder).Build(),
      .row_of_user = std::move(row_of_user),
      .kind = SchemeKind::kBaseline,
      .insecure_by_construction = !feasible,
  };
}

absl::StatusOr<KeyMaterial> DeriveKeys(const CoefficientScheme& scheme,
                                       std::span<const Residue> source) {
  const FqMatrix& h = scheme.coefficients;
  if (source.size() != h.cols()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "source key has ", source.size(), " symbols, scheme needs ", h.cols()));
  }
  const PrimeField& f = scheme.field();
  KeyMaterial keys;
  keys.source.assign(source.begin(), source.end());
  keys.individual.reserve(scheme.row_of_user.size());
  for (size_t row : scheme.row_of_user) {
    Residue z = 0;
    for (size_t c = 0; c < h.cols(); ++c) {
      z = f.Add(z, f.Mul(h.at(row, c), source[c]));
    }
    keys.individual.push_back(z);
  }
  return keys;
}

absl::Status CheckZeroRowSum(const CoefficientScheme& scheme) {
  const std::vector<Residue> sums = scheme.coefficients.ColumnSums();
  for (size_t c = 0; c < sums.size(); ++c) {
    if (sums[c] != 0) {
      return CorrectnessViolation(
          absl::StrCat("coefficient rows sum to ", sums[c], " in column ", c,
                       "; keys would not cancel at the server"));
    }
  }
  return absl::OkStatus();
}

nlohmann::json SchemeToJson(const CoefficientScheme& scheme) {
  const HsaConfig& cfg = scheme.cfg();
  nlohmann::json row_index = nlohmann::json::array();
  for (size_t i = 0; i < scheme.row_of_user.size(); ++i) {
    row_index.push_back({UserLabel(UserAt(cfg, i)), scheme.row_of_user[i]});
  }
  nlohmann::json j{
      {"U", cfg.relays},
      {"V", cfg.users_per_relay},
      {"T", cfg.max_colluders},
      {"q", scheme.field().modulus()},
      {"gamma", nullptr},
      {"kind", SchemeKindName(scheme.kind)},
      {"elements", scheme.params.elements},
      {"H", MatrixToJson(scheme.coefficients)},
      {"row_index", std::move(row_index)},
      {"insecure_by_construction", scheme.insecure_by_construction},
  };
  if (scheme.params.gamma.has_value()) j["gamma"] = *scheme.params.gamma;
  return j;
}

absl::StatusOr<CoefficientScheme> ImportScheme(const nlohmann::json& j) {
  if (!j.is_object())
    return absl::InvalidArgumentError("scheme must be an object");
  for (const char* key : {"U", "V", "T", "q"}) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      return absl::InvalidArgumentError(
          absl::StrCat("scheme field '", key, "' missing or not an integer"));
    }
  }
  const HsaConfig cfg{j["U"].get<int>(), j["V"].get<int>(), j["T"].get<int>()};
  if (absl::Status s = ValidateConfig(cfg); !s.ok()) return s;
  if (j["q"].get<int64_t>() < 2) {
    return absl::InvalidArgumentError("scheme field 'q' must be a prime");
  }
  absl::StatusOr<PrimeField> field = PrimeField::Create(j["q"].get<uint64_t>());
  if (!field.ok()) return field.status();

  if (!j.contains("H")) return absl::InvalidArgumentError("scheme lacks 'H'");
  absl::StatusOr<FqMatrix> h = MatrixFromJson(j["H"]);
  if (!h.ok()) return h.status();
  if (h->field().modulus() != field->modulus()) {
    return absl::InvalidArgumentError(
        absl::StrCat("H is over F_", h->field().modulus(),
                     " but scheme declares q = ", field->modulus()));
  }
  const size_t users = static_cast<size_t>(cfg.total_users());
  if (h->rows() != users || h->cols() == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("H is ", h->rows(), "x", h->cols(), " but UV = ", users));
  }

  std::vector<size_t> row_of_user(users);
  if (j.contains("row_index")) {
    const nlohmann::json& index = j["row_index"];
    if (!index.is_array() || index.size() != users) {
      return absl::InvalidArgumentError(
          absl::StrCat("row_index must list all ", users, " users"));
    }
    std::set<size_t> seen_users, seen_rows;
    for (const auto& entry : index) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
          !IsNonNegativeJsonInteger(entry[1])) {
        return absl::InvalidArgumentError(
            "row_index entries must be [\"u,v\", row]");
      }
      std::vector<std::string> parts =
          absl::StrSplit(entry[0].get<std::string>(), ',');
      int u = 0, v = 0;
      if (parts.size() != 2 || !absl::SimpleAtoi(parts[0], &u) ||
          !absl::SimpleAtoi(parts[1], &v) || u < 1 || u > cfg.relays || v < 1 ||
          v > cfg.users_per_relay) {
        return absl::InvalidArgumentError(
            absl::StrCat("bad user label '", entry[0].get<std::string>(), "'"));
      }
      const size_t user = UserIndex(cfg, UserId{u, v});
      const size_t row = entry[1].get<size_t>();
      if (row >= users || !seen_users.insert(user).second ||
          !seen_rows.insert(row).second) {
        return absl::InvalidArgumentError(
            "row_index must map users one-to-one onto rows of H");
      }
      row_of_user[user] = row;
    }
  } else {
    for (size_t i = 0; i < users; ++i) row_of_user[i] = i;
  }

  std::optional<Residue> gamma;
  if (j.contains("gamma") && !j["gamma"].is_null()) {
    if (!IsNonNegativeJsonInteger(j["gamma"]) ||
        !field->IsCanonical(j["gamma"].get<Residue>())) {
      return absl::InvalidArgumentError("gamma must be a residue mod q");
    }
    gamma = j["gamma"].get<Residue>();
  }
  ElementSet elements;
  if (j.contains("elements")) {
    if (!j["elements"].is_array()) {
      return absl::InvalidArgumentError("elements must be an array");
    }
    for (const auto& e : j["elements"]) {
      if (!IsNonNegativeJsonInteger(e) ||
          !field->IsCanonical(e.get<Residue>())) {
        return absl::InvalidArgumentError("elements must be residues mod q");
      }
      elements.push_back(e.get<Residue>());
    }
  }

  SchemeKind kind = SchemeKind::kExternal;
  if (j.contains("kind") && j["kind"].is_string()) {
    const std::string name = j["kind"].get<std::string>();
    if (name == SchemeKindName(SchemeKind::kExtendedVandermonde)) {
      kind = SchemeKind::kExtendedVandermonde;
    } else if (name == SchemeKindName(SchemeKind::kBaseline)) {
      kind = SchemeKind::kBaseline;
    }
  }

  CoefficientScheme scheme{
      .params = SchemeParams{.cfg = cfg,
                             .field = *field,
                             .gamma = gamma,
                             .elements = std::move(elements),
                             .n_source = static_cast<int>(h->cols())},
      .coefficients = *std::move(h),
      .row_of_user = std::move(row_of_user),
      .kind = kind,
  };
  if (j.contains("insecure_by_construction")) {
    if (!j["insecure_by_construction"].is_boolean()) {
      return absl::InvalidArgumentError(
          "insecure_by_construction must be a boolean");
    }
    scheme.insecure_by_construction = j["insecure_by_construction"].get<bool>();
  }
  if (absl::Status s = CheckZeroRowSum(scheme); !s.ok()) return s;

  // A file claiming to be an extended Vandermonde scheme must match the
  // construction from its own gamma and elements; otherwise it is external.
  if (kind == SchemeKind::kExtendedVandermonde) {
    const ElementSet& xs = scheme.params.elements;
    absl::StatusOr<FqMatrix> expected =
        ExtendedVandermonde(*field, xs, scheme.coefficients.cols());
    if (!gamma.has_value() || BuildElements(*gamma, xs.size(), *field) != xs ||
        !expected.ok() || !(*expected == scheme.coefficients)) {
      scheme.kind = SchemeKind::kExternal;
    }
  }
  return scheme;
}

}  // namespace hsa

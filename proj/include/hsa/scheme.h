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

#ifndef HSA_SCHEME_H_
#define HSA_SCHEME_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "hsa/field.h"
#include "hsa/matrix.h"
#include "hsa/rate_region.h"
#include "hsa/vandermonde.h"
#include "json.hpp"

namespace hsa {

// User v of relay u, both 1-based.
struct UserId {
  int relay = 1;
  int index = 1;

  auto operator<=>(const UserId&) const = default;
};

// Position of `user` in lexicographic (u, v) order.
size_t UserIndex(const HsaConfig& cfg, UserId user);
UserId UserAt(const HsaConfig& cfg, size_t index);
std::string UserLabel(UserId user);  // "u,v"

enum class SchemeKind { kExtendedVandermonde, kBaseline, kExternal };

absl::string_view SchemeKindName(SchemeKind kind);

struct SchemeParams {
  HsaConfig cfg;
  PrimeField field;
  std::optional<Residue> gamma;  // unset for baseline and most external schemes
  ElementSet elements;           // empty unless built from spaced nodes
  int n_source = 0;              // source key symbols per input symbol

  bool operator==(const SchemeParams&) const = default;
};

// A linear key-generation scheme: user (u, v) receives the inner product of
// row row_of_user[UserIndex(u, v)] of `coefficients` with the source key.
struct CoefficientScheme {
  SchemeParams params;
  FqMatrix coefficients;
  std::vector<size_t> row_of_user;
  SchemeKind kind = SchemeKind::kExternal;
  // Set when built for a collusion level at or beyond the feasibility
  // boundary; such a scheme exists only to be attacked.
  bool insecure_by_construction = false;

  const HsaConfig& cfg() const { return params.cfg; }
  const PrimeField& field() const { return params.field; }
  std::span<const Residue> KeyRow(UserId user) const {
    return coefficients.row(row_of_user[UserIndex(params.cfg, user)]);
  }

  bool operator==(const CoefficientScheme&) const = default;
};

// Keys for one input symbol. `individual` is indexed by UserIndex.
struct KeyMaterial {
  std::vector<Residue> source;
  std::vector<Residue> individual;
};

// x_0 = 0 and x_i = gamma + gamma^2 + ... + gamma^i. The result may contain
// repeats after reduction mod q.
ElementSet BuildElements(Residue gamma, size_t count, const PrimeField& field);

// True iff every n x n submatrix of ExtendedVandermonde(elements, n) is
// nonsingular. Submatrices avoiding the parity row are Vandermonde blocks and
// are covered by distinctness; the rest are evaluated in closed form.
bool ExtendedVandermondeIsMds(const PrimeField& field,
                              std::span<const Residue> elements, size_t n);

// Smallest gamma in [2, q-1] whose spaced elements are distinct and give an
// MDS extended Vandermonde matrix with n_source columns.
std::optional<Residue> SearchGamma(const HsaConfig& cfg,
                                   const PrimeField& field);

struct BuildOptions {
  std::optional<uint64_t> q_hint;
  // With a hint, fail instead of moving past it when no gamma works.
  bool fixed_modulus = false;
  // Build for the largest feasible T and stamp the requested T afterwards.
  bool force_infeasible = false;
  uint64_t max_modulus = 1 << 16;
};

// Errors:
//   InvalidArgument     bad configuration or non-prime hint
//   FailedPrecondition  InfeasibleConfiguration (T >= (U-1)V)
//   NotFound            search exhausted; the message names the next prime
absl::StatusOr<CoefficientScheme> BuildScheme(const HsaConfig& cfg,
                                              const BuildOptions& options = {});

// Identity block for the first UV-1 users and an all-(-1) row for (U, V).
// Defaults to the smallest prime >= UV + 1.
absl::StatusOr<CoefficientScheme> BuildBaseline(
    const HsaConfig& cfg, std::optional<uint64_t> q = std::nullopt,
    bool force_infeasible = false);

// Individual keys as inner products with the source key.
absl::StatusOr<KeyMaterial> DeriveKeys(const CoefficientScheme& scheme,
                                       std::span<const Residue> source);

// DataLoss carrying "CorrectnessViolation" when the rows do not sum to zero.
absl::Status CheckZeroRowSum(const CoefficientScheme& scheme);

// {"U","V","T","q","gamma","kind","elements","H","row_index",
//  "insecure_by_construction"}.
nlohmann::json SchemeToJson(const CoefficientScheme& scheme);

// Validates and loads a scheme. Files that omit "kind" or declare an unknown
// one load as external. Shape and field problems are InvalidArgument; a
// non-zero row sum is DataLoss (CorrectnessViolation).
absl::StatusOr<CoefficientScheme> ImportScheme(const nlohmann::json& j);

}  // namespace hsa

#endif  // HSA_SCHEME_H_

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

// Shared scheme fixtures for the unit and acceptance tests.

#ifndef HSA_TESTS_FIXTURES_H_
#define HSA_TESTS_FIXTURES_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "hsa/audit.h"
#include "hsa/scheme.h"

namespace hsa::testing {

// Wraps a UV x n matrix as an external scheme with the identity row map.
inline CoefficientScheme ExternalScheme(const HsaConfig& cfg, FqMatrix h) {
  std::vector<size_t> rows(static_cast<size_t>(cfg.total_users()));
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const int n = static_cast<int>(h.cols());
  return CoefficientScheme{
      .params = SchemeParams{.cfg = cfg, .field = h.field(), .n_source = n},
      .coefficients = std::move(h),
      .row_of_user = std::move(rows),
  };
}

// Lexicographically first zero-sum UV x n matrix over F_q that passes the
// rank audit. The first UV - 1 rows are free; the last is their negated sum.
inline std::optional<CoefficientScheme> FirstAuditCleanScheme(
    const HsaConfig& cfg, uint64_t q, size_t n) {
  const PrimeField f = *PrimeField::Create(q);
  const size_t users = static_cast<size_t>(cfg.total_users());
  const size_t free = (users - 1) * n;
  std::vector<Residue> digits(free, 0);
  while (true) {
    std::vector<Residue> data = digits;
    for (size_t c = 0; c < n; ++c) {
      Residue s = 0;
      for (size_t r = 0; r + 1 < users; ++r) s = f.Add(s, digits[r * n + c]);
      data.push_back(f.Neg(s));
    }
    CoefficientScheme scheme =
        ExternalScheme(cfg, *FqMatrix::Create(f, users, n, std::move(data)));
    if (Audit(scheme)->clean()) return scheme;
    size_t pos = free;
    while (pos > 0 && digits[pos - 1] == q - 1) digits[--pos] = 0;
    if (pos == 0) return std::nullopt;
    ++digits[pos - 1];
  }
}

// Copy of `scheme` with the key row of `user` replaced by zeros.
inline CoefficientScheme ZeroRow(const CoefficientScheme& scheme, UserId user) {
  const FqMatrix& h = scheme.coefficients;
  std::vector<Residue> data(h.data().begin(), h.data().end());
  const size_t row = scheme.row_of_user[UserIndex(scheme.cfg(), user)];
  for (size_t c = 0; c < h.cols(); ++c) data[row * h.cols() + c] = 0;
  CoefficientScheme out = scheme;
  out.coefficients = *FqMatrix::Create(h.field(), h.rows(), h.cols(), data);
  out.kind = SchemeKind::kExternal;
  return out;
}

}  // namespace hsa::testing

#endif  // HSA_TESTS_FIXTURES_H_

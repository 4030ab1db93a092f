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

#ifndef HSA_VANDERMONDE_H_
#define HSA_VANDERMONDE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "hsa/field.h"
#include "hsa/matrix.h"

namespace hsa {

// Ordered evaluation points x_0 ... x_{m-1}. Distinctness is not enforced
// here: the rank results below require it, and callers that need it check
// AllDistinct().
using ElementSet = std::vector<Residue>;

bool AllDistinct(std::span<const Residue> elements);

// m x n matrix whose row i is (1, x_i, x_i^2, ..., x_i^{n-1}). Requires m >= n.
absl::StatusOr<FqMatrix> Vandermonde(const PrimeField& field,
                                     std::span<const Residue> elements,
                                     size_t n);

// (m+1) x n matrix: row 0 is the negated sum of the Vandermonde rows, rows
// 1..m are Vandermonde(elements, n). Its rows sum to zero. Requires m >= n.
absl::StatusOr<FqMatrix> ExtendedVandermonde(const PrimeField& field,
                                             std::span<const Residue> elements,
                                             size_t n);

// e_k(x_0, ..., x_{m-1}); e_0 = 1. k > m is InvalidArgument.
absl::StatusOr<Residue> ElementarySymmetric(const PrimeField& field,
                                            std::span<const Residue> elements,
                                            size_t k);

// det [x_i^{p_j}]. The exponents must be strictly increasing and as many as
// the elements.
absl::StatusOr<Residue> GeneralizedVandermondeDet(
    const PrimeField& field, std::span<const Residue> elements,
    std::span<const uint64_t> exponents);

// prod_{i<j} (x_j - x_i): the determinant of the square Vandermonde matrix.
Residue VandermondeProduct(const PrimeField& field,
                           std::span<const Residue> elements);

// Determinant of the n x n submatrix of ExtendedVandermonde(elements, n)
// made of the parity row followed by the Vandermonde rows listed in `rows`
// (ascending, n - 1 of them), evaluated in closed form:
//
//   (-1)^n * V_{n-1}(x_I) * sum_{i not in I} prod_{j in I} (x_i - x_j)
//
// No elimination is performed.
absl::StatusOr<Residue> ExtendedVandermondeSubdet(
    const PrimeField& field, std::span<const Residue> elements,
    std::span<const size_t> rows);

}  // namespace hsa

#endif  // HSA_VANDERMONDE_H_

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

#include "hsa/vandermonde.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace hsa {

bool AllDistinct(std::span<const Residue> elements) {
  std::vector<Residue> sorted(elements.begin(), elements.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

absl::StatusOr<FqMatrix> Vandermonde(const PrimeField& field,
                                     std::span<const Residue> elements,
                                     size_t n) {
  if (elements.size() < n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Vandermonde needs at least ", n, " elements, got ", elements.size()));
  }
  MatrixBuilder builder(field, n);
  std::vector<Residue> row(n);
  for (Residue x : elements) {
    Residue power = 1 % field.modulus();
    for (size_t c = 0; c < n; ++c) {
      row[c] = power;
      power = field.Mul(power, x);
    }
    builder.AppendRow(row);
  }
  return std::move(builder).Build();
}

absl::StatusOr<FqMatrix> ExtendedVandermonde(const PrimeField& field,
                                             std::span<const Residue> elements,
                                             size_t n) {
  absl::StatusOr<FqMatrix> base = Vandermonde(field, elements, n);
  if (!base.ok()) return base.status();
  std::vector<Residue> parity = base->ColumnSums();
  for (Residue& v : parity) v = field.Neg(v);
  MatrixBuilder builder(field, n);
  builder.AppendRow(parity);
  for (size_t r = 0; r < base->rows(); ++r) builder.AppendRow(base->row(r));
  return std::move(builder).Build();
}

absl::StatusOr<Residue> ElementarySymmetric(const PrimeField& field,
                                            std::span<const Residue> elements,
                                            size_t k) {
  if (k > elements.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "e_", k, " undefined over ", elements.size(), " elements"));
  }
  // e[j] after processing a prefix holds e_j of that prefix.
  std::vector<Residue> e(k + 1, 0);
  e[0] = 1 % field.modulus();
  for (Residue x : elements) {
    for (size_t j = k; j >= 1; --j) {
      e[j] = field.Add(e[j], field.Mul(e[j - 1], x));
    }
  }
  return e[k];
}

absl::StatusOr<Residue> GeneralizedVandermondeDet(
    const PrimeField& field, std::span<const Residue> elements,
    std::span<const uint64_t> exponents) {
  if (exponents.size() != elements.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("exponent set has ", exponents.size(), " entries for ",
                     elements.size(), " elements"));
  }
  for (size_t j = 1; j < exponents.size(); ++j) {
    if (exponents[j] <= exponents[j - 1]) {
      return absl::InvalidArgumentError(
          "exponents must be strictly increasing");
    }
  }
  const size_t m = elements.size();
  MatrixBuilder builder(field, m);
  std::vector<Residue> row(m);
  for (Residue x : elements) {
    for (size_t j = 0; j < m; ++j) row[j] = field.Pow(x, exponents[j]);
    builder.AppendRow(row);
  }
  return Determinant(std::move(builder).Build());
}

Residue VandermondeProduct(const PrimeField& field,
                           std::span<const Residue> elements) {
  Residue product = 1 % field.modulus();
  for (size_t i = 0; i < elements.size(); ++i) {
    for (size_t j = i + 1; j < elements.size(); ++j) {
      product = field.Mul(product, field.Sub(elements[j], elements[i]));
    }
  }
  return product;
}

absl::StatusOr<Residue> ExtendedVandermondeSubdet(
    const PrimeField& field, std::span<const Residue> elements,
    std::span<const size_t> rows) {
  if (rows.size() > elements.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        rows.size(), " rows requested from ", elements.size(), " elements"));
  }
  std::vector<bool> chosen(elements.size(), false);
  std::vector<Residue> subset;
  subset.reserve(rows.size());
  for (size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= elements.size() || (k > 0 && rows[k] <= rows[k - 1])) {
      return absl::InvalidArgumentError(
          "row indices must be strictly increasing and in range");
    }
    chosen[rows[k]] = true;
    subset.push_back(elements[rows[k]]);
  }

  Residue tail = 0;
  for (size_t i = 0; i < elements.size(); ++i) {
    if (chosen[i]) continue;
    Residue term = 1 % field.modulus();
    for (Residue xj : subset) {
      term = field.Mul(term, field.Sub(elements[i], xj));
    }
    tail = field.Add(tail, term);
  }

  const size_t n = rows.size() + 1;
  Residue det = field.Mul(VandermondeProduct(field, subset), tail);
  return n % 2 == 0 ? det : field.Neg(det);
}

}  // namespace hsa

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

#include "hsa/matrix.h"

#include <utility>

#include "absl/strings/str_cat.h"

namespace hsa {
namespace {

// Reduces `work` (rows x cols, row-major) to row echelon form in place and
// returns the rank. `swaps` counts row exchanges for determinant sign.
size_t Eliminate(const PrimeField& f, size_t rows, size_t cols,
                 std::vector<Residue>& work, size_t* swaps) {
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot = rank;
    while (pivot < rows && work[pivot * cols + col] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (size_t c = 0; c < cols; ++c) {
        std::swap(work[pivot * cols + c], work[rank * cols + c]);
      }
      if (swaps != nullptr) ++*swaps;
    }
    const Residue inv = *f.Inv(work[rank * cols + col]);
    for (size_t r = rank + 1; r < rows; ++r) {
      const Residue factor = f.Mul(work[r * cols + col], inv);
      if (factor == 0) continue;
      for (size_t c = col; c < cols; ++c) {
        work[r * cols + c] =
            f.Sub(work[r * cols + c], f.Mul(factor, work[rank * cols + c]));
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

absl::StatusOr<FqMatrix> FqMatrix::Create(const PrimeField& field, size_t rows,
                                          size_t cols,
                                          std::vector<Residue> data) {
  if (data.size() != rows * cols) {
    return absl::InvalidArgumentError(
        absl::StrCat("matrix ", rows, "x", cols, " needs ", rows * cols,
                     " entries, got ", data.size()));
  }
  for (size_t i = 0; i < data.size(); ++i) {
    if (!field.IsCanonical(data[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("entry ", i, " = ", data[i], " is not a residue mod ",
                       field.modulus()));
    }
  }
  return FqMatrix(field, rows, cols, std::move(data));
}

FqMatrix FqMatrix::Zero(const PrimeField& field, size_t rows, size_t cols) {
  return FqMatrix(field, rows, cols, std::vector<Residue>(rows * cols, 0));
}

FqMatrix FqMatrix::Identity(const PrimeField& field, size_t n) {
  FqMatrix m = Zero(field, n, n);
  for (size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1 % field.modulus();
  return m;
}

FqMatrix FqMatrix::SelectRows(std::span<const size_t> indices) const {
  MatrixBuilder builder(field_, cols_);
  for (size_t r : indices) builder.AppendRow(row(r));
  return std::move(builder).Build();
}

std::vector<Residue> FqMatrix::ColumnSums() const {
  std::vector<Residue> sums(cols_, 0);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) {
      sums[c] = field_.Add(sums[c], at(r, c));
    }
  }
  return sums;
}

void MatrixBuilder::AppendRow(std::span<const Residue> row) {
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

FqMatrix MatrixBuilder::Build() && {
  return FqMatrix(field_, rows_, cols_, std::move(data_));
}

size_t Rank(const FqMatrix& m) {
  std::vector<Residue> work(m.data().begin(), m.data().end());
  return Eliminate(m.field(), m.rows(), m.cols(), work, nullptr);
}

absl::StatusOr<Residue> Determinant(const FqMatrix& m) {
  if (m.rows() != m.cols()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "determinant of non-square ", m.rows(), "x", m.cols(), " matrix"));
  }
  const PrimeField& f = m.field();
  const size_t n = m.rows();
  std::vector<Residue> work(m.data().begin(), m.data().end());
  size_t swaps = 0;
  if (Eliminate(f, n, n, work, &swaps) < n) return Residue{0};
  Residue det = 1 % f.modulus();
  for (size_t i = 0; i < n; ++i) det = f.Mul(det, work[i * n + i]);
  return swaps % 2 == 0 ? det : f.Neg(det);
}

nlohmann::json MatrixToJson(const FqMatrix& m) {
  return nlohmann::json{
      {"q", m.field().modulus()},
      {"rows", m.rows()},
      {"cols", m.cols()},
      {"data", std::vector<Residue>(m.data().begin(), m.data().end())}};
}

bool IsNonNegativeJsonInteger(const nlohmann::json& j) {
  return j.is_number_unsigned() ||
         (j.is_number_integer() && j.get<int64_t>() >= 0);
}

absl::StatusOr<FqMatrix> MatrixFromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("matrix JSON must be an object");
  }
  for (const char* key : {"q", "rows", "cols"}) {
    if (!j.contains(key) || !IsNonNegativeJsonInteger(j[key])) {
      return absl::InvalidArgumentError(
          absl::StrCat("matrix JSON field '", key,
                       "' missing or not a nonnegative integer"));
    }
  }
  if (!j.contains("data") || !j["data"].is_array()) {
    return absl::InvalidArgumentError("matrix JSON field 'data' missing");
  }
  absl::StatusOr<PrimeField> field = PrimeField::Create(j["q"].get<uint64_t>());
  if (!field.ok()) return field.status();
  std::vector<Residue> data;
  data.reserve(j["data"].size());
  for (const auto& entry : j["data"]) {
    if (!IsNonNegativeJsonInteger(entry)) {
      return absl::InvalidArgumentError(
          "matrix JSON entries must be nonnegative integers");
    }
    data.push_back(entry.get<Residue>());
  }
  return FqMatrix::Create(*field, j["rows"].get<size_t>(),
                          j["cols"].get<size_t>(), std::move(data));
}

}  // namespace hsa

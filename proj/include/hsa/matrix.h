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

#ifndef HSA_MATRIX_H_
#define HSA_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "hsa/field.h"
#include "json.hpp"

namespace hsa {

// Dense row-major matrix over a prime field. Entries are always canonical.
class FqMatrix {
 public:
  // Validates shape and canonicity of every entry.
  static absl::StatusOr<FqMatrix> Create(const PrimeField& field, size_t rows,
                                         size_t cols,
                                         std::vector<Residue> data);
  static FqMatrix Zero(const PrimeField& field, size_t rows, size_t cols);
  static FqMatrix Identity(const PrimeField& field, size_t n);

  const PrimeField& field() const { return field_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  std::span<const Residue> data() const { return data_; }

  Residue at(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Residue> row(size_t r) const {
    return std::span<const Residue>(data_).subspan(r * cols_, cols_);
  }

  // Stacks the given rows (indices may repeat) into a new matrix.
  FqMatrix SelectRows(std::span<const size_t> indices) const;

  // Column-wise sum of all rows.
  std::vector<Residue> ColumnSums() const;

  bool operator==(const FqMatrix& other) const = default;

 private:
  friend class MatrixBuilder;

  FqMatrix(const PrimeField& field, size_t rows, size_t cols,
           std::vector<Residue> data)
      : field_(field), rows_(rows), cols_(cols), data_(std::move(data)) {}

  PrimeField field_;
  size_t rows_;
  size_t cols_;
  std::vector<Residue> data_;
};

// Accumulates rows of a fixed width. Rows must already hold canonical
// residues of the builder's field.
class MatrixBuilder {
 public:
  MatrixBuilder(const PrimeField& field, size_t cols)
      : field_(field), cols_(cols) {}

  void AppendRow(std::span<const Residue> row);
  size_t rows() const { return rows_; }
  FqMatrix Build() &&;

 private:
  PrimeField field_;
  size_t cols_;
  size_t rows_ = 0;
  std::vector<Residue> data_;
};

// Row rank by Gaussian elimination with first-nonzero pivoting.
size_t Rank(const FqMatrix& m);

// Exact determinant. Non-square input is InvalidArgument; 0x0 yields 1.
absl::StatusOr<Residue> Determinant(const FqMatrix& m);

// {"q": int, "rows": int, "cols": int, "data": [int, ...]} row-major.
nlohmann::json MatrixToJson(const FqMatrix& m);
absl::StatusOr<FqMatrix> MatrixFromJson(const nlohmann::json& j);

// True for JSON integers >= 0, whether stored signed or unsigned.
bool IsNonNegativeJsonInteger(const nlohmann::json& j);

}  // namespace hsa

#endif  // HSA_MATRIX_H_

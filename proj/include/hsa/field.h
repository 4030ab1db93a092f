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

#ifndef HSA_FIELD_H_
#define HSA_FIELD_H_

#include <cstdint>

#include "absl/status/statusor.h"

namespace hsa {

// A canonical residue in [0, q-1].
using Residue = uint64_t;

// Arithmetic over the prime field F_q.
//
// The modulus is bounded so that the product of two residues fits in 64 bits.
// Instances are immutable and cheap to copy.
class PrimeField {
 public:
  static constexpr uint64_t kMaxModulus = (uint64_t{1} << 31) - 1;

  // Fails with InvalidArgument unless q is a prime in [2, kMaxModulus].
  static absl::StatusOr<PrimeField> Create(uint64_t q);

  uint64_t modulus() const { return q_; }
  Residue primitive_element() const { return primitive_; }

  bool IsCanonical(uint64_t a) const { return a < q_; }
  Residue Reduce(int64_t a) const;

  Residue Add(Residue a, Residue b) const {
    Residue s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Residue Sub(Residue a, Residue b) const {
    return a >= b ? a - b : a + q_ - b;
  }
  Residue Neg(Residue a) const { return a == 0 ? 0 : q_ - a; }
  Residue Mul(Residue a, Residue b) const { return (a * b) % q_; }
  Residue Pow(Residue base, uint64_t exponent) const;

  // Multiplicative inverse. Zero has none and yields InvalidArgument.
  absl::StatusOr<Residue> Inv(Residue a) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) {
    return a.q_ == b.q_;
  }

 private:
  PrimeField(uint64_t q, Residue primitive) : q_(q), primitive_(primitive) {}

  uint64_t q_;
  Residue primitive_;
};

bool IsPrime(uint64_t n);

// Smallest prime >= n.
uint64_t NextPrime(uint64_t n);

// Smallest g >= 2 whose multiplicative order mod q is q-1. Returns 1 for
// q = 2, where the multiplicative group is trivial. Requires q prime.
Residue FindPrimitiveElement(uint64_t q);

}  // namespace hsa

#endif  // HSA_FIELD_H_

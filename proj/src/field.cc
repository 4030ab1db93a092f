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

#include "hsa/field.h"

#include <vector>

#include "absl/strings/str_cat.h"

namespace hsa {
namespace {

std::vector<uint64_t> DistinctPrimeFactors(uint64_t n) {
  std::vector<uint64_t> factors;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    factors.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

uint64_t PowMod(uint64_t base, uint64_t exponent, uint64_t q) {
  uint64_t result = 1 % q;
  base %= q;
  while (exponent > 0) {
    if (exponent & 1) result = result * base % q;
    base = base * base % q;
    exponent >>= 1;
  }
  return result;
}

}  // namespace

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

uint64_t NextPrime(uint64_t n) {
  if (n <= 2) return 2;
  while (!IsPrime(n)) ++n;
  return n;
}

Residue FindPrimitiveElement(uint64_t q) {
  if (q == 2) return 1;
  // g generates F_q^* iff g^((q-1)/p) != 1 for every prime p | q-1.
  const std::vector<uint64_t> factors = DistinctPrimeFactors(q - 1);
  for (Residue g = 2; g < q; ++g) {
    bool generator = true;
    for (uint64_t p : factors) {
      if (PowMod(g, (q - 1) / p, q) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  return 0;  // unreachable for prime q
}

absl::StatusOr<PrimeField> PrimeField::Create(uint64_t q) {
  if (q < 2 || q > kMaxModulus) {
    return absl::InvalidArgumentError(
        absl::StrCat("field modulus ", q, " outside [2, ", kMaxModulus, "]"));
  }
  if (!IsPrime(q)) {
    return absl::InvalidArgumentError(
        absl::StrCat("field modulus ", q, " is not prime"));
  }
  return PrimeField(q, FindPrimitiveElement(q));
}

Residue PrimeField::Reduce(int64_t a) const {
  const int64_t q = static_cast<int64_t>(q_);
  int64_t r = a % q;
  if (r < 0) r += q;
  return static_cast<Residue>(r);
}

Residue PrimeField::Pow(Residue base, uint64_t exponent) const {
  return PowMod(base, exponent, q_);
}

absl::StatusOr<Residue> PrimeField::Inv(Residue a) const {
  if (a % q_ == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("zero has no inverse in F_", q_));
  }
  // Fermat: a^(q-2) = a^-1.
  return Pow(a, q_ - 2);
}

}  // namespace hsa

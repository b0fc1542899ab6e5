// Copyright 2026 The pce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace pce {

inline constexpr int kMaxFieldDegree = 16;

/// Modulus polynomial for GF(2^m), bit i = coefficient of x^i, m in [1, 16].
uint32_t irreducible_polynomial(int m);

/// The field GF(2^m) in polynomial basis {1, x, ..., x^(m-1)}; the basis
/// element x is the root alpha of the modulus.
class GF2m {
 public:
  /// Throws CapabilityError for m outside [1, 16].
  explicit GF2m(int m);

  int degree() const { return m_; }
  uint32_t order() const { return uint32_t{1} << m_; }
  uint32_t modulus() const { return modulus_; }

  uint32_t add(uint32_t a, uint32_t b) const { return a ^ b; }
  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t pow(uint32_t a, uint64_t e) const;

  /// Multiplicative inverse via a^(2^m - 2). Throws UsageError for a = 0.
  uint32_t inverse(uint32_t a) const;

  /// Absolute trace a + a^2 + a^4 + ... + a^(2^(m-1)), in {0, 1}.
  uint32_t trace(uint32_t a) const;

  /// The root alpha of the modulus (x reduced mod the modulus).
  uint32_t alpha() const { return m_ == 1 ? 1U : 2U; }
  uint32_t alpha_power(int i) const { return pow(alpha(), static_cast<uint64_t>(i)); }

 private:
  int m_;
  uint32_t modulus_;
};

}  // namespace pce

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

#include "pce/gf2m.hpp"

#include <string>

#include "pce/error.hpp"

namespace pce {

namespace {

// Low-weight irreducible (primitive) polynomials, indexed by degree.
constexpr uint32_t kModuli[kMaxFieldDegree + 1] = {
    0,
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x83,     // x^7 + x + 1
    0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
};

}  // namespace

uint32_t irreducible_polynomial(int m) {
  if (m < 1 || m > kMaxFieldDegree) {
    throw CapabilityError("GF(2^m) supported for m in [1, 16], got m=" + std::to_string(m));
  }
  return kModuli[m];
}

GF2m::GF2m(int m) : m_(m), modulus_(irreducible_polynomial(m)) {}

uint32_t GF2m::mul(uint32_t a, uint32_t b) const {
  const uint32_t top = uint32_t{1} << m_;
  uint32_t result = 0;
  while (b != 0) {
    if (b & 1U) {
      result ^= a;
    }
    b >>= 1;
    a <<= 1;
    if (a & top) {
      a ^= modulus_;
    }
  }
  return result;
}

uint32_t GF2m::pow(uint32_t a, uint64_t e) const {
  uint32_t result = 1;
  while (e != 0) {
    if (e & 1U) {
      result = mul(result, a);
    }
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

uint32_t GF2m::inverse(uint32_t a) const {
  if (a == 0) {
    throw UsageError("zero has no multiplicative inverse");
  }
  return pow(a, (uint64_t{1} << m_) - 2);
}

uint32_t GF2m::trace(uint32_t a) const {
  uint32_t acc = 0;
  uint32_t term = a;
  for (int i = 0; i < m_; i++) {
    acc ^= term;
    term = mul(term, term);
  }
  return acc;
}

}  // namespace pce

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

#include "pce/pauli.hpp"

#include "pce/error.hpp"

namespace pce {

namespace {

constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};

void require_same_size(const PauliLabel& a, const PauliLabel& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw UsageError("Pauli labels act on different qubit counts: " + std::to_string(a.num_qubits()) +
                     " vs " + std::to_string(b.num_qubits()));
  }
}

}  // namespace

PauliLabel::PauliLabel(uint64_t bits, int n) : bits_(bits), n_(n) {
  if (n < 0 || n > kMaxLabelQubits) {
    throw UsageError("Pauli label qubit count out of range [0, 32]: " + std::to_string(n));
  }
  if ((bits & ~label_mask(n)) != 0) {
    throw UsageError("Pauli label has bits set beyond 2n for n=" + std::to_string(n));
  }
}

PauliLabel PauliLabel::parse(std::string_view text) {
  if (text.size() > static_cast<std::size_t>(kMaxLabelQubits)) {
    throw ParseError("Pauli label longer than 32 qubits", kMaxLabelQubits);
  }
  uint64_t bits = 0;
  for (std::size_t i = 0; i < text.size(); i++) {
    uint64_t code;
    switch (text[i]) {
      case 'I':
        code = 0;
        break;
      case 'X':
        code = 1;
        break;
      case 'Z':
        code = 2;
        break;
      case 'Y':
        code = 3;
        break;
      default:
        throw ParseError(std::string("invalid Pauli letter '") + text[i] + "'", i);
    }
    bits |= code << (2 * i);
  }
  return PauliLabel(bits, static_cast<int>(text.size()));
}

std::string PauliLabel::str() const {
  std::string out(static_cast<std::size_t>(n_), 'I');
  for (int i = 0; i < n_; i++) {
    out[static_cast<std::size_t>(i)] = kLetters[qubit(i)];
  }
  return out;
}

int PauliLabel::weight() const {
  uint64_t occupied = (bits_ | (bits_ >> 1)) & kXMask;
  return std::popcount(occupied);
}

PauliLabel PauliLabel::slice(int first, int count) const {
  if (first < 0 || count < 0 || first + count > n_) {
    throw UsageError("Pauli label slice out of range");
  }
  uint64_t shifted = first >= kMaxLabelQubits ? 0 : bits_ >> (2 * first);
  return PauliLabel(shifted & label_mask(count), count);
}

PauliLabel PauliLabel::concat(const PauliLabel& low, const PauliLabel& high) {
  int n = low.n_ + high.n_;
  if (n > kMaxLabelQubits) {
    throw CapabilityError("concatenated Pauli label exceeds 32 qubits");
  }
  uint64_t hi = low.n_ >= kMaxLabelQubits ? 0 : high.bits_ << (2 * low.n_);
  return PauliLabel(low.bits_ | hi, n);
}

int symplectic_product(const PauliLabel& a, const PauliLabel& b) {
  require_same_size(a, b);
  return symplectic_bits(a.bits(), b.bits());
}

PauliLabel compose(const PauliLabel& a, const PauliLabel& b) {
  require_same_size(a, b);
  return PauliLabel(a.bits() ^ b.bits(), a.num_qubits());
}

}  // namespace pce

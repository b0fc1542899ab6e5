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

#include <cstddef>
#include <span>

namespace pce {

// In-place character transforms over packed Pauli indices. Both are
// unnormalized: applying one twice multiplies by the group order.

/// out[b] = sum_a in[a] (-1)^<a,b> over the symplectic form, using the radix-4
/// kernel (rows I, X, Z, Y) on qubits [first_qubit, first_qubit + qubits).
/// `data.size()` must be a multiple of 4^(first_qubit + qubits).
template <typename T>
void symplectic_transform_qubits(std::span<T> data, int first_qubit, int qubits) {
  const std::size_t size = data.size();
  for (int q = first_qubit; q < first_qubit + qubits; q++) {
    const std::size_t stride = std::size_t{1} << (2 * q);
    const std::size_t block = stride << 2;
    for (std::size_t base = 0; base < size; base += block) {
      for (std::size_t j = base; j < base + stride; j++) {
        T a = data[j];
        T b = data[j + stride];
        T c = data[j + 2 * stride];
        T d = data[j + 3 * stride];
        T s_ab = a + b;
        T d_ab = a - b;
        T s_cd = c + d;
        T d_cd = c - d;
        data[j] = s_ab + s_cd;
        data[j + stride] = s_ab - s_cd;
        data[j + 2 * stride] = d_ab + d_cd;
        data[j + 3 * stride] = d_ab - d_cd;
      }
    }
  }
}

/// out[y] = sum_x in[x] (-1)^(x . y) on bits [first_bit, first_bit + bits).
template <typename T>
void xor_transform_bits(std::span<T> data, int first_bit, int bits) {
  const std::size_t size = data.size();
  for (int bit = first_bit; bit < first_bit + bits; bit++) {
    const std::size_t stride = std::size_t{1} << bit;
    const std::size_t block = stride << 1;
    for (std::size_t base = 0; base < size; base += block) {
      for (std::size_t j = base; j < base + stride; j++) {
        T a = data[j];
        T b = data[j + stride];
        data[j] = a + b;
        data[j + stride] = a - b;
      }
    }
  }
}

}  // namespace pce

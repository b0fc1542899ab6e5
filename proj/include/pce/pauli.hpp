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

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace pce {

/// Largest qubit count a single packed label can hold (2 bits per qubit).
inline constexpr int kMaxLabelQubits = 32;

/// Bits 0, 2, 4, ... of a packed label: the x components.
inline constexpr uint64_t kXMask = 0x5555555555555555ULL;

/// Mask with the low 2n bits set.
constexpr uint64_t label_mask(int n) {
  return n >= kMaxLabelQubits ? ~uint64_t{0} : (uint64_t{1} << (2 * n)) - 1;
}

/// Symplectic form on raw packed words: parity of popcount(a & swap_xz(b)).
constexpr int symplectic_bits(uint64_t a, uint64_t b) {
  uint64_t swapped = ((b >> 1) & kXMask) | ((b & kXMask) << 1);
  return std::popcount(a & swapped) & 1;
}

/// Pauli operator on n qubits modulo phase, stored as a packed 2n-bit word.
///
/// Qubit i occupies bits (2i, 2i+1) = (x_i, z_i), so the per-qubit code is
/// I=0, X=1, Z=2, Y=3. Text form lists qubit 0 first ("XZ" has X on qubit 0).
class PauliLabel {
 public:
  constexpr PauliLabel() = default;

  /// Throws UsageError if n is outside [0, 32] or bits has set bits above 2n.
  PauliLabel(uint64_t bits, int n);

  static PauliLabel identity(int n) { return PauliLabel(0, n); }

  /// Parses per-qubit letters from {I, X, Y, Z}. Throws ParseError.
  static PauliLabel parse(std::string_view text);

  std::string str() const;

  constexpr uint64_t bits() const { return bits_; }
  constexpr int num_qubits() const { return n_; }
  constexpr bool is_identity() const { return bits_ == 0; }

  /// 2-bit code (x | z << 1) of qubit i.
  constexpr unsigned qubit(int i) const { return static_cast<unsigned>((bits_ >> (2 * i)) & 3U); }

  /// Number of non-identity tensor factors.
  int weight() const;

  /// Qubits [first, first + count) as a label on `count` qubits.
  PauliLabel slice(int first, int count) const;

  /// Qubits of `low` followed by qubits of `high`.
  static PauliLabel concat(const PauliLabel& low, const PauliLabel& high);

  friend constexpr bool operator==(const PauliLabel& a, const PauliLabel& b) {
    return a.bits_ == b.bits_ && a.n_ == b.n_;
  }
  friend constexpr bool operator<(const PauliLabel& a, const PauliLabel& b) {
    return a.n_ != b.n_ ? a.n_ < b.n_ : a.bits_ < b.bits_;
  }

 private:
  uint64_t bits_ = 0;
  int n_ = 0;
};

/// 1 iff P_a and P_b anticommute. Throws UsageError on mismatched qubit counts.
int symplectic_product(const PauliLabel& a, const PauliLabel& b);

/// Label of P_a P_b up to phase. Throws UsageError on mismatched qubit counts.
PauliLabel compose(const PauliLabel& a, const PauliLabel& b);

inline int weight(const PauliLabel& a) { return a.weight(); }
inline std::string format_label(const PauliLabel& a) { return a.str(); }
inline PauliLabel parse_label(std::string_view text) { return PauliLabel::parse(text); }

}  // namespace pce

template <>
struct std::hash<pce::PauliLabel> {
  std::size_t operator()(const pce::PauliLabel& a) const noexcept {
    return std::hash<uint64_t>{}(a.bits() * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(a.num_qubits()));
  }
};

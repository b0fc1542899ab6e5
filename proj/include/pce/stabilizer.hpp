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
#include <optional>
#include <string>
#include <vector>

#include "pce/pauli.hpp"

namespace pce {

/// Generator-wise syndrome: bit j is <g_j, c> for the measured error c.
struct Syndrome {
  uint64_t bits = 0;
  int m = 0;

  friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

/// Maximal stabilizer group on m qubits: m independent, pairwise commuting
/// generators, hence an m-dimensional isotropic subspace with 2^m elements.
///
/// Because the group is maximal isotropic it equals its own symplectic
/// complement, so c is a member iff its syndrome is zero.
class StabilizerGroup {
 public:
  /// Throws UsageError if the generators have the wrong size, fail to
  /// commute, or are linearly dependent.
  StabilizerGroup(int m, std::vector<PauliLabel> generators);

  /// Skips validation. Only for building deliberately broken coverings in
  /// diagnostics; such groups are reported by verify_covering.
  static StabilizerGroup unchecked(int m, std::vector<PauliLabel> generators);

  int num_qubits() const { return m_; }
  const std::vector<PauliLabel>& generators() const { return generators_; }

  Syndrome syndrome(const PauliLabel& c) const;
  uint64_t syndrome_bits(uint64_t c) const {
    uint64_t out = 0;
    for (std::size_t j = 0; j < generators_.size(); j++) {
      out |= static_cast<uint64_t>(symplectic_bits(generators_[j].bits(), c)) << j;
    }
    return out;
  }

  /// XOR of the generators selected by `alpha`; element(0) is the identity.
  PauliLabel element(uint64_t alpha) const;
  uint64_t element_bits(uint64_t alpha) const;

  /// Coefficients alpha with element(alpha) == c, if c is in the row space.
  std::optional<uint64_t> coefficients(const PauliLabel& c) const;

  bool contains(const PauliLabel& c) const { return coefficients(c).has_value(); }

  /// Empty if the group invariants hold, otherwise a description.
  std::string invariant_violation() const;

 private:
  StabilizerGroup() = default;
  void build_basis();

  int m_ = 0;
  std::vector<PauliLabel> generators_;
  // Row-reduced basis: pivot bit, reduced vector and the generator mask
  // producing it.
  struct BasisRow {
    uint64_t pivot;
    uint64_t vector;
    uint64_t combination;
  };
  std::vector<BasisRow> basis_;
};

/// alpha . e mod 2; equals <element(alpha), c> whenever e is the syndrome of c.
inline int pairing_with_syndrome(uint64_t alpha, const Syndrome& e) {
  return std::popcount(alpha & e.bits) & 1;
}

Syndrome syndrome(const StabilizerGroup& group, const PauliLabel& c);
PauliLabel element(const StabilizerGroup& group, uint64_t alpha);

enum class CoveringKind { kMub, kPauliBasis, kCustom };

std::string to_string(CoveringKind kind);
CoveringKind covering_kind_from_string(const std::string& text);

/// Family of stabilizer groups on m qubits jointly containing every label.
class Covering {
 public:
  /// No coverage check; run verify_covering for that.
  Covering(int m, CoveringKind kind, std::vector<StabilizerGroup> groups);

  int num_qubits() const { return m_; }
  CoveringKind kind() const { return kind_; }
  std::size_t size() const { return groups_.size(); }
  const std::vector<StabilizerGroup>& groups() const { return groups_; }
  const StabilizerGroup& group(std::size_t i) const { return groups_[i]; }

  /// Indices of the groups containing `label`, ascending.
  std::vector<std::size_t> groups_containing(const PauliLabel& label) const;

  bool has_dense_coverage() const { return !coverage_offsets_.empty(); }

 private:
  int m_;
  CoveringKind kind_;
  std::vector<StabilizerGroup> groups_;
  // CSR coverage map over all 4^m labels when small enough.
  std::vector<uint32_t> coverage_offsets_;
  std::vector<uint32_t> coverage_groups_;
};

/// 2^m + 1 groups from mutually unbiased bases: S_inf = {(0|z)} and, for every
/// c in GF(2^m), S_c = {(x | M_c x)} with M_c[i][j] = Tr(c alpha^i alpha^j).
/// m = 0 gives a single empty group. Throws CapabilityError for m > 16.
Covering mub_covering(int m);

/// 3^m groups, one per word w in {X, Y, Z}^m, generated by w_i on qubit i.
Covering pauli_basis_covering(int m);

struct CoveringReport {
  bool ok = true;
  std::vector<PauliLabel> uncovered;
  std::vector<std::string> group_errors;
};

/// Exhaustive scan over all 4^m labels (m <= 10).
CoveringReport verify_covering(const Covering& covering);

}  // namespace pce

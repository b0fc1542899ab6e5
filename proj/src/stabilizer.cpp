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

#include "pce/stabilizer.hpp"

#include <algorithm>
#include <bit>

#include "pce/error.hpp"
#include "pce/gf2m.hpp"

namespace pce {

namespace {

constexpr int kMaxDenseCoverageQubits = 10;
constexpr std::size_t kMaxCoverageEntries = std::size_t{1} << 25;
constexpr int kMaxPauliBasisQubits = 15;

}  // namespace

StabilizerGroup::StabilizerGroup(int m, std::vector<PauliLabel> generators) {
  if (m < 0 || m > kMaxLabelQubits) {
    throw UsageError("stabilizer group size out of range: " + std::to_string(m));
  }
  m_ = m;
  generators_ = std::move(generators);
  build_basis();
  std::string problem = invariant_violation();
  if (!problem.empty()) {
    throw UsageError(problem);
  }
}

StabilizerGroup StabilizerGroup::unchecked(int m, std::vector<PauliLabel> generators) {
  StabilizerGroup g;
  g.m_ = m;
  g.generators_ = std::move(generators);
  g.build_basis();
  return g;
}

void StabilizerGroup::build_basis() {
  basis_.clear();
  for (std::size_t j = 0; j < generators_.size(); j++) {
    if (generators_[j].num_qubits() != m_) {
      continue;
    }
    uint64_t v = generators_[j].bits();
    uint64_t comb = uint64_t{1} << j;
    for (const auto& row : basis_) {
      if (v & row.pivot) {
        v ^= row.vector;
        comb ^= row.combination;
      }
    }
    if (v == 0) {
      continue;
    }
    uint64_t pivot = uint64_t{1} << (63 - std::countl_zero(v));
    // Keep rows sorted by descending pivot so a single pass reduces a query.
    auto pos = std::find_if(basis_.begin(), basis_.end(), [&](const BasisRow& r) { return r.pivot < pivot; });
    basis_.insert(pos, BasisRow{pivot, v, comb});
  }
}

std::string StabilizerGroup::invariant_violation() const {
  if (static_cast<int>(generators_.size()) != m_) {
    return "stabilizer group on " + std::to_string(m_) + " qubits needs " + std::to_string(m_) +
           " generators, got " + std::to_string(generators_.size());
  }
  for (const auto& g : generators_) {
    if (g.num_qubits() != m_) {
      return "generator " + g.str() + " does not act on " + std::to_string(m_) + " qubits";
    }
  }
  for (std::size_t i = 0; i < generators_.size(); i++) {
    for (std::size_t j = i + 1; j < generators_.size(); j++) {
      if (symplectic_product(generators_[i], generators_[j]) != 0) {
        return "generators " + generators_[i].str() + " and " + generators_[j].str() + " anticommute";
      }
    }
  }
  if (basis_.size() != generators_.size()) {
    return "stabilizer generators are linearly dependent";
  }
  return {};
}

Syndrome StabilizerGroup::syndrome(const PauliLabel& c) const {
  if (c.num_qubits() != m_) {
    throw UsageError("syndrome: label acts on " + std::to_string(c.num_qubits()) + " qubits, group on " +
                     std::to_string(m_));
  }
  return Syndrome{syndrome_bits(c.bits()), m_};
}

uint64_t StabilizerGroup::element_bits(uint64_t alpha) const {
  uint64_t out = 0;
  for (std::size_t j = 0; j < generators_.size(); j++) {
    if ((alpha >> j) & 1U) {
      out ^= generators_[j].bits();
    }
  }
  return out;
}

PauliLabel StabilizerGroup::element(uint64_t alpha) const { return PauliLabel(element_bits(alpha), m_); }

std::optional<uint64_t> StabilizerGroup::coefficients(const PauliLabel& c) const {
  if (c.num_qubits() != m_) {
    throw UsageError("coefficients: label size does not match group");
  }
  uint64_t v = c.bits();
  uint64_t comb = 0;
  for (const auto& row : basis_) {
    if (v & row.pivot) {
      v ^= row.vector;
      comb ^= row.combination;
    }
  }
  if (v != 0) {
    return std::nullopt;
  }
  return comb;
}

Syndrome syndrome(const StabilizerGroup& group, const PauliLabel& c) { return group.syndrome(c); }
PauliLabel element(const StabilizerGroup& group, uint64_t alpha) { return group.element(alpha); }

std::string to_string(CoveringKind kind) {
  switch (kind) {
    case CoveringKind::kMub:
      return "mub";
    case CoveringKind::kPauliBasis:
      return "pauli-basis";
    case CoveringKind::kCustom:
      return "custom";
  }
  return "custom";
}

CoveringKind covering_kind_from_string(const std::string& text) {
  if (text == "mub") {
    return CoveringKind::kMub;
  }
  if (text == "pauli-basis") {
    return CoveringKind::kPauliBasis;
  }
  if (text == "custom") {
    return CoveringKind::kCustom;
  }
  throw UsageError("unknown covering construction '" + text + "' (expected mub or pauli-basis)");
}

Covering::Covering(int m, CoveringKind kind, std::vector<StabilizerGroup> groups)
    : m_(m), kind_(kind), groups_(std::move(groups)) {
  for (const auto& g : groups_) {
    if (g.num_qubits() != m_) {
      throw UsageError("covering group size does not match covering");
    }
  }
  if (m_ > kMaxDenseCoverageQubits) {
    return;
  }
  std::size_t total = 0;
  for (const auto& g : groups_) {
    total += std::size_t{1} << g.generators().size();
  }
  if (total > kMaxCoverageEntries) {
    return;
  }
  const std::size_t labels = std::size_t{1} << (2 * m_);
  const uint64_t mask = label_mask(m_);
  std::vector<uint32_t> counts(labels + 1, 0);
  auto for_each_member = [&](const StabilizerGroup& g, auto&& fn) {
    const uint64_t count = uint64_t{1} << g.generators().size();
    uint64_t element = 0;
    fn(element);
    // Gray-code walk over the 2^m coefficient vectors.
    for (uint64_t i = 1; i < count; i++) {
      element ^= g.generators()[static_cast<std::size_t>(std::countr_zero(i))].bits();
      fn(element);
    }
  };
  for (const auto& g : groups_) {
    for_each_member(g, [&](uint64_t e) { counts[(e & mask) + 1]++; });
  }
  for (std::size_t i = 0; i < labels; i++) {
    counts[i + 1] += counts[i];
  }
  coverage_offsets_ = counts;
  coverage_groups_.assign(counts[labels], 0);
  std::vector<uint32_t> fill(counts.begin(), counts.end() - 1);
  for (std::size_t gi = 0; gi < groups_.size(); gi++) {
    for_each_member(groups_[gi], [&](uint64_t e) { coverage_groups_[fill[e & mask]++] = static_cast<uint32_t>(gi); });
  }
}

std::vector<std::size_t> Covering::groups_containing(const PauliLabel& label) const {
  if (label.num_qubits() != m_) {
    throw UsageError("groups_containing: label size does not match covering");
  }
  std::vector<std::size_t> out;
  if (has_dense_coverage()) {
    for (uint32_t i = coverage_offsets_[label.bits()]; i < coverage_offsets_[label.bits() + 1]; i++) {
      out.push_back(coverage_groups_[i]);
    }
    return out;
  }
  for (std::size_t i = 0; i < groups_.size(); i++) {
    if (groups_[i].contains(label)) {
      out.push_back(i);
    }
  }
  return out;
}

Covering mub_covering(int m) {
  if (m < 0) {
    throw UsageError("mub_covering: m must be nonnegative");
  }
  if (m > kMaxFieldDegree) {
    throw CapabilityError("mub_covering supports m <= 16, got m=" + std::to_string(m));
  }
  std::vector<StabilizerGroup> groups;
  if (m == 0) {
    groups.emplace_back(0, std::vector<PauliLabel>{});
    return Covering(0, CoveringKind::kMub, std::move(groups));
  }
  const GF2m field(m);
  const uint32_t q = field.order();
  groups.reserve(q + 1);

  std::vector<PauliLabel> z_type;
  for (int i = 0; i < m; i++) {
    z_type.emplace_back(uint64_t{2} << (2 * i), m);
  }
  groups.emplace_back(m, std::move(z_type));

  std::vector<uint32_t> alpha_powers(static_cast<std::size_t>(2 * m - 1));
  for (int t = 0; t < 2 * m - 1; t++) {
    alpha_powers[static_cast<std::size_t>(t)] = field.alpha_power(t);
  }
  std::vector<uint32_t> traces(alpha_powers.size());
  for (uint32_t c = 0; c < q; c++) {
    for (std::size_t t = 0; t < alpha_powers.size(); t++) {
      traces[t] = field.trace(field.mul(c, alpha_powers[t]));
    }
    std::vector<PauliLabel> gens;
    gens.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; j++) {
      // Column j of M_c: x = e_j, z_i = Tr(c alpha^(i+j)).
      uint64_t bits = uint64_t{1} << (2 * j);
      for (int i = 0; i < m; i++) {
        bits |= static_cast<uint64_t>(traces[static_cast<std::size_t>(i + j)]) << (2 * i + 1);
      }
      gens.emplace_back(bits, m);
    }
    groups.emplace_back(m, std::move(gens));
  }
  return Covering(m, CoveringKind::kMub, std::move(groups));
}

Covering pauli_basis_covering(int m) {
  if (m < 0) {
    throw UsageError("pauli_basis_covering: m must be nonnegative");
  }
  if (m > kMaxPauliBasisQubits) {
    throw CapabilityError("pauli_basis_covering: 3^m groups too many for m=" + std::to_string(m));
  }
  constexpr uint64_t kCodes[3] = {1, 3, 2};  // X, Y, Z
  std::size_t count = 1;
  for (int i = 0; i < m; i++) {
    count *= 3;
  }
  std::vector<StabilizerGroup> groups;
  groups.reserve(count);
  for (std::size_t w = 0; w < count; w++) {
    std::vector<PauliLabel> gens;
    std::size_t digits = w;
    for (int i = 0; i < m; i++) {
      gens.emplace_back(kCodes[digits % 3] << (2 * i), m);
      digits /= 3;
    }
    groups.emplace_back(m, std::move(gens));
  }
  return Covering(m, CoveringKind::kPauliBasis, std::move(groups));
}

CoveringReport verify_covering(const Covering& covering) {
  const int m = covering.num_qubits();
  if (m > kMaxDenseCoverageQubits) {
    throw CapabilityError("verify_covering scans 4^m labels; m <= 10 required");
  }
  CoveringReport report;
  const std::size_t labels = std::size_t{1} << (2 * m);
  std::vector<uint8_t> covered(labels, 0);
  for (std::size_t gi = 0; gi < covering.size(); gi++) {
    const auto& g = covering.group(gi);
    std::string problem = g.invariant_violation();
    if (!problem.empty()) {
      report.group_errors.push_back("group " + std::to_string(gi) + ": " + problem);
    }
    const std::size_t gens = g.generators().size();
    if (gens > 62) {
      continue;
    }
    for (uint64_t alpha = 0; alpha < (uint64_t{1} << gens); alpha++) {
      covered[g.element_bits(alpha) & label_mask(m)] = 1;
    }
  }
  for (std::size_t a = 0; a < labels; a++) {
    if (!covered[a]) {
      report.uncovered.emplace_back(a, m);
    }
  }
  report.ok = report.uncovered.empty() && report.group_errors.empty();
  return report;
}

}  // namespace pce

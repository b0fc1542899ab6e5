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

#include "pce/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pce/error.hpp"

namespace pce {

namespace {

constexpr int kMaxDenseOutcomeQubits = 8;
constexpr int kMaxOutcomeTableBits = 24;

void check_split(const PauliChannel& channel, int k, const StabilizerGroup& group) {
  const int n = channel.num_qubits();
  if (k < 0 || k > n) {
    throw UsageError("ancilla size k=" + std::to_string(k) + " out of range [0, " + std::to_string(n) + "]");
  }
  if (group.num_qubits() != n - k) {
    throw UsageError("stabilizer group acts on " + std::to_string(group.num_qubits()) + " qubits, expected n-k=" +
                     std::to_string(n - k));
  }
}

}  // namespace

Alg1Outcome simulate_round_alg1(const PauliChannel& channel, int k, const StabilizerGroup& group, Rng& rng) {
  check_split(channel, k, group);
  const uint64_t a = channel.sample_bits(rng);
  const uint64_t low = a & label_mask(k);
  const uint64_t high = k >= kMaxLabelQubits ? 0 : a >> (2 * k);
  return Alg1Outcome{PauliLabel(low, k), Syndrome{group.syndrome_bits(high), group.num_qubits()}};
}

uint64_t simulate_round_alg1_index(const PauliChannel& channel, int k, const StabilizerGroup& group, Rng& rng) {
  const uint64_t a = channel.sample_bits(rng);
  const uint64_t low = a & label_mask(k);
  const uint64_t high = k >= kMaxLabelQubits ? 0 : a >> (2 * k);
  return low | (group.syndrome_bits(high) << (2 * k));
}

OutcomeDistribution::OutcomeDistribution(int k, int m, std::vector<Entry> entries)
    : k_(k), m_(m), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.e != b.e ? a.e < b.e : a.v < b.v; });
}

double OutcomeDistribution::probability(uint64_t v, uint64_t e) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{v, e, 0.0},
                             [](const Entry& a, const Entry& b) { return a.e != b.e ? a.e < b.e : a.v < b.v; });
  return (it != entries_.end() && it->v == v && it->e == e) ? it->probability : 0.0;
}

std::vector<double> OutcomeDistribution::dense_table() const {
  if (2 * k_ + m_ > kMaxOutcomeTableBits) {
    throw CapabilityError("outcome table too large for dense form");
  }
  std::vector<double> table(std::size_t{1} << (2 * k_ + m_), 0.0);
  for (const auto& e : entries_) {
    table[e.v | (e.e << (2 * k_))] += e.probability;
  }
  return table;
}

OutcomeDistribution outcome_distribution_alg1(const PauliChannel& channel, int k, const StabilizerGroup& group) {
  check_split(channel, k, group);
  const int n = channel.num_qubits();
  const int m = n - k;
  if (channel.is_dense() && n > kMaxDenseOutcomeQubits) {
    throw CapabilityError("exact outcome distribution of a dense channel needs n <= 8");
  }
  std::map<std::pair<uint64_t, uint64_t>, double> acc;
  for (const auto& entry : channel.nonzero_entries()) {
    const uint64_t a = entry.label.bits();
    const uint64_t v = a & label_mask(k);
    const uint64_t c = k >= kMaxLabelQubits ? 0 : a >> (2 * k);
    acc[{v, group.syndrome_bits(c)}] += entry.probability;
  }
  std::vector<OutcomeDistribution::Entry> entries;
  entries.reserve(acc.size());
  for (const auto& [key, p] : acc) {
    entries.push_back({key.first, key.second, p});
  }
  return OutcomeDistribution(k, m, std::move(entries));
}

NoiseModel::NoiseModel(PauliChannel gate, PauliChannel prep, PauliChannel meas)
    : gate_(std::move(gate)), prep_(std::move(prep)), meas_(std::move(meas)) {
  if (prep_.num_qubits() != gate_.num_qubits() || meas_.num_qubits() != gate_.num_qubits()) {
    throw UsageError("noise model channels act on different qubit counts");
  }
  if (gate_.num_qubits() < 1) {
    throw UsageError("noise model needs at least one qubit");
  }
}

NoiseModel NoiseModel::noiseless(int n) {
  return NoiseModel(channels::identity(n), channels::identity(n), channels::identity(n));
}

double NoiseModel::spam_constant(const PauliLabel& a) const {
  return prep_.eigenvalue(a) * meas_.eigenvalue(a) * gate_.eigenvalue(a);
}

double NoiseModel::expected_statistic(const PauliLabel& a, int m) const {
  return spam_constant(a) * std::pow(gate_.eigenvalue(a), m);
}

Alg2Shot simulate_shot_alg2(const NoiseModel& model, int m, Rng& rng) {
  if (m < 0) {
    throw UsageError("concatenation length must be nonnegative");
  }
  const int n = model.num_qubits();
  Alg2Shot shot;
  shot.m = m;
  shot.gates.reserve(static_cast<std::size_t>(m) + 1);
  uint64_t v = 0;
  for (int t = 0; t <= m; t++) {
    uint64_t g = rng.bits(2 * n);
    shot.gates.emplace_back(g, n);
    v ^= g;
  }
  v ^= model.prep().sample_bits(rng);
  for (int t = 0; t <= m; t++) {
    v ^= model.gate().sample_bits(rng);
  }
  v ^= model.meas().sample_bits(rng);
  shot.v = PauliLabel(v, n);
  return shot;
}

uint64_t simulate_alg2_z(const NoiseModel& model, int m, Rng& rng) {
  const int n = model.num_qubits();
  // The gate draws cancel in z but are still consumed to keep the stream
  // aligned with simulate_shot_alg2.
  for (int t = 0; t <= m; t++) {
    (void)rng.bits(2 * n);
  }
  uint64_t z = model.prep().sample_bits(rng);
  for (int t = 0; t <= m; t++) {
    z ^= model.gate().sample_bits(rng);
  }
  z ^= model.meas().sample_bits(rng);
  return z;
}

int alg2_statistic(const Alg2Shot& shot, const PauliLabel& a) {
  if (a.num_qubits() != shot.v.num_qubits()) {
    throw UsageError("alg2_statistic: label size does not match shot");
  }
  int parity = symplectic_bits(a.bits(), shot.v.bits());
  for (const auto& g : shot.gates) {
    parity ^= symplectic_bits(a.bits(), g.bits());
  }
  return parity ? -1 : 1;
}

}  // namespace pce

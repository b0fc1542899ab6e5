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
#include <vector>

#include "pce/channel.hpp"
#include "pce/pauli.hpp"
#include "pce/rng.hpp"
#include "pce/stabilizer.hpp"

namespace pce {

// Shot-level simulation by label algebra only. A Pauli error P_a on one half
// of a Bell pair moves the Bell outcome by a, and applied to a stabilizer
// basis state it flips exactly the syndrome bits <g_j, a>, so no state
// vectors are needed.

/// Bell outcome v on the first k qubits and syndrome e on the remaining n - k.
struct Alg1Outcome {
  PauliLabel v;
  Syndrome e;
};

/// One round: draw a ~ p, return (a restricted to qubits [0, k),
/// syndrome of a restricted to qubits [k, n)). Requires group.num_qubits() == n - k.
Alg1Outcome simulate_round_alg1(const PauliChannel& channel, int k, const StabilizerGroup& group, Rng& rng);

/// Same draw as simulate_round_alg1, packed as v | (e << 2k).
uint64_t simulate_round_alg1_index(const PauliChannel& channel, int k, const StabilizerGroup& group, Rng& rng);

/// Exact round outcome distribution p(v, e) = sum over a with a_B = v and
/// syndrome(a_C) = e of p_a.
class OutcomeDistribution {
 public:
  struct Entry {
    uint64_t v;
    uint64_t e;
    double probability;
  };

  OutcomeDistribution(int k, int m, std::vector<Entry> entries);

  int ancilla_qubits() const { return k_; }
  int syndrome_bits() const { return m_; }

  /// Nonzero entries sorted by (e, v).
  const std::vector<Entry>& entries() const { return entries_; }

  double probability(uint64_t v, uint64_t e) const;

  /// Table indexed v + (e << 2k); requires k + m small enough (2^(2k+m) <= 2^24).
  std::vector<double> dense_table() const;

 private:
  int k_;
  int m_;
  std::vector<Entry> entries_;
};

/// Dense channels: n <= 8. Sparse channels: any n.
OutcomeDistribution outcome_distribution_alg1(const PauliChannel& channel, int k, const StabilizerGroup& group);

/// Pauli noise model for the gate-benchmarking circuit: every noisy gate is
/// P_a after `gate`; the Bell preparation and measurement carry effective
/// main-register Pauli channels `prep` and `meas`.
class NoiseModel {
 public:
  NoiseModel(PauliChannel gate, PauliChannel prep, PauliChannel meas);

  /// All three channels are the identity.
  static NoiseModel noiseless(int n);

  int num_qubits() const { return gate_.num_qubits(); }
  const PauliChannel& gate() const { return gate_; }
  const PauliChannel& prep() const { return prep_; }
  const PauliChannel& meas() const { return meas_; }

  /// Closed form of E[F_a(m)] = A_a lambda_a^m with
  /// A_a = lambda^prep_a lambda^meas_a lambda^gate_a.
  double expected_statistic(const PauliLabel& a, int m) const;
  double spam_constant(const PauliLabel& a) const;

 private:
  PauliChannel gate_;
  PauliChannel prep_;
  PauliChannel meas_;
};

struct Alg2Shot {
  int m = 0;
  std::vector<PauliLabel> gates;  // a_0 ... a_m
  PauliLabel v;
};

/// Draw order: gates a_0..a_m, then the prep error, the m + 1 gate errors,
/// and the measurement error.
Alg2Shot simulate_shot_alg2(const NoiseModel& model, int m, Rng& rng);

/// z = v xor a_0 xor ... xor a_m for the shot simulate_shot_alg2 would draw
/// from the same generator state.
uint64_t simulate_alg2_z(const NoiseModel& model, int m, Rng& rng);

/// (-1)^(<a, v> + sum_t <a, a_t>).
int alg2_statistic(const Alg2Shot& shot, const PauliLabel& a);

}  // namespace pce

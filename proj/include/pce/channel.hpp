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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pce/pauli.hpp"
#include "pce/rng.hpp"

namespace pce {

/// Largest qubit count for which dense 4^n vectors are materialized.
inline constexpr int kDenseMaxQubits = 13;

/// Tolerance on sum(p) = 1 at construction. Inputs outside it are rejected.
inline constexpr double kNormalizationTolerance = 1e-12;

/// Forward transform, error rates -> eigenvalues. Length must be 4^n.
std::vector<double> wht_forward(std::span<const double> error_rates);

/// Inverse transform, eigenvalues -> error rates (includes the 4^-n factor).
std::vector<double> wht_inverse(std::span<const double> eigenvalues);

/// Returns n such that size == 4^n, or throws UsageError.
int qubits_from_dense_size(std::size_t size);

struct SparseEntry {
  PauliLabel label;
  double probability;
};

/// Pauli channel Lambda(rho) = sum_a p_a P_a rho P_a.
///
/// Either dense (p and lambda vectors of length 4^n, n <= kDenseMaxQubits) or
/// sparse (support list; eigenvalues only through eigenvalue()). Sampling
/// tables and dense eigenvalues are built in the constructor and never
/// mutated afterwards, so instances can be shared freely across threads.
class PauliChannel {
 public:
  static PauliChannel from_error_rates(std::vector<double> error_rates);
  static PauliChannel from_eigenvalues(std::vector<double> eigenvalues);
  static PauliChannel from_sparse(int n, std::vector<SparseEntry> support);

  int num_qubits() const { return n_; }
  bool is_dense() const { return dense_; }

  /// Dense representations. Throw UsageError on a sparse channel.
  std::span<const double> error_rates() const&;
  std::span<const double> eigenvalues() const&;
  // Views into a temporary would dangle.
  std::span<const double> error_rates() const&& = delete;
  std::span<const double> eigenvalues() const&& = delete;

  /// Nonzero-probability support of a sparse channel, sorted by label.
  /// Throws UsageError on a dense channel; use nonzero_entries() instead.
  const std::vector<SparseEntry>& support() const;

  /// Nonzero-probability entries in label order, for either representation.
  std::vector<SparseEntry> nonzero_entries() const;

  double error_rate(const PauliLabel& a) const;

  /// lambda_b: table lookup when dense, O(|support|) sum when sparse.
  double eigenvalue(const PauliLabel& b) const;

  /// Draws a label with probability p_a.
  PauliLabel sample(Rng& rng) const { return PauliLabel(sample_bits(rng), n_); }
  uint64_t sample_bits(Rng& rng) const;

  /// Dense copy of a sparse channel (n <= kDenseMaxQubits).
  PauliChannel to_dense() const;

 private:
  PauliChannel() = default;
  void build_sampler();

  int n_ = 0;
  bool dense_ = false;
  std::vector<double> p_;
  std::vector<double> lambda_;
  std::vector<SparseEntry> support_;
  // Dense: Walker alias table. Sparse: cumulative distribution over support_.
  std::vector<double> alias_prob_;
  std::vector<uint32_t> alias_index_;
  std::vector<double> cumulative_;
};

/// O(|support|) eigenvalue from the sparse support.
double eigenvalue_query(const PauliChannel& channel, const PauliLabel& b);

PauliLabel sample_error(const PauliChannel& channel, Rng& rng);

namespace channels {

PauliChannel identity(int n);

/// p_0 = 1 - rate, p_a = rate / (4^n - 1) for a != 0.
PauliChannel depolarizing(int n, double rate);

/// Uniform error rates: lambda_a = 0 for all a != 0.
PauliChannel fully_depolarizing(int n);

/// Tensor product; factor i acts on the qubits following factors 0..i-1.
PauliChannel tensor(std::span<const PauliChannel> factors);

/// Eigenvalues lambda_0 = 1, lambda_a = sign, 0 elsewhere. Requires a != 0.
PauliChannel spike(int n, const PauliLabel& a, int sign);

/// Error rates drawn from the flat Dirichlet distribution over all 4^n labels.
PauliChannel random_dirichlet(int n, Rng& rng);

/// `support_size` distinct uniformly random labels with flat Dirichlet weights.
PauliChannel random_sparse(int n, std::size_t support_size, Rng& rng);

}  // namespace channels

}  // namespace pce

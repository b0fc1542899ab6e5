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

#include "pce/channel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "pce/error.hpp"
#include "pce/wht.hpp"

namespace pce {

namespace {

constexpr double kEigenvalueTolerance = 1e-12;

void require_dense_size(int n) {
  if (n > kDenseMaxQubits) {
    throw CapabilityError("dense Pauli channel requested for n=" + std::to_string(n) + " > " +
                          std::to_string(kDenseMaxQubits));
  }
}

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw UsageError("non-finite entry in dense Pauli vector");
    }
  }
}

// Values within tolerance of zero from below come from rounding in the
// transform; they are set to exactly zero. Anything further below is rejected.
void validate_distribution(std::vector<double>& p) {
  double total = 0;
  for (double& v : p) {
    if (v < 0) {
      if (v < -kNormalizationTolerance) {
        throw UsageError("negative Pauli error rate " + std::to_string(v));
      }
      v = 0;
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw UsageError("Pauli error rates sum to " + std::to_string(total) + ", not 1");
  }
}

}  // namespace

int qubits_from_dense_size(std::size_t size) {
  int n = 0;
  std::size_t s = 1;
  while (s < size) {
    s <<= 2;
    n++;
  }
  if (s != size || size == 0) {
    throw UsageError("dense Pauli vector length " + std::to_string(size) + " is not a power of 4");
  }
  return n;
}

std::vector<double> wht_forward(std::span<const double> error_rates) {
  int n = qubits_from_dense_size(error_rates.size());
  require_finite(error_rates);
  std::vector<double> out(error_rates.begin(), error_rates.end());
  symplectic_transform_qubits<double>(out, 0, n);
  return out;
}

std::vector<double> wht_inverse(std::span<const double> eigenvalues) {
  int n = qubits_from_dense_size(eigenvalues.size());
  require_finite(eigenvalues);
  std::vector<double> out(eigenvalues.begin(), eigenvalues.end());
  symplectic_transform_qubits<double>(out, 0, n);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (double& v : out) {
    v *= scale;
  }
  return out;
}

PauliChannel PauliChannel::from_error_rates(std::vector<double> error_rates) {
  int n = qubits_from_dense_size(error_rates.size());
  require_dense_size(n);
  require_finite(error_rates);
  validate_distribution(error_rates);
  PauliChannel ch;
  ch.n_ = n;
  ch.dense_ = true;
  ch.lambda_ = wht_forward(error_rates);
  ch.lambda_[0] = 1.0;
  ch.p_ = std::move(error_rates);
  ch.build_sampler();
  return ch;
}

PauliChannel PauliChannel::from_eigenvalues(std::vector<double> eigenvalues) {
  int n = qubits_from_dense_size(eigenvalues.size());
  require_dense_size(n);
  require_finite(eigenvalues);
  if (std::abs(eigenvalues[0] - 1.0) > kEigenvalueTolerance) {
    throw UsageError("Pauli eigenvalue lambda_0 must be 1");
  }
  eigenvalues[0] = 1.0;
  for (double v : eigenvalues) {
    if (std::abs(v) > 1.0 + kEigenvalueTolerance) {
      throw UsageError("Pauli eigenvalue outside [-1, 1]: " + std::to_string(v));
    }
  }
  std::vector<double> p = wht_inverse(eigenvalues);
  validate_distribution(p);
  PauliChannel ch;
  ch.n_ = n;
  ch.dense_ = true;
  ch.p_ = std::move(p);
  ch.lambda_ = std::move(eigenvalues);
  ch.build_sampler();
  return ch;
}

PauliChannel PauliChannel::from_sparse(int n, std::vector<SparseEntry> support) {
  if (n < 0 || n > kMaxLabelQubits) {
    throw CapabilityError("sparse Pauli channel qubit count out of range: " + std::to_string(n));
  }
  double total = 0;
  for (const auto& e : support) {
    if (e.label.num_qubits() != n) {
      throw UsageError("sparse entry " + e.label.str() + " does not act on " + std::to_string(n) + " qubits");
    }
    if (!std::isfinite(e.probability) || e.probability < 0) {
      throw UsageError("invalid probability for sparse entry " + e.label.str());
    }
    total += e.probability;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw UsageError("sparse Pauli error rates sum to " + std::to_string(total) + ", not 1");
  }
  std::sort(support.begin(), support.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.label.bits() < b.label.bits(); });
  for (std::size_t i = 1; i < support.size(); i++) {
    if (support[i].label == support[i - 1].label) {
      throw UsageError("duplicate sparse entry " + support[i].label.str());
    }
  }
  std::erase_if(support, [](const SparseEntry& e) { return e.probability == 0.0; });
  PauliChannel ch;
  ch.n_ = n;
  ch.dense_ = false;
  ch.support_ = std::move(support);
  ch.build_sampler();
  return ch;
}

std::span<const double> PauliChannel::error_rates() const& {
  if (!dense_) {
    throw UsageError("error_rates() requires a dense Pauli channel");
  }
  return p_;
}

std::span<const double> PauliChannel::eigenvalues() const& {
  if (!dense_) {
    throw UsageError("eigenvalues() requires a dense Pauli channel; use eigenvalue_query");
  }
  return lambda_;
}

const std::vector<SparseEntry>& PauliChannel::support() const {
  if (dense_) {
    throw UsageError("support() requires a sparse Pauli channel");
  }
  return support_;
}

std::vector<SparseEntry> PauliChannel::nonzero_entries() const {
  if (!dense_) {
    return support_;
  }
  std::vector<SparseEntry> out;
  for (std::size_t a = 0; a < p_.size(); a++) {
    if (p_[a] > 0) {
      out.push_back({PauliLabel(a, n_), p_[a]});
    }
  }
  return out;
}

double PauliChannel::error_rate(const PauliLabel& a) const {
  if (a.num_qubits() != n_) {
    throw UsageError("label size does not match channel");
  }
  if (dense_) {
    return p_[a.bits()];
  }
  auto it = std::lower_bound(support_.begin(), support_.end(), a.bits(),
                             [](const SparseEntry& e, uint64_t bits) { return e.label.bits() < bits; });
  return (it != support_.end() && it->label == a) ? it->probability : 0.0;
}

double PauliChannel::eigenvalue(const PauliLabel& b) const {
  if (b.num_qubits() != n_) {
    throw UsageError("label size does not match channel");
  }
  if (dense_) {
    return lambda_[b.bits()];
  }
  return eigenvalue_query(*this, b);
}

void PauliChannel::build_sampler() {
  if (!dense_) {
    cumulative_.resize(support_.size());
    double acc = 0;
    for (std::size_t i = 0; i < support_.size(); i++) {
      acc += support_[i].probability;
      cumulative_[i] = acc;
    }
    return;
  }
  // Vose's alias method.
  const std::size_t size = p_.size();
  alias_prob_.assign(size, 1.0);
  alias_index_.resize(size);
  std::vector<double> scaled(size);
  std::vector<uint32_t> small;
  std::vector<uint32_t> large;
  for (std::size_t i = 0; i < size; i++) {
    alias_index_[i] = static_cast<uint32_t>(i);
    scaled[i] = p_[i] * static_cast<double>(size);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    uint32_t s = small.back();
    small.pop_back();
    uint32_t l = large.back();
    alias_prob_[s] = scaled[s];
    alias_index_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (uint32_t i : large) {
    alias_prob_[i] = 1.0;
  }
  for (uint32_t i : small) {
    alias_prob_[i] = 1.0;
  }
}

uint64_t PauliChannel::sample_bits(Rng& rng) const {
  if (dense_) {
    uint64_t idx = rng.bits(2 * n_);
    return rng.uniform() < alias_prob_[idx] ? idx : alias_index_[idx];
  }
  double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), support_.size() - 1);
  return support_[i].label.bits();
}

PauliChannel PauliChannel::to_dense() const {
  if (dense_) {
    return *this;
  }
  require_dense_size(n_);
  std::vector<double> p(std::size_t{1} << (2 * n_), 0.0);
  for (const auto& e : support_) {
    p[e.label.bits()] = e.probability;
  }
  return from_error_rates(std::move(p));
}

double eigenvalue_query(const PauliChannel& channel, const PauliLabel& b) {
  if (b.num_qubits() != channel.num_qubits()) {
    throw UsageError("label size does not match channel");
  }
  double acc = 0;
  if (channel.is_dense()) {
    auto p = channel.error_rates();
    for (std::size_t a = 0; a < p.size(); a++) {
      acc += symplectic_bits(a, b.bits()) ? -p[a] : p[a];
    }
    return acc;
  }
  for (const auto& e : channel.support()) {
    acc += symplectic_bits(e.label.bits(), b.bits()) ? -e.probability : e.probability;
  }
  return acc;
}

PauliLabel sample_error(const PauliChannel& channel, Rng& rng) { return channel.sample(rng); }

namespace channels {

PauliChannel identity(int n) { return PauliChannel::from_sparse(n, {{PauliLabel::identity(n), 1.0}}); }

PauliChannel depolarizing(int n, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw UsageError("depolarizing rate must lie in [0, 1]");
  }
  require_dense_size(n);
  const std::size_t size = std::size_t{1} << (2 * n);
  if (size == 1) {
    return PauliChannel::from_error_rates({1.0});
  }
  std::vector<double> p(size, rate / static_cast<double>(size - 1));
  p[0] = 1.0 - rate;
  return PauliChannel::from_error_rates(std::move(p));
}

PauliChannel fully_depolarizing(int n) {
  require_dense_size(n);
  const std::size_t size = std::size_t{1} << (2 * n);
  return PauliChannel::from_error_rates(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

PauliChannel tensor(std::span<const PauliChannel> factors) {
  int n = 0;
  for (const auto& f : factors) {
    n += f.num_qubits();
  }
  if (n > kMaxLabelQubits) {
    throw CapabilityError("tensor product exceeds 32 qubits");
  }
  if (n <= kDenseMaxQubits) {
    std::vector<double> p{1.0};
    for (const auto& f : factors) {
      PauliChannel dense = f.to_dense();
      auto fp = dense.error_rates();
      std::vector<double> next(p.size() * fp.size());
      for (std::size_t hi = 0; hi < fp.size(); hi++) {
        for (std::size_t lo = 0; lo < p.size(); lo++) {
          next[lo + hi * p.size()] = p[lo] * fp[hi];
        }
      }
      p = std::move(next);
    }
    // Rounding in the products can push the sum a few ulps from 1.
    return PauliChannel::from_error_rates(std::move(p));
  }
  std::vector<SparseEntry> support{{PauliLabel::identity(0), 1.0}};
  for (const auto& f : factors) {
    std::vector<SparseEntry> next;
    auto entries = f.nonzero_entries();
    for (const auto& e : entries) {
      for (const auto& s : support) {
        next.push_back({PauliLabel::concat(s.label, e.label), s.probability * e.probability});
      }
    }
    support = std::move(next);
  }
  return PauliChannel::from_sparse(n, std::move(support));
}

PauliChannel spike(int n, const PauliLabel& a, int sign) {
  if (a.num_qubits() != n) {
    throw UsageError("spike label does not act on n qubits");
  }
  if (a.is_identity()) {
    throw UsageError("spike channel needs a non-identity label (lambda_0 must stay 1)");
  }
  if (sign != 1 && sign != -1) {
    throw UsageError("spike sign must be +1 or -1");
  }
  require_dense_size(n);
  std::vector<double> lambda(std::size_t{1} << (2 * n), 0.0);
  lambda[0] = 1.0;
  lambda[a.bits()] = static_cast<double>(sign);
  return PauliChannel::from_eigenvalues(std::move(lambda));
}

PauliChannel random_dirichlet(int n, Rng& rng) {
  require_dense_size(n);
  std::vector<double> p(std::size_t{1} << (2 * n));
  double total = 0;
  for (double& v : p) {
    v = rng.exponential();
    total += v;
  }
  for (double& v : p) {
    v /= total;
  }
  return PauliChannel::from_error_rates(std::move(p));
}

PauliChannel random_sparse(int n, std::size_t support_size, Rng& rng) {
  if (n < 0 || n > kMaxLabelQubits) {
    throw CapabilityError("random_sparse qubit count out of range");
  }
  const long double label_count = std::ldexp(1.0L, 2 * n);
  if (support_size == 0 || static_cast<long double>(support_size) > label_count) {
    throw UsageError("random_sparse support size must be in [1, 4^n]");
  }
  std::unordered_set<uint64_t> seen;
  std::vector<SparseEntry> support;
  double total = 0;
  while (support.size() < support_size) {
    uint64_t bits = rng.bits(2 * n);
    if (!seen.insert(bits).second) {
      continue;
    }
    double w = rng.exponential();
    total += w;
    support.push_back({PauliLabel(bits, n), w});
  }
  for (auto& e : support) {
    e.probability /= total;
  }
  return PauliChannel::from_sparse(n, std::move(support));
}

}  // namespace channels

}  // namespace pce

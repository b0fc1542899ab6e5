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


#include "pce/estimation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "pce/error.hpp"
#include "pce/parallel.hpp"
#include "pce/wht.hpp"

namespace pce {

namespace {

// Rounds simulated per task. Small enough to balance a few groups over
// several workers, large enough to amortize task dispatch.
constexpr int64_t kRoundsPerTask = int64_t{1} << 14;

// Dense accumulation keeps 4^n sums plus per-group histograms.
constexpr int kDenseAccumulatorQubits = 12;

}  // namespace

double plugin_stderr(double mean, int64_t shots) {
  if (shots <= 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(shots));
}

EstimateSet EstimateSet::dense(int n, std::vector<double> lambda_hat, std::vector<int64_t> shots,
                               std::vector<double> stderrs) {
  if (n < 0 || n > kDenseMaxQubits) {
    throw CapabilityError("dense estimate set needs n <= " + std::to_string(kDenseMaxQubits));
  }
  const std::size_t size = std::size_t{1} << (2 * n);
  if (lambda_hat.size() != size || shots.size() != size || stderrs.size() != size) {
    throw UsageError("dense estimate set needs 4^n entries per column");
  }
  EstimateSet out;
  out.n_ = n;
  out.lambda_ = std::move(lambda_hat);
  out.shots_ = std::move(shots);
  out.stderr_ = std::move(stderrs);
  return out;
}

EstimateSet EstimateSet::sparse(int n, std::vector<PauliLabel> labels, std::vector<double> lambda_hat,
                                std::vector<int64_t> shots, std::vector<double> stderrs) {
  if (lambda_hat.size() != labels.size() || shots.size() != labels.size() || stderrs.size() != labels.size()) {
    throw UsageError("estimate set columns differ in length");
  }
  for (const auto& a : labels) {
    if (a.num_qubits() != n) {
      throw UsageError("estimate label " + a.str() + " does not act on n=" + std::to_string(n) + " qubits");
    }
  }
  EstimateSet out;
  out.n_ = n;
  out.sparse_ = true;
  out.labels_ = std::move(labels);
  out.lambda_ = std::move(lambda_hat);
  out.shots_ = std::move(shots);
  out.stderr_ = std::move(stderrs);
  return out;
}

double EstimateSet::lambda(const PauliLabel& a) const {
  if (a.num_qubits() != n_) {
    throw UsageError("estimate lookup: label size does not match");
  }
  if (!sparse_) {
    return lambda_[a.bits()];
  }
  auto it = std::find(labels_.begin(), labels_.end(), a);
  if (it == labels_.end()) {
    throw UsageError("label " + a.str() + " was not estimated");
  }
  return lambda_[static_cast<std::size_t>(it - labels_.begin())];
}

EstimateSet EstimateSet::clamped() const {
  EstimateSet out = *this;
  for (auto& x : out.lambda_) {
    x = std::clamp(x, -1.0, 1.0);
  }
  return out;
}

double EstimateSet::max_abs_error(const PauliChannel& truth) const {
  if (truth.num_qubits() != n_) {
    throw UsageError("max_abs_error: channel size does not match estimates");
  }
  double worst = 0;
  if (!sparse_ && truth.is_dense()) {
    auto lam = truth.eigenvalues();
    for (std::size_t i = 0; i < lambda_.size(); i++) {
      worst = std::max(worst, std::abs(lambda_[i] - lam[i]));
    }
    return worst;
  }
  for (std::size_t i = 0; i < lambda_.size(); i++) {
    worst = std::max(worst, std::abs(lambda_[i] - truth.eigenvalue(label(i))));
  }
  return worst;
}

Alg1Accumulator::Alg1Accumulator(int n, int k, const Covering& covering)
    : n_(n), k_(k), covering_(&covering), dense_(true) {
  if (k < 0 || k > n || covering.num_qubits() != n - k) {
    throw UsageError("accumulator: covering must act on n-k qubits");
  }
  if (n > kDenseAccumulatorQubits) {
    throw CapabilityError("dense estimation supports n <= " + std::to_string(kDenseAccumulatorQubits) +
                          "; pass an explicit label list");
  }
  histograms_.resize(covering.size());
  rounds_.assign(covering.size(), 0);
}

Alg1Accumulator::Alg1Accumulator(int n, int k, const Covering& covering, std::vector<PauliLabel> labels)
    : n_(n), k_(k), covering_(&covering), dense_(false), labels_(std::move(labels)) {
  if (k < 0 || k > n || covering.num_qubits() != n - k) {
    throw UsageError("accumulator: covering must act on n-k qubits");
  }
  rounds_.assign(covering.size(), 0);
  targets_.resize(covering.size());
  sums_.assign(labels_.size(), 0);
  counts_.assign(labels_.size(), 0);
  const int m = n - k;
  for (std::size_t li = 0; li < labels_.size(); li++) {
    const PauliLabel& a = labels_[li];
    if (a.num_qubits() != n) {
      throw UsageError("queried label " + a.str() + " does not act on n=" + std::to_string(n) + " qubits");
    }
    const uint64_t u = a.bits() & label_mask(k);
    const PauliLabel s(k >= kMaxLabelQubits ? 0 : a.bits() >> (2 * k), m);
    auto groups = covering.groups_containing(s);
    if (groups.empty()) {
      throw UsageError("label " + a.str() + " is not covered by the covering");
    }
    for (std::size_t g : groups) {
      targets_[g].push_back(Target{li, u, *covering.group(g).coefficients(s)});
    }
  }
}

void Alg1Accumulator::add(std::size_t group, uint64_t outcome) {
  rounds_[group]++;
  if (dense_) {
    auto& h = histograms_[group];
    if (h.empty()) {
      h.assign(std::size_t{1} << (n_ + k_), 0);
    }
    h[outcome]++;
    return;
  }
  const uint64_t v = outcome & label_mask(k_);
  const uint64_t e = outcome >> (2 * k_);
  for (const auto& t : targets_[group]) {
    const int parity = symplectic_bits(t.u, v) ^ (std::popcount(t.alpha & e) & 1);
    sums_[t.label_index] += parity ? -1 : 1;
    counts_[t.label_index]++;
  }
}

void Alg1Accumulator::add(std::size_t group, const Alg1Outcome& outcome) {
  add(group, outcome.v.bits() | (outcome.e.bits << (2 * k_)));
}

void Alg1Accumulator::merge(const Alg1Accumulator& other) {
  if (other.covering_ != covering_ || other.dense_ != dense_ || other.n_ != n_ || other.k_ != k_ ||
      other.labels_ != labels_) {
    throw UsageError("cannot merge accumulators of different experiments");
  }
  for (std::size_t g = 0; g < rounds_.size(); g++) {
    rounds_[g] += other.rounds_[g];
  }
  if (!dense_) {
    for (std::size_t i = 0; i < sums_.size(); i++) {
      sums_[i] += other.sums_[i];
      counts_[i] += other.counts_[i];
    }
    return;
  }
  for (std::size_t g = 0; g < histograms_.size(); g++) {
    const auto& src = other.histograms_[g];
    if (src.empty()) {
      continue;
    }
    auto& dst = histograms_[g];
    if (dst.empty()) {
      dst = src;
      continue;
    }
    for (std::size_t i = 0; i < dst.size(); i++) {
      dst[i] += src[i];
    }
  }
}

EstimateSet Alg1Accumulator::finish() const {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!dense_) {
    std::vector<double> lambda(labels_.size()), err(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); i++) {
      lambda[i] = counts_[i] > 0 ? static_cast<double>(sums_[i]) / static_cast<double>(counts_[i]) : nan;
      err[i] = plugin_stderr(lambda[i], counts_[i]);
    }
    return EstimateSet::sparse(n_, labels_, std::move(lambda), counts_, std::move(err));
  }
  const int m = n_ - k_;
  const std::size_t labels = std::size_t{1} << (2 * n_);
  const std::size_t u_count = std::size_t{1} << (2 * k_);
  std::vector<int64_t> sums(labels, 0);
  std::vector<int64_t> counts(labels, 0);
  std::vector<int64_t> t;
  for (std::size_t g = 0; g < histograms_.size(); g++) {
    if (rounds_[g] == 0) {
      continue;
    }
    t = histograms_[g];
    std::span<int64_t> view(t);
    symplectic_transform_qubits<int64_t>(view, 0, k_);
    xor_transform_bits<int64_t>(view, 2 * k_, m);
    const auto& group = covering_->group(g);
    for (uint64_t alpha = 0; alpha < (uint64_t{1} << m); alpha++) {
      const uint64_t base = group.element_bits(alpha) << (2 * k_);
      const int64_t* row = t.data() + (alpha << (2 * k_));
      for (std::size_t u = 0; u < u_count; u++) {
        sums[base | u] += row[u];
        counts[base | u] += rounds_[g];
      }
    }
  }
  std::vector<double> lambda(labels), err(labels);
  for (std::size_t a = 0; a < labels; a++) {
    lambda[a] = counts[a] > 0 ? static_cast<double>(sums[a]) / static_cast<double>(counts[a]) : nan;
    err[a] = plugin_stderr(lambda[a], counts[a]);
  }
  return EstimateSet::dense(n_, std::move(lambda), std::move(counts), std::move(err));
}

EstimateSet estimate_alg1(const PauliChannel& channel, int k, const Covering& covering, int64_t total_samples,
                          const RunOptions& options, const std::vector<PauliLabel>& labels) {
  const int n = channel.num_qubits();
  if (k < 0 || k > n) {
    throw UsageError("ancilla size k=" + std::to_string(k) + " out of range [0, " + std::to_string(n) + "]");
  }
  if (covering.num_qubits() != n - k) {
    throw UsageError("covering acts on " + std::to_string(covering.num_qubits()) + " qubits, expected n-k=" +
                     std::to_string(n - k));
  }
  if (covering.size() == 0 || total_samples < static_cast<int64_t>(covering.size())) {
    throw UsageError("fewer samples than covering size (N=" + std::to_string(total_samples) + ", |O|=" +
                     std::to_string(covering.size()) + ")");
  }
  if (labels.empty() && n > kDenseAccumulatorQubits) {
    throw UsageError("n=" + std::to_string(n) + " needs an explicit label set; dense reporting stops at n=" +
                     std::to_string(kDenseAccumulatorQubits));
  }
  const int64_t rounds = total_samples / static_cast<int64_t>(covering.size());
  const int64_t tasks_per_group = (rounds + kRoundsPerTask - 1) / kRoundsPerTask;
  const std::size_t tasks = covering.size() * static_cast<std::size_t>(tasks_per_group);
  const int workers = worker_count(options.threads, tasks);

  auto make = [&] {
    return labels.empty() ? Alg1Accumulator(n, k, covering) : Alg1Accumulator(n, k, covering, labels);
  };
  std::vector<Alg1Accumulator> acc;
  acc.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; w++) {
    acc.push_back(make());
  }
  parallel_for(tasks, workers, [&](std::size_t task, std::size_t worker) {
    const std::size_t g = task / static_cast<std::size_t>(tasks_per_group);
    const int64_t chunk = static_cast<int64_t>(task % static_cast<std::size_t>(tasks_per_group));
    const int64_t begin = chunk * kRoundsPerTask;
    const int64_t end = std::min(rounds, begin + kRoundsPerTask);
    const StabilizerGroup& group = covering.group(g);
    const uint64_t stream = derive_stream(options.stream, g);
    for (int64_t i = begin; i < end; i++) {
      Rng rng = Rng::for_stream(options.seed, stream, static_cast<uint64_t>(i));
      acc[worker].add(g, simulate_round_alg1_index(channel, k, group, rng));
    }
  });
  for (int w = 1; w < workers; w++) {
    acc[0].merge(acc[static_cast<std::size_t>(w)]);
  }
  return acc[0].finish();
}

int64_t required_samples(int n, int k, double epsilon, double delta, std::size_t covering_size) {
  if (n < 0 || k < 0 || k > n) {
    throw UsageError("required_samples: need 0 <= k <= n");
  }
  if (!(epsilon > 0 && epsilon <= 1)) {
    throw UsageError("required_samples: epsilon must lie in (0, 1]");
  }
  if (!(delta > 0 && delta < 1)) {
    throw UsageError("required_samples: delta must lie in (0, 1)");
  }
  if (covering_size == 0) {
    throw UsageError("required_samples: empty covering");
  }
  const double log_term = std::log(2.0) + n * std::log(4.0) - std::log(delta);
  const double per_group = std::ceil(2 * log_term / (epsilon * epsilon));
  return static_cast<int64_t>(covering_size) * static_cast<int64_t>(per_group);
}

}  // namespace pce

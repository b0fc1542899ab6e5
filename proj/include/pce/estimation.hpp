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
#include <vector>

#include "pce/channel.hpp"
#include "pce/pauli.hpp"
#include "pce/rng.hpp"
#include "pce/sampler.hpp"
#include "pce/stabilizer.hpp"

namespace pce {

/// Seeding and parallelism for a Monte Carlo run. Every shot draws from
/// Rng::for_stream(seed, <derived stream>, <shot index>), so output is a
/// function of (seed, stream) alone and independent of `threads`.
struct RunOptions {
  uint64_t seed = 0;
  uint64_t stream = 0;
  int threads = 1;
};

/// Stream id for sub-experiment `sub` of experiment `base`.
constexpr uint64_t derive_stream(uint64_t base, uint64_t sub) { return mix64(base * 0x9E3779B97F4A7C15ULL + sub + 1); }

/// Per-label eigenvalue estimates with shot counts and plug-in standard errors.
///
/// Dense sets hold all 4^n labels indexed by label bits; sparse sets hold an
/// explicit label list. Estimates are raw (unclamped); see clamped().
class EstimateSet {
 public:
  static EstimateSet dense(int n, std::vector<double> lambda_hat, std::vector<int64_t> shots,
                           std::vector<double> stderrs);
  static EstimateSet sparse(int n, std::vector<PauliLabel> labels, std::vector<double> lambda_hat,
                            std::vector<int64_t> shots, std::vector<double> stderrs);

  int num_qubits() const { return n_; }
  bool is_dense() const { return !sparse_; }
  std::size_t size() const { return lambda_.size(); }

  PauliLabel label(std::size_t i) const { return sparse_ ? labels_[i] : PauliLabel(i, n_); }
  double lambda_hat(std::size_t i) const { return lambda_[i]; }
  int64_t shots(std::size_t i) const { return shots_[i]; }
  double stderr_at(std::size_t i) const { return stderr_[i]; }

  /// Estimate for `a`; throws UsageError if a sparse set does not hold it.
  double lambda(const PauliLabel& a) const;

  std::span<const double> values() const { return lambda_; }

  /// Copy with every estimate clipped to [-1, 1].
  EstimateSet clamped() const;

  /// max_a |lambda_hat_a - lambda_a| over the held labels.
  double max_abs_error(const PauliChannel& truth) const;

 private:
  int n_ = 0;
  bool sparse_ = false;
  std::vector<PauliLabel> labels_;
  std::vector<double> lambda_;
  std::vector<int64_t> shots_;
  std::vector<double> stderr_;
};

/// sqrt((1 - x^2) / shots) for a mean x of +-1 outcomes.
double plugin_stderr(double mean, int64_t shots);

/// Accumulates round outcomes of the ancilla-assisted estimator and turns
/// them into eigenvalue estimates.
///
/// Every outcome (v, e) measured with group S contributes (-1)^(<u,v> + alpha.e)
/// to lambda_hat of u (+) element(S, alpha) for all u and alpha, and one shot to
/// its count. The dense mode stores a histogram per group and applies one
/// symplectic transform on v and one XOR transform on e at the end; the
/// sparse mode updates an explicit label list per round.
class Alg1Accumulator {
 public:
  /// Dense mode; requires n <= kDenseMaxQubits.
  Alg1Accumulator(int n, int k, const Covering& covering);
  /// Sparse mode over `labels`; each label must be covered by the covering.
  Alg1Accumulator(int n, int k, const Covering& covering, std::vector<PauliLabel> labels);

  /// `outcome` is v | (syndrome << 2k).
  void add(std::size_t group, uint64_t outcome);
  void add(std::size_t group, const Alg1Outcome& outcome);
  void merge(const Alg1Accumulator& other);

  EstimateSet finish() const;

 private:
  struct Target {
    std::size_t label_index;
    uint64_t u;
    uint64_t alpha;
  };

  int n_;
  int k_;
  const Covering* covering_;
  bool dense_;
  std::vector<std::vector<int64_t>> histograms_;
  std::vector<int64_t> rounds_;
  std::vector<PauliLabel> labels_;
  std::vector<std::vector<Target>> targets_;
  std::vector<int64_t> sums_;
  std::vector<int64_t> counts_;
};

/// Runs floor(N / |covering|) rounds per group on `channel` and returns the
/// merged estimates. `labels` selects sparse reporting (required when
/// n > kDenseMaxQubits). Throws UsageError if N < |covering|.
EstimateSet estimate_alg1(const PauliChannel& channel, int k, const Covering& covering, int64_t total_samples,
                          const RunOptions& options, const std::vector<PauliLabel>& labels = {});

/// covering_size * ceil(2 ln(2 * 4^n / delta) / eps^2): Hoeffding for one
/// +-1 mean at failure probability 4^-n delta, union bound over 4^n labels.
int64_t required_samples(int n, int k, double epsilon, double delta, std::size_t covering_size);

struct DecayPoint {
  int m;
  double f_mean;
  int64_t shots;
};

struct DecaySeries {
  PauliLabel label;
  std::vector<DecayPoint> points;
};

struct DecayFitOptions {
  /// Points with mean at or below this are not used.
  double floor = 0.05;
};

struct DecayFit {
  double amplitude = 1;
  double rate = 1;
  double amplitude_stderr = 0;
  double rate_stderr = 0;
  int points_used = 0;
  double residual_norm = 0;
  std::vector<std::string> warnings;
};

/// Weighted least squares of ln F = ln A + m ln lambda with weights R_m F^2.
/// Throws FitError when fewer than two points survive the floor.
DecayFit fit_decay(const DecaySeries& series, const DecayFitOptions& options = {});

struct BenchmarkResult {
  EstimateSet estimates;
  std::vector<DecaySeries> series;
  /// Per series: empty on success, otherwise the fit error message.
  std::vector<std::string> fit_errors;
  std::vector<DecayFit> fits;
};

/// Default concatenation ladder.
std::vector<int> default_lengths();

/// Runs R shots for every m in `lengths`, averages the per-label statistics
/// and fits each label's decay. Dense reporting (all 4^n labels) unless
/// `labels` is given. Failed fits are reported in fit_errors, not thrown.
BenchmarkResult benchmark_alg2(const NoiseModel& model, const std::vector<int>& lengths, int64_t repetitions,
                               const RunOptions& options, const std::vector<PauliLabel>& labels = {},
                               const DecayFitOptions& fit_options = {});

}  // namespace pce

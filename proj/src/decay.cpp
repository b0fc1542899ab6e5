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


#include <algorithm>
#include <cmath>
#include <limits>

#include "pce/error.hpp"
#include "pce/estimation.hpp"
#include "pce/parallel.hpp"
#include "pce/wht.hpp"

namespace pce {

namespace {

constexpr int64_t kShotsPerTask = int64_t{1} << 14;
constexpr int kDenseBenchmarkQubits = 8;

void check_series(const DecaySeries& series) {
  for (std::size_t i = 0; i < series.points.size(); i++) {
    const auto& p = series.points[i];
    if (p.m < 0) {
      throw UsageError("decay series: negative length m=" + std::to_string(p.m));
    }
    if (i > 0 && p.m <= series.points[i - 1].m) {
      throw UsageError("decay series: lengths must be strictly increasing");
    }
    if (p.shots < 1) {
      throw UsageError("decay series: every point needs at least one shot");
    }
    if (!std::isfinite(p.f_mean) || std::abs(p.f_mean) > 1 + 1e-12) {
      throw UsageError("decay series: |F| exceeds 1 at m=" + std::to_string(p.m));
    }
  }
}

void check_lengths(const std::vector<int>& lengths) {
  if (lengths.empty()) {
    throw UsageError("benchmark needs a nonempty list of lengths");
  }
  for (std::size_t i = 0; i < lengths.size(); i++) {
    if (lengths[i] < 0 || (i > 0 && lengths[i] <= lengths[i - 1])) {
      throw UsageError("benchmark lengths must be nonnegative and strictly increasing");
    }
  }
}

}  // namespace

DecayFit fit_decay(const DecaySeries& series, const DecayFitOptions& options) {
  check_series(series);
  DecayFit fit;
  std::vector<double> x, y, w, var;
  for (const auto& p : series.points) {
    if (p.f_mean < 0) {
      fit.warnings.push_back("negative mean " + std::to_string(p.f_mean) + " at m=" + std::to_string(p.m) +
                             " excluded");
      continue;
    }
    if (p.f_mean <= options.floor) {
      continue;
    }
    const double f = std::min(p.f_mean, 1.0);
    const double r = static_cast<double>(p.shots);
    x.push_back(p.m);
    y.push_back(std::log(f));
    w.push_back(r * f * f);
    // Delta-method variance of ln F for a mean of R values in {-1, +1}.
    var.push_back((1 - f * f) / (r * f * f));
  }
  if (x.size() < 2) {
    throw FitError("decay too fast for chosen M: " + std::to_string(x.size()) + " usable point(s) for " +
                   series.label.str());
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); i++) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0)) {
    throw FitError("degenerate decay design for " + series.label.str());
  }
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sxx * sy - sx * sxy) / det;

  // Sandwich covariance (X'WX)^-1 X'W V W X (X'WX)^-1 with V the delta-method
  // variances, which stays honest when the weights are only approximate.
  double m00 = 0, m01 = 0, m11 = 0, rss = 0;
  for (std::size_t i = 0; i < x.size(); i++) {
    const double ww = w[i] * w[i] * var[i];
    m00 += ww;
    m01 += ww * x[i];
    m11 += ww * x[i] * x[i];
    const double r = y[i] - intercept - slope * x[i];
    rss += w[i] * r * r;
  }
  // (X'WX)^-1 = [[sxx, -sx], [-sx, sw]] / det.
  const double i00 = sxx / det, i01 = -sx / det, i11 = sw / det;
  const double c00 = i00 * (i00 * m00 + i01 * m01) + i01 * (i00 * m01 + i01 * m11);
  const double c11 = i01 * (i01 * m00 + i11 * m01) + i11 * (i01 * m01 + i11 * m11);

  fit.amplitude = std::exp(intercept);
  fit.rate = std::exp(slope);
  fit.amplitude_stderr = fit.amplitude * std::sqrt(std::max(0.0, c00));
  fit.rate_stderr = fit.rate * std::sqrt(std::max(0.0, c11));
  fit.points_used = static_cast<int>(x.size());
  fit.residual_norm = std::sqrt(rss);
  return fit;
}

std::vector<int> default_lengths() { return {0, 1, 2, 4, 8, 16}; }

BenchmarkResult benchmark_alg2(const NoiseModel& model, const std::vector<int>& lengths, int64_t repetitions,
                               const RunOptions& options, const std::vector<PauliLabel>& labels,
                               const DecayFitOptions& fit_options) {
  check_lengths(lengths);
  if (repetitions < 1) {
    throw UsageError("benchmark needs R >= 1 shots per length");
  }
  const int n = model.num_qubits();
  const bool dense = labels.empty();
  if (dense && n > kDenseBenchmarkQubits) {
    throw UsageError("n=" + std::to_string(n) + " needs an explicit label set; dense benchmarking stops at n=" +
                     std::to_string(kDenseBenchmarkQubits));
  }
  for (const auto& a : labels) {
    if (a.num_qubits() != n) {
      throw UsageError("benchmark label " + a.str() + " does not act on n=" + std::to_string(n) + " qubits");
    }
  }
  const std::size_t label_count = dense ? (std::size_t{1} << (2 * n)) : labels.size();
  const std::size_t width = dense ? label_count : labels.size();
  const int64_t tasks_per_length = (repetitions + kShotsPerTask - 1) / kShotsPerTask;
  const std::size_t tasks = lengths.size() * static_cast<std::size_t>(tasks_per_length);
  const int workers = worker_count(options.threads, tasks);

  // Dense: histogram of z per length. Sparse: signed sums per label per length.
  std::vector<std::vector<int64_t>> acc(static_cast<std::size_t>(workers),
                                        std::vector<int64_t>(lengths.size() * width, 0));
  parallel_for(tasks, workers, [&](std::size_t task, std::size_t worker) {
    const std::size_t j = task / static_cast<std::size_t>(tasks_per_length);
    const int64_t chunk = static_cast<int64_t>(task % static_cast<std::size_t>(tasks_per_length));
    const int64_t begin = chunk * kShotsPerTask;
    const int64_t end = std::min(repetitions, begin + kShotsPerTask);
    const uint64_t stream = derive_stream(options.stream, j);
    int64_t* row = acc[worker].data() + j * width;
    for (int64_t i = begin; i < end; i++) {
      Rng rng = Rng::for_stream(options.seed, stream, static_cast<uint64_t>(i));
      const uint64_t z = simulate_alg2_z(model, lengths[j], rng);
      if (dense) {
        row[z]++;
      } else {
        for (std::size_t li = 0; li < labels.size(); li++) {
          row[li] += symplectic_bits(labels[li].bits(), z) ? -1 : 1;
        }
      }
    }
  });
  for (int w = 1; w < workers; w++) {
    for (std::size_t i = 0; i < acc[0].size(); i++) {
      acc[0][i] += acc[static_cast<std::size_t>(w)][i];
    }
  }
  std::vector<int64_t>& total = acc[0];
  if (dense) {
    for (std::size_t j = 0; j < lengths.size(); j++) {
      symplectic_transform_qubits<int64_t>(std::span<int64_t>(total.data() + j * width, width), 0, n);
    }
  }

  BenchmarkResult result;
  result.series.resize(label_count);
  const double r = static_cast<double>(repetitions);
  for (std::size_t li = 0; li < label_count; li++) {
    DecaySeries& s = result.series[li];
    s.label = dense ? PauliLabel(li, n) : labels[li];
    s.points.reserve(lengths.size());
    for (std::size_t j = 0; j < lengths.size(); j++) {
      s.points.push_back(DecayPoint{lengths[j], static_cast<double>(total[j * width + li]) / r, repetitions});
    }
  }

  struct Outcome {
    DecayFit fit;
    std::string error;
  };
  auto outcomes = parallel_map<Outcome>(label_count, options.threads, [&](std::size_t li) {
    Outcome o;
    try {
      o.fit = fit_decay(result.series[li], fit_options);
    } catch (const FitError& e) {
      o.error = e.what();
    }
    return o;
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> lambda(label_count), err(label_count);
  std::vector<int64_t> shots(label_count, repetitions * static_cast<int64_t>(lengths.size()));
  result.fits.reserve(label_count);
  result.fit_errors.reserve(label_count);
  for (std::size_t li = 0; li < label_count; li++) {
    const bool identity = result.series[li].label.is_identity();
    if (identity) {
      outcomes[li].error.clear();
      outcomes[li].fit = DecayFit{};
      outcomes[li].fit.points_used = static_cast<int>(lengths.size());
    }
    const bool ok = outcomes[li].error.empty();
    lambda[li] = identity ? 1.0 : (ok ? outcomes[li].fit.rate : nan);
    err[li] = identity ? 0.0 : (ok ? outcomes[li].fit.rate_stderr : nan);
    result.fits.push_back(std::move(outcomes[li].fit));
    result.fit_errors.push_back(std::move(outcomes[li].error));
  }
  result.estimates = dense ? EstimateSet::dense(n, std::move(lambda), std::move(shots), std::move(err))
                           : EstimateSet::sparse(n, labels, std::move(lambda), std::move(shots), std::move(err));
  return result;
}

}  // namespace pce

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

#include <gtest/gtest.h>

#include <cmath>

#include "pce/error.hpp"
#include "test_util.hpp"

using namespace pce;

TEST(estimate_alg1, identity_channel_exact) {
  for (int k = 0; k <= 3; k++) {
    auto cov = mub_covering(3 - k);
    auto est = estimate_alg1(channels::identity(3).to_dense(), k, cov, 1000, RunOptions{1, 0, 1});
    for (std::size_t a = 0; a < est.size(); a++) {
      ASSERT_EQ(est.lambda_hat(a), 1.0) << "k=" << k << " a=" << a;
      ASSERT_GE(est.shots(a), 1);
      ASSERT_EQ(est.stderr_at(a), 0.0);
    }
  }
}

TEST(estimate_alg1, spike_channel) {
  const PauliLabel a = PauliLabel::parse("XZY");
  auto ch = channels::spike(3, a, -1);
  auto est = estimate_alg1(ch, 1, mub_covering(2), 100000, RunOptions{7, 0, 1});
  ASSERT_EQ(est.lambda(PauliLabel::identity(3)), 1.0);
  ASSERT_NEAR(est.lambda(a), -1.0, 0.03);
  for (std::size_t b = 1; b < est.size(); b++) {
    if (est.label(b) != a) {
      ASSERT_NEAR(est.lambda_hat(b), 0.0, 0.03) << est.label(b).str();
    }
  }
}

TEST(estimate_alg1, matches_literal_loop_bit_for_bit) {
  Rng rng(2);
  for (int n = 1; n <= 3; n++) {
    for (int k = 0; k <= n; k++) {
      for (bool basis : {false, true}) {
        auto cov = basis ? pauli_basis_covering(n - k) : mub_covering(n - k);
        auto ch = channels::random_dirichlet(n, rng);
        RunOptions opts{11, static_cast<uint64_t>(n * 10 + k), 1};
        const int64_t total = 997;
        auto lit = testutil::literal_alg1(ch, k, cov, total, opts);
        auto est = estimate_alg1(ch, k, cov, total, opts);
        for (std::size_t a = 0; a < est.size(); a++) {
          ASSERT_EQ(est.shots(a), lit.counts[a]);
          ASSERT_EQ(est.lambda_hat(a), static_cast<double>(lit.sums[a]) / static_cast<double>(lit.counts[a]))
              << "n=" << n << " k=" << k << " a=" << a;
        }
      }
    }
  }
}

TEST(estimate_alg1, shots_per_label) {
  // With the MUB covering, s = 0 is in every group and each s != 0 in one.
  auto cov = mub_covering(2);
  auto est = estimate_alg1(channels::depolarizing(3, 0.1), 1, cov, 5 * 100 + 3, RunOptions{});
  for (std::size_t a = 0; a < est.size(); a++) {
    const bool s_zero = (a >> 2) == 0;
    ASSERT_EQ(est.shots(a), s_zero ? 500 : 100);
  }
}

TEST(estimate_alg1, unbiased) {
  Rng rng(3);
  auto ch = channels::random_dirichlet(3, rng);
  auto cov = mub_covering(1);
  auto lam = ch.eigenvalues();
  const int runs = 200;
  std::vector<double> sum(lam.size(), 0.0), sum_sq(lam.size(), 0.0);
  for (int r = 0; r < runs; r++) {
    auto est = estimate_alg1(ch, 2, cov, 600, RunOptions{99, static_cast<uint64_t>(r), 1});
    for (std::size_t a = 0; a < lam.size(); a++) {
      sum[a] += est.lambda_hat(a);
      sum_sq[a] += est.lambda_hat(a) * est.lambda_hat(a);
    }
  }
  for (std::size_t a = 1; a < lam.size(); a++) {
    const double mean = sum[a] / runs;
    const double sd = std::sqrt(std::max(1e-30, sum_sq[a] / runs - mean * mean));
    ASSERT_LT(std::abs(mean - lam[a]), 5 * sd / std::sqrt(runs)) << "a=" << a;
  }
}

TEST(estimate_alg1, thread_count_invariant) {
  Rng rng(4);
  auto ch = channels::random_dirichlet(4, rng);
  auto cov = mub_covering(2);
  auto one = estimate_alg1(ch, 2, cov, 200000, RunOptions{5, 1, 1});
  auto four = estimate_alg1(ch, 2, cov, 200000, RunOptions{5, 1, 4});
  for (std::size_t a = 0; a < one.size(); a++) {
    ASSERT_EQ(one.lambda_hat(a), four.lambda_hat(a));
    ASSERT_EQ(one.shots(a), four.shots(a));
  }
  auto other = estimate_alg1(ch, 2, cov, 200000, RunOptions{6, 1, 1});
  ASSERT_NE(one.lambda_hat(5), other.lambda_hat(5));
}

TEST(estimate_alg1, sparse_labels_match_dense) {
  Rng rng(5);
  auto ch = channels::random_dirichlet(4, rng);
  for (bool basis : {false, true}) {
    auto cov = basis ? pauli_basis_covering(3) : mub_covering(3);
    RunOptions opts{8, 2, 2};
    auto dense = estimate_alg1(ch, 1, cov, 30000, opts);
    std::vector<PauliLabel> labels;
    for (uint64_t a = 0; a < 256; a += 7) {
      labels.emplace_back(a, 4);
    }
    auto sparse = estimate_alg1(ch, 1, cov, 30000, opts, labels);
    ASSERT_FALSE(sparse.is_dense());
    for (std::size_t i = 0; i < labels.size(); i++) {
      ASSERT_EQ(sparse.label(i), labels[i]);
      ASSERT_EQ(sparse.lambda_hat(i), dense.lambda(labels[i]));
      ASSERT_EQ(sparse.shots(i), dense.shots(labels[i].bits()));
    }
  }
}

TEST(estimate_alg1, sparse_large_n) {
  Rng rng(6);
  auto ch = channels::random_sparse(20, 10, rng);
  std::vector<PauliLabel> labels{PauliLabel::identity(20), ch.support()[3].label, PauliLabel::parse("XXXXXXXXXXXXXXXXXXXX")};
  auto est = estimate_alg1(ch, 20, mub_covering(0), 50000, RunOptions{1, 0, 2}, labels);
  ASSERT_EQ(est.lambda_hat(0), 1.0);
  for (std::size_t i = 1; i < labels.size(); i++) {
    ASSERT_NEAR(est.lambda_hat(i), ch.eigenvalue(labels[i]), 5 * est.stderr_at(i) + 1e-3);
  }
  ASSERT_THROW(estimate_alg1(ch, 20, mub_covering(0), 100, RunOptions{}), UsageError);
}

TEST(estimate_alg1, errors) {
  auto cov = mub_covering(2);
  auto ch = channels::depolarizing(3, 0.1);
  try {
    estimate_alg1(ch, 1, cov, 4, RunOptions{});
    FAIL();
  } catch (const UsageError& e) {
    ASSERT_NE(std::string(e.what()).find("fewer samples than covering size"), std::string::npos);
  }
  ASSERT_NO_THROW(estimate_alg1(ch, 1, cov, 5, RunOptions{}));
  ASSERT_THROW(estimate_alg1(ch, 2, cov, 100, RunOptions{}), UsageError);
  // Pauli-basis groups miss mixed labels only if built wrong; a lone Z group misses X.
  Covering partial(1, CoveringKind::kCustom, {StabilizerGroup(1, {PauliLabel::parse("Z")})});
  std::vector<PauliLabel> labels{PauliLabel::parse("IX")};
  ASSERT_THROW(estimate_alg1(channels::identity(2), 1, partial, 100, RunOptions{}, labels), UsageError);
}

TEST(estimate_alg1, uncovered_labels_are_nan_in_dense_mode) {
  Covering partial(1, CoveringKind::kCustom, {StabilizerGroup(1, {PauliLabel::parse("Z")})});
  auto est = estimate_alg1(channels::identity(1).to_dense(), 0, partial, 10, RunOptions{});
  ASSERT_EQ(est.lambda(PauliLabel::parse("Z")), 1.0);
  ASSERT_TRUE(std::isnan(est.lambda(PauliLabel::parse("X"))));
  ASSERT_EQ(est.shots(1), 0);
}

TEST(estimate_set, clamp_and_errors) {
  auto est = EstimateSet::dense(1, {1.0, 1.02, -1.5, 0.3}, {4, 4, 4, 4}, {0, 0, 0, 0});
  auto c = est.clamped();
  ASSERT_EQ(c.lambda_hat(1), 1.0);
  ASSERT_EQ(c.lambda_hat(2), -1.0);
  ASSERT_EQ(c.lambda_hat(3), 0.3);
  ASSERT_EQ(est.lambda_hat(1), 1.02);
  ASSERT_NEAR(est.max_abs_error(channels::identity(1)), 2.5, 1e-15);
  ASSERT_THROW(EstimateSet::dense(1, {1.0}, {1}, {0}), UsageError);
  ASSERT_NEAR(plugin_stderr(0.5, 100), std::sqrt(0.75 / 100), 1e-15);
}

TEST(required_samples, worked_example) {
  // ceil(2 (ln 2 + 8 ln 4 + ln 20) / 0.01).
  const double exact = 2 * (std::log(2.0) + 8 * std::log(4.0) + std::log(20.0)) / 0.01;
  ASSERT_EQ(required_samples(8, 8, 0.1, 0.05, 1), static_cast<int64_t>(std::ceil(exact)));
  ASSERT_EQ(required_samples(8, 8, 0.1, 0.05, 1), 2956);
}

TEST(required_samples, scaling) {
  for (int n = 1; n <= 8; n++) {
    for (double eps : {0.1, 0.2, 0.5}) {
      const int64_t base = required_samples(n, n, eps, 0.05, 1);
      // eps^-2: exact when the ceiling does not bite.
      const int64_t half = required_samples(n, n, eps / 2, 0.05, 1);
      ASSERT_GE(half, 4 * base - 4);
      ASSERT_LE(half, 4 * base);
      ASSERT_EQ(required_samples(n, n - 1, eps, 0.05, 3), 3 * base);
    }
  }
  ASSERT_THROW(required_samples(2, 1, 0.0, 0.1, 3), UsageError);
  ASSERT_THROW(required_samples(2, 1, 0.1, 1.0, 3), UsageError);
  ASSERT_THROW(required_samples(2, 3, 0.1, 0.1, 3), UsageError);
}

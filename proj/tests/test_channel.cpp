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

#include <gtest/gtest.h>

#include <vector>

#include "pce/error.hpp"
#include "pce/wht.hpp"
#include "test_util.hpp"

using namespace pce;
using pce::testutil::brute_force_wht;
using pce::testutil::max_abs_diff;
using pce::testutil::to_vector;

TEST(wht, identity_and_uniform) {
  for (int n = 0; n <= 4; n++) {
    std::vector<double> delta(std::size_t{1} << (2 * n), 0.0);
    delta[0] = 1;
    for (double x : wht_forward(delta)) {
      ASSERT_EQ(x, 1.0);
    }
  }
  auto lam = wht_forward(std::vector<double>{0.25, 0.25, 0.25, 0.25});
  ASSERT_EQ(lam, (std::vector<double>{1, 0, 0, 0}));
  auto p = wht_inverse(std::vector<double>(16, 1.0));
  ASSERT_EQ(p[0], 1.0);
  for (std::size_t i = 1; i < p.size(); i++) {
    ASSERT_EQ(p[i], 0.0);
  }
  auto u = wht_inverse(std::vector<double>{1, 0, 0, 0});
  for (double x : u) {
    ASSERT_EQ(x, 0.25);
  }
}

TEST(wht, kernel_rows) {
  // Forward transform of each unit vector is a row of the 4x4 kernel.
  const double rows[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  for (int a = 0; a < 4; a++) {
    std::vector<double> e(4, 0.0);
    e[static_cast<std::size_t>(a)] = 1;
    auto lam = wht_forward(e);
    for (int b = 0; b < 4; b++) {
      ASSERT_EQ(lam[static_cast<std::size_t>(b)], rows[a][b]);
    }
  }
}

TEST(wht, matches_brute_force) {
  Rng rng(3);
  for (int n = 1; n <= 3; n++) {
    for (int trial = 0; trial < 10; trial++) {
      auto ch = channels::random_dirichlet(n, rng);
      auto p = to_vector(ch.error_rates());
      ASSERT_LT(max_abs_diff(wht_forward(p), brute_force_wht(p, n)), 1e-13);
    }
  }
}

TEST(wht, spike_from_brute_force) {
  for (int n = 1; n <= 3; n++) {
    const std::size_t size = std::size_t{1} << (2 * n);
    for (uint64_t a = 1; a < size; a += 3) {
      for (int s : {1, -1}) {
        std::vector<double> p(size);
        for (std::size_t b = 0; b < size; b++) {
          int sign = testutil::letter_product(PauliLabel(a, n), PauliLabel(b, n)) ? -1 : 1;
          p[b] = (1.0 + s * sign) / static_cast<double>(size);
        }
        auto lam = brute_force_wht(p, n);
        for (std::size_t b = 0; b < size; b++) {
          const double expected = b == 0 ? 1.0 : (b == a ? s : 0.0);
          ASSERT_NEAR(lam[b], expected, 1e-14);
        }
        ASSERT_LT(max_abs_diff(wht_forward(p), lam), 1e-13);
      }
    }
  }
}

TEST(wht, round_trip) {
  Rng rng(5);
  for (int n = 1; n <= 6; n++) {
    for (int trial = 0; trial < 5; trial++) {
      const auto ch = channels::random_dirichlet(n, rng);
      auto p = to_vector(ch.error_rates());
      ASSERT_LT(max_abs_diff(wht_inverse(wht_forward(p)), p), 1e-12);
    }
  }
}

TEST(wht, rejects_bad_length) {
  ASSERT_THROW(wht_forward(std::vector<double>(8, 0.0)), UsageError);
  ASSERT_THROW(wht_inverse(std::vector<double>{}), UsageError);
  ASSERT_EQ(qubits_from_dense_size(64), 3);
}

TEST(wht, integer_and_xor_kernels) {
  std::vector<int64_t> h{3, 1, 0, 2};
  symplectic_transform_qubits<int64_t>(std::span<int64_t>(h), 0, 1);
  ASSERT_EQ(h, (std::vector<int64_t>{6, 2, 0, 4}));
  std::vector<int64_t> x{1, 2, 3, 4};
  xor_transform_bits<int64_t>(std::span<int64_t>(x), 0, 2);
  ASSERT_EQ(x, (std::vector<int64_t>{10, -2, -4, 0}));
}

TEST(pauli_channel, invariants) {
  auto ch = channels::depolarizing(2, 0.3);
  ASSERT_EQ(ch.eigenvalues()[0], 1.0);
  ASSERT_THROW(PauliChannel::from_error_rates({0.5, 0.6, 0, 0}), UsageError);
  ASSERT_THROW(PauliChannel::from_error_rates({1.1, -0.1, 0, 0}), UsageError);
  ASSERT_THROW(PauliChannel::from_eigenvalues({1, 1.5, 0, 0}), UsageError);
  ASSERT_THROW(PauliChannel::from_eigenvalues({0.9, 1, 1, 1}), UsageError);
  ASSERT_THROW(PauliChannel::from_sparse(1, {{PauliLabel::parse("X"), 0.5}}), UsageError);
  ASSERT_THROW(PauliChannel::from_sparse(1, {{PauliLabel::parse("XX"), 1.0}}), UsageError);
  ASSERT_NO_THROW(PauliChannel::from_error_rates({1.0 + 1e-13, 0, 0, 0}));
}

TEST(pauli_channel, both_representations_agree) {
  Rng rng(13);
  for (int trial = 0; trial < 10; trial++) {
    auto ch = channels::random_dirichlet(3, rng);
    auto back = PauliChannel::from_eigenvalues(to_vector(ch.eigenvalues()));
    ASSERT_LT(max_abs_diff(to_vector(back.error_rates()), to_vector(ch.error_rates())), 1e-10);
  }
}

TEST(pauli_channel, eigenvalue_query) {
  auto ch = PauliChannel::from_sparse(1, {{PauliLabel::parse("I"), 0.9}, {PauliLabel::parse("X"), 0.1}});
  ASSERT_EQ(eigenvalue_query(ch, PauliLabel::parse("I")), 1.0);
  ASSERT_NEAR(eigenvalue_query(ch, PauliLabel::parse("Z")), 0.8, 1e-15);
  ASSERT_NEAR(eigenvalue_query(ch, PauliLabel::parse("X")), 1.0, 1e-15);
  Rng rng(17);
  for (int trial = 0; trial < 5; trial++) {
    auto sparse = channels::random_sparse(4, 40, rng);
    auto dense = sparse.to_dense();
    auto lam = dense.eigenvalues();
    for (uint64_t b = 0; b < 256; b++) {
      ASSERT_NEAR(eigenvalue_query(sparse, PauliLabel(b, 4)), lam[b], 1e-12);
    }
  }
}

TEST(pauli_channel, sparse_beyond_dense_limit) {
  Rng rng(19);
  auto ch = channels::random_sparse(20, 10, rng);
  ASSERT_FALSE(ch.is_dense());
  ASSERT_THROW(ch.eigenvalues(), UsageError);
  ASSERT_THROW(ch.to_dense(), CapabilityError);
  double total = 0;
  for (const auto& e : ch.support()) {
    total += e.probability;
  }
  ASSERT_NEAR(total, 1.0, 1e-12);
  ASSERT_EQ(ch.eigenvalue(PauliLabel::identity(20)), 1.0);
}

TEST(pauli_channel, sample_point_mass) {
  auto ch = channels::identity(3);
  Rng rng(1);
  for (int i = 0; i < 1000; i++) {
    ASSERT_TRUE(sample_error(ch, rng).is_identity());
  }
}

TEST(pauli_channel, sample_two_point) {
  auto ch = PauliChannel::from_sparse(1, {{PauliLabel::parse("I"), 0.5}, {PauliLabel::parse("Y"), 0.5}});
  Rng rng(2);
  int y = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; i++) {
    y += sample_error(ch, rng) == PauliLabel::parse("Y");
  }
  ASSERT_NEAR(static_cast<double>(y) / draws, 0.5, 0.01);
}

TEST(pauli_channel, sample_chi_square) {
  Rng rng(23);
  for (bool sparse : {false, true}) {
    auto dense = channels::random_dirichlet(3, rng);
    std::vector<SparseEntry> support;
    for (uint64_t a = 0; a < 64; a++) {
      support.push_back({PauliLabel(a, 3), dense.error_rates()[a]});
    }
    PauliChannel ch = sparse ? PauliChannel::from_sparse(3, support) : dense;
    std::vector<double> counts(64, 0.0);
    const int draws = 1000000;
    for (int i = 0; i < draws; i++) {
      counts[ch.sample_bits(rng)] += 1;
    }
    double stat = 0;
    for (std::size_t a = 0; a < 64; a++) {
      const double expected = draws * dense.error_rates()[a];
      stat += (counts[a] - expected) * (counts[a] - expected) / expected;
    }
    ASSERT_GT(testutil::chi_square_survival(stat, 63), 1e-3) << "sparse=" << sparse << " stat=" << stat;
  }
}

TEST(constructors, spike) {
  auto ch = channels::spike(2, PauliLabel::parse("XZ"), 1);
  auto lam = ch.eigenvalues();
  for (uint64_t b = 0; b < 16; b++) {
    const bool on = b == 0 || PauliLabel(b, 2) == PauliLabel::parse("XZ");
    ASSERT_NEAR(lam[b], on ? 1.0 : 0.0, 1e-15);
  }
  ASSERT_THROW(channels::spike(2, PauliLabel::identity(2), 1), UsageError);
  ASSERT_THROW(channels::spike(2, PauliLabel::parse("XX"), 0), UsageError);
}

TEST(constructors, spike_error_rates_exhaustive) {
  for (int n = 1; n <= 3; n++) {
    const std::size_t size = std::size_t{1} << (2 * n);
    for (uint64_t a = 1; a < size; a++) {
      for (int s : {1, -1}) {
        const auto ch = channels::spike(n, PauliLabel(a, n), s);
        auto p = ch.error_rates();
        double total = 0;
        for (std::size_t b = 0; b < size; b++) {
          const int sign = symplectic_bits(a, b) ? -1 : 1;
          ASSERT_NEAR(p[b], (1.0 + s * sign) / static_cast<double>(size), 1e-15);
          ASSERT_GE(p[b], 0.0);
          total += p[b];
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

TEST(constructors, fully_depolarizing) {
  const auto one = channels::fully_depolarizing(1);
  auto p = one.error_rates();
  for (double x : p) {
    ASSERT_EQ(x, 0.25);
  }
  const auto three = channels::fully_depolarizing(3);
  auto lam = three.eigenvalues();
  ASSERT_EQ(lam[0], 1.0);
  for (std::size_t b = 1; b < lam.size(); b++) {
    ASSERT_NEAR(lam[b], 0.0, 1e-15);
  }
}

TEST(constructors, depolarizing_single_qubit_value) {
  // p = (1 - r, r/3, r/3, r/3): lambda_X = (1 - r) + r/3 - 2r/3 = 1 - 4r/3.
  const auto ch = channels::depolarizing(1, 0.1);
  auto lam = ch.eigenvalues();
  for (int b = 1; b < 4; b++) {
    ASSERT_NEAR(lam[static_cast<std::size_t>(b)], 1 - 4 * 0.1 / 3, 1e-15);
  }
}

TEST(constructors, tensor_factorizes) {
  std::vector<PauliChannel> pair{channels::depolarizing(1, 0.1), channels::depolarizing(1, 0.1)};
  auto t = channels::tensor(pair);
  const double single = 1 - 4 * 0.1 / 3;
  ASSERT_NEAR(t.eigenvalue(PauliLabel::parse("XI")), single, 1e-15);
  ASSERT_NEAR(t.eigenvalue(PauliLabel::parse("IX")), single, 1e-15);
  ASSERT_NEAR(t.eigenvalue(PauliLabel::parse("XY")), single * single, 1e-15);

  // Brute-force expansion of the tensor product, then lambda factorization.
  Rng rng(29);
  for (int na = 1; na <= 2; na++) {
    const int nb = 3 - na;
    std::vector<PauliChannel> f{channels::random_dirichlet(na, rng), channels::random_dirichlet(nb, rng)};
    auto ab = channels::tensor(f);
    auto pa = f[0].error_rates();
    auto pb = f[1].error_rates();
    for (uint64_t a = 0; a < pa.size(); a++) {
      for (uint64_t b = 0; b < pb.size(); b++) {
        const PauliLabel joint = PauliLabel::concat(PauliLabel(a, na), PauliLabel(b, nb));
        ASSERT_NEAR(ab.error_rate(joint), pa[a] * pb[b], 1e-15);
        ASSERT_NEAR(ab.eigenvalue(joint), f[0].eigenvalues()[a] * f[1].eigenvalues()[b], 1e-12);
      }
    }
  }
}

TEST(constructors, tensor_sparse_large) {
  std::vector<PauliChannel> ones;
  for (int i = 0; i < 16; i++) {
    ones.push_back(PauliChannel::from_sparse(1, {{PauliLabel::parse("I"), 0.99}, {PauliLabel::parse("Z"), 0.01}}));
  }
  auto t = channels::tensor(ones);
  ASSERT_FALSE(t.is_dense());
  ASSERT_NEAR(t.eigenvalue(PauliLabel::parse("XIIIIIIIIIIIIIIX")), 0.98 * 0.98, 1e-12);
}

TEST(constructors, random_channels_are_physical) {
  Rng rng(31);
  for (int n = 1; n <= 5; n++) {
    auto ch = channels::random_dirichlet(n, rng);
    double total = 0;
    for (double p : ch.error_rates()) {
      ASSERT_GE(p, 0.0);
      total += p;
    }
    ASSERT_NEAR(total, 1.0, 1e-12);
    ASSERT_EQ(ch.eigenvalues()[0], 1.0);
    for (double l : ch.eigenvalues()) {
      ASSERT_LE(std::abs(l), 1 + 1e-12);
    }
  }
  ASSERT_THROW(channels::random_sparse(1, 5, rng), UsageError);
  ASSERT_THROW(channels::depolarizing(1, 1.5), UsageError);
}

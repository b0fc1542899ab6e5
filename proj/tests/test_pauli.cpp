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


#include "pce/pauli.hpp"

#include <gtest/gtest.h>

#include "pce/error.hpp"
#include "pce/rng.hpp"
#include "test_util.hpp"

using namespace pce;

TEST(pauli_label, parse_layout) {
  PauliLabel a = PauliLabel::parse("XZ");
  ASSERT_EQ(a.num_qubits(), 2);
  ASSERT_EQ(a.qubit(0), 1U);
  ASSERT_EQ(a.qubit(1), 2U);
  ASSERT_EQ(a.bits(), 0b1001U);
  ASSERT_EQ(PauliLabel::parse("II").bits(), 0U);
  ASSERT_EQ(PauliLabel::parse("Y").bits(), 3U);
  ASSERT_EQ(PauliLabel::parse("IZYX").str(), "IZYX");
}

TEST(pauli_label, parse_error_position) {
  try {
    PauliLabel::parse("XIQZ");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    ASSERT_EQ(e.position(), 2U);
  }
  ASSERT_THROW(PauliLabel::parse("xz"), ParseError);
  ASSERT_THROW(PauliLabel::parse(std::string(33, 'X')), ParseError);
}

TEST(pauli_label, round_trip_exhaustive) {
  for (int n = 0; n <= 4; n++) {
    for (uint64_t b = 0; b < (uint64_t{1} << (2 * n)); b++) {
      PauliLabel a(b, n);
      ASSERT_EQ(PauliLabel::parse(a.str()), a);
    }
  }
  Rng rng(7);
  for (int trial = 0; trial < 1000; trial++) {
    PauliLabel a(rng.bits(64), 32);
    ASSERT_EQ(PauliLabel::parse(a.str()), a);
  }
}

TEST(pauli_label, rejects_high_bits) {
  ASSERT_THROW(PauliLabel(0b10000, 2), UsageError);
  ASSERT_THROW(PauliLabel(0, 33), UsageError);
  ASSERT_THROW(PauliLabel(0, -1), UsageError);
}

TEST(pauli_label, weight) {
  ASSERT_EQ(weight(PauliLabel::identity(5)), 0);
  ASSERT_EQ(weight(PauliLabel::parse("XIZ")), 2);
  ASSERT_EQ(weight(PauliLabel::parse("YYYY")), 4);
  ASSERT_EQ(weight(PauliLabel(~uint64_t{0}, 32)), 32);
}

TEST(pauli_label, symplectic_examples) {
  auto p = [](const char* a, const char* b) { return symplectic_product(PauliLabel::parse(a), PauliLabel::parse(b)); };
  ASSERT_EQ(p("X", "Z"), 1);
  ASSERT_EQ(p("X", "Y"), 1);
  ASSERT_EQ(p("Y", "Z"), 1);
  ASSERT_EQ(p("XI", "IZ"), 0);
  ASSERT_EQ(p("XX", "ZZ"), 0);
  ASSERT_EQ(p("XYZ", "XYZ"), 0);
  ASSERT_THROW(p("X", "XI"), UsageError);
}

TEST(pauli_label, symplectic_matches_letter_rule) {
  for (int n = 1; n <= 3; n++) {
    for (uint64_t a = 0; a < (uint64_t{1} << (2 * n)); a++) {
      for (uint64_t b = 0; b < (uint64_t{1} << (2 * n)); b++) {
        ASSERT_EQ(symplectic_product(PauliLabel(a, n), PauliLabel(b, n)),
                  testutil::letter_product(PauliLabel(a, n), PauliLabel(b, n)));
      }
    }
  }
}

TEST(pauli_label, symplectic_bilinear) {
  for (int n = 1; n <= 2; n++) {
    const uint64_t size = uint64_t{1} << (2 * n);
    for (uint64_t a = 0; a < size; a++) {
      for (uint64_t b = 0; b < size; b++) {
        for (uint64_t c = 0; c < size; c++) {
          ASSERT_EQ(symplectic_bits(a ^ b, c), symplectic_bits(a, c) ^ symplectic_bits(b, c));
        }
      }
    }
  }
  Rng rng(11);
  for (int trial = 0; trial < 20000; trial++) {
    const int n = 1 + static_cast<int>(rng.bits(4));
    const uint64_t a = rng() & label_mask(n);
    const uint64_t b = rng() & label_mask(n);
    const uint64_t c = rng() & label_mask(n);
    ASSERT_EQ(symplectic_bits(a ^ b, c), symplectic_bits(a, c) ^ symplectic_bits(b, c));
    ASSERT_EQ(symplectic_bits(a, b), symplectic_bits(b, a));
    ASSERT_EQ(symplectic_bits(a, a), 0);
  }
}

TEST(pauli_label, anticommutation_balance) {
  for (int n = 1; n <= 6; n++) {
    const uint64_t size = uint64_t{1} << (2 * n);
    for (uint64_t a = 1; a < size; a += (n <= 3 ? 1 : 97)) {
      uint64_t anti = 0;
      for (uint64_t b = 0; b < size; b++) {
        anti += static_cast<uint64_t>(symplectic_bits(a, b));
      }
      ASSERT_EQ(anti, size / 2) << "n=" << n << " a=" << a;
    }
  }
}

TEST(pauli_label, compose) {
  ASSERT_EQ(compose(PauliLabel::parse("X"), PauliLabel::parse("Z")), PauliLabel::parse("Y"));
  PauliLabel a = PauliLabel::parse("XYZI");
  ASSERT_EQ(compose(a, a), PauliLabel::identity(4));
  ASSERT_EQ(compose(PauliLabel::identity(4), a), a);
  ASSERT_THROW(compose(a, PauliLabel::parse("X")), UsageError);
}

TEST(pauli_label, slice_and_concat) {
  PauliLabel a = PauliLabel::parse("XYZIX");
  ASSERT_EQ(a.slice(0, 2).str(), "XY");
  ASSERT_EQ(a.slice(2, 3).str(), "ZIX");
  ASSERT_EQ(PauliLabel::concat(a.slice(0, 2), a.slice(2, 3)), a);
  ASSERT_EQ(PauliLabel::concat(PauliLabel::identity(0), a), a);
  ASSERT_THROW(a.slice(3, 3), UsageError);
}

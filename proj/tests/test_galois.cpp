#include <gtest/gtest.h>

#include "oracle.hpp"
#include "xorlab/galois.hpp"
#include "xorlab/rng.hpp"

using xorlab::Elem;
using xorlab::Field;

TEST(Galois, PrimeFieldParameters) {
  const Field f = xorlab::build_field(2);
  EXPECT_EQ(f.p(), 2u);
  EXPECT_EQ(f.e(), 1u);
  EXPECT_EQ(f.q(), 2u);
}

TEST(Galois, Gf4ModulusIsTheUniqueQuadratic) {
  const Field f = xorlab::build_field(4);
  EXPECT_EQ(f.p(), 2u);
  EXPECT_EQ(f.e(), 2u);
  EXPECT_EQ(f.modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
}

TEST(Galois, RejectsNonPrimePowers) {
  for (std::uint64_t q : {0, 1, 6, 10, 12, 100}) EXPECT_THROW(xorlab::build_field(q), std::invalid_argument) << q;
}

TEST(Galois, RejectsHugeExtensionFields) {
  EXPECT_THROW(xorlab::build_field(1ull << 25), std::invalid_argument);
  EXPECT_NO_THROW(xorlab::build_field(1ull << 24));
}

TEST(Galois, SmallExamples) {
  const Field f2 = xorlab::build_field(2);
  EXPECT_EQ(f2.add(Elem{1}, Elem{1}), Elem{0});
  const Field f5 = xorlab::build_field(5);
  EXPECT_EQ(f5.inv(Elem{2}), Elem{3});
  const Field f4 = xorlab::build_field(4);
  // x is encoded as 2, x + 1 as 3
  EXPECT_EQ(f4.mul(Elem{2}, Elem{2}), Elem{3});
}

TEST(Galois, InverseOfZeroThrows) {
  for (std::uint64_t q : {2ull, 7ull, 8ull, 1ull << 17}) {
    const Field f = xorlab::build_field(q);
    EXPECT_THROW(f.inv(Elem{0}), std::domain_error);
  }
}

TEST(Galois, ModulusIsIrreducibleAndMonic) {
  for (std::uint64_t q : {4, 8, 9, 16, 25, 27, 32, 49, 81, 125, 256}) {
    const Field f = xorlab::build_field(q);
    ASSERT_EQ(f.modulus().size(), f.e() + 1u);
    EXPECT_EQ(f.modulus().back(), 1u);
    // no roots, and for degree <= 3 that already means irreducible
    for (std::uint32_t x = 0; x < f.p(); ++x) {
      std::uint64_t v = 0, pw = 1;
      for (auto c : f.modulus()) {
        v = (v + c * pw) % f.p();
        pw = pw * x % f.p();
      }
      EXPECT_NE(v, 0u) << "q=" << q << " root " << x;
    }
  }
}

class FieldAxioms : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(FieldAxioms, Exhaustive) {
  const Field f = xorlab::build_field(GetParam());
  const std::uint32_t q = f.q();
  for (std::uint32_t a = 0; a < q; ++a) {
    EXPECT_EQ(f.add_raw(a, 0), a);
    EXPECT_EQ(f.mul_raw(a, 1), a);
    EXPECT_EQ(f.mul_raw(a, 0), 0u);
    EXPECT_EQ(f.add_raw(a, f.neg_raw(a)), 0u);
    if (a) {
      EXPECT_EQ(f.mul_raw(a, f.inv_raw(a)), 1u);
    }
    EXPECT_EQ(f.pow(Elem{a}, q), Elem{a});  // Frobenius fixes GF(q)
    for (std::uint32_t b = 0; b < q; ++b) {
      EXPECT_EQ(f.add_raw(a, b), f.add_raw(b, a));
      EXPECT_EQ(f.mul_raw(a, b), f.mul_raw(b, a));
      EXPECT_EQ(f.mul_raw(a, b), oracle::poly_mul(f, a, b));
      if (a && b) {
        EXPECT_NE(f.mul_raw(a, b), 0u);
      }
      for (std::uint32_t c = 0; c < q; ++c) {
        ASSERT_EQ(f.add_raw(f.add_raw(a, b), c), f.add_raw(a, f.add_raw(b, c)));
        ASSERT_EQ(f.mul_raw(f.mul_raw(a, b), c), f.mul_raw(a, f.mul_raw(b, c)));
        ASSERT_EQ(f.mul_raw(a, f.add_raw(b, c)), f.add_raw(f.mul_raw(a, b), f.mul_raw(a, c)));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(SmallFields, FieldAxioms, ::testing::Values(2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32));

TEST(Galois, LargeFieldsSampledAxioms) {
  xorlab::Rng rng(7);
  for (std::uint64_t q : {65536ull, 1ull << 17, 3ull * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3, 1000003ull, 2147483647ull}) {
    const Field f = xorlab::build_field(q);
    EXPECT_EQ(f.uses_tables(), f.e() > 1 && q <= Field::kTableLimit);
    for (int t = 0; t < 2000; ++t) {
      const auto a = static_cast<std::uint32_t>(rng.below(q));
      const auto b = static_cast<std::uint32_t>(rng.below(q));
      const auto c = static_cast<std::uint32_t>(rng.below(q));
      ASSERT_EQ(f.mul_raw(a, b), oracle::poly_mul(f, a, b)) << q;
      ASSERT_EQ(f.mul_raw(a, f.add_raw(b, c)), f.add_raw(f.mul_raw(a, b), f.mul_raw(a, c))) << q;
      ASSERT_EQ(f.sub(f.add(Elem{a}, Elem{b}), Elem{b}), Elem{a});
      if (a) {
        ASSERT_EQ(f.mul_raw(a, f.inv_raw(a)), 1u) << q;
      }
      if (b) {
        ASSERT_EQ(f.mul(f.div(Elem{a}, Elem{b}), Elem{b}), Elem{a});
      }
    }
  }
}

TEST(Galois, PowerRules) {
  const Field f = xorlab::build_field(9);
  for (std::uint32_t a = 1; a < 9; ++a) {
    EXPECT_EQ(f.pow(Elem{a}, 0), f.one());
    EXPECT_EQ(f.pow(Elem{a}, 8), f.one());
    EXPECT_EQ(f.pow(Elem{a}, -1), f.inv(Elem{a}));
    EXPECT_EQ(f.pow(Elem{a}, 5), f.mul(f.pow(Elem{a}, 2), f.pow(Elem{a}, 3)));
  }
}

TEST(Galois, DeterministicConstruction) {
  for (std::uint64_t q : {16ull, 27ull, 1ull << 17}) {
    const Field a = xorlab::build_field(q), b = xorlab::build_field(q);
    EXPECT_EQ(a.modulus(), b.modulus());
    EXPECT_EQ(a.mul_raw(5, 11), b.mul_raw(5, 11));
  }
}

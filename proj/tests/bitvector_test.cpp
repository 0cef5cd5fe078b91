#include "rashomon/bitvector.hpp"

#include <random>

#include "gtest/gtest.h"

namespace rashomon {
namespace {

TEST(BitVectorTest, OnesMasksTail) {
  BitVector v = BitVector::ones(70);
  EXPECT_EQ(v.count(), 70u);
  EXPECT_EQ((~v).count(), 0u);
  EXPECT_EQ(BitVector(70).flip().count(), 70u);
}

TEST(BitVectorTest, FusedCountsMatchMaterialized) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 63u, 64u, 65u, 200u}) {
    BitVector a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      a.set(i, rng() & 1);
      b.set(i, rng() & 1);
      c.set(i, rng() & 1);
    }
    EXPECT_EQ(count_and(a, b), (a & b).count());
    EXPECT_EQ(count_xor(a, b), (a ^ b).count());
    EXPECT_EQ(count_and_not(a, b), (a & ~b).count());
    EXPECT_EQ(count_and_not_and(a, b, c), (a & ~b & c).count());
  }
}

TEST(BitVectorTest, SetAndTest) {
  BitVector v(130);
  v.set(0);
  v.set(129);
  v.set(64);
  v.set(64, false);
  EXPECT_TRUE(v.test(0));
  EXPECT_TRUE(v.test(129));
  EXPECT_FALSE(v.test(64));
  EXPECT_EQ(v.count(), 2u);
}

}  // namespace
}  // namespace rashomon

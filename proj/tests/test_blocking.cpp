#include <gtest/gtest.h>

#include <random>

#include "durable/blocking.hpp"
#include "durable/oracle.hpp"

using namespace durable;

TEST(BlockingSet, BlockIsIdempotentPerId) {
  BlockingSet bs(4);
  EXPECT_TRUE(bs.block(1, 3));
  EXPECT_FALSE(bs.block(1, 3));
  EXPECT_TRUE(bs.contains(1));
  EXPECT_EQ(bs.size(), 1u);
}

TEST(BlockingSet, LeftsAreRecorded) {
  BlockingSet bs(4);
  bs.block(Record{0, 1, {1}});
  bs.block(Record{1, 3, {1}});
  EXPECT_EQ(bs.lefts(), (std::vector<Timestamp>{1, 3}));
}

TEST(BlockingSet, DensityExamples) {
  BlockingSet empty(4);
  EXPECT_EQ(empty.density(3), 0u);
  BlockingSet bs(4);
  bs.block(0, 1);
  bs.block(1, 3);
  bs.block(2, 6);
  EXPECT_EQ(bs.density(4), 2u);
  EXPECT_EQ(bs.density(7), 2u);
  EXPECT_EQ(bs.density(5), 2u);
  EXPECT_EQ(bs.density(6), 2u);
  EXPECT_EQ(bs.density(1), 1u);
  EXPECT_EQ(bs.density(0), 0u);
  EXPECT_EQ(bs.density(10), 1u);
  EXPECT_EQ(bs.density(11), 0u);
}

TEST(BlockingSet, DuplicateLeftsFromDistinctIds) {
  BlockingSet bs(2);
  bs.block(0, 5);
  bs.block(1, 5);
  EXPECT_EQ(bs.density(6), 2u);
}

TEST(BlockingSet, MatchesOracleAndNeverDecreases) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 20; ++round) {
    const Timestamp tau = 1 + static_cast<Timestamp>(rng() % 50);
    BlockingSet bs(tau);
    std::vector<Timestamp> lefts;
    std::vector<std::size_t> prev(260, 0);
    for (int i = 0; i < 300; ++i) {
      const Timestamp l = 1 + static_cast<Timestamp>(rng() % 200);
      if (bs.block(static_cast<RecordId>(rng() % 400), l)) lefts.push_back(l);
      if (i % 25 == 0) {
        for (Timestamp t = 0; t < 260; ++t) {
          const std::size_t dens = bs.density(t);
          EXPECT_EQ(dens, oracle::density(lefts, tau, t));
          EXPECT_GE(dens, prev[t]);
          prev[t] = dens;
        }
      }
    }
  }
}

#include <gtest/gtest.h>

#include <random>

#include "durable/oracle.hpp"
#include "durable/topk_index.hpp"
#include "helpers.hpp"

using namespace durable;
using durable::testing::points;
using durable::testing::scores_1d;

namespace {

std::vector<Timestamp> times(const std::vector<Record>& recs) {
  std::vector<Timestamp> out;
  for (const Record& r : recs) out.push_back(r.t);
  return out;
}

}  // namespace

TEST(TimeTree, RejectsEmptyAndZeroThreshold) {
  EXPECT_THROW(TimeTree(std::make_shared<const Dataset>()), ParameterError);
  EXPECT_THROW(TimeTree(scores_1d({1}), TopKIndexConfig{0}), ParameterError);
}

TEST(TimeTree, SingleRecordIsALeaf) {
  TimeTree tree(scores_1d({4}));
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_TRUE(tree.node(0).is_leaf());
  EXPECT_EQ(tree.skyline(0), std::vector<std::size_t>{0});
}

TEST(TimeTree, OneDimensionalSkylineIsTheMax) {
  auto data = scores_1d({5, 3, 8, 2, 9, 4, 1, 7});
  TimeTree tree(data);
  for (std::size_t v = 0; v < tree.nodes().size(); ++v) {
    const auto sky = tree.skyline(v);
    ASSERT_EQ(sky.size(), 1u);
    const auto& nd = tree.node(v);
    double best = -1;
    for (std::size_t p = nd.lo; p <= nd.hi; ++p) best = std::max(best, data->attrs(p)[0]);
    EXPECT_EQ(data->attrs(sky[0])[0], best);
  }
}

TEST(TimeTree, AntichainKeepsEveryRecord) {
  TimeTree tree(points({{1, 4}, {2, 3}, {3, 2}, {4, 1}}));
  EXPECT_EQ(tree.skyline(tree.root()).size(), 4u);
}

TEST(TimeTree, SkylineClosure) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> rows(300);
  for (auto& r : rows) r = {u(rng), u(rng), u(rng)};
  auto data = points(rows);
  TimeTree tree(data);
  for (std::size_t v = 0; v < tree.nodes().size(); ++v) {
    const auto sky = tree.skyline(v);
    const auto& nd = tree.node(v);
    for (std::size_t a : sky) {
      for (std::size_t b : sky) EXPECT_FALSE(dominates(data->attrs(a), data->attrs(b)));
    }
    for (std::size_t p = nd.lo; p <= nd.hi; ++p) {
      bool covered = false;
      for (std::size_t s : sky) covered = covered || s == p || dominates(data->attrs(s), data->attrs(p));
      EXPECT_TRUE(covered);
    }
  }
}

TEST(TimeTree, IntervalMaxScore) {
  TimeTree tree(points({{1, 4}, {4, 1}}));
  EXPECT_DOUBLE_EQ(tree.interval_max_score(0, PreferenceVector::linear({1, 1})), 5.0);
  EXPECT_DOUBLE_EQ(tree.interval_max_score(0, PreferenceVector::linear({1, 0})), 4.0);
  EXPECT_DOUBLE_EQ(tree.interval_max_score(1, PreferenceVector::linear({1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(tree.interval_max_score(0, PreferenceVector::cosine({1, 0})),
                   4.0 / std::sqrt(17.0));
}

TEST(QueryTopK, Examples) {
  TimeTree tree(scores_1d({5, 3, 8, 2, 9, 4}));
  auto pref = PreferenceVector::linear({1});
  EXPECT_EQ(times(query_topk(tree, pref, 2, Window{1, 6})), (std::vector<Timestamp>{5, 3}));
  EXPECT_EQ(times(query_topk(tree, pref, 2, Window{2, 4})), (std::vector<Timestamp>{3, 2}));
  EXPECT_EQ(times(query_topk(tree, pref, 10, Window{2, 4})), (std::vector<Timestamp>{3, 2, 4}));
  EXPECT_TRUE(query_topk(tree, pref, 3, Window{7, 9}).empty());
  EXPECT_EQ(times(query_topk(tree, pref, 1, Window{-3, 1})), (std::vector<Timestamp>{1}));
}

TEST(QueryTopK, TiesResolveToEarlierArrival) {
  std::vector<double> s(600, 1.0);
  s[37] = 2.0;
  auto data = scores_1d(s);
  for (std::size_t thr : {1, 4, 128}) {
    TimeTree tree(data, TopKIndexConfig{thr});
    auto top = query_topk(tree, PreferenceVector::linear({1}), 5, Window{10, 600});
    EXPECT_EQ(times(top), (std::vector<Timestamp>{38, 10, 11, 12, 13})) << thr;
  }
}

TEST(QueryTopK, CallCounterIsPerSession) {
  TimeTree tree(scores_1d({5, 3, 8, 2, 9, 4}));
  TopKSession a(tree, PreferenceVector::linear({1}));
  TopKSession b(tree, PreferenceVector::linear({1}));
  a.query(2, Window{1, 6});
  a.query(2, Window{7, 8});
  b.query(1, Window{1, 2});
  EXPECT_EQ(a.calls(), 2u);
  EXPECT_EQ(b.calls(), 1u);
}

TEST(QueryTopK, MatchesOracleOnRandomProbes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int round = 0; round < 12; ++round) {
    const std::size_t n = 1 + rng() % 700;
    const std::size_t d = 1 + rng() % 4;
    std::vector<std::vector<double>> rows(n);
    for (auto& r : rows) {
      r.resize(d);
      // Coarse values force frequent score ties.
      for (double& x : r) x = std::floor(u(rng) * 6) / 6;
    }
    auto data = points(rows);
    for (std::size_t thr : {1, 16, 128}) {
      TimeTree tree(data, TopKIndexConfig{thr});
      for (int probe = 0; probe < 40; ++probe) {
        Timestamp lo = 1 + static_cast<Timestamp>(rng() % n);
        Timestamp hi = lo + static_cast<Timestamp>(rng() % (n - lo + 1));
        const std::size_t k = 1 + rng() % 30;
        std::vector<double> w(d);
        for (double& x : w) x = u(rng) + 0.01;
        const int kind = static_cast<int>(rng() % 3);
        PreferenceVector pref = kind == 0   ? PreferenceVector::linear(w)
                                : kind == 1 ? PreferenceVector::monotone(w, Transform::Sqrt)
                                            : PreferenceVector::cosine(w);
        EXPECT_EQ(query_topk(tree, pref, k, Window{lo, hi}),
                  oracle::topk(*data, pref, k, Window{lo, hi}));
      }
    }
  }
}

#include <gtest/gtest.h>

#include <random>

#include "durable/core.hpp"
#include "helpers.hpp"

using namespace durable;

TEST(Dataset, RejectsBadRecords) {
  EXPECT_THROW(Dataset({Record{0, 1, {}}}), ParameterError);
  EXPECT_THROW(Dataset({Record{0, 0, {1.0}}}), ParameterError);
  EXPECT_THROW(Dataset({Record{0, 2, {1.0}}, Record{1, 2, {2.0}}}), ParameterError);
  EXPECT_THROW(Dataset({Record{0, 2, {1.0}}, Record{1, 1, {2.0}}}), ParameterError);
  EXPECT_THROW(Dataset({Record{0, 1, {1.0}}, Record{1, 2, {2.0, 3.0}}}), ParameterError);
  EXPECT_THROW(Dataset({Record{0, 1, {std::nan("")}}}), ParameterError);
  EXPECT_THROW(Dataset({Record{4, 1, {1.0}}, Record{4, 2, {2.0}}}), ParameterError);
}

TEST(Dataset, PositionsClipAndLookups) {
  Dataset d({Record{10, 2, {1.0}}, Record{11, 5, {2.0}}, Record{12, 9, {3.0}}});
  EXPECT_EQ(d.max_time(), 9);
  auto r = d.positions(-4, 5);
  EXPECT_EQ(r.first, 0u);
  EXPECT_EQ(r.last, 2u);
  EXPECT_TRUE(d.positions(6, 8).empty());
  EXPECT_TRUE(d.positions(7, 3).empty());
  EXPECT_EQ(d.position_of_time(5), 1u);
  EXPECT_FALSE(d.position_of_time(4));
  EXPECT_EQ(d.position_of_id(12), 2u);
  EXPECT_FALSE(d.position_of_id(1));
}

TEST(Dataset, MirrorReversesTime) {
  Dataset d({Record{0, 1, {1.0}}, Record{1, 3, {2.0}}, Record{2, 4, {3.0}}});
  Dataset m = d.mirrored();
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.time(0), 1);
  EXPECT_EQ(m.id(0), 2);
  EXPECT_EQ(m.time(1), 2);
  EXPECT_EQ(m.id(1), 1);
  EXPECT_EQ(m.time(2), 4);
  EXPECT_EQ(m.attrs(2)[0], 1.0);
  EXPECT_EQ(m.mirrored(), d);
}

TEST(Score, Examples) {
  EXPECT_DOUBLE_EQ(score(PreferenceVector::linear({1, 1}), Record{0, 1, {3, 4}}), 7.0);
  EXPECT_DOUBLE_EQ(score(PreferenceVector::linear({0, 0, 1}), Record{0, 1, {3, 4, 9}}), 9.0);
  EXPECT_DOUBLE_EQ(score(PreferenceVector::cosine({1, 0}), Record{0, 1, {5, 0}}), 1.0);
  EXPECT_DOUBLE_EQ(score(PreferenceVector::monotone({2, 1}, Transform::Sqrt), Record{0, 1, {4, 9}}),
                   7.0);
  EXPECT_DOUBLE_EQ(score(PreferenceVector::monotone({1}, Transform::Log1p), Record{0, 1, {0}}), 0.0);
  EXPECT_DOUBLE_EQ(score(PreferenceVector::cosine({1, 1}), Record{0, 1, {0, 0}}), 0.0);
}

TEST(Score, Errors) {
  EXPECT_THROW(score(PreferenceVector::linear({1, 1}), Record{0, 1, {3}}), ParameterError);
  EXPECT_THROW(PreferenceVector::linear({0, 0}), ParameterError);
  EXPECT_THROW(PreferenceVector::linear({1, -1}), ParameterError);
  EXPECT_THROW(PreferenceVector::linear({}), ParameterError);
  EXPECT_THROW(PreferenceVector::linear({1}).scaled(0.0), ParameterError);
  EXPECT_THROW(score(PreferenceVector::monotone({1}, Transform::Sqrt), Record{0, 1, {-1}}),
               ParameterError);
}

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates(Record{0, 1, {2, 2}}, Record{1, 2, {1, 2}}));
  EXPECT_FALSE(dominates(Record{0, 1, {2, 2}}, Record{1, 2, {2, 2}}));
  EXPECT_FALSE(dominates(Record{0, 1, {3, 1}}, Record{1, 2, {1, 3}}));
  EXPECT_THROW(dominates(Record{0, 1, {3, 1}}, Record{1, 2, {1}}), ParameterError);
}

TEST(Dominates, ImpliesScoreOrderForMonotoneKinds) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    Record p{0, 1, {u(rng), u(rng), u(rng)}};
    Record q{1, 2, {u(rng), u(rng), u(rng)}};
    for (double& x : q.attrs) x *= 0.5;
    std::vector<double> w{u(rng), u(rng), u(rng)};
    for (auto pref : {PreferenceVector::linear(w), PreferenceVector::monotone(w, Transform::Log1p),
                      PreferenceVector::monotone(w, Transform::Sqrt)}) {
      if (dominates(p, q)) EXPECT_GE(score(pref, p), score(pref, q));
      if (dominates(q, p)) EXPECT_GE(score(pref, q), score(pref, p));
    }
  }
}

TEST(RankOrder, ScoreThenEarlierArrival) {
  auto pref = PreferenceVector::linear({1});
  EXPECT_EQ(rank_order(pref, Record{0, 4, {5}}, Record{1, 1, {3}}), std::strong_ordering::less);
  EXPECT_EQ(rank_order(pref, Record{0, 2, {3}}, Record{1, 7, {3}}), std::strong_ordering::less);
  EXPECT_EQ(rank_order(pref, Record{0, 7, {3}}, Record{1, 2, {3}}), std::strong_ordering::greater);
  EXPECT_EQ(rank_order(pref, Record{0, 7, {3}}, Record{1, 2, {3}}, TieBreak::LaterWins),
            std::strong_ordering::less);
}

TEST(RankOrder, ScalingInvariance) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    Record p{0, 1, {u(rng), u(rng)}};
    Record q{1, 2, {u(rng), u(rng)}};
    auto pref = PreferenceVector::linear({u(rng) + 0.01, u(rng)});
    EXPECT_EQ(rank_order(pref, p, q), rank_order(pref.scaled(3.0), p, q));
  }
}

TEST(Window, Validation) {
  EXPECT_THROW(Window(5, 4), ParameterError);
  Window w(2, 4);
  EXPECT_EQ(w.length(), 3);
  EXPECT_TRUE(w.contains(4));
  EXPECT_FALSE(w.contains(5));
}

TEST(DurableQuery, Validate) {
  auto data = durable::testing::scores_1d({1, 2, 3, 4});
  DurableQuery q{2, Window{1, 4}, 2, PreferenceVector::linear({1}), Direction::LookBack};
  EXPECT_NO_THROW(q.validate(*data));
  auto bad = q;
  bad.tau = 0;
  EXPECT_THROW(bad.validate(*data), ParameterError);
  bad = q;
  bad.tau = 5;
  EXPECT_THROW(bad.validate(*data), ParameterError);
  bad = q;
  bad.k = 0;
  EXPECT_THROW(bad.validate(*data), ParameterError);
  bad = q;
  bad.interval = Window{0, 3};
  EXPECT_THROW(bad.validate(*data), ParameterError);
  bad = q;
  bad.interval = Window{2, 5};
  EXPECT_THROW(bad.validate(*data), ParameterError);
  bad = q;
  bad.pref = PreferenceVector::linear({1, 1});
  EXPECT_THROW(bad.validate(*data), ParameterError);
}

TEST(Parsing, NamesRoundTrip) {
  for (auto k : {ScoringKind::Linear, ScoringKind::MonotoneLinear, ScoringKind::Cosine}) {
    EXPECT_EQ(parse_scoring_kind(to_string(k)), k);
  }
  for (auto h : {Transform::Identity, Transform::Log1p, Transform::Sqrt}) {
    EXPECT_EQ(parse_transform(to_string(h)), h);
  }
  EXPECT_THROW(parse_scoring_kind("quadratic"), ParameterError);
  EXPECT_THROW(parse_transform("exp"), ParameterError);
}

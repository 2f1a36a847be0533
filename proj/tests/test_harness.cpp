#include <gtest/gtest.h>

#include <sstream>

#include "durable/bench.hpp"
#include "durable/report.hpp"
#include "durable/verify.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace durable;

namespace {

BenchSpec small_bench() {
  BenchSpec spec;
  spec.algorithms = {Algorithm::THop, Algorithm::SHop};
  spec.ns = {2000};
  spec.tau_fracs = {0.05, 0.1, 0.2};
  spec.trials = 5;
  spec.seed = 3;
  return spec;
}

std::string without_wall(const std::vector<BenchRow>& rows) {
  std::vector<BenchRow> copy = rows;
  for (BenchRow& r : copy) r.wall_nanos = 0;
  std::ostringstream os;
  write_bench_csv(os, copy);
  return os.str();
}

}  // namespace

TEST(Bench, RowCountIsTheGridProduct) {
  const auto rows = run_bench(small_bench());
  EXPECT_EQ(rows.size(), 30u);
  std::ostringstream os;
  write_bench_csv(os, rows);
  std::string header;
  std::getline(std::istringstream(os.str()), header);
  EXPECT_EQ(header,
            "schema,algo,dist,n,d,k,tau,interval,trial,answer_size,topk_calls,candidate_size,"
            "wall_nanos,seed");
}

TEST(Bench, DeterministicApartFromWallTime) {
  auto spec = small_bench();
  const auto a = run_bench(spec);
  spec.threads = 3;
  const auto b = run_bench(spec);
  EXPECT_EQ(without_wall(a), without_wall(b));
}

TEST(Bench, AggregateOfIdenticalRows) {
  BenchRow r;
  r.n = 10;
  r.d = 1;
  r.k = 2;
  r.tau = 3;
  r.interval = 4;
  r.answer_size = 7;
  r.topk_calls = 11;
  r.candidate_size = 13;
  r.wall_nanos = 100;
  const auto aggs = aggregate({r, r, r});
  ASSERT_EQ(aggs.size(), 1u);
  EXPECT_EQ(aggs[0].trials, 3u);
  EXPECT_DOUBLE_EQ(aggs[0].answer_size_mean, 7);
  EXPECT_DOUBLE_EQ(aggs[0].answer_size_std, 0);
  EXPECT_DOUBLE_EQ(aggs[0].topk_calls_mean, 11);
  EXPECT_DOUBLE_EQ(*aggs[0].candidate_size_mean, 13);
  EXPECT_DOUBLE_EQ(aggs[0].wall_nanos_mean, 100);
}

TEST(Bench, RejectsEmptyGrids) {
  auto spec = small_bench();
  spec.ks.clear();
  EXPECT_THROW(run_bench(spec), ParameterError);
  spec = small_bench();
  spec.trials = 0;
  EXPECT_THROW(run_bench(spec), ParameterError);
}

TEST(Bench, RightAnchoredIntervals) {
  EXPECT_EQ(right_anchored(100, 50), Window(51, 100));
  EXPECT_EQ(right_anchored(100, 500), Window(1, 100));
  EXPECT_EQ(fraction_of(1000, 0.2), 200);
  EXPECT_EQ(fraction_of(3, 0.01), 1);
  EXPECT_THROW(fraction_of(10, 0.0), ParameterError);
}

TEST(Verify, ChecksExactlyTheRequestedInstances) {
  VerifySpec spec;
  spec.instances = 100;
  spec.max_n = 500;
  const auto report = verify(spec);
  EXPECT_EQ(report.checked, 100u);
  EXPECT_TRUE(report.ok()) << report.failures.front().message;
}

TEST(Verify, InjectedFaultIsReportedWithSeed) {
  VerifySpec spec;
  spec.instances = 20;
  spec.max_n = 200;
  spec.tamper = [](Algorithm a, std::vector<RecordId>& answers) {
    if (a == Algorithm::SHop && !answers.empty()) answers.pop_back();
  };
  const auto report = verify(spec);
  ASSERT_FALSE(report.ok());
  const auto& f = report.failures.front();
  EXPECT_NE(f.message.find("s-hop disagrees"), std::string::npos);
  EXPECT_NE(f.message.find("seed=" + std::to_string(f.instance_seed)), std::string::npos);

  VerifySpec replay = spec;
  replay.replay = f.instance_seed;
  EXPECT_EQ(verify(replay).checked, 1u);
  EXPECT_FALSE(verify(replay).ok());
}

TEST(Verify, InvocationBound) {
  EXPECT_EQ(invocation_bound(3, 2, 10, 4), 4u * (3 + 2 * 3) + 3);
  EXPECT_EQ(invocation_bound(0, 1, 4, 4), 4u * 1 + 1);
}

TEST(Report, JsonShape) {
  auto data = durable::testing::scores_1d({5, 3, 8, 2, 9, 4});
  Engine engine(data);
  DurableQuery q{2, Window{1, 6}, 2, PreferenceVector::linear({1}), Direction::LookBack};
  const auto r = engine.run(Algorithm::SBand, q, true);
  const auto j = nlohmann::json::parse(render_json(*data, q, Algorithm::SBand, r));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["algorithm"], "s-band");
  ASSERT_EQ(j["answers"].size(), 5u);
  EXPECT_EQ(j["answers"][2]["t"], 3);
  EXPECT_EQ(j["answers"][2]["score"], 8.0);
  EXPECT_EQ(j["stats"]["answer_size"], 5);
  EXPECT_TRUE(j["stats"].contains("candidate_size"));
  EXPECT_TRUE(j["stats"].contains("wall_nanos"));
  EXPECT_EQ(j["max_durations"].size(), 5u);
}

#pragma once

// Benchmark matrix: one row per (cell, trial, algorithm), plus per-cell
// aggregates. Every random choice derives from BenchSpec::seed.

#include <iosfwd>
#include <optional>
#include <vector>

#include "durable/algorithms.hpp"
#include "durable/datagen.hpp"

namespace durable {

// splitmix64 step; used to derive independent seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// Random non-negative weights in (0, 1], one per dimension.
PreferenceVector random_preference(std::size_t d, std::uint64_t seed,
                                   ScoringKind kind = ScoringKind::Linear,
                                   Transform h = Transform::Identity);

// Right-anchored interval of the given length, clipped to [1, max_time].
Window right_anchored(Timestamp max_time, Timestamp length);

// Fraction of n rounded to the nearest integer, at least 1.
Timestamp fraction_of(std::size_t n, double frac);

struct BenchSpec {
  std::vector<Algorithm> algorithms{Algorithm::THop, Algorithm::SHop};
  std::vector<std::size_t> ns{100000};
  std::vector<std::size_t> dims{2};
  std::vector<std::size_t> ks{10};
  std::vector<double> tau_fracs{0.2};
  std::vector<double> interval_fracs{0.5};
  // Absolute overrides of the fractional grids.
  std::optional<std::vector<Timestamp>> taus;
  std::optional<std::vector<Timestamp>> intervals;
  Distribution distribution = Distribution::IND;
  ScoringKind kind = ScoringKind::Linear;
  Transform transform = Transform::Identity;
  Direction direction = Direction::LookBack;
  std::size_t trials = 5;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  TopKIndexConfig topk;

  void validate() const;
};

struct BenchRow {
  Algorithm algo = Algorithm::THop;
  Distribution distribution = Distribution::IND;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  Timestamp tau = 0;
  Timestamp interval = 0;
  std::size_t trial = 0;
  std::size_t answer_size = 0;
  std::size_t topk_calls = 0;
  std::optional<std::size_t> candidate_size;
  std::int64_t wall_nanos = 0;
  std::uint64_t seed = 0;
};

struct BenchAggregate {
  Algorithm algo = Algorithm::THop;
  Distribution distribution = Distribution::IND;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  Timestamp tau = 0;
  Timestamp interval = 0;
  std::size_t trials = 0;
  double answer_size_mean = 0, answer_size_std = 0;
  double topk_calls_mean = 0, topk_calls_std = 0;
  std::optional<double> candidate_size_mean, candidate_size_std;
  double wall_nanos_mean = 0, wall_nanos_std = 0;
};

// Rows come back in deterministic cell order whatever the thread count.
std::vector<BenchRow> run_bench(const BenchSpec& spec);
std::vector<BenchAggregate> aggregate(const std::vector<BenchRow>& rows);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<BenchAggregate>& aggs);

}  // namespace durable

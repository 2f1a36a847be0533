#include "durable/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <thread>
#include <tuple>

namespace durable {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (a + 1) + 0xBF58476D1CE4E5B9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PreferenceVector random_preference(std::size_t d, std::uint64_t seed, ScoringKind kind,
                                   Transform h) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(d);
  // 1 - U lies in (0, 1], so every weight is positive.
  for (double& x : w) x = 1.0 - unit(rng);
  return PreferenceVector(std::move(w), kind, h);
}

Window right_anchored(Timestamp max_time, Timestamp length) {
  length = std::clamp<Timestamp>(length, 1, max_time);
  return Window{max_time - length + 1, max_time};
}

Timestamp fraction_of(std::size_t n, double frac) {
  if (!(frac > 0.0) || frac > 1.0) throw ParameterError("fractions must lie in (0, 1]");
  return std::max<Timestamp>(1, std::llround(frac * static_cast<double>(n)));
}

void BenchSpec::validate() const {
  if (algorithms.empty() || ns.empty() || dims.empty() || ks.empty()) {
    throw ParameterError("benchmark grids must be non-empty");
  }
  if ((taus ? taus->empty() : tau_fracs.empty()) ||
      (intervals ? intervals->empty() : interval_fracs.empty())) {
    throw ParameterError("benchmark grids must be non-empty");
  }
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (threads < 1) throw ParameterError("threads must be at least 1");
}

namespace {

struct Cell {
  std::size_t n, d, k;
  Timestamp tau, interval;
  std::size_t index;
};

}  // namespace

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  spec.validate();
  std::vector<BenchRow> rows;
  std::size_t cell_index = 0;
  for (std::size_t n : spec.ns) {
    for (std::size_t d : spec.dims) {
      GenSpec gen;
      gen.n = n;
      gen.d = d;
      gen.distribution = spec.distribution;
      gen.seed = mix_seed(spec.seed, n, d);
      Engine engine(std::make_shared<const Dataset>(generate(gen)), EngineConfig{spec.topk, {}, {}});

      std::vector<Cell> cells;
      for (std::size_t k : spec.ks) {
        const std::vector<Timestamp> taus = spec.taus.value_or([&] {
          std::vector<Timestamp> v;
          for (double f : spec.tau_fracs) v.push_back(fraction_of(n, f));
          return v;
        }());
        const std::vector<Timestamp> lens = spec.intervals.value_or([&] {
          std::vector<Timestamp> v;
          for (double f : spec.interval_fracs) v.push_back(fraction_of(n, f));
          return v;
        }());
        for (Timestamp tau : taus) {
          for (Timestamp len : lens) cells.push_back(Cell{n, d, k, tau, len, cell_index++});
        }
      }

      const auto query_for = [&](const Cell& c, std::uint64_t seed) {
        DurableQuery q;
        q.k = c.k;
        q.tau = c.tau;
        q.interval = right_anchored(engine.data().max_time(), c.interval);
        q.pref = random_preference(d, seed, spec.kind, spec.transform);
        q.direction = spec.direction;
        return q;
      };
      // Build every index up front so the workers only read shared state.
      for (const Cell& c : cells) {
        for (Algorithm a : spec.algorithms) engine.prepare(a, query_for(c, 0));
      }

      std::vector<std::vector<BenchRow>> out(cells.size());
      std::atomic<std::size_t> next{0};
      const auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
          const Cell& c = cells[i];
          for (std::size_t trial = 0; trial < spec.trials; ++trial) {
            const std::uint64_t seed = mix_seed(spec.seed, c.index, trial);
            const DurableQuery q = query_for(c, seed);
            for (Algorithm a : spec.algorithms) {
              const DurableResult r = engine.run(a, q);
              out[i].push_back(BenchRow{a, spec.distribution, n, d, c.k, c.tau, c.interval, trial,
                                        r.stats.answer_size, r.stats.topk_calls,
                                        r.stats.candidate_size,
                                        static_cast<std::int64_t>(r.stats.wall.count()), seed});
            }
          }
        }
      };
      const std::size_t workers = std::min(spec.threads, cells.size());
      if (workers <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
      }
      for (auto& part : out) rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  return rows;
}

namespace {

struct Moments {
  double sum = 0, sq = 0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    sq += x * x;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  // Sample standard deviation; 0 for a single observation.
  double stddev() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1)));
  }
};

}  // namespace

std::vector<BenchAggregate> aggregate(const std::vector<BenchRow>& rows) {
  std::map<std::tuple<int, int, std::size_t, std::size_t, std::size_t, Timestamp, Timestamp>,
           std::size_t>
      slot;
  std::vector<BenchAggregate> aggs;
  std::vector<std::array<Moments, 4>> stats;
  for (const BenchRow& r : rows) {
    const auto key = std::make_tuple(static_cast<int>(r.distribution), static_cast<int>(r.algo),
                                     r.n, r.d, r.k, r.tau, r.interval);
    auto [it, fresh] = slot.try_emplace(key, aggs.size());
    if (fresh) {
      BenchAggregate a;
      a.algo = r.algo;
      a.distribution = r.distribution;
      a.n = r.n;
      a.d = r.d;
      a.k = r.k;
      a.tau = r.tau;
      a.interval = r.interval;
      aggs.push_back(a);
      stats.emplace_back();
    }
    auto& m = stats[it->second];
    m[0].add(static_cast<double>(r.answer_size));
    m[1].add(static_cast<double>(r.topk_calls));
    if (r.candidate_size) m[2].add(static_cast<double>(*r.candidate_size));
    m[3].add(static_cast<double>(r.wall_nanos));
  }
  for (std::size_t i = 0; i < aggs.size(); ++i) {
    const auto& m = stats[i];
    BenchAggregate& a = aggs[i];
    a.trials = m[0].n;
    a.answer_size_mean = m[0].mean();
    a.answer_size_std = m[0].stddev();
    a.topk_calls_mean = m[1].mean();
    a.topk_calls_std = m[1].stddev();
    if (m[2].n) {
      a.candidate_size_mean = m[2].mean();
      a.candidate_size_std = m[2].stddev();
    }
    a.wall_nanos_mean = m[3].mean();
    a.wall_nanos_std = m[3].stddev();
  }
  return aggs;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "schema,algo,dist,n,d,k,tau,interval,trial,answer_size,topk_calls,candidate_size,"
         "wall_nanos,seed\n";
  for (const BenchRow& r : rows) {
    out << 1 << ',' << to_string(r.algo) << ',' << to_string(r.distribution) << ',' << r.n << ','
        << r.d << ',' << r.k << ',' << r.tau << ',' << r.interval << ',' << r.trial << ','
        << r.answer_size << ',' << r.topk_calls << ',';
    if (r.candidate_size) out << *r.candidate_size;
    out << ',' << r.wall_nanos << ',' << r.seed << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<BenchAggregate>& aggs) {
  out << "schema,algo,dist,n,d,k,tau,interval,trials,answer_size_mean,answer_size_std,"
         "topk_calls_mean,topk_calls_std,candidate_size_mean,candidate_size_std,wall_nanos_mean,"
         "wall_nanos_std\n";
  for (const BenchAggregate& a : aggs) {
    out << 1 << ',' << to_string(a.algo) << ',' << to_string(a.distribution) << ',' << a.n << ','
        << a.d << ',' << a.k << ',' << a.tau << ',' << a.interval << ',' << a.trials << ','
        << a.answer_size_mean << ',' << a.answer_size_std << ',' << a.topk_calls_mean << ','
        << a.topk_calls_std << ',';
    if (a.candidate_size_mean) out << *a.candidate_size_mean << ',' << *a.candidate_size_std;
    else out << ',';
    out << ',' << a.wall_nanos_mean << ',' << a.wall_nanos_std << '\n';
  }
}

}  // namespace durable

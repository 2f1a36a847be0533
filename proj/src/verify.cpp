#include "durable/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "durable/bench.hpp"

namespace durable {

Instance random_instance(std::uint64_t seed, std::size_t max_n, bool allow_ahead) {
  if (max_n < 1) throw ParameterError("max_n must be at least 1");
  std::mt19937_64 rng(seed);
  const auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  Instance inst;
  inst.seed = seed;
  GenSpec& g = inst.gen;
  g.seed = rng();
  g.n = uniform(1, max_n);
  switch (uniform(0, 3)) {
    case 0: g.distribution = Distribution::ANTI; g.d = 2; break;
    case 1: g.distribution = Distribution::RPM; g.d = 1; break;
    default: {
      constexpr std::size_t dims[] = {1, 2, 3, 5};
      g.distribution = Distribution::IND;
      g.d = dims[uniform(0, 3)];
    }
  }
  DurableQuery& q = inst.query;
  const auto n = static_cast<Timestamp>(g.n);
  q.k = uniform(1, 50);
  q.tau = static_cast<Timestamp>(uniform(1, g.n));
  q.interval = right_anchored(n, static_cast<Timestamp>(uniform(1, g.n)));
  ScoringKind kind = ScoringKind::Linear;
  Transform h = Transform::Identity;
  const std::size_t roll = uniform(0, 7);
  if (roll == 0) {
    kind = ScoringKind::Cosine;
  } else if (roll <= 2) {
    kind = ScoringKind::MonotoneLinear;
    h = roll == 1 ? Transform::Log1p : Transform::Sqrt;
  }
  q.pref = random_preference(g.d, rng(), kind, h);
  if (allow_ahead && uniform(0, 3) == 0) q.direction = Direction::LookAhead;
  return inst;
}

std::string describe(const Instance& inst) {
  const DurableQuery& q = inst.query;
  std::ostringstream os;
  os << "seed=" << inst.seed << " dist=" << to_string(inst.gen.distribution)
     << " n=" << inst.gen.n << " d=" << inst.gen.d << " k=" << q.k << " tau=" << q.tau
     << " I=[" << q.interval.lo << "," << q.interval.hi << "] kind=" << to_string(q.pref.kind())
     << " transform=" << to_string(q.pref.transform()) << " direction=" << to_string(q.direction);
  return os.str();
}

std::size_t invocation_bound(std::size_t answer_size, std::size_t k, Timestamp interval_len,
                             Timestamp tau) {
  const auto hops = static_cast<std::size_t>((interval_len + tau - 1) / tau);
  return 4 * (answer_size + k * hops) + hops;
}

std::uint64_t instance_seed(std::uint64_t base, std::size_t i) { return mix_seed(base, i, 7); }

namespace {

std::string ids_diff(const std::vector<RecordId>& got, const std::vector<RecordId>& want) {
  std::vector<RecordId> extra, missing;
  std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::back_inserter(extra));
  std::set_difference(want.begin(), want.end(), got.begin(), got.end(), std::back_inserter(missing));
  std::ostringstream os;
  os << "extra " << extra.size() << ", missing " << missing.size();
  if (!extra.empty()) os << " (first extra id " << extra.front() << ")";
  if (!missing.empty()) os << " (first missing id " << missing.front() << ")";
  return os.str();
}

void check_instance(const Instance& inst, const VerifySpec& spec, VerifyReport& report) {
  const auto fail = [&](const std::string& what) {
    report.failures.push_back(VerifyFailure{inst.seed, what + " | " + describe(inst)});
  };
  auto data = std::make_shared<const Dataset>(generate(inst.gen));
  const DurableQuery& q = inst.query;
  std::vector<RecordId> want = oracle::durable(*data, q);
  std::sort(want.begin(), want.end());

  Engine engine(data);
  for (Algorithm a : kAllAlgorithms) {
    if (a == Algorithm::SBand && !q.pref.is_monotone()) continue;
    DurableResult r = engine.run(a, q);
    if (spec.tamper) spec.tamper(a, r.answers);
    std::vector<RecordId> got = r.answers;
    std::sort(got.begin(), got.end());
    if (got != want) fail(std::string(to_string(a)) + " disagrees with oracle: " + ids_diff(got, want));
    if (a == Algorithm::THop || a == Algorithm::SHop) {
      const std::size_t bound = invocation_bound(want.size(), q.k, q.interval.length(), q.tau);
      if (r.stats.topk_calls > bound) {
        fail(std::string(to_string(a)) + " used " + std::to_string(r.stats.topk_calls) +
             " top-k calls, bound " + std::to_string(bound));
      }
    }
  }

  if (q.pref.is_monotone() && q.direction == Direction::LookBack) {
    std::vector<RecordId> cand = engine.skyband(Direction::LookBack, q.k).candidates(q);
    std::sort(cand.begin(), cand.end());
    if (!std::includes(cand.begin(), cand.end(), want.begin(), want.end())) {
      fail("skyband candidates miss a durable record");
    }
  }
}

}  // namespace

VerifyReport verify(const VerifySpec& spec) {
  VerifyReport report;
  if (spec.replay) {
    check_instance(random_instance(*spec.replay, spec.max_n, spec.allow_ahead), spec, report);
    report.checked = 1;
    return report;
  }
  for (std::size_t i = 0; i < spec.instances; ++i) {
    check_instance(random_instance(instance_seed(spec.seed, i), spec.max_n, spec.allow_ahead), spec,
                   report);
    ++report.checked;
  }
  return report;
}

}  // namespace durable

#pragma once

// Randomized agreement suite: every algorithm against the brute-force oracle,
// the skyband candidate superset, and the top-k invocation bound.

#include <functional>
#include <string>
#include <vector>

#include "durable/algorithms.hpp"
#include "durable/datagen.hpp"
#include "durable/oracle.hpp"

namespace durable {

struct Instance {
  std::uint64_t seed = 0;
  GenSpec gen;
  DurableQuery query;
};

// Random instance: n in [1, max_n], d in {1, 2, 3, 5} (ANTI uses d = 2, RPM
// d = 1), k in [1, 50], tau in [1, n], right-anchored interval and positive
// weights. About one query in eight uses cosine scoring and one in four a
// monotone transform. Directions are look-back unless allow_ahead is set.
Instance random_instance(std::uint64_t seed, std::size_t max_n, bool allow_ahead = false);

std::string describe(const Instance& inst);

// Slack bound on top-k invocations for the hopping algorithms.
std::size_t invocation_bound(std::size_t answer_size, std::size_t k, Timestamp interval_len,
                             Timestamp tau);

struct VerifySpec {
  std::size_t instances = 1000;
  std::size_t max_n = 2000;
  std::uint64_t seed = 1;
  bool allow_ahead = true;
  // When set, only this instance seed is checked.
  std::optional<std::uint64_t> replay;
  // Test hook: may alter an algorithm's answers before comparison.
  std::function<void(Algorithm, std::vector<RecordId>&)> tamper;
};

struct VerifyFailure {
  std::uint64_t instance_seed = 0;
  std::string message;
};

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<VerifyFailure> failures;
  bool ok() const { return failures.empty(); }
};

std::uint64_t instance_seed(std::uint64_t base, std::size_t i);
VerifyReport verify(const VerifySpec& spec);

}  // namespace durable

#pragma once

// Brute-force references for every query the library answers. Nothing here
// touches the index code; each function rescans the raw records.

#include <span>
#include <vector>

#include "durable/core.hpp"

namespace durable::oracle {

inline constexpr std::size_t kDefaultMaxN = 10000;

struct Guard {
  // Oracles are quadratic; larger inputs need an explicit override.
  std::size_t max_n = kDefaultMaxN;
  bool allow_large = false;
};

// Records in the clipped window w, best first under rank order.
std::vector<Record> topk(const Dataset& data, const PreferenceVector& pref, std::size_t k,
                         const Window& w, TieBreak tie = TieBreak::EarlierWins,
                         Guard guard = {});

// Ids of every record in q.interval that ranks in the top-k of its own
// (clipped) durability window, in arrival order.
std::vector<RecordId> durable(const Dataset& data, const DurableQuery& q, Guard guard = {});

// Largest tau' such that fewer than k records dominating the one at pos lie in
// [t - tau', t], clipped at history start.
Timestamp skyband_duration(const Dataset& data, std::size_t k, std::size_t pos,
                           Guard guard = {});

// Number of blocking intervals [l, l + tau] covering t.
std::size_t density(std::span<const Timestamp> lefts, Timestamp tau, Timestamp t);

// Largest window length for which the record stays in the top-k, found by
// scanning outward from its arrival. Uses q.k, q.pref and q.direction.
Timestamp max_duration(const Dataset& data, const DurableQuery& q, RecordId id,
                       Guard guard = {});

}  // namespace durable::oracle

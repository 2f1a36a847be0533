#include "durable/oracle.hpp"

#include <algorithm>

namespace durable::oracle {

namespace {

void check_size(const Dataset& data, Guard guard) {
  if (!guard.allow_large && data.size() > guard.max_n) {
    throw ParameterError("oracle refuses n=" + std::to_string(data.size()) + " > " +
                         std::to_string(guard.max_n) + " without an override");
  }
}

RankKey key_of(const Dataset& data, const PreferenceVector& pref, std::size_t i) {
  return RankKey{score(pref, data.attrs(i)), data.time(i), data.id(i)};
}

TieBreak tie_for(Direction d) {
  return d == Direction::LookBack ? TieBreak::EarlierWins : TieBreak::LaterWins;
}

std::size_t position_or_throw(const Dataset& data, RecordId id) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.id(i) == id) return i;
  }
  throw ParameterError("unknown record id " + std::to_string(id));
}

}  // namespace

std::vector<Record> topk(const Dataset& data, const PreferenceVector& pref, std::size_t k,
                         const Window& w, TieBreak tie, Guard guard) {
  check_size(data, guard);
  std::vector<std::pair<RankKey, std::size_t>> pool;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (w.contains(data.time(i))) pool.emplace_back(key_of(data, pref, i), i);
  }
  std::sort(pool.begin(), pool.end(), [tie](const auto& a, const auto& b) {
    return ranks_higher(a.first, b.first, tie);
  });
  if (pool.size() > k) pool.resize(k);
  std::vector<Record> out;
  for (const auto& [key, i] : pool) out.push_back(data.record(i));
  return out;
}

std::vector<RecordId> durable(const Dataset& data, const DurableQuery& q, Guard guard) {
  check_size(data, guard);
  q.validate(data);
  const TieBreak tie = tie_for(q.direction);
  std::vector<RankKey> keys;
  for (std::size_t i = 0; i < data.size(); ++i) keys.push_back(key_of(data, q.pref, i));

  std::vector<RecordId> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Timestamp t = data.time(i);
    if (!q.interval.contains(t)) continue;
    const Window w = durability_window(t, q.tau, q.direction);
    std::size_t better = 0;
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (j != i && w.contains(data.time(j)) && ranks_higher(keys[j], keys[i], tie)) ++better;
    }
    if (better < q.k) out.push_back(data.id(i));
  }
  return out;
}

Timestamp skyband_duration(const Dataset& data, std::size_t k, std::size_t pos, Guard guard) {
  check_size(data, guard);
  if (k < 1) throw ParameterError("k must be at least 1");
  const Timestamp t = data.time(pos);
  std::size_t found = 0;
  for (std::size_t j = pos; j-- > 0;) {
    if (dominates(data.attrs(j), data.attrs(pos)) && ++found == k) return t - data.time(j) - 1;
  }
  return t - 1;
}

std::size_t density(std::span<const Timestamp> lefts, Timestamp tau, Timestamp t) {
  std::size_t n = 0;
  for (Timestamp l : lefts) {
    if (l <= t && t <= l + tau) ++n;
  }
  return n;
}

Timestamp max_duration(const Dataset& data, const DurableQuery& q, RecordId id, Guard guard) {
  check_size(data, guard);
  const std::size_t i = position_or_throw(data, id);
  const TieBreak tie = tie_for(q.direction);
  const RankKey me = key_of(data, q.pref, i);
  const Timestamp t = data.time(i);
  std::size_t better = 0;
  if (q.direction == Direction::LookBack) {
    for (std::size_t j = i; j-- > 0;) {
      if (ranks_higher(key_of(data, q.pref, j), me, tie) && ++better == q.k) {
        return t - data.time(j) - 1;
      }
    }
    return t - 1;
  }
  for (std::size_t j = i + 1; j < data.size(); ++j) {
    if (ranks_higher(key_of(data, q.pref, j), me, tie) && ++better == q.k) {
      return data.time(j) - t - 1;
    }
  }
  return data.max_time() - t;
}

}  // namespace durable::oracle

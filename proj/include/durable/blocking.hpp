#pragma once

#include <ext/pb_ds/assoc_container.hpp>
#include <ext/pb_ds/tree_policy.hpp>
#include <unordered_set>
#include <utility>
#include <vector>

#include "durable/core.hpp"

namespace durable {

// Multiset of closed blocking intervals [l, l + tau], one per record. The
// density of a timestamp t counts intervals covering it, i.e. left endpoints
// in [t - tau, t]. Look-ahead blocking is handled by the caller mirroring
// the timeline.
class BlockingSet {
 public:
  explicit BlockingSet(Timestamp tau);

  Timestamp tau() const { return tau_; }

  // Adds [t, t + tau] for record `id` unless that record already contributed.
  bool block(RecordId id, Timestamp t);
  bool block(const Record& p) { return block(p.id, p.t); }
  bool contains(RecordId id) const { return ids_.count(id) != 0; }

  std::size_t density(Timestamp t) const;
  std::size_t size() const { return lefts_.size(); }
  std::vector<Timestamp> lefts() const;

 private:
  // (left endpoint, id) keeps equal endpoints distinct inside the rank tree.
  using Key = std::pair<Timestamp, RecordId>;
  using RankTree = __gnu_pbds::tree<Key, __gnu_pbds::null_type, std::less<Key>,
                                    __gnu_pbds::rb_tree_tag,
                                    __gnu_pbds::tree_order_statistics_node_update>;

  Timestamp tau_;
  RankTree lefts_;
  std::unordered_set<RecordId> ids_;
};

}  // namespace durable

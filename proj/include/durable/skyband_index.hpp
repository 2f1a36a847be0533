#pragma once

// Durable k-skyband index. Every record is mapped to the point
// (arrival time, longest look-back duration it stays in the k-skyband); the
// candidates of a durable query are the points in I x [tau, +inf).

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "durable/core.hpp"

namespace durable {

struct SkybandPoint {
  RecordId record_id = 0;
  Timestamp t = 0;
  // Largest tau' such that fewer than k records in [t - tau', t] dominate
  // the record, clipped at history start (so 0 <= duration <= t - 1).
  Timestamp duration = 0;
  // Fewer than k dominators exist in the whole history: the record stays in
  // the k-skyband for every tau, clipped windows included.
  bool reaches_start = false;

  friend bool operator==(const SkybandPoint&, const SkybandPoint&) = default;
};

// Per-position durations. Finds the k-th most recent dominator of each record
// with a kd-tree searched best-first by recency.
std::vector<SkybandPoint> skyband_durations(const Dataset& data, std::size_t k);

// Exact 3-sided reporting over positions: positions in [first, last] whose key
// is >= a threshold. Max segment tree over the time-ordered keys.
class ThreeSidedIndex {
 public:
  ThreeSidedIndex() = default;
  explicit ThreeSidedIndex(std::vector<Timestamp> keys);

  std::size_t size() const { return n_; }
  // Appends matching positions to out in increasing position order.
  void report(std::size_t first, std::size_t last, Timestamp min_key,
              std::vector<std::size_t>& out) const;

 private:
  void report_node(std::size_t node, std::size_t lo, std::size_t hi, std::size_t first,
                   std::size_t last, Timestamp min_key, std::vector<std::size_t>& out) const;

  std::size_t n_ = 0;
  std::vector<Timestamp> max_;
};

class SkybandIndexFamily {
 public:
  explicit SkybandIndexFamily(std::shared_ptr<const Dataset> data);

  // Power-of-two ladder 1, 2, 4, ... up to the smallest power covering max_k
  // (or n when uncapped).
  static SkybandIndexFamily build(std::shared_ptr<const Dataset> data,
                                  std::optional<std::size_t> max_k = std::nullopt);
  // Smallest power of two >= k; satisfies k <= level < 2k.
  static std::size_t level_for(std::size_t k);

  void add_level(std::size_t kbar);
  // Reassembles a level from stored durations (snapshot loading).
  void add_level(std::size_t kbar, std::vector<SkybandPoint> points);
  bool has_level(std::size_t kbar) const { return levels_.count(kbar) != 0; }
  std::vector<std::size_t> levels() const;
  const std::vector<SkybandPoint>& points(std::size_t kbar) const;
  const Dataset& data() const { return *data_; }

  // Candidate positions for (k, I, tau) from level level_for(k), in time
  // order. Throws ParameterError if that level was not built.
  std::vector<std::size_t> candidate_positions(std::size_t k, const Window& interval,
                                               Timestamp tau) const;
  // Candidate record ids for a look-back query; non-monotone scoring is
  // rejected with UnsupportedFunctionError.
  std::vector<RecordId> candidates(const DurableQuery& q) const;

 private:
  struct Level {
    std::vector<SkybandPoint> points;
    ThreeSidedIndex index;
  };
  const Level& level(std::size_t kbar) const;

  std::shared_ptr<const Dataset> data_;
  std::map<std::size_t, Level> levels_;
};

}  // namespace durable

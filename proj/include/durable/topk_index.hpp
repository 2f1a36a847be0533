#pragma once

// Range top-k building block: a balanced binary tree over the time order whose
// nodes carry the skyline of the records they cover. A query Q(k, W) collects
// the canonical nodes covering W, expands them best-first by interval max
// score until k short nodes are chosen, and scans only those nodes.

#include <cstdint>
#include <memory>
#include <vector>

#include "durable/core.hpp"

namespace durable {

struct TopKIndexConfig {
  std::size_t length_threshold = 128;
};

class TimeTree {
 public:
  static constexpr std::int32_t kNoChild = -1;

  struct Node {
    std::uint32_t lo = 0;  // first position covered
    std::uint32_t hi = 0;  // last position covered (inclusive)
    std::int32_t left = kNoChild;
    std::int32_t right = kNoChild;
    std::uint32_t sky_begin = 0;  // skyline slice in skyline_positions()
    std::uint32_t sky_end = 0;

    bool is_leaf() const { return left == kNoChild; }
    std::size_t length() const { return hi - lo + 1; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  // Builds the index over a non-empty dataset; throws ParameterError otherwise.
  TimeTree(std::shared_ptr<const Dataset> data, TopKIndexConfig cfg = {});
  // Reassembles a tree from stored parts (snapshot loading).
  TimeTree(std::shared_ptr<const Dataset> data, TopKIndexConfig cfg, std::vector<Node> nodes,
           std::vector<std::uint32_t> skyline);

  const Dataset& data() const { return *data_; }
  const std::shared_ptr<const Dataset>& data_ptr() const { return data_; }
  const TopKIndexConfig& config() const { return cfg_; }
  std::size_t root() const { return 0; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::uint32_t>& skyline_positions() const { return skyline_; }

  // Skyline of a node as record positions. Leaves hold their single record.
  std::vector<std::size_t> skyline(std::size_t node) const;
  Window interval(std::size_t node) const;

  // Highest score among the records a node covers. Monotone kinds read the
  // skyline; cosine falls back to scanning the node's records.
  double interval_max_score(std::size_t node, const PreferenceVector& pref) const;

  friend bool operator==(const TimeTree& a, const TimeTree& b);

 private:
  std::int32_t build(std::uint32_t lo, std::uint32_t hi, std::vector<std::uint32_t>& scratch);

  std::shared_ptr<const Dataset> data_;
  TopKIndexConfig cfg_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> skyline_;
};

// One query session: a preference vector bound to a tree plus private scratch
// and the invocation counter consumed by the durable algorithms.
class TopKSession {
 public:
  TopKSession(const TimeTree& tree, const PreferenceVector& pref);

  // Top-k positions within positions [first, last] (inclusive), best first.
  // Counts one invocation; an empty range yields an empty result.
  const std::vector<std::size_t>& query_positions(std::size_t k, std::size_t first,
                                                  std::size_t last);
  // Same for a time window, clipped to the dataset.
  const std::vector<std::size_t>& query(std::size_t k, const Window& w);

  std::size_t calls() const { return calls_; }
  double score_at(std::size_t pos) const { return pref_(data_.attrs_ptr(pos)); }
  // Total order used by every algorithm: higher score, then earlier position.
  bool ranks_higher(std::size_t a, std::size_t b) const {
    return ranks_higher(score_at(a), a, score_at(b), b);
  }
  bool ranks_higher(double sa, std::size_t a, double sb, std::size_t b) const {
    if (sa != sb) return sa > sb;
    return a < b;
  }
  const TimeTree& tree() const { return tree_; }
  const PreferenceVector& pref() const { return pref_; }

 private:
  struct Scored {
    double score;
    std::size_t pos;
  };
  struct Keyed {
    double key;
    std::int32_t node;
  };

  double node_key(std::int32_t node) const;
  void collect_canonical(std::int32_t node, std::size_t first, std::size_t last);
  void scan_range(std::size_t k, std::size_t first, std::size_t last);
  void select_top(std::size_t k);

  const TimeTree& tree_;
  const Dataset& data_;
  PreferenceVector pref_;
  std::size_t calls_ = 0;
  std::vector<Keyed> queue_;
  std::vector<std::int32_t> chosen_;
  std::vector<Scored> pool_;
  std::vector<std::size_t> result_;
};

// Convenience wrapper: ranked records of the top-k in w under pref.
std::vector<Record> query_topk(const TimeTree& tree, const PreferenceVector& pref, std::size_t k,
                               const Window& w);

}  // namespace durable

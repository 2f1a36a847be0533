#include "durable/skyband_index.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace durable {

namespace {

constexpr Timestamp kUnbounded = std::numeric_limits<Timestamp>::max();

bool dominates_raw(const double* p, const double* q, std::size_t d) {
  bool strict = false;
  for (std::size_t i = 0; i < d; ++i) {
    if (p[i] < q[i]) return false;
    strict = strict || p[i] > q[i];
  }
  return strict;
}

std::vector<Timestamp> keys_of(const std::vector<SkybandPoint>& pts) {
  std::vector<Timestamp> keys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    keys[i] = pts[i].reaches_start ? kUnbounded : pts[i].duration;
  }
  return keys;
}

}  // namespace

namespace {

// Static kd-tree over attribute vectors whose nodes track the latest activated
// position below them. Records are activated in time order, so a best-first
// search keyed by that position pops dominators from most to least recent.
class DominatorTree {
 public:
  explicit DominatorTree(const Dataset& data) : data_(data), d_(data.dim()) {
    order_.resize(data.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<std::uint32_t>(i);
    leaf_of_.resize(data.size());
    build(0, order_.size(), -1);
  }

  void activate(std::size_t pos) {
    for (std::int32_t v = leaf_of_[pos]; v >= 0; v = nodes_[v].parent) {
      nodes_[v].latest = std::max<std::int64_t>(nodes_[v].latest, static_cast<std::int64_t>(pos));
    }
  }

  // Position of the k-th most recent activated dominator of pos, if any.
  std::optional<std::size_t> kth_dominator(std::size_t pos, std::size_t k) {
    const double* x = data_.attrs_ptr(pos);
    heap_.clear();
    push_node(0, x);
    std::size_t found = 0;
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end());
      const Entry e = heap_.back();
      heap_.pop_back();
      if (e.node < 0) {
        if (++found == k) return static_cast<std::size_t>(e.key);
        continue;
      }
      const Node& nd = nodes_[e.node];
      if (nd.left < 0) {
        for (std::size_t j = nd.begin; j < nd.end; ++j) {
          const std::uint32_t q = order_[j];
          if (q < pos && dominates_raw(data_.attrs_ptr(q), x, d_)) {
            heap_.push_back(Entry{static_cast<std::int64_t>(q), -1});
            std::push_heap(heap_.begin(), heap_.end());
          }
        }
      } else {
        push_node(nd.left, x);
        push_node(nd.right, x);
      }
    }
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kBucket = 8;

  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t parent = -1;
    std::int64_t latest = -1;
  };
  struct Entry {
    std::int64_t key;
    std::int32_t node;  // -1 marks a confirmed dominator at position key
    bool operator<(const Entry& o) const {
      if (key != o.key) return key < o.key;
      return node > o.node;  // points first on equal keys
    }
  };

  std::int32_t build(std::size_t begin, std::size_t end, std::int32_t parent) {
    const auto idx = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, -1, -1, parent, -1});
    bmax_.resize(bmax_.size() + d_, -std::numeric_limits<double>::infinity());
    std::vector<double> lo(d_, std::numeric_limits<double>::infinity());
    for (std::size_t j = begin; j < end; ++j) {
      const double* p = data_.attrs_ptr(order_[j]);
      for (std::size_t a = 0; a < d_; ++a) {
        bmax_[idx * d_ + a] = std::max(bmax_[idx * d_ + a], p[a]);
        lo[a] = std::min(lo[a], p[a]);
      }
    }
    if (end - begin <= kBucket) {
      for (std::size_t j = begin; j < end; ++j) leaf_of_[order_[j]] = idx;
      return idx;
    }
    std::size_t axis = 0;
    for (std::size_t a = 1; a < d_; ++a) {
      if (bmax_[idx * d_ + a] - lo[a] > bmax_[idx * d_ + axis] - lo[axis]) axis = a;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       return data_.attrs_ptr(a)[axis] < data_.attrs_ptr(b)[axis];
                     });
    const std::int32_t l = build(begin, mid, idx);
    const std::int32_t r = build(mid, end, idx);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
    return idx;
  }

  void push_node(std::int32_t v, const double* x) {
    if (nodes_[v].latest < 0) return;
    for (std::size_t a = 0; a < d_; ++a) {
      if (bmax_[v * d_ + a] < x[a]) return;
    }
    heap_.push_back(Entry{nodes_[v].latest, v});
    std::push_heap(heap_.begin(), heap_.end());
  }

  const Dataset& data_;
  std::size_t d_;
  std::vector<std::uint32_t> order_;
  std::vector<std::int32_t> leaf_of_;
  std::vector<Node> nodes_;
  std::vector<double> bmax_;
  std::vector<Entry> heap_;
};

}  // namespace

std::vector<SkybandPoint> skyband_durations(const Dataset& data, std::size_t k) {
  if (k < 1) throw ParameterError("skyband level must be at least 1");
  const std::size_t n = data.size();
  std::vector<SkybandPoint> out(n);
  if (n == 0) return out;
  DominatorTree tree(data);
  for (std::size_t i = 0; i < n; ++i) {
    SkybandPoint& sp = out[i];
    sp.record_id = data.id(i);
    sp.t = data.time(i);
    sp.duration = sp.t - 1;
    sp.reaches_start = true;
    if (i >= k) {
      if (auto j = tree.kth_dominator(i, k)) {
        sp.duration = sp.t - data.time(*j) - 1;
        sp.reaches_start = false;
      }
    }
    tree.activate(i);
  }
  return out;
}

ThreeSidedIndex::ThreeSidedIndex(std::vector<Timestamp> keys) : n_(keys.size()) {
  if (n_ == 0) return;
  max_.assign(4 * n_, std::numeric_limits<Timestamp>::min());
  // Iterative bottom-up fill over the recursive layout.
  struct Frame {
    std::size_t node, lo, hi;
    bool expanded;
  };
  std::vector<Frame> stack{{1, 0, n_ - 1, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.lo == f.hi) {
      max_[f.node] = keys[f.lo];
      continue;
    }
    const std::size_t mid = f.lo + (f.hi - f.lo) / 2;
    if (!f.expanded) {
      stack.push_back({f.node, f.lo, f.hi, true});
      stack.push_back({2 * f.node, f.lo, mid, false});
      stack.push_back({2 * f.node + 1, mid + 1, f.hi, false});
    } else {
      max_[f.node] = std::max(max_[2 * f.node], max_[2 * f.node + 1]);
    }
  }
}

void ThreeSidedIndex::report(std::size_t first, std::size_t last, Timestamp min_key,
                             std::vector<std::size_t>& out) const {
  if (n_ == 0 || first > last || first >= n_) return;
  report_node(1, 0, n_ - 1, first, std::min(last, n_ - 1), min_key, out);
}

void ThreeSidedIndex::report_node(std::size_t node, std::size_t lo, std::size_t hi,
                                  std::size_t first, std::size_t last, Timestamp min_key,
                                  std::vector<std::size_t>& out) const {
  if (hi < first || lo > last || max_[node] < min_key) return;
  if (lo == hi) {
    out.push_back(lo);
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  report_node(2 * node, lo, mid, first, last, min_key, out);
  report_node(2 * node + 1, mid + 1, hi, first, last, min_key, out);
}

SkybandIndexFamily::SkybandIndexFamily(std::shared_ptr<const Dataset> data)
    : data_(std::move(data)) {
  if (!data_) throw ParameterError("skyband index needs a dataset");
}

std::size_t SkybandIndexFamily::level_for(std::size_t k) {
  if (k < 1) throw ParameterError("k must be at least 1");
  std::size_t kbar = 1;
  while (kbar < k) kbar <<= 1;
  return kbar;
}

SkybandIndexFamily SkybandIndexFamily::build(std::shared_ptr<const Dataset> data,
                                             std::optional<std::size_t> max_k) {
  SkybandIndexFamily fam(std::move(data));
  const std::size_t top = level_for(std::max<std::size_t>(1, max_k.value_or(fam.data_->size())));
  for (std::size_t kbar = 1; kbar <= top; kbar <<= 1) fam.add_level(kbar);
  return fam;
}

void SkybandIndexFamily::add_level(std::size_t kbar) {
  if (has_level(kbar)) return;
  add_level(kbar, skyband_durations(*data_, kbar));
}

void SkybandIndexFamily::add_level(std::size_t kbar, std::vector<SkybandPoint> points) {
  if (kbar == 0 || (kbar & (kbar - 1)) != 0) {
    throw ParameterError("skyband levels must be powers of two");
  }
  if (points.size() != data_->size()) throw ParameterError("skyband level size mismatch");
  ThreeSidedIndex index(keys_of(points));
  levels_[kbar] = Level{std::move(points), std::move(index)};
}

std::vector<std::size_t> SkybandIndexFamily::levels() const {
  std::vector<std::size_t> out;
  for (const auto& [kbar, lvl] : levels_) out.push_back(kbar);
  return out;
}

const SkybandIndexFamily::Level& SkybandIndexFamily::level(std::size_t kbar) const {
  auto it = levels_.find(kbar);
  if (it == levels_.end()) {
    throw ParameterError("skyband level " + std::to_string(kbar) + " was not built");
  }
  return it->second;
}

const std::vector<SkybandPoint>& SkybandIndexFamily::points(std::size_t kbar) const {
  return level(kbar).points;
}

std::vector<std::size_t> SkybandIndexFamily::candidate_positions(std::size_t k,
                                                                 const Window& interval,
                                                                 Timestamp tau) const {
  const Level& lvl = level(level_for(k));
  std::vector<std::size_t> out;
  const PositionRange r = data_->positions(interval);
  if (!r.empty()) lvl.index.report(r.first, r.last - 1, tau, out);
  return out;
}

std::vector<RecordId> SkybandIndexFamily::candidates(const DurableQuery& q) const {
  if (!q.pref.is_monotone()) {
    throw UnsupportedFunctionError("S-Band requires monotone scoring");
  }
  std::vector<RecordId> ids;
  for (std::size_t pos : candidate_positions(q.k, q.interval, q.tau)) ids.push_back(data_->id(pos));
  return ids;
}

}  // namespace durable

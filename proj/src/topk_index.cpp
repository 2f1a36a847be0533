#include "durable/topk_index.hpp"

#include <algorithm>
#include <limits>

namespace durable {

namespace {

// Lexicographically descending attribute order: a dominator always precedes
// every record it dominates, which is what the sort-filter skyline needs.
bool lex_greater(const double* a, const double* b, std::size_t d) {
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

bool dominates_raw(const double* p, const double* q, std::size_t d) {
  bool strict = false;
  for (std::size_t i = 0; i < d; ++i) {
    if (p[i] < q[i]) return false;
    strict = strict || p[i] > q[i];
  }
  return strict;
}

}  // namespace

TimeTree::TimeTree(std::shared_ptr<const Dataset> data, TopKIndexConfig cfg)
    : data_(std::move(data)), cfg_(cfg) {
  if (!data_ || data_->empty()) throw ParameterError("cannot index an empty dataset");
  if (cfg_.length_threshold < 1) throw ParameterError("length threshold must be at least 1");
  if (data_->size() >= std::numeric_limits<std::uint32_t>::max() / 2) {
    throw ParameterError("dataset too large for the time tree");
  }
  const auto n = static_cast<std::uint32_t>(data_->size());
  nodes_.reserve(2 * static_cast<std::size_t>(n));
  std::vector<std::uint32_t> scratch;
  build(0, n - 1, scratch);
  nodes_.shrink_to_fit();
  skyline_.shrink_to_fit();
}

TimeTree::TimeTree(std::shared_ptr<const Dataset> data, TopKIndexConfig cfg,
                   std::vector<Node> nodes, std::vector<std::uint32_t> skyline)
    : data_(std::move(data)), cfg_(cfg), nodes_(std::move(nodes)), skyline_(std::move(skyline)) {
  if (!data_ || data_->empty()) throw ParameterError("cannot index an empty dataset");
  if (nodes_.empty() || nodes_[0].lo != 0 || nodes_[0].hi + 1 != data_->size()) {
    throw ParameterError("tree nodes do not cover the dataset");
  }
  for (const Node& nd : nodes_) {
    if (nd.sky_begin > nd.sky_end || nd.sky_end > skyline_.size() || nd.hi >= data_->size() ||
        (!nd.is_leaf() && (nd.left < 0 || nd.right < 0 ||
                           static_cast<std::size_t>(nd.right) >= nodes_.size() ||
                           static_cast<std::size_t>(nd.left) >= nodes_.size()))) {
      throw ParameterError("corrupt tree node");
    }
  }
}

std::int32_t TimeTree::build(std::uint32_t lo, std::uint32_t hi,
                             std::vector<std::uint32_t>& scratch) {
  const auto idx = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{lo, hi, kNoChild, kNoChild, 0, 0});
  if (lo == hi) return idx;

  const std::uint32_t mid = lo + (hi - lo) / 2;
  const std::int32_t left = build(lo, mid, scratch);
  const std::int32_t right = build(mid + 1, hi, scratch);

  // Skyline of the union of the children's skylines.
  scratch.clear();
  for (std::int32_t child : {left, right}) {
    const Node& c = nodes_[child];
    if (c.is_leaf()) {
      scratch.push_back(c.lo);
    } else {
      scratch.insert(scratch.end(), skyline_.begin() + c.sky_begin, skyline_.begin() + c.sky_end);
    }
  }
  const std::size_t d = data_->dim();
  const Dataset& ds = *data_;
  std::sort(scratch.begin(), scratch.end(), [&](std::uint32_t a, std::uint32_t b) {
    return lex_greater(ds.attrs_ptr(a), ds.attrs_ptr(b), d);
  });
  const auto begin = static_cast<std::uint32_t>(skyline_.size());
  for (std::uint32_t cand : scratch) {
    const double* x = ds.attrs_ptr(cand);
    bool dominated = false;
    for (std::size_t j = begin; j < skyline_.size() && !dominated; ++j) {
      dominated = dominates_raw(ds.attrs_ptr(skyline_[j]), x, d);
    }
    if (!dominated) skyline_.push_back(cand);
  }
  Node& self = nodes_[idx];
  self.left = left;
  self.right = right;
  self.sky_begin = begin;
  self.sky_end = static_cast<std::uint32_t>(skyline_.size());
  return idx;
}

std::vector<std::size_t> TimeTree::skyline(std::size_t node) const {
  const Node& nd = nodes_[node];
  if (nd.is_leaf()) return {nd.lo};
  return {skyline_.begin() + nd.sky_begin, skyline_.begin() + nd.sky_end};
}

Window TimeTree::interval(std::size_t node) const {
  const Node& nd = nodes_[node];
  return {data_->time(nd.lo), data_->time(nd.hi)};
}

double TimeTree::interval_max_score(std::size_t node, const PreferenceVector& pref) const {
  if (pref.dim() != data_->dim()) throw ParameterError("preference dimension mismatch");
  const Node& nd = nodes_[node];
  double best = -std::numeric_limits<double>::infinity();
  if (nd.is_leaf()) return pref(data_->attrs_ptr(nd.lo));
  if (!pref.is_monotone()) {
    for (std::size_t p = nd.lo; p <= nd.hi; ++p) best = std::max(best, pref(data_->attrs_ptr(p)));
    return best;
  }
  for (std::size_t j = nd.sky_begin; j < nd.sky_end; ++j) {
    best = std::max(best, pref(data_->attrs_ptr(skyline_[j])));
  }
  return best;
}

bool operator==(const TimeTree& a, const TimeTree& b) {
  return a.cfg_.length_threshold == b.cfg_.length_threshold && *a.data_ == *b.data_ &&
         a.nodes_ == b.nodes_ && a.skyline_ == b.skyline_;
}

TopKSession::TopKSession(const TimeTree& tree, const PreferenceVector& pref)
    : tree_(tree),
      data_(tree.data()),
      pref_(pref) {
  if (pref_.dim() != data_.dim()) {
    throw ParameterError("preference has dimension " + std::to_string(pref_.dim()) +
                         " but dataset has " + std::to_string(data_.dim()));
  }
}

double TopKSession::node_key(std::int32_t node) const {
  const TimeTree::Node& nd = tree_.node(static_cast<std::size_t>(node));
  if (nd.is_leaf()) return score_at(nd.lo);
  const auto& sky = tree_.skyline_positions();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = nd.sky_begin; j < nd.sky_end; ++j) {
    const double s = score_at(sky[j]);
    if (s > best) best = s;
  }
  return best;
}

void TopKSession::collect_canonical(std::int32_t node, std::size_t first, std::size_t last) {
  const TimeTree::Node& nd = tree_.node(static_cast<std::size_t>(node));
  if (nd.hi < first || nd.lo > last) return;
  if (first <= nd.lo && nd.hi <= last) {
    queue_.push_back(Keyed{node_key(node), node});
    return;
  }
  collect_canonical(nd.left, first, last);
  collect_canonical(nd.right, first, last);
}

void TopKSession::scan_range(std::size_t k, std::size_t first, std::size_t last) {
  pool_.clear();
  for (std::size_t p = first; p <= last; ++p) pool_.push_back(Scored{score_at(p), p});
  select_top(k);
}

void TopKSession::select_top(std::size_t k) {
  const auto better = [this](const Scored& a, const Scored& b) {
    return ranks_higher(a.score, a.pos, b.score, b.pos);
  };
  const std::size_t take = std::min(k, pool_.size());
  std::partial_sort(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(take), pool_.end(),
                    better);
  result_.clear();
  for (std::size_t i = 0; i < take; ++i) result_.push_back(pool_[i].pos);
}

const std::vector<std::size_t>& TopKSession::query_positions(std::size_t k, std::size_t first,
                                                             std::size_t last) {
  ++calls_;
  result_.clear();
  if (k == 0 || first > last || first >= data_.size()) return result_;
  last = std::min(last, data_.size() - 1);

  // Small windows and non-monotone scoring go straight to a scan; the skyline
  // bound is meaningless for cosine.
  if (last - first + 1 <= k || !pref_.is_monotone()) {
    scan_range(k, first, last);
    return result_;
  }

  const auto by_key = [](const Keyed& a, const Keyed& b) { return a.key < b.key; };
  queue_.clear();
  chosen_.clear();
  collect_canonical(static_cast<std::int32_t>(tree_.root()), first, last);
  std::make_heap(queue_.begin(), queue_.end(), by_key);

  const std::size_t threshold = tree_.config().length_threshold;
  double cutoff = std::numeric_limits<double>::infinity();
  // Keep expanding until k short nodes are chosen, then keep taking nodes whose
  // key ties the k-th chosen key so that score ties resolve by rank order.
  while (!queue_.empty() && (chosen_.size() < k || queue_.front().key >= cutoff)) {
    std::pop_heap(queue_.begin(), queue_.end(), by_key);
    const Keyed top = queue_.back();
    queue_.pop_back();
    const TimeTree::Node& nd = tree_.node(static_cast<std::size_t>(top.node));
    if (nd.length() > threshold && !nd.is_leaf()) {
      queue_.push_back(Keyed{node_key(nd.left), nd.left});
      std::push_heap(queue_.begin(), queue_.end(), by_key);
      queue_.push_back(Keyed{node_key(nd.right), nd.right});
      std::push_heap(queue_.begin(), queue_.end(), by_key);
    } else {
      chosen_.push_back(top.node);
      if (chosen_.size() == k) cutoff = top.key;
    }
  }

  pool_.clear();
  for (std::int32_t c : chosen_) {
    const TimeTree::Node& nd = tree_.node(static_cast<std::size_t>(c));
    for (std::size_t p = nd.lo; p <= nd.hi; ++p) pool_.push_back(Scored{score_at(p), p});
  }
  select_top(k);
  return result_;
}

const std::vector<std::size_t>& TopKSession::query(std::size_t k, const Window& w) {
  const PositionRange r = data_.positions(w);
  if (r.empty()) {
    ++calls_;
    result_.clear();
    return result_;
  }
  return query_positions(k, r.first, r.last - 1);
}

std::vector<Record> query_topk(const TimeTree& tree, const PreferenceVector& pref, std::size_t k,
                               const Window& w) {
  TopKSession session(tree, pref);
  const auto& top = session.query(k, w);
  std::vector<Record> out;
  out.reserve(top.size());
  for (std::size_t pos : top) out.push_back(tree.data().record(pos));
  return out;
}

}  // namespace durable

#include "durable/algorithms.hpp"

#include <algorithm>
#include <chrono>

#include "durable/blocking.hpp"

namespace durable {

namespace {

using Clock = std::chrono::steady_clock;

struct Scored {
  double score;
  std::size_t pos;
};

void require_look_back(const DurableQuery& q, const Dataset& data) {
  if (q.direction != Direction::LookBack) {
    throw ParameterError("look-ahead queries must run through durable::Engine");
  }
  q.validate(data);
}

// First position inside the clipped durability window of the record at pos.
std::size_t window_first(const Dataset& data, std::size_t pos, Timestamp tau) {
  return data.positions(data.time(pos) - tau, data.time(pos)).first;
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

DurableResult finish(const Dataset& data, std::vector<std::size_t> positions,
                     std::size_t topk_calls, Clock::time_point start) {
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  DurableResult r;
  r.answers.reserve(positions.size());
  for (std::size_t p : positions) r.answers.push_back(data.id(p));
  r.stats.answer_size = r.answers.size();
  r.stats.topk_calls = topk_calls;
  r.stats.wall = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return r;
}

void sort_by_rank(std::vector<Scored>& v) {
  std::sort(v.begin(), v.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.pos < b.pos;
  });
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::TBase: return "t-base";
    case Algorithm::THop: return "t-hop";
    case Algorithm::SBase: return "s-base";
    case Algorithm::SBand: return "s-band";
    case Algorithm::SHop: return "s-hop";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  throw ParameterError("unknown algorithm '" + std::string(name) + "'");
}

DurableResult t_base(const TimeTree& tree, const DurableQuery& q) {
  const Dataset& data = tree.data();
  require_look_back(q, data);
  const auto start = Clock::now();
  TopKSession session(tree, q.pref);
  const PositionRange in = data.positions(q.interval);
  std::vector<std::size_t> answers;
  if (in.empty()) return finish(data, answers, session.calls(), start);

  // Heap whose front is the lowest-ranked member of the current top-k.
  std::vector<Scored> buffer;
  const auto lower_first = [&](const Scored& a, const Scored& b) {
    return session.ranks_higher(a.score, a.pos, b.score, b.pos);
  };
  const auto recompute = [&](std::size_t first, std::size_t last) {
    buffer.clear();
    for (std::size_t p : session.query_positions(q.k, first, last)) {
      buffer.push_back(Scored{session.score_at(p), p});
    }
    std::make_heap(buffer.begin(), buffer.end(), lower_first);
  };

  std::size_t cur = in.last - 1;
  std::size_t lo = window_first(data, cur, q.tau);
  recompute(lo, cur);
  while (true) {
    const double s = session.score_at(cur);
    const bool in_top = buffer.size() < q.k ||
                        !session.ranks_higher(buffer.front().score, buffer.front().pos, s, cur);
    if (in_top) answers.push_back(cur);
    if (cur == in.first) break;

    const std::size_t next = cur - 1;
    const std::size_t next_lo = window_first(data, next, q.tau);
    if (in_top) {
      // The expiring record is a top-k member: start over on the new window.
      recompute(next_lo, next);
    } else {
      for (std::size_t p = next_lo; p < lo; ++p) {
        const Scored e{session.score_at(p), p};
        if (buffer.size() < q.k) {
          buffer.push_back(e);
          std::push_heap(buffer.begin(), buffer.end(), lower_first);
        } else if (session.ranks_higher(e.score, e.pos, buffer.front().score, buffer.front().pos)) {
          std::pop_heap(buffer.begin(), buffer.end(), lower_first);
          buffer.back() = e;
          std::push_heap(buffer.begin(), buffer.end(), lower_first);
        }
      }
    }
    cur = next;
    lo = next_lo;
  }
  return finish(data, std::move(answers), session.calls(), start);
}

DurableResult t_hop(const TimeTree& tree, const DurableQuery& q) {
  const Dataset& data = tree.data();
  require_look_back(q, data);
  const auto start = Clock::now();
  TopKSession session(tree, q.pref);
  const PositionRange in = data.positions(q.interval);
  std::vector<std::size_t> answers;
  if (in.empty()) return finish(data, answers, session.calls(), start);

  std::size_t cur = in.last - 1;
  while (true) {
    const auto& top = session.query_positions(q.k, window_first(data, cur, q.tau), cur);
    if (contains(top, cur)) {
      answers.push_back(cur);
      if (cur == in.first) break;
      --cur;
    } else {
      // Nothing between the latest top-k arrival and cur can be durable.
      const std::size_t hop = *std::max_element(top.begin(), top.end());
      if (hop < in.first) break;
      cur = hop;
    }
  }
  return finish(data, std::move(answers), session.calls(), start);
}

DurableResult s_base(const Dataset& data, const DurableQuery& q) {
  require_look_back(q, data);
  const auto start = Clock::now();
  const PositionRange in = data.positions(q.interval);
  std::vector<std::size_t> answers;
  if (in.empty()) return finish(data, answers, 0, start);

  const PositionRange scope = data.positions(q.interval.lo - q.tau, q.interval.hi);
  std::vector<Scored> order;
  order.reserve(scope.size());
  for (std::size_t p = scope.first; p < scope.last; ++p) {
    order.push_back(Scored{q.pref(data.attrs_ptr(p)), p});
  }
  sort_by_rank(order);

  BlockingSet blocking(q.tau);
  for (const Scored& e : order) {
    const Timestamp t = data.time(e.pos);
    if (e.pos >= in.first && blocking.density(t) < q.k) answers.push_back(e.pos);
    blocking.block(data.id(e.pos), t);
  }
  return finish(data, std::move(answers), 0, start);
}

DurableResult s_band(const TimeTree& tree, const SkybandIndexFamily& family,
                     const DurableQuery& q) {
  const Dataset& data = tree.data();
  require_look_back(q, data);
  if (!q.pref.is_monotone()) throw UnsupportedFunctionError("S-Band requires monotone scoring");
  if (&family.data() != &data && !(family.data() == data)) {
    throw ParameterError("skyband index was built for a different dataset");
  }
  const auto start = Clock::now();
  TopKSession session(tree, q.pref);

  const std::vector<std::size_t> cand = family.candidate_positions(q.k, q.interval, q.tau);
  std::vector<Scored> order;
  order.reserve(cand.size());
  for (std::size_t p : cand) order.push_back(Scored{session.score_at(p), p});
  sort_by_rank(order);

  BlockingSet blocking(q.tau);
  std::vector<std::size_t> answers;
  for (const Scored& e : order) {
    const Timestamp t = data.time(e.pos);
    if (blocking.density(t) < q.k) {
      const auto& top = session.query_positions(q.k, window_first(data, e.pos, q.tau), e.pos);
      if (contains(top, e.pos)) {
        answers.push_back(e.pos);
      } else {
        // Every returned record outranks e; they may be non-candidates.
        for (std::size_t b : top) blocking.block(data.id(b), data.time(b));
      }
    }
    blocking.block(data.id(e.pos), t);
  }
  DurableResult r = finish(data, std::move(answers), session.calls(), start);
  r.stats.candidate_size = cand.size();
  return r;
}

namespace {

struct HeapEntry {
  double score;
  std::size_t pos;
  std::size_t list;  // index into the per-interval ranked lists
  std::size_t next;  // next unexposed entry of that list
  std::size_t lo;    // sub-interval [lo, hi] in positions
  std::size_t hi;
};

}  // namespace

DurableResult s_hop(const TimeTree& tree, const DurableQuery& q, SHopOptions opts) {
  const Dataset& data = tree.data();
  require_look_back(q, data);
  const auto start = Clock::now();
  TopKSession session(tree, q.pref);
  const std::size_t list_k = opts.top1_lists ? 1 : q.k;

  std::vector<std::vector<std::size_t>> lists;
  std::vector<HeapEntry> heap;
  const auto lower = [&](const HeapEntry& a, const HeapEntry& b) {
    return session.ranks_higher(b.score, b.pos, a.score, a.pos);
  };
  // Fetches the ranked list of [lo, hi] and exposes its best entry.
  const auto open_interval = [&](std::size_t lo, std::size_t hi) {
    const auto& top = session.query_positions(list_k, lo, hi);
    if (top.empty()) return;
    lists.push_back(top);
    heap.push_back(HeapEntry{session.score_at(top[0]), top[0], lists.size() - 1, 1, lo, hi});
    std::push_heap(heap.begin(), heap.end(), lower);
  };

  // Disjoint tau-length sub-intervals [a, a + tau), [a + tau, a + 2 tau), ...
  for (Timestamp l = q.interval.lo; l <= q.interval.hi; l += q.tau) {
    const Timestamp r = std::min(q.interval.hi, l + q.tau - 1);
    const PositionRange sub = data.positions(l, r);
    if (!sub.empty()) open_interval(sub.first, sub.last - 1);
  }

  BlockingSet blocking(q.tau);
  std::vector<std::size_t> answers;
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), lower);
    const HeapEntry e = heap.back();
    heap.pop_back();
    const Timestamp t = data.time(e.pos);

    if (blocking.density(t) < q.k) {
      const auto& top = session.query_positions(q.k, window_first(data, e.pos, q.tau), e.pos);
      if (contains(top, e.pos)) {
        answers.push_back(e.pos);
      } else {
        for (std::size_t b : top) blocking.block(data.id(b), data.time(b));
      }
      // The old list is dropped; both sides get fresh ranked lists.
      if (e.pos > e.lo) open_interval(e.lo, e.pos - 1);
      if (e.pos < e.hi) open_interval(e.pos + 1, e.hi);
    } else {
      std::vector<std::size_t>& list = lists[e.list];
      if (e.next >= list.size() && opts.top1_lists && list.size() < q.k &&
          list.size() < e.hi - e.lo + 1) {
        list = session.query_positions(list.size() + 1, e.lo, e.hi);
      }
      if (e.next < list.size()) {
        const std::size_t p = list[e.next];
        heap.push_back(HeapEntry{session.score_at(p), p, e.list, e.next + 1, e.lo, e.hi});
        std::push_heap(heap.begin(), heap.end(), lower);
      }
    }
    blocking.block(data.id(e.pos), t);
  }
  return finish(data, std::move(answers), session.calls(), start);
}

std::map<RecordId, Timestamp> max_duration(const TimeTree& tree, const DurableQuery& q,
                                           std::span<const RecordId> answers) {
  const Dataset& data = tree.data();
  require_look_back(q, data);
  TopKSession session(tree, q.pref);
  std::map<RecordId, Timestamp> out;
  for (RecordId id : answers) {
    const auto pos = data.position_of_id(id);
    if (!pos) throw ParameterError("unknown record id " + std::to_string(id));
    const Timestamp t = data.time(*pos);
    const auto durable_for = [&](Timestamp span) {
      return contains(session.query(q.k, Window{t - span, t}), *pos);
    };
    Timestamp lo = std::min(q.tau, t - 1);
    Timestamp hi = t - 1;
    if (!durable_for(lo)) {
      throw ParameterError("record " + std::to_string(id) + " is not durable for this query");
    }
    while (lo < hi) {
      const Timestamp mid = lo + (hi - lo + 1) / 2;
      if (durable_for(mid)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    out[id] = lo;
  }
  return out;
}

Engine::Engine(std::shared_ptr<const Dataset> data, EngineConfig cfg)
    : data_(std::move(data)), cfg_(cfg) {
  if (!data_ || data_->empty()) throw ParameterError("engine needs a non-empty dataset");
  back_.data = data_;
}

Engine::Side& Engine::side(Direction d) {
  if (d == Direction::LookBack) return back_;
  if (!ahead_.data) ahead_.data = std::make_shared<const Dataset>(data_->mirrored());
  return ahead_;
}

const TimeTree& Engine::tree(Direction d) {
  std::lock_guard lock(mu_);
  Side& s = side(d);
  if (!s.tree) s.tree = std::make_shared<const TimeTree>(s.data, cfg_.topk);
  return *s.tree;
}

const SkybandIndexFamily& Engine::skyband(Direction d, std::size_t k) {
  std::lock_guard lock(mu_);
  Side& s = side(d);
  if (!s.skyband) s.skyband = std::make_shared<SkybandIndexFamily>(s.data);
  const std::size_t kbar = SkybandIndexFamily::level_for(k);
  if (!s.skyband->has_level(kbar)) {
    const std::size_t cap =
        cfg_.skyband_max_k ? SkybandIndexFamily::level_for(*cfg_.skyband_max_k) : kbar;
    if (kbar > cap) {
      throw ParameterError("k=" + std::to_string(k) + " exceeds the skyband ladder cap " +
                           std::to_string(cap));
    }
    s.skyband->add_level(kbar);
  }
  return *s.skyband;
}

void Engine::set_tree(Direction d, std::shared_ptr<const TimeTree> tree) {
  std::lock_guard lock(mu_);
  Side& s = side(d);
  if (!tree || !(tree->data() == *s.data)) {
    throw ParameterError("tree does not index this engine's dataset");
  }
  s.tree = std::move(tree);
}

void Engine::set_skyband(Direction d, std::shared_ptr<SkybandIndexFamily> family) {
  std::lock_guard lock(mu_);
  Side& s = side(d);
  if (!family || !(family->data() == *s.data)) {
    throw ParameterError("skyband index does not cover this engine's dataset");
  }
  s.skyband = std::move(family);
}

DurableQuery Engine::to_look_back(const DurableQuery& q) const {
  if (q.direction == Direction::LookBack) return q;
  DurableQuery m = q;
  const Timestamp top = data_->max_time();
  m.interval = Window{top + 1 - q.interval.hi, top + 1 - q.interval.lo};
  m.direction = Direction::LookBack;
  return m;
}

void Engine::prepare(Algorithm algo, const DurableQuery& q) {
  q.validate(*data_);
  if (algo != Algorithm::SBase) tree(q.direction);
  if (algo == Algorithm::SBand) {
    if (!q.pref.is_monotone()) throw UnsupportedFunctionError("S-Band requires monotone scoring");
    skyband(q.direction, q.k);
  }
}

DurableResult Engine::run(Algorithm algo, const DurableQuery& q, bool with_durations) {
  prepare(algo, q);
  const DurableQuery lb = to_look_back(q);
  const Side& s = side(q.direction);
  DurableResult r;
  switch (algo) {
    case Algorithm::TBase: r = t_base(*s.tree, lb); break;
    case Algorithm::THop: r = t_hop(*s.tree, lb); break;
    case Algorithm::SBase: r = s_base(*s.data, lb); break;
    case Algorithm::SBand: r = s_band(*s.tree, *s.skyband, lb); break;
    case Algorithm::SHop: r = s_hop(*s.tree, lb, cfg_.shop); break;
  }
  // Mirrored positions run backwards in original time.
  if (q.direction == Direction::LookAhead) std::reverse(r.answers.begin(), r.answers.end());
  if (with_durations) r.max_durations = max_durations(q, r.answers);
  return r;
}

std::map<RecordId, Timestamp> Engine::max_durations(const DurableQuery& q,
                                                    std::span<const RecordId> answers) {
  q.validate(*data_);
  const TimeTree& t = tree(q.direction);
  return max_duration(t, to_look_back(q), answers);
}

}  // namespace durable

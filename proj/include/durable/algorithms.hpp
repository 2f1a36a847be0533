#pragma once

// Durable top-k algorithms. DurTop(k, I, tau) is the set of records arriving
// in I that rank among the top-k of their own tau-window. All five algorithms
// return the same set; they differ in how many range top-k queries they issue.

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <vector>

#include "durable/core.hpp"
#include "durable/skyband_index.hpp"
#include "durable/topk_index.hpp"

namespace durable {

enum class Algorithm : std::uint8_t { TBase, THop, SBase, SBand, SHop };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::TBase, Algorithm::THop,
                                               Algorithm::SBase, Algorithm::SBand,
                                               Algorithm::SHop};

struct DurableResult {
  std::vector<RecordId> answers;  // in arrival order
  QueryStats stats;
  std::optional<std::map<RecordId, Timestamp>> max_durations;
};

struct SHopOptions {
  // Keep only the best record per interval list and fetch deeper on demand.
  bool top1_lists = false;
};

// Look-back implementations. Each throws ParameterError on an invalid query or
// a look-ahead direction (look-ahead runs through Engine).

// Sliding window with a bounded top-k buffer; recomputes only when the
// expiring record is in the current top-k.
DurableResult t_base(const TimeTree& tree, const DurableQuery& q);
// Time hopping: after a failed check jump to the latest arrival in the top-k.
DurableResult t_hop(const TimeTree& tree, const DurableQuery& q);
// Full score sort of P([a - tau, b]) plus blocking; no top-k queries.
DurableResult s_base(const Dataset& data, const DurableQuery& q);
// Score order over durable k-skyband candidates; monotone scoring only.
DurableResult s_band(const TimeTree& tree, const SkybandIndexFamily& family,
                     const DurableQuery& q);
// Score hopping over tau-length sub-intervals with a global max-heap.
DurableResult s_hop(const TimeTree& tree, const DurableQuery& q, SHopOptions opts = {});

// Longest look-back duration for each answer, by binary search over the
// window length with one top-k membership probe per step. Durations are
// clipped at history start.
std::map<RecordId, Timestamp> max_duration(const TimeTree& tree, const DurableQuery& q,
                                           std::span<const RecordId> answers);

struct EngineConfig {
  TopKIndexConfig topk;
  // Largest k the skyband ladder must cover; levels are built on demand up to
  // this bound. Unset means no bound.
  std::optional<std::size_t> skyband_max_k;
  SHopOptions shop;
};

// Owns the indexes for one dataset in both directions. Indexes are built
// lazily and then shared read-only, so concurrent run() calls are safe once
// the structures they need exist (prepare() builds them up front).
class Engine {
 public:
  explicit Engine(std::shared_ptr<const Dataset> data, EngineConfig cfg = {});

  const Dataset& data() const { return *data_; }
  const std::shared_ptr<const Dataset>& data_ptr() const { return data_; }
  const EngineConfig& config() const { return cfg_; }

  DurableResult run(Algorithm algo, const DurableQuery& q, bool with_durations = false);
  std::map<RecordId, Timestamp> max_durations(const DurableQuery& q,
                                              std::span<const RecordId> answers);

  // Builds whatever run(algo, q) needs.
  void prepare(Algorithm algo, const DurableQuery& q);

  const TimeTree& tree(Direction d);
  const SkybandIndexFamily& skyband(Direction d, std::size_t k);

  void set_tree(Direction d, std::shared_ptr<const TimeTree> tree);
  void set_skyband(Direction d, std::shared_ptr<SkybandIndexFamily> family);

 private:
  struct Side {
    std::shared_ptr<const Dataset> data;
    std::shared_ptr<const TimeTree> tree;
    std::shared_ptr<SkybandIndexFamily> skyband;
  };
  Side& side(Direction d);
  DurableQuery to_look_back(const DurableQuery& q) const;

  std::shared_ptr<const Dataset> data_;
  EngineConfig cfg_;
  std::mutex mu_;
  Side back_;
  Side ahead_;
};

}  // namespace durable

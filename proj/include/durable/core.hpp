#pragma once

// Domain types shared by every durable top-k component: records, datasets,
// preference scoring, dominance, rank order and query parameters.

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace durable {

using Timestamp = std::int64_t;
using RecordId = std::int64_t;

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedFunctionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Record {
  RecordId id = 0;
  Timestamp t = 0;
  std::vector<double> attrs;

  friend bool operator==(const Record&, const Record&) = default;
};

// Which of two equally scored records ranks higher. Look-back ranking uses
// EarlierWins; look-ahead is the mirror image, so on the original timeline
// LaterWins.
enum class TieBreak : std::uint8_t { EarlierWins = 0, LaterWins = 1 };

// Closed time window [lo, hi].
struct Window {
  Timestamp lo = 1;
  Timestamp hi = 1;

  Window() = default;
  Window(Timestamp lo_, Timestamp hi_);

  Timestamp length() const { return hi - lo + 1; }
  bool contains(Timestamp t) const { return lo <= t && t <= hi; }
  friend bool operator==(const Window&, const Window&) = default;
};

// Half-open range of record positions [first, last) inside a Dataset.
struct PositionRange {
  std::size_t first = 0;
  std::size_t last = 0;

  bool empty() const { return first >= last; }
  std::size_t size() const { return empty() ? 0 : last - first; }
};

// Immutable, time-ordered collection of equal-dimension records. Records are
// addressed by position (index in time order); attributes live in one
// row-major buffer. Ranking inside a dataset breaks score ties by earlier
// arrival.
class Dataset {
 public:
  Dataset() = default;
  // Records must have strictly increasing t >= 1 and a common dimension >= 1.
  explicit Dataset(std::vector<Record> records);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  std::size_t dim() const { return dim_; }

  Timestamp time(std::size_t pos) const { return times_[pos]; }
  RecordId id(std::size_t pos) const { return ids_[pos]; }
  std::span<const double> attrs(std::size_t pos) const {
    return {values_.data() + pos * dim_, dim_};
  }
  const double* attrs_ptr(std::size_t pos) const { return values_.data() + pos * dim_; }
  Record record(std::size_t pos) const;

  double min_attribute() const { return min_value_; }

  // Largest timestamp; the time domain is [1, max_time()].
  Timestamp max_time() const { return times_.empty() ? 0 : times_.back(); }

  // Positions of records with lo <= t <= hi (window endpoints need not be
  // valid timestamps; an inverted window yields an empty range).
  PositionRange positions(Timestamp lo, Timestamp hi) const;
  PositionRange positions(const Window& w) const { return positions(w.lo, w.hi); }

  std::optional<std::size_t> position_of_time(Timestamp t) const;
  std::optional<std::size_t> position_of_id(RecordId id) const;

  // Time-reversed copy: t' = max_time() + 1 - t, ids preserved.
  Dataset mirrored() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Timestamp> times_;
  std::vector<RecordId> ids_;
  std::vector<double> values_;
  double min_value_ = 0.0;
};

enum class ScoringKind : std::uint8_t { Linear, MonotoneLinear, Cosine };

// Monotone per-attribute transforms available to the monotone-linear kind.
enum class Transform : std::uint8_t { Identity, Log1p, Sqrt };

std::string_view to_string(ScoringKind kind);
std::string_view to_string(Transform h);
ScoringKind parse_scoring_kind(std::string_view name);
Transform parse_transform(std::string_view name);

class PreferenceVector {
 public:
  PreferenceVector() = default;
  PreferenceVector(std::vector<double> weights, ScoringKind kind = ScoringKind::Linear,
                   Transform h = Transform::Identity);

  static PreferenceVector linear(std::vector<double> weights) {
    return {std::move(weights), ScoringKind::Linear};
  }
  static PreferenceVector monotone(std::vector<double> weights, Transform h) {
    return {std::move(weights), ScoringKind::MonotoneLinear, h};
  }
  static PreferenceVector cosine(std::vector<double> weights) {
    return {std::move(weights), ScoringKind::Cosine};
  }

  const std::vector<double>& weights() const { return weights_; }
  std::size_t dim() const { return weights_.size(); }
  ScoringKind kind() const { return kind_; }
  Transform transform() const { return h_; }
  // Monotone kinds are consistent with dominance: p dominates q implies
  // score(p) >= score(q).
  bool is_monotone() const { return kind_ != ScoringKind::Cosine; }

  PreferenceVector scaled(double c) const;

  // Hot-path scoring over a raw attribute row of dim() values.
  double operator()(const double* x) const;

  friend bool operator==(const PreferenceVector&, const PreferenceVector&) = default;

 private:
  std::vector<double> weights_;
  ScoringKind kind_ = ScoringKind::Linear;
  Transform h_ = Transform::Identity;
  double weight_norm_ = 0.0;
};

double score(const PreferenceVector& pref, std::span<const double> attrs);
double score(const PreferenceVector& pref, const Record& p);

// p dominates q: no worse in every attribute and strictly better in one.
bool dominates(std::span<const double> p, std::span<const double> q);
bool dominates(const Record& p, const Record& q);

// Ranking key of a record under one preference vector. Higher score first,
// then by arrival time per the tie policy, then by id.
struct RankKey {
  double score = 0.0;
  Timestamp t = 0;
  RecordId id = 0;
};

inline bool ranks_higher(const RankKey& a, const RankKey& b, TieBreak tie) {
  if (a.score != b.score) return a.score > b.score;
  if (a.t != b.t) return tie == TieBreak::EarlierWins ? a.t < b.t : a.t > b.t;
  return a.id < b.id;
}

// less: p ranks ahead of q; greater: q ranks ahead; equal only for identical
// (score, t, id).
std::strong_ordering rank_order(const PreferenceVector& pref, const Record& p, const Record& q,
                                TieBreak tie = TieBreak::EarlierWins);

enum class Direction : std::uint8_t { LookBack, LookAhead };

std::string_view to_string(Direction d);

struct DurableQuery {
  std::size_t k = 1;
  Window interval;
  Timestamp tau = 1;
  PreferenceVector pref;
  Direction direction = Direction::LookBack;

  // Throws ParameterError unless 1 <= tau <= |T|, k >= 1, the interval lies
  // in T = [1, max_time] and the preference dimension matches.
  void validate(const Dataset& data) const;
};

// Durability window of a record at time t, before clipping to the domain.
inline Window durability_window(Timestamp t, Timestamp tau, Direction d) {
  return d == Direction::LookBack ? Window{t - tau, t} : Window{t, t + tau};
}

struct QueryStats {
  std::size_t answer_size = 0;
  std::size_t topk_calls = 0;
  std::optional<std::size_t> candidate_size;
  std::chrono::nanoseconds wall{0};
};

}  // namespace durable

#include "durable/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace durable {

Window::Window(Timestamp lo_, Timestamp hi_) : lo(lo_), hi(hi_) {
  if (lo > hi) {
    throw ParameterError("window lower end " + std::to_string(lo) + " exceeds upper end " +
                         std::to_string(hi));
  }
}

Dataset::Dataset(std::vector<Record> records) {
  if (records.empty()) return;
  dim_ = records.front().attrs.size();
  if (dim_ == 0) throw ParameterError("records must have at least one attribute");
  times_.reserve(records.size());
  ids_.reserve(records.size());
  values_.reserve(records.size() * dim_);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    if (r.attrs.size() != dim_) {
      throw ParameterError("record " + std::to_string(r.id) + " has " +
                           std::to_string(r.attrs.size()) + " attributes, expected " +
                           std::to_string(dim_));
    }
    if (r.t < 1) throw ParameterError("record " + std::to_string(r.id) + " has time < 1");
    if (i > 0 && r.t <= records[i - 1].t) {
      throw ParameterError("arrival times must be strictly increasing (t=" +
                           std::to_string(r.t) + ")");
    }
    for (double x : r.attrs) {
      if (!std::isfinite(x)) {
        throw ParameterError("record " + std::to_string(r.id) + " has a non-finite attribute");
      }
    }
    times_.push_back(r.t);
    ids_.push_back(r.id);
    values_.insert(values_.end(), r.attrs.begin(), r.attrs.end());
  }
  min_value_ = *std::min_element(values_.begin(), values_.end());
  std::vector<RecordId> sorted_ids = ids_;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  if (std::adjacent_find(sorted_ids.begin(), sorted_ids.end()) != sorted_ids.end()) {
    throw ParameterError("record ids must be unique");
  }
}

Record Dataset::record(std::size_t pos) const {
  auto a = attrs(pos);
  return Record{ids_[pos], times_[pos], std::vector<double>(a.begin(), a.end())};
}

PositionRange Dataset::positions(Timestamp lo, Timestamp hi) const {
  if (lo > hi) return {0, 0};
  auto first = std::lower_bound(times_.begin(), times_.end(), lo);
  auto last = std::upper_bound(first, times_.end(), hi);
  return {static_cast<std::size_t>(first - times_.begin()),
          static_cast<std::size_t>(last - times_.begin())};
}

std::optional<std::size_t> Dataset::position_of_time(Timestamp t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - times_.begin());
}

std::optional<std::size_t> Dataset::position_of_id(RecordId id) const {
  // Generated and ingested datasets number records by position.
  if (id >= 0 && static_cast<std::size_t>(id) < ids_.size() && ids_[id] == id) {
    return static_cast<std::size_t>(id);
  }
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

Dataset Dataset::mirrored() const {
  Dataset out;
  out.dim_ = dim_;
  out.min_value_ = min_value_;
  const std::size_t n = size();
  const Timestamp top = max_time();
  out.times_.resize(n);
  out.ids_.resize(n);
  out.values_.resize(values_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    out.times_[i] = top + 1 - times_[j];
    out.ids_[i] = ids_[j];
    std::copy_n(attrs_ptr(j), dim_, out.values_.data() + i * dim_);
  }
  return out;
}

std::string_view to_string(ScoringKind kind) {
  switch (kind) {
    case ScoringKind::Linear: return "linear";
    case ScoringKind::MonotoneLinear: return "monotone";
    case ScoringKind::Cosine: return "cosine";
  }
  return "?";
}

std::string_view to_string(Transform h) {
  switch (h) {
    case Transform::Identity: return "identity";
    case Transform::Log1p: return "log1p";
    case Transform::Sqrt: return "sqrt";
  }
  return "?";
}

std::string_view to_string(Direction d) {
  return d == Direction::LookBack ? "back" : "ahead";
}

ScoringKind parse_scoring_kind(std::string_view name) {
  if (name == "linear") return ScoringKind::Linear;
  if (name == "monotone" || name == "monotone-linear") return ScoringKind::MonotoneLinear;
  if (name == "cosine") return ScoringKind::Cosine;
  throw ParameterError("unknown scoring kind '" + std::string(name) + "'");
}

Transform parse_transform(std::string_view name) {
  if (name == "identity") return Transform::Identity;
  if (name == "log1p") return Transform::Log1p;
  if (name == "sqrt") return Transform::Sqrt;
  throw ParameterError("unknown transform '" + std::string(name) + "'");
}

PreferenceVector::PreferenceVector(std::vector<double> weights, ScoringKind kind, Transform h)
    : weights_(std::move(weights)), kind_(kind), h_(kind == ScoringKind::MonotoneLinear ? h
                                                                                       : Transform::Identity) {
  if (weights_.empty()) throw ParameterError("preference vector is empty");
  bool any_nonzero = false;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ParameterError("preference weights must be finite and non-negative");
    }
    any_nonzero = any_nonzero || w > 0.0;
  }
  if (!any_nonzero) throw ParameterError("preference vector needs a nonzero weight");
  weight_norm_ = std::sqrt(std::inner_product(weights_.begin(), weights_.end(), weights_.begin(), 0.0));
}

PreferenceVector PreferenceVector::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("scale factor must be positive");
  std::vector<double> w = weights_;
  for (double& x : w) x *= c;
  return PreferenceVector(std::move(w), kind_, h_);
}

namespace {

double apply(Transform h, double x) {
  switch (h) {
    case Transform::Identity: return x;
    case Transform::Log1p: return std::log1p(x);
    case Transform::Sqrt: return std::sqrt(x);
  }
  return x;
}

}  // namespace

double PreferenceVector::operator()(const double* x) const {
  const std::size_t d = weights_.size();
  const double* w = weights_.data();
  switch (kind_) {
    case ScoringKind::Linear: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += w[i] * x[i];
      return s;
    }
    case ScoringKind::MonotoneLinear: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += w[i] * apply(h_, x[i]);
      return s;
    }
    case ScoringKind::Cosine: {
      double dot = 0.0;
      double norm = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        dot += w[i] * x[i];
        norm += x[i] * x[i];
      }
      // The zero vector has no direction; it scores 0.
      if (norm == 0.0) return 0.0;
      return dot / (std::sqrt(norm) * weight_norm_);
    }
  }
  return 0.0;
}

double score(const PreferenceVector& pref, std::span<const double> attrs) {
  if (attrs.size() != pref.dim()) {
    throw ParameterError("preference has dimension " + std::to_string(pref.dim()) +
                         " but record has " + std::to_string(attrs.size()));
  }
  const double s = pref(attrs.data());
  if (!std::isfinite(s)) throw ParameterError("score is not finite for this record");
  return s;
}

double score(const PreferenceVector& pref, const Record& p) { return score(pref, p.attrs); }

bool dominates(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ParameterError("dominance test on different dimensions");
  bool strict = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < q[i]) return false;
    strict = strict || p[i] > q[i];
  }
  return strict;
}

bool dominates(const Record& p, const Record& q) { return dominates(p.attrs, q.attrs); }

std::strong_ordering rank_order(const PreferenceVector& pref, const Record& p, const Record& q,
                                TieBreak tie) {
  const RankKey a{score(pref, p), p.t, p.id};
  const RankKey b{score(pref, q), q.t, q.id};
  if (ranks_higher(a, b, tie)) return std::strong_ordering::less;
  if (ranks_higher(b, a, tie)) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

void DurableQuery::validate(const Dataset& data) const {
  if (data.empty()) throw ParameterError("dataset is empty");
  if (k < 1) throw ParameterError("k must be at least 1");
  if (tau < 1 || tau > data.max_time()) {
    throw ParameterError("tau must lie in [1, " + std::to_string(data.max_time()) + "]");
  }
  if (interval.lo < 1 || interval.hi > data.max_time() || interval.lo > interval.hi) {
    throw ParameterError("query interval must lie within [1, " + std::to_string(data.max_time()) +
                         "]");
  }
  if (pref.dim() != data.dim()) {
    throw ParameterError("preference has dimension " + std::to_string(pref.dim()) +
                         " but dataset has " + std::to_string(data.dim()));
  }
  if (pref.kind() == ScoringKind::MonotoneLinear) {
    if (pref.transform() == Transform::Log1p && data.min_attribute() <= -1.0) {
      throw ParameterError("log1p transform needs every attribute above -1");
    }
    if (pref.transform() == Transform::Sqrt && data.min_attribute() < 0.0) {
      throw ParameterError("sqrt transform needs non-negative attributes");
    }
  }
}

}  // namespace durable

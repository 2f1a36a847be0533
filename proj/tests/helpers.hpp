#pragma once

#include <memory>
#include <vector>

#include "durable/core.hpp"

namespace durable::testing {

// Records at t = 1..n with ids 0..n-1 and the given 1-d scores.
inline std::shared_ptr<const Dataset> scores_1d(const std::vector<double>& scores) {
  std::vector<Record> recs;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    recs.push_back(Record{static_cast<RecordId>(i), static_cast<Timestamp>(i + 1), {scores[i]}});
  }
  return std::make_shared<const Dataset>(std::move(recs));
}

inline std::shared_ptr<const Dataset> points(const std::vector<std::vector<double>>& rows) {
  std::vector<Record> recs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    recs.push_back(Record{static_cast<RecordId>(i), static_cast<Timestamp>(i + 1), rows[i]});
  }
  return std::make_shared<const Dataset>(std::move(recs));
}

inline std::vector<Timestamp> times_of(const Dataset& data, const std::vector<RecordId>& ids) {
  std::vector<Timestamp> out;
  for (RecordId id : ids) out.push_back(data.time(*data.position_of_id(id)));
  return out;
}

}  // namespace durable::testing

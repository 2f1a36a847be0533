#include "durable/blocking.hpp"

#include <limits>

namespace durable {

BlockingSet::BlockingSet(Timestamp tau) : tau_(tau) {
  if (tau < 0) throw ParameterError("blocking interval length must be non-negative");
}

bool BlockingSet::block(RecordId id, Timestamp t) {
  if (!ids_.insert(id).second) return false;
  lefts_.insert({t, id});
  return true;
}

std::size_t BlockingSet::density(Timestamp t) const {
  constexpr RecordId lowest = std::numeric_limits<RecordId>::min();
  const std::size_t upto = lefts_.order_of_key({t + 1, lowest});
  const std::size_t before = lefts_.order_of_key({t - tau_, lowest});
  return upto - before;
}

std::vector<Timestamp> BlockingSet::lefts() const {
  std::vector<Timestamp> out;
  out.reserve(lefts_.size());
  for (const auto& [l, id] : lefts_) out.push_back(l);
  return out;
}

}  // namespace durable

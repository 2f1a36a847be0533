#include "durable/report.hpp"

#include <algorithm>

#include "json.hpp"

namespace durable {

std::string render_json(const Dataset& data, const DurableQuery& q, Algorithm algo,
                        const DurableResult& r, int indent) {
  using nlohmann::json;
  json out;
  out["schema"] = 1;
  out["algorithm"] = to_string(algo);
  out["query"] = {{"k", q.k},
                  {"tau", q.tau},
                  {"interval", {q.interval.lo, q.interval.hi}},
                  {"direction", to_string(q.direction)},
                  {"kind", to_string(q.pref.kind())},
                  {"transform", to_string(q.pref.transform())},
                  {"weights", q.pref.weights()}};

  std::vector<RecordId> ids = r.answers;
  std::sort(ids.begin(), ids.end());
  json answers = json::array();
  for (RecordId id : ids) {
    const auto pos = data.position_of_id(id);
    if (!pos) throw ParameterError("answer id " + std::to_string(id) + " is not in the dataset");
    answers.push_back({{"id", id}, {"t", data.time(*pos)}, {"score", score(q.pref, data.attrs(*pos))}});
  }
  out["answers"] = std::move(answers);

  json stats = {{"answer_size", r.stats.answer_size},
                {"topk_calls", r.stats.topk_calls},
                {"wall_nanos", r.stats.wall.count()}};
  if (r.stats.candidate_size) stats["candidate_size"] = *r.stats.candidate_size;
  out["stats"] = std::move(stats);

  if (r.max_durations) {
    json durations = json::array();
    for (const auto& [id, dur] : *r.max_durations) durations.push_back({{"id", id}, {"duration", dur}});
    out["max_durations"] = std::move(durations);
  }
  return out.dump(indent);
}

}  // namespace durable

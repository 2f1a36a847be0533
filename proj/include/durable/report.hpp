#pragma once

// JSON rendering of query results (schema 1).

#include <string>

#include "durable/algorithms.hpp"

namespace durable {

// answers are listed by ascending id with their timestamp and score.
std::string render_json(const Dataset& data, const DurableQuery& q, Algorithm algo,
                        const DurableResult& r, int indent = 2);

}  // namespace durable

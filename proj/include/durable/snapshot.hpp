#pragma once

// Binary snapshots of a dataset together with its look-back top-k tree and
// any built skyband levels. Host byte order; the tree section starts with
// "DTKIDX1" and the skyband section with "DTKSKY1".

#include <filesystem>
#include <memory>
#include <stdexcept>

#include "durable/skyband_index.hpp"
#include "durable/topk_index.hpp"

namespace durable {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  std::shared_ptr<const Dataset> data;
  std::shared_ptr<const TimeTree> tree;
  std::shared_ptr<SkybandIndexFamily> skyband;  // may be null
};

void save_snapshot(const std::filesystem::path& path, const TimeTree& tree,
                   const SkybandIndexFamily* skyband = nullptr);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace durable

#pragma once

// Synthetic data (IND, ANTI, random permutation model) and CSV ingestion.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "durable/core.hpp"

namespace durable {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Distribution : std::uint8_t { IND, ANTI, RPM };

std::string_view to_string(Distribution d);
Distribution parse_distribution(std::string_view name);

struct GenSpec {
  std::size_t n = 1000;
  std::size_t d = 2;
  Distribution distribution = Distribution::IND;
  std::uint64_t seed = 1;
  // RPM only: the score multiset to permute (default 1..n). Must hold n values.
  std::optional<std::vector<double>> rpm_values;
};

// Records get ids 0..n-1 and arrival times 1..n. IND draws every attribute
// uniformly from [0, 1]; ANTI samples the positive quadrant of the annulus
// 0.8 <= |p| <= 1 (d must be 2); RPM is one-dimensional and assigns the value
// multiset to arrival times by a uniform random permutation.
Dataset generate(const GenSpec& spec);

struct CsvOptions {
  // Expected attribute count; taken from the header when unset.
  std::optional<std::size_t> dim;
  // Rescale every attribute to [0, 1].
  bool minmax = false;
};

// Reads `t,x1,...,xd` rows (header first, LF or CRLF). Rows are sorted by t and
// renumbered with ids 0..n-1. Throws IngestError naming the offending line.
Dataset ingest_csv(const std::filesystem::path& path, CsvOptions opts = {});

void write_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace durable

#include "durable/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>

namespace durable {

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::IND: return "ind";
    case Distribution::ANTI: return "anti";
    case Distribution::RPM: return "rpm";
  }
  return "?";
}

Distribution parse_distribution(std::string_view name) {
  if (name == "ind" || name == "IND") return Distribution::IND;
  if (name == "anti" || name == "ANTI") return Distribution::ANTI;
  if (name == "rpm" || name == "RPM") return Distribution::RPM;
  throw ParameterError("unknown distribution '" + std::string(name) + "'");
}

Dataset generate(const GenSpec& spec) {
  if (spec.n < 1) throw ParameterError("n must be at least 1");
  if (spec.d < 1) throw ParameterError("d must be at least 1");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Record> records(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    records[i].id = static_cast<RecordId>(i);
    records[i].t = static_cast<Timestamp>(i + 1);
  }

  switch (spec.distribution) {
    case Distribution::IND:
      for (Record& r : records) {
        r.attrs.resize(spec.d);
        for (double& x : r.attrs) x = unit(rng);
      }
      break;
    case Distribution::ANTI:
      if (spec.d != 2) throw ParameterError("ANTI data is two-dimensional");
      for (Record& r : records) {
        double x = 0.0;
        double y = 0.0;
        do {
          x = unit(rng);
          y = unit(rng);
        } while (x * x + y * y < 0.64 || x * x + y * y > 1.0);
        r.attrs = {x, y};
      }
      break;
    case Distribution::RPM: {
      if (spec.d != 1) throw ParameterError("RPM data is one-dimensional");
      std::vector<double> values;
      if (spec.rpm_values) {
        if (spec.rpm_values->size() != spec.n) {
          throw ParameterError("RPM value multiset must hold exactly n values");
        }
        values = *spec.rpm_values;
      } else {
        values.resize(spec.n);
        std::iota(values.begin(), values.end(), 1.0);
      }
      std::shuffle(values.begin(), values.end(), rng);
      for (std::size_t i = 0; i < spec.n; ++i) records[i].attrs = {values[i]};
      break;
    }
  }
  return Dataset(std::move(records));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
    out.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

Dataset ingest_csv(const std::filesystem::path& path, CsvOptions opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  const std::string where = path.string() + ":";

  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> dim = opts.dim;
  bool header_seen = false;
  std::vector<std::pair<Record, std::size_t>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() < 2 || fields[0] != "t") {
        throw IngestError(where + std::to_string(lineno) + ": header must be t,x1,...,xd");
      }
      if (dim && *dim != fields.size() - 1) {
        throw IngestError(where + std::to_string(lineno) + ": header has " +
                          std::to_string(fields.size() - 1) + " attributes, expected " +
                          std::to_string(*dim));
      }
      dim = fields.size() - 1;
      continue;
    }
    if (fields.size() != *dim + 1) {
      throw IngestError(where + std::to_string(lineno) + ": expected " + std::to_string(*dim + 1) +
                        " fields, found " + std::to_string(fields.size()));
    }
    Record r;
    if (!parse_number(fields[0], r.t) || r.t < 1) {
      throw IngestError(where + std::to_string(lineno) + ": bad timestamp '" +
                        std::string(fields[0]) + "'");
    }
    r.attrs.resize(*dim);
    for (std::size_t i = 0; i < *dim; ++i) {
      if (!parse_number(fields[i + 1], r.attrs[i]) || !std::isfinite(r.attrs[i])) {
        throw IngestError(where + std::to_string(lineno) + ": non-numeric attribute '" +
                          std::string(fields[i + 1]) + "'");
      }
    }
    rows.emplace_back(std::move(r), lineno);
  }
  if (!header_seen) throw IngestError(where + " empty file");
  if (rows.empty()) throw IngestError(where + " no data rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first.t < b.first.t; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].first.t == rows[i - 1].first.t) {
      throw IngestError(where + std::to_string(std::max(rows[i].second, rows[i - 1].second)) +
                        ": duplicate timestamp " + std::to_string(rows[i].first.t));
    }
  }

  if (opts.minmax) {
    for (std::size_t a = 0; a < *dim; ++a) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& [r, l] : rows) {
        lo = std::min(lo, r.attrs[a]);
        hi = std::max(hi, r.attrs[a]);
      }
      for (auto& [r, l] : rows) r.attrs[a] = hi > lo ? (r.attrs[a] - lo) / (hi - lo) : 0.0;
    }
  }

  std::vector<Record> records;
  records.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].first.id = static_cast<RecordId>(i);
    records.push_back(std::move(rows[i].first));
  }
  return Dataset(std::move(records));
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  out << "t";
  for (std::size_t i = 0; i < data.dim(); ++i) out << ",x" << (i + 1);
  out << '\n' << std::setprecision(17);
  for (std::size_t p = 0; p < data.size(); ++p) {
    out << data.time(p);
    for (double x : data.attrs(p)) out << ',' << x;
    out << '\n';
  }
  if (!out) throw IngestError("write failed for " + path.string());
}

}  // namespace durable

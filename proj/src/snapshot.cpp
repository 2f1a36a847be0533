#include "durable/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <type_traits>

namespace durable {

namespace {

constexpr char kMagic[8] = {'D', 'T', 'K', 'I', 'D', 'X', '1', '\0'};
constexpr char kSkyMagic[8] = {'D', 'T', 'K', 'S', 'K', 'Y', '1', '\0'};

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw SnapshotError("cannot write " + path.string());
  }
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    out_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  template <typename T>
  void put_vec(const std::vector<T>& v) {
    put<std::uint64_t>(v.size());
    out_.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(v.size() * sizeof(T)));
  }
  void raw(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
  void finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw SnapshotError("write failed for " + path.string());
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw SnapshotError("cannot open " + path.string());
  }
  template <typename T>
  T get() {
    T v;
    in_.read(reinterpret_cast<char*>(&v), sizeof v);
    check();
    return v;
  }
  template <typename T>
  std::vector<T> get_vec(std::uint64_t limit) {
    const auto n = get<std::uint64_t>();
    if (n > limit) throw SnapshotError(path_.string() + ": corrupt length field");
    std::vector<T> v(n);
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    check();
    return v;
  }
  void raw(char* p, std::size_t n) {
    in_.read(p, static_cast<std::streamsize>(n));
    check();
  }

 private:
  void check() {
    if (!in_) throw SnapshotError(path_.string() + ": truncated snapshot");
  }
  std::ifstream in_;
  std::filesystem::path path_;
};

}  // namespace

void save_snapshot(const std::filesystem::path& path, const TimeTree& tree,
                   const SkybandIndexFamily* skyband) {
  const Dataset& data = tree.data();
  if (skyband && !(skyband->data() == data)) {
    throw ParameterError("skyband index and tree cover different datasets");
  }
  Writer w(path);
  w.raw(kMagic, sizeof kMagic);

  w.put<std::uint64_t>(data.size());
  w.put<std::uint64_t>(data.dim());
  std::vector<Timestamp> times(data.size());
  std::vector<RecordId> ids(data.size());
  std::vector<double> values;
  values.reserve(data.size() * data.dim());
  for (std::size_t p = 0; p < data.size(); ++p) {
    times[p] = data.time(p);
    ids[p] = data.id(p);
    for (double x : data.attrs(p)) values.push_back(x);
  }
  w.put_vec(times);
  w.put_vec(ids);
  w.put_vec(values);

  w.put<std::uint64_t>(tree.config().length_threshold);
  w.put<std::uint64_t>(tree.nodes().size());
  for (const TimeTree::Node& nd : tree.nodes()) {
    w.put(nd.lo);
    w.put(nd.hi);
    w.put(nd.left);
    w.put(nd.right);
    w.put(nd.sky_begin);
    w.put(nd.sky_end);
  }
  w.put_vec(tree.skyline_positions());

  const std::vector<std::size_t> levels = skyband ? skyband->levels() : std::vector<std::size_t>{};
  w.raw(kSkyMagic, sizeof kSkyMagic);
  w.put<std::uint64_t>(levels.size());
  for (std::size_t kbar : levels) {
    w.put<std::uint64_t>(kbar);
    std::vector<Timestamp> durations;
    std::vector<std::uint8_t> flags;
    for (const SkybandPoint& sp : skyband->points(kbar)) {
      durations.push_back(sp.duration);
      flags.push_back(sp.reaches_start ? 1 : 0);
    }
    w.put_vec(durations);
    w.put_vec(flags);
  }
  w.finish(path);
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  Reader r(path);
  char magic[sizeof kMagic];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw SnapshotError(path.string() + ": not a durable top-k snapshot");
  }
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 36;
  const auto n = r.get<std::uint64_t>();
  const auto d = r.get<std::uint64_t>();
  if (n == 0 || d == 0 || n > kLimit || d > 4096) throw SnapshotError(path.string() + ": bad header");
  const auto times = r.get_vec<Timestamp>(n);
  const auto ids = r.get_vec<RecordId>(n);
  const auto values = r.get_vec<double>(n * d);
  if (times.size() != n || ids.size() != n || values.size() != n * d) {
    throw SnapshotError(path.string() + ": record arrays disagree with header");
  }
  std::vector<Record> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].id = ids[i];
    records[i].t = times[i];
    records[i].attrs.assign(values.begin() + static_cast<std::ptrdiff_t>(i * d),
                            values.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
  }

  Snapshot snap;
  try {
    snap.data = std::make_shared<const Dataset>(std::move(records));
    TopKIndexConfig cfg;
    cfg.length_threshold = r.get<std::uint64_t>();
    const auto node_count = r.get<std::uint64_t>();
    if (node_count > 2 * n) throw SnapshotError(path.string() + ": corrupt node count");
    std::vector<TimeTree::Node> nodes(node_count);
    for (TimeTree::Node& nd : nodes) {
      nd.lo = r.get<std::uint32_t>();
      nd.hi = r.get<std::uint32_t>();
      nd.left = r.get<std::int32_t>();
      nd.right = r.get<std::int32_t>();
      nd.sky_begin = r.get<std::uint32_t>();
      nd.sky_end = r.get<std::uint32_t>();
    }
    auto skyline = r.get_vec<std::uint32_t>(kLimit);
    snap.tree = std::make_shared<const TimeTree>(snap.data, cfg, std::move(nodes), std::move(skyline));

    char sky[sizeof kSkyMagic];
    r.raw(sky, sizeof sky);
    if (std::memcmp(sky, kSkyMagic, sizeof kSkyMagic) != 0) {
      throw SnapshotError(path.string() + ": missing skyband section");
    }
    const auto level_count = r.get<std::uint64_t>();
    if (level_count > 64) throw SnapshotError(path.string() + ": corrupt level count");
    if (level_count > 0) snap.skyband = std::make_shared<SkybandIndexFamily>(snap.data);
    for (std::uint64_t l = 0; l < level_count; ++l) {
      const auto kbar = r.get<std::uint64_t>();
      const auto durations = r.get_vec<Timestamp>(n);
      const auto flags = r.get_vec<std::uint8_t>(n);
      if (durations.size() != n || flags.size() != n) {
        throw SnapshotError(path.string() + ": skyband level size mismatch");
      }
      std::vector<SkybandPoint> points(n);
      for (std::size_t i = 0; i < n; ++i) {
        points[i] = SkybandPoint{ids[i], times[i], durations[i], flags[i] != 0};
      }
      snap.skyband->add_level(kbar, std::move(points));
    }
  } catch (const ParameterError& e) {
    throw SnapshotError(path.string() + ": " + e.what());
  }
  return snap;
}

}  // namespace durable

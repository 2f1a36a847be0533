#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "durable/datagen.hpp"

using namespace durable;

namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& body) {
    path_ = std::filesystem::temp_directory_path() /
            ("durable_csv_" + std::to_string(counter_++) + "_" + std::to_string(::getpid()) + ".csv");
    std::ofstream(path_, std::ios::binary) << body;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

std::string error_of(const std::string& body) {
  TempFile f(body);
  try {
    ingest_csv(f.path());
  } catch (const IngestError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Generate, RpmPermutesTheValueMultiset) {
  GenSpec spec;
  spec.n = 5;
  spec.d = 1;
  spec.distribution = Distribution::RPM;
  spec.seed = 42;
  Dataset d = generate(spec);
  std::vector<double> v;
  for (std::size_t i = 0; i < d.size(); ++i) v.push_back(d.attrs(i)[0]);
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<double>{1, 2, 3, 4, 5}));

  spec.rpm_values = std::vector<double>{10, 10, 20, 30, 40};
  Dataset e = generate(spec);
  v.clear();
  for (std::size_t i = 0; i < e.size(); ++i) v.push_back(e.attrs(i)[0]);
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<double>{10, 10, 20, 30, 40}));

  spec.rpm_values = std::vector<double>{1, 2};
  EXPECT_THROW(generate(spec), ParameterError);
  spec.rpm_values.reset();
  spec.d = 2;
  EXPECT_THROW(generate(spec), ParameterError);
}

TEST(Generate, AntiLiesInTheAnnulus) {
  GenSpec spec;
  spec.n = 5000;
  spec.distribution = Distribution::ANTI;
  Dataset d = generate(spec);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.attrs(i)[0], y = d.attrs(i)[1];
    EXPECT_GE(x, 0.0);
    EXPECT_GE(y, 0.0);
    const double r = std::sqrt(x * x + y * y);
    EXPECT_GE(r, 0.8 - 1e-12);
    EXPECT_LE(r, 1.0 + 1e-12);
  }
  spec.d = 3;
  EXPECT_THROW(generate(spec), ParameterError);
}

TEST(Generate, IndIsInTheUnitCubeWithSequentialTimes) {
  GenSpec spec;
  spec.n = 3000;
  spec.d = 5;
  Dataset d = generate(spec);
  EXPECT_EQ(d.dim(), 5u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d.time(i), static_cast<Timestamp>(i + 1));
    EXPECT_EQ(d.id(i), static_cast<RecordId>(i));
    for (double x : d.attrs(i)) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(Generate, DeterministicPerSeed) {
  for (auto dist : {Distribution::IND, Distribution::ANTI, Distribution::RPM}) {
    GenSpec spec;
    spec.n = 200;
    spec.d = dist == Distribution::RPM ? 1 : 2;
    spec.distribution = dist;
    spec.seed = 99;
    EXPECT_EQ(generate(spec), generate(spec));
    GenSpec other = spec;
    other.seed = 100;
    EXPECT_FALSE(generate(spec) == generate(other));
  }
}

TEST(Generate, RpmMaxPositionIsUniform) {
  // Chi-square goodness of fit for the position of the maximum, n = 8.
  const std::size_t n = 8, trials = 8000;
  std::vector<double> counts(n, 0);
  for (std::size_t s = 0; s < trials; ++s) {
    GenSpec spec;
    spec.n = n;
    spec.d = 1;
    spec.distribution = Distribution::RPM;
    spec.seed = s;
    Dataset d = generate(spec);
    for (std::size_t i = 0; i < n; ++i) {
      if (d.attrs(i)[0] == static_cast<double>(n)) counts[i] += 1;
    }
  }
  const double expected = static_cast<double>(trials) / n;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 7 degrees of freedom, 0.999 quantile.
  EXPECT_LT(chi2, 24.32);
}

TEST(IngestCsv, ReadsAndSortsRows) {
  TempFile f("t,x1,x2\r\n5,0.5,1\r\n2,3,4\r\n9,-1,2.5e1\r\n");
  Dataset d = ingest_csv(f.path());
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.time(0), 2);
  EXPECT_EQ(d.time(2), 9);
  EXPECT_EQ(d.attrs(2)[1], 25.0);
  EXPECT_EQ(d.id(1), 1);
}

TEST(IngestCsv, ErrorsNameTheLine) {
  EXPECT_NE(error_of("t,x1\n1,2\n3,4\n1,5\n").find(":4: duplicate timestamp 1"), std::string::npos);
  EXPECT_NE(error_of("t,x1\n1,2\n2,abc\n").find(":3: non-numeric"), std::string::npos);
  EXPECT_NE(error_of("t,x1,x2\n1,2\n").find(":2: expected 3 fields"), std::string::npos);
  EXPECT_NE(error_of("a,b\n1,2\n").find(":1: header"), std::string::npos);
  EXPECT_NE(error_of("t,x1\n0,2\n").find(":2: bad timestamp"), std::string::npos);
  EXPECT_THROW(ingest_csv("/nonexistent/file.csv"), IngestError);
}

TEST(IngestCsv, DimensionMustMatch) {
  TempFile f("t,x1,x2\n1,2,3\n");
  EXPECT_THROW(ingest_csv(f.path(), CsvOptions{1, false}), IngestError);
  EXPECT_EQ(ingest_csv(f.path(), CsvOptions{2, false}).dim(), 2u);
}

TEST(IngestCsv, MinMaxScaling) {
  TempFile f("t,x1,x2\n1,10,7\n2,20,7\n3,15,7\n");
  Dataset d = ingest_csv(f.path(), CsvOptions{std::nullopt, true});
  EXPECT_DOUBLE_EQ(d.attrs(0)[0], 0.0);
  EXPECT_DOUBLE_EQ(d.attrs(1)[0], 1.0);
  EXPECT_DOUBLE_EQ(d.attrs(2)[0], 0.5);
  EXPECT_DOUBLE_EQ(d.attrs(2)[1], 0.0);
}

TEST(IngestCsv, WriteThenReadRoundTrips) {
  GenSpec spec;
  spec.n = 300;
  spec.d = 3;
  Dataset d = generate(spec);
  TempFile f("");
  write_csv(d, f.path());
  EXPECT_EQ(ingest_csv(f.path()), d);
}

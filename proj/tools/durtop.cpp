#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "durable/algorithms.hpp"
#include "durable/bench.hpp"
#include "durable/datagen.hpp"
#include "durable/report.hpp"
#include "durable/snapshot.hpp"
#include "durable/verify.hpp"

using namespace durable;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIo = 3 };

struct SourceOpts {
  std::string csv;
  std::string snapshot;
  bool minmax = false;
  std::string dist = "ind";
  std::size_t n = 100000;
  std::size_t d = 2;
  std::uint64_t seed = 1;
  std::size_t length_threshold = 128;
};

void add_source(CLI::App* cmd, SourceOpts& s, bool allow_snapshot = true) {
  cmd->add_option("--data", s.csv, "CSV input (t,x1,...,xd)");
  if (allow_snapshot) cmd->add_option("--snapshot", s.snapshot, "Index snapshot from build-index");
  cmd->add_flag("--minmax", s.minmax, "MinMax-normalize CSV attributes");
  cmd->add_option("--dist", s.dist, "Generated distribution: ind, anti, rpm");
  cmd->add_option("--n", s.n, "Generated record count");
  cmd->add_option("--d", s.d, "Generated dimension");
  cmd->add_option("--seed", s.seed, "Generator seed");
  cmd->add_option("--length-threshold", s.length_threshold, "Top-k index leaf-range threshold");
}

Snapshot load_source(const SourceOpts& s) {
  if (!s.snapshot.empty()) return load_snapshot(s.snapshot);
  Snapshot out;
  if (!s.csv.empty()) {
    CsvOptions opts;
    opts.minmax = s.minmax;
    out.data = std::make_shared<const Dataset>(ingest_csv(s.csv, opts));
  } else {
    GenSpec g;
    g.distribution = parse_distribution(s.dist);
    g.n = s.n;
    g.d = g.distribution == Distribution::RPM ? 1 : s.d;
    g.seed = s.seed;
    out.data = std::make_shared<const Dataset>(generate(g));
  }
  return out;
}

struct QueryOpts {
  std::string algo = "t-hop";
  std::size_t k = 10;
  std::optional<Timestamp> tau;
  double tau_frac = 0.2;
  std::vector<Timestamp> interval;
  std::optional<Timestamp> interval_len;
  double interval_frac = 0.5;
  std::vector<double> weights;
  double scale = 1.0;
  std::string kind = "linear";
  std::string transform = "identity";
  std::string direction = "back";
};

void add_query(CLI::App* cmd, QueryOpts& q) {
  cmd->add_option("--k", q.k, "Result size k");
  cmd->add_option("--tau", q.tau, "Durability window length (absolute)");
  cmd->add_option("--tau-frac", q.tau_frac, "Durability window as a fraction of n");
  cmd->add_option("--interval", q.interval, "Query interval lo,hi (absolute)")->delimiter(',')->expected(2);
  cmd->add_option("--interval-len", q.interval_len, "Right-anchored interval length (absolute)");
  cmd->add_option("--interval-frac", q.interval_frac, "Right-anchored interval as a fraction of n");
  cmd->add_option("--weights", q.weights, "Preference weights, comma separated")->delimiter(',');
  cmd->add_option("--scale", q.scale, "Multiply the weights by this factor");
  cmd->add_option("--kind", q.kind, "Scoring: linear, monotone, cosine");
  cmd->add_option("--transform", q.transform, "Monotone transform: identity, log1p, sqrt");
  cmd->add_option("--direction", q.direction, "back or ahead");
}

DurableQuery make_query(const QueryOpts& o, const Dataset& data) {
  DurableQuery q;
  q.k = o.k;
  const std::size_t n = data.size();
  q.tau = o.tau ? *o.tau : fraction_of(n, o.tau_frac);
  if (!o.interval.empty()) {
    q.interval = Window{o.interval[0], o.interval[1]};
  } else {
    q.interval = right_anchored(data.max_time(), o.interval_len ? *o.interval_len : fraction_of(n, o.interval_frac));
  }
  std::vector<double> w = o.weights.empty() ? std::vector<double>(data.dim(), 1.0) : o.weights;
  PreferenceVector pref(std::move(w), parse_scoring_kind(o.kind), parse_transform(o.transform));
  q.pref = o.scale == 1.0 ? pref : pref.scaled(o.scale);
  if (o.direction == "back") q.direction = Direction::LookBack;
  else if (o.direction == "ahead") q.direction = Direction::LookAhead;
  else throw ParameterError("direction must be back or ahead");
  return q;
}

std::unique_ptr<Engine> make_engine(const Snapshot& snap, std::size_t length_threshold) {
  EngineConfig cfg;
  cfg.topk.length_threshold = snap.tree ? snap.tree->config().length_threshold : length_threshold;
  auto engine = std::make_unique<Engine>(snap.data, cfg);
  if (snap.tree) engine->set_tree(Direction::LookBack, snap.tree);
  if (snap.skyband) engine->set_skyband(Direction::LookBack, snap.skyband);
  return engine;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  out << text << '\n';
  if (!out) throw IngestError("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Durable top-k queries over instant-stamped temporal data"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset as CSV");
  GenSpec gspec;
  std::string gen_dist = "ind";
  std::string gen_out = "-";
  std::vector<double> rpm_values;
  gen->add_option("--dist", gen_dist, "ind, anti, rpm");
  gen->add_option("--n", gspec.n, "Record count");
  gen->add_option("--d", gspec.d, "Dimension");
  gen->add_option("--seed", gspec.seed, "Seed");
  gen->add_option("--rpm-values", rpm_values, "RPM score multiset, comma separated")->delimiter(',');
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  // build-index
  auto* build = app.add_subcommand("build-index", "Build and save the index snapshot");
  SourceOpts build_src;
  std::string build_out;
  std::size_t skyband_k = 0;
  add_source(build, build_src, false);
  build->add_option("--out", build_out, "Snapshot path")->required();
  build->add_option("--skyband-max-k", skyband_k, "Build skyband levels covering k up to this (0: none)");

  // query
  auto* query = app.add_subcommand("query", "Run a durable top-k query and print JSON");
  SourceOpts query_src;
  QueryOpts query_opts;
  bool with_durations = false;
  std::string query_out = "-";
  add_source(query, query_src);
  add_query(query, query_opts);
  query->add_option("--algo", query_opts.algo, "t-base, t-hop, s-base, s-band, s-hop");
  query->add_flag("--durations", with_durations, "Also report each answer's maximum duration");
  query->add_option("--out", query_out, "JSON output path");

  // max-duration
  auto* maxdur = app.add_subcommand("max-duration", "Maximum durations of durable answers");
  SourceOpts maxdur_src;
  QueryOpts maxdur_opts;
  std::vector<RecordId> maxdur_ids;
  std::string maxdur_out = "-";
  add_source(maxdur, maxdur_src);
  add_query(maxdur, maxdur_opts);
  maxdur->add_option("--ids", maxdur_ids, "Record ids (default: all answers)")->delimiter(',');
  maxdur->add_option("--out", maxdur_out, "JSON output path");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark matrix and write CSV");
  BenchSpec bspec;
  std::vector<std::string> bench_algos{"t-base", "t-hop", "s-base", "s-band", "s-hop"};
  std::string bench_dist = "ind", bench_kind = "linear", bench_transform = "identity";
  std::string bench_direction = "back";
  std::vector<Timestamp> bench_taus, bench_intervals;
  std::string bench_out = "-", bench_agg;
  bench->add_option("--algos", bench_algos, "Algorithms")->delimiter(',');
  bench->add_option("--n", bspec.ns, "Record counts")->delimiter(',');
  bench->add_option("--d", bspec.dims, "Dimensions")->delimiter(',');
  bench->add_option("--k", bspec.ks, "Result sizes")->delimiter(',');
  bench->add_option("--tau-frac", bspec.tau_fracs, "tau fractions of n")->delimiter(',');
  bench->add_option("--interval-frac", bspec.interval_fracs, "Interval fractions of n")->delimiter(',');
  bench->add_option("--tau", bench_taus, "Absolute tau values")->delimiter(',');
  bench->add_option("--interval-len", bench_intervals, "Absolute interval lengths")->delimiter(',');
  bench->add_option("--dist", bench_dist, "ind, anti, rpm");
  bench->add_option("--kind", bench_kind, "Scoring kind");
  bench->add_option("--transform", bench_transform, "Monotone transform");
  bench->add_option("--direction", bench_direction, "back or ahead");
  bench->add_option("--trials", bspec.trials, "Trials per cell");
  bench->add_option("--seed", bspec.seed, "Base seed");
  bench->add_option("--threads", bspec.threads, "Worker threads");
  bench->add_option("--length-threshold", bspec.topk.length_threshold, "Top-k index threshold");
  bench->add_option("--out", bench_out, "Per-trial CSV path");
  bench->add_option("--aggregate", bench_agg, "Per-cell mean/std CSV path");

  // verify
  auto* ver = app.add_subcommand("verify", "Check every algorithm against the oracle");
  VerifySpec vspec;
  bool no_ahead = false;
  std::uint64_t replay = 0;
  ver->add_option("--instances", vspec.instances, "Number of random instances");
  ver->add_option("--max-n", vspec.max_n, "Largest dataset size");
  ver->add_option("--seed", vspec.seed, "Base seed");
  auto* replay_opt = ver->add_option("--replay", replay, "Check only this instance seed");
  ver->add_flag("--no-ahead", no_ahead, "Only look-back queries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      gspec.distribution = parse_distribution(gen_dist);
      if (!rpm_values.empty()) gspec.rpm_values = rpm_values;
      write_csv(generate(gspec), gen_out);
      return kOk;
    }
    if (*build) {
      Snapshot snap = load_source(build_src);
      TopKIndexConfig cfg;
      cfg.length_threshold = build_src.length_threshold;
      TimeTree tree(snap.data, cfg);
      std::optional<SkybandIndexFamily> family;
      if (skyband_k > 0) family = SkybandIndexFamily::build(snap.data, skyband_k);
      save_snapshot(build_out, tree, family ? &*family : nullptr);
      return kOk;
    }
    if (*query) {
      Snapshot snap = load_source(query_src);
      auto engine_ptr = make_engine(snap, query_src.length_threshold);
      Engine& engine = *engine_ptr;
      const DurableQuery q = make_query(query_opts, engine.data());
      const Algorithm algo = parse_algorithm(query_opts.algo);
      const DurableResult r = engine.run(algo, q, with_durations);
      emit(query_out, render_json(engine.data(), q, algo, r));
      return kOk;
    }
    if (*maxdur) {
      Snapshot snap = load_source(maxdur_src);
      auto engine_ptr = make_engine(snap, maxdur_src.length_threshold);
      Engine& engine = *engine_ptr;
      const DurableQuery q = make_query(maxdur_opts, engine.data());
      DurableResult r = engine.run(Algorithm::THop, q);
      if (!maxdur_ids.empty()) r.answers = maxdur_ids;
      r.max_durations = engine.max_durations(q, r.answers);
      emit(maxdur_out, render_json(engine.data(), q, Algorithm::THop, r));
      return kOk;
    }
    if (*bench) {
      bspec.algorithms.clear();
      for (const auto& a : bench_algos) bspec.algorithms.push_back(parse_algorithm(a));
      bspec.distribution = parse_distribution(bench_dist);
      bspec.kind = parse_scoring_kind(bench_kind);
      bspec.transform = parse_transform(bench_transform);
      if (bench_direction == "ahead") bspec.direction = Direction::LookAhead;
      else if (bench_direction != "back") throw ParameterError("direction must be back or ahead");
      if (!bench_taus.empty()) bspec.taus = bench_taus;
      if (!bench_intervals.empty()) bspec.intervals = bench_intervals;
      if (bspec.distribution == Distribution::RPM) bspec.dims = {1};
      const auto rows = run_bench(bspec);
      std::ostringstream csv;
      write_bench_csv(csv, rows);
      std::string text = csv.str();
      text.pop_back();
      emit(bench_out, text);
      if (!bench_agg.empty()) {
        std::ostringstream agg;
        write_aggregate_csv(agg, aggregate(rows));
        std::string atext = agg.str();
        atext.pop_back();
        emit(bench_agg, atext);
      }
      return kOk;
    }
    if (*ver) {
      vspec.allow_ahead = !no_ahead;
      if (replay_opt->count() > 0) vspec.replay = replay;
      const VerifyReport report = verify(vspec);
      if (report.ok()) {
        std::cout << "all " << report.checked << " instances agree\n";
        return kOk;
      }
      for (const auto& f : report.failures) {
        std::cerr << "FAIL " << f.message << "\n  replay: durtop verify --max-n " << vspec.max_n
                  << " --replay " << f.instance_seed << (no_ahead ? " --no-ahead" : "") << '\n';
      }
      std::cerr << report.failures.size() << " failures in " << report.checked << " instances\n";
      return kVerifyFailed;
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedFunctionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IngestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const SnapshotError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xorlab/harness/runner.hpp"

namespace fs = std::filesystem;
using xorlab::harness::ExperimentConfig;
using xorlab::harness::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("xorlab_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small(const std::string& experiment, std::size_t n = 100) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.params.n = n;
  c.params.k = 3;
  c.params.d = 2.4;
  c.params.seed = 12345;
  c.trials = 3;
  return c;
}

std::string trials_csv(const xorlab::harness::ExperimentResult& r) {
  std::ostringstream os;
  xorlab::harness::write_trials_csv(os, r.trials);
  return os.str();
}

}  // namespace

TEST(Config, RoundTrip) {
  ExperimentConfig c = small("wp-stats");
  c.params.q = 4;
  c.params.scheme = xorlab::CoefficientScheme::seeded_nonzero(99);
  c.densities = {2.0, 2.5};
  c.tol.tol_stats = 0.07;
  c.wp_mode = "exact";
  c.alpha = "fixed-point";
  c.scan = {0.8, 0.95, 0.002};
  c.ns = {50, 100};
  c.workers = 2;
  c.format = "json";
  const json j = xorlab::harness::to_json(c);
  const auto back = xorlab::harness::config_from_json(j);
  EXPECT_EQ(xorlab::harness::to_json(back), j);
  EXPECT_EQ(back.params.scheme.seed, 99u);
  EXPECT_EQ(back.densities, c.densities);
}

TEST(Config, TableSchemeAndTopLevelSeed) {
  const json j = json::parse(R"({"experiment":"rank-profile","seed":7,
      "params":{"n":50,"k":3,"m":20,"q":5,"scheme":{"kind":"table","rows":[[1,2,3]]}}})");
  const auto c = xorlab::harness::config_from_json(j);
  EXPECT_EQ(c.seed(), 7u);
  EXPECT_EQ(c.params.scheme.kind, xorlab::CoefficientScheme::Kind::explicit_table);
  EXPECT_EQ(xorlab::harness::config_from_json(xorlab::harness::to_json(c)).params.scheme.table, c.params.scheme.table);
}

TEST(Config, Errors) {
  using xorlab::ConfigError;
  EXPECT_THROW(xorlab::harness::load_config("/nonexistent/xorlab.json"), ConfigError);
  EXPECT_THROW(xorlab::harness::config_from_json(json::parse(R"({"trials":0})")), ConfigError);
  EXPECT_THROW(xorlab::harness::config_from_json(json::parse(R"({"params":{"n":"ten"}})")), ConfigError);
  EXPECT_THROW(xorlab::harness::config_from_json(json::parse(R"({"params":{"n":10},"wp_mode":"fast"})")), ConfigError);
  EXPECT_THROW(xorlab::harness::config_from_json(json::parse(R"({"params":{"n":10},"densities":[2,1]})")), ConfigError);
  EXPECT_THROW(xorlab::harness::config_from_json(json::parse(R"({"params":{"n":10,"scheme":"weird"}})")), ConfigError);
  auto c = small("no-such-experiment");
  EXPECT_THROW(xorlab::harness::run_experiment(c), ConfigError);
  const auto p = scratch("badjson.json");
  std::ofstream(p) << "{ not json";
  EXPECT_THROW(xorlab::harness::load_config(p.string()), ConfigError);
  fs::remove(p);
}

TEST(Records, CsvFormatting) {
  xorlab::harness::TrialRecord r;
  r.trial = 2;
  r.seed = 18446744073709551615ull;
  r.n = 10;
  r.d = 2.5;
  r.rank = 4;
  r.set("x", 0.125);
  r.set("x", 0.25);
  std::ostringstream os;
  xorlab::harness::write_trials_csv(os, {r});
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "trial,seed,n,m,t,k,q,d,rank,nullity,full_row_rank,alpha_hat,core_rows,core_cols,excess,wp_iterations,"
            "fp_violations,stats_distance,balance_distance,x");
  EXPECT_NE(s.find("2,18446744073709551615,10,0,0,0,0,2.5,4,,,,,,,,,,,0.25\n"), std::string::npos);
  const auto j = xorlab::harness::trials_json({r});
  EXPECT_EQ(j[0]["seed"].get<std::uint64_t>(), r.seed);
  EXPECT_FALSE(j[0].contains("nullity"));
}

TEST(Experiments, EveryExperimentSmokeRunsQuickly) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, fn] : xorlab::harness::experiments()) {
    auto c = small(name);
    c.trials = 1;
    if (name == "threshold-scan") {
      c.trials = 20;
      c.scan = {0.5, 1.2, 0.01};
    }
    if (name == "wp-stats") c.wp_mode = "exact";
    if (name == "audit-freeness") c.params.n = 60;
    const auto r = fn(c);
    EXPECT_EQ(r.experiment, name);
    EXPECT_FALSE(r.trials.empty()) << name;
    EXPECT_FALSE(r.summary.rows.empty()) << name;
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 60.0);
}

TEST(Experiments, DeterministicAndWorkerInvariant) {
  for (const std::string name : {"rank-profile", "wp-stats", "balance", "peel", "interpolate"}) {
    auto c = small(name, 300);
    c.densities = {2.0, 2.6};
    c.trials = 4;
    const auto a = xorlab::harness::run_experiment(c);
    const auto b = xorlab::harness::run_experiment(c);
    c.workers = 3;
    const auto w = xorlab::harness::run_experiment(c);
    EXPECT_EQ(trials_csv(a), trials_csv(b)) << name;
    EXPECT_EQ(trials_csv(a), trials_csv(w)) << name;
    c.params.seed += 1;
    EXPECT_NE(trials_csv(a), trials_csv(xorlab::harness::run_experiment(c))) << name;
  }
}

TEST(Experiments, CommonRandomNumbersAcrossGrid) {
  auto c = small("rank-profile", 200);
  c.densities = {1.0, 2.0, 3.0};
  c.trials = 5;
  const auto r = xorlab::harness::run_experiment(c);
  ASSERT_EQ(r.trials.size(), 15u);
  for (std::size_t i = 0; i < 15; ++i) {
    EXPECT_EQ(r.trials[i].trial, i);
    EXPECT_EQ(r.trials[i].seed, xorlab::derive_seed(12345, i % 5));
  }
}

TEST(Experiments, SummaryRecomputedFromTrials) {
  auto c = small("rank-profile", 600);
  c.densities = {2.4, 2.7, 2.8, 3.0};
  c.trials = 10;
  const auto r = xorlab::harness::run_experiment(c);
  for (std::size_t g = 0; g < 4; ++g) {
    double full = 0, nul = 0;
    for (std::size_t t = 0; t < 10; ++t) {
      const auto& rec = r.trials[g * 10 + t];
      EXPECT_EQ(rec.rank + rec.nullity, 600);
      EXPECT_EQ(rec.full_row_rank, rec.rank == std::int64_t(rec.m));
      full += rec.full_row_rank;
      nul += double(rec.nullity);
    }
    EXPECT_NEAR(r.summary.value(g, "full_rank_frac"), full / 10, 1e-9);
    EXPECT_NEAR(r.summary.value(g, "mean_nullity"), nul / 10, 1e-6);
  }
}

TEST(Experiments, ZeroDensityIsFullRank) {
  auto c = small("rank-profile");
  c.params.d.reset();
  c.params.m = 0;
  const auto r = xorlab::harness::run_experiment(c);
  EXPECT_DOUBLE_EQ(r.summary.value(0, "full_rank_frac"), 1.0);
}

TEST(Experiments, ThresholdScanFailsWithoutBracket) {
  auto c = small("threshold-scan", 300);
  c.trials = 10;
  c.scan = {0.1, 0.2, 0.01};
  EXPECT_THROW(xorlab::harness::run_experiment(c), xorlab::ExperimentError);
}

TEST(Experiments, ExactWpStatsBudget) {
  auto c = small("wp-stats", 400);
  c.wp_mode = "exact";
  c.wp_budget = 1e5;
  EXPECT_THROW(xorlab::harness::run_experiment(c), xorlab::BudgetExceeded);
}

TEST(Experiments, FreenessControls) {
  // pins covering every column: nothing left to relate
  xorlab::SparseMatrix id(xorlab::build_field(2), 30);
  for (std::uint32_t j = 0; j < 30; ++j) id.add_row({{j, xorlab::Elem{1}}});
  EXPECT_TRUE(xorlab::freeness_audit(id, 0.1, 3).is_free);
  // many duplicated 2-rows: every duplicated pair is a size-2 relation
  xorlab::SparseMatrix dup(xorlab::build_field(2), 12);
  for (std::uint32_t j = 0; j + 1 < 12; j += 2) {
    dup.add_row({{j, xorlab::Elem{1}}, {j + 1, xorlab::Elem{1}}});
    dup.add_row({{j, xorlab::Elem{1}}, {j + 1, xorlab::Elem{1}}});
  }
  EXPECT_FALSE(xorlab::freeness_audit(dup, 0.05, 2).is_free);
}

TEST(Runner, WritesCsvAndManifest) {
  auto c = small("peel");
  c.out = scratch("run").string();
  const auto out = xorlab::harness::run(c);
  for (const char* f : {"peel.csv", "peel_summary.csv", "timings.csv", "run.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(c.out) / f)) << f;
  }
  const auto manifest = json::parse(slurp(fs::path(c.out) / "run.json"));
  EXPECT_EQ(manifest["experiment"], "peel");
  EXPECT_EQ(manifest["master_seed"].get<std::uint64_t>(), 12345u);
  EXPECT_EQ(manifest["trial_seeds"].size(), 3u);
  EXPECT_EQ(manifest["trial_seeds"][1].get<std::uint64_t>(), xorlab::derive_seed(12345, 1));
  EXPECT_EQ(xorlab::harness::config_from_json(manifest["config"]).trials, 3u);
  const std::string first = slurp(fs::path(c.out) / "peel.csv");
  xorlab::harness::run(c);
  EXPECT_EQ(slurp(fs::path(c.out) / "peel.csv"), first);

  c.format = "json";
  xorlab::harness::run(c);
  const auto j = json::parse(slurp(fs::path(c.out) / "peel.json"));
  EXPECT_EQ(j["trials"].size(), 3u);
  fs::remove_all(c.out);
}

TEST(Runner, UnwritableOutputIsIoError) {
  auto c = small("peel");
  const auto blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  c.out = (blocker / "sub").string();
  EXPECT_THROW(xorlab::harness::run(c), xorlab::IoError);
  fs::remove(blocker);
}

#ifdef XORLAB_CLI_PATH
namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(XORLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  EXPECT_EQ(cli("threshold --k 3"), 0);
  EXPECT_EQ(cli("rank-profile --config /nonexistent/cfg.json"), 2);
  EXPECT_EQ(cli("rank-profile --n 50 --format xml"), 2);
  EXPECT_EQ(cli("no-such-command"), 2);
  EXPECT_EQ(cli("rank-profile --n 50 --trials 2 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "rank-profile.csv"));
  EXPECT_EQ(cli("dump-matrix --input /nonexistent/matrix.txt"), 4);
  const auto cfg = dir / "audit.json";
  std::ofstream(cfg) << R"({"experiment":"audit-freeness","params":{"n":400,"k":3,"d":2.0},"budget":1e6})";
  EXPECT_EQ(cli("audit-freeness --config " + cfg.string() + " --out " + dir.string()), 3);
  const auto scan = dir / "scan.json";
  std::ofstream(scan) << R"({"experiment":"threshold-scan","params":{"n":200,"k":3},"trials":5,"scan":{"lo":0.1,"hi":0.2}})";
  EXPECT_EQ(cli("threshold-scan --config " + scan.string() + " --out " + dir.string()), 1);
  EXPECT_EQ(cli("dump-matrix --n 40 --d 2.0 --wp --out " + dir.string()), 0);
  for (const char* f : {"matrix.txt", "summary.json", "messages.csv", "labels.csv", "wp_stats.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(cli("dump-matrix --input " + (dir / "matrix.txt").string()), 0);
  fs::remove_all(dir);
}
#endif

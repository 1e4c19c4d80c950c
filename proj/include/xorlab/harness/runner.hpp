#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "xorlab/error.hpp"
#include "xorlab/harness/config.hpp"
#include "xorlab/harness/experiments.hpp"
#include "xorlab/version.hpp"

namespace xorlab::harness {

inline constexpr int kCsvSchemaVersion = 1;

struct RunOutput {
  ExperimentResult result;
  double wall_ms = 0.0;
  std::filesystem::path dir;
};

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot write '" + p.string() + "'");
  return os;
}

}  // namespace detail

/// Writes the per-trial table, the summary, per-trial timings and run.json.
inline void write_outputs(const ExperimentConfig& c, const RunOutput& r) {
  std::error_code ec;
  std::filesystem::create_directories(r.dir, ec);
  if (ec) throw IoError("cannot create output directory '" + r.dir.string() + "': " + ec.message());
  const std::string name = r.result.experiment;
  if (c.format == "csv") {
    auto trials = detail::open_out(r.dir / (name + ".csv"));
    write_trials_csv(trials, r.result.trials);
    auto summary = detail::open_out(r.dir / (name + "_summary.csv"));
    r.result.summary.write_csv(summary);
  } else {
    auto os = detail::open_out(r.dir / (name + ".json"));
    json j;
    j["trials"] = trials_json(r.result.trials);
    j["summary"] = r.result.summary.to_json();
    j["results"] = r.result.results;
    os << j.dump(2) << '\n';
  }
  {
    auto os = detail::open_out(r.dir / "timings.csv");
    os << "trial,runtime_ms\n";
    for (const auto& t : r.result.trials) os << t.trial << ',' << format_number(t.runtime_ms) << '\n';
  }
  json manifest;
  manifest["experiment"] = name;
  manifest["library_version"] = kVersion;
  manifest["csv_schema_version"] = kCsvSchemaVersion;
  manifest["config"] = to_json(c);
  manifest["master_seed"] = c.seed();
  manifest["seed_derivation"] = "trial t: splitmix64(master + 0x9E3779B97F4A7C15 * (t + 1))";
  auto seeds = json::array();
  for (std::size_t t = 0; t < c.trials; ++t) seeds.push_back(derive_seed(c.seed(), t));
  manifest["trial_seeds"] = seeds;
  manifest["results"] = r.result.results;
  manifest["wall_time_ms"] = r.wall_ms;
  auto os = detail::open_out(r.dir / "run.json");
  os << manifest.dump(2) << '\n';
  if (!os) throw IoError("failed writing run.json");
}

inline RunOutput run(const ExperimentConfig& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  out.result = run_experiment(c);
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.dir = c.out;
  write_outputs(c, out);
  return out;
}

}  // namespace xorlab::harness

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xorlab/ensemble.hpp"
#include "xorlab/error.hpp"

namespace xorlab::harness {

using json = nlohmann::ordered_json;

struct ScanRange {
  double lo = 0.85;  // m/n
  double hi = 0.98;
  double resolution = 0.001;
};

struct Tolerances {
  double tol_fp = 0.1;
  double tol_stats = 0.1;
  double tol_balance = 0.05;
  double tol_nullity = 0.02;
};

struct ExperimentConfig {
  std::string experiment;
  EnsembleParams params;        // params.seed is the master seed
  std::vector<double> densities;  // d values; empty means params' own density
  std::size_t trials = 1;
  Tolerances tol;
  std::string wp_mode = "iterate";  // exact | iterate
  std::string alpha = "empirical";  // empirical | fixed-point | <number>
  std::size_t max_iter = 0;         // 0: #edges + 1
  std::size_t samples = 100;        // kernel samples per trial
  std::vector<double> thetas = {0.0, 0.5, 1.0};
  std::vector<std::size_t> ns;      // audit-freeness trend; empty means params.n
  double delta = 0.1;
  std::size_t ell = 3;
  double budget = 1e7;
  double wp_budget = 1e10;          // standard_messages work guard
  ScanRange scan;
  std::size_t workers = 1;
  std::string out = "out";
  std::string format = "csv";

  std::uint64_t seed() const { return params.seed; }
};

inline json scheme_to_json(const CoefficientScheme& s) {
  switch (s.kind) {
    case CoefficientScheme::Kind::all_ones:
      return "ones";
    case CoefficientScheme::Kind::seeded_nonzero:
      return json{{"kind", "seeded"}, {"seed", s.seed}};
    case CoefficientScheme::Kind::explicit_table:
      return json{{"kind", "table"}, {"rows", s.table}};
  }
  return "ones";
}

inline CoefficientScheme scheme_from_json(const json& j, std::uint64_t default_seed) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "ones") return CoefficientScheme::all_ones();
    if (name == "seeded") return CoefficientScheme::seeded_nonzero(default_seed);
    throw ConfigError("unknown coefficient scheme '" + name + "'");
  }
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("scheme must be a string or an object with 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "ones") return CoefficientScheme::all_ones();
  if (kind == "seeded") return CoefficientScheme::seeded_nonzero(j.value("seed", default_seed));
  if (kind == "table") return CoefficientScheme::explicit_table(j.at("rows").get<std::vector<std::vector<std::uint32_t>>>());
  throw ConfigError("unknown coefficient scheme kind '" + kind + "'");
}

inline json to_json(const ExperimentConfig& c) {
  json p;
  p["n"] = c.params.n;
  p["k"] = c.params.k;
  if (c.params.m) p["m"] = *c.params.m;
  if (c.params.d) p["d"] = *c.params.d;
  p["q"] = c.params.q;
  p["scheme"] = scheme_to_json(c.params.scheme);
  p["seed"] = c.params.seed;
  json j;
  j["experiment"] = c.experiment;
  j["params"] = p;
  j["densities"] = c.densities;
  j["trials"] = c.trials;
  j["tolerances"] = {{"tol_fp", c.tol.tol_fp}, {"tol_stats", c.tol.tol_stats}, {"tol_balance", c.tol.tol_balance}, {"tol_nullity", c.tol.tol_nullity}};
  j["wp_mode"] = c.wp_mode;
  j["alpha"] = c.alpha;
  j["max_iter"] = c.max_iter;
  j["samples"] = c.samples;
  j["thetas"] = c.thetas;
  j["ns"] = c.ns;
  j["delta"] = c.delta;
  j["ell"] = c.ell;
  j["budget"] = c.budget;
  j["wp_budget"] = c.wp_budget;
  j["scan"] = {{"lo", c.scan.lo}, {"hi", c.scan.hi}, {"resolution", c.scan.resolution}};
  j["workers"] = c.workers;
  j["out"] = c.out;
  j["format"] = c.format;
  return j;
}

namespace detail {

template <class T>
void read_opt(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (c.params.n < 1) throw ConfigError("params.n must be >= 1");
  if (c.params.k < 1 || c.params.k > c.params.n) throw ConfigError("params.k must lie in [1, n]");
  for (std::size_t i = 1; i < c.densities.size(); ++i) {
    if (!(c.densities[i - 1] < c.densities[i])) throw ConfigError("densities must be sorted and distinct");
  }
  for (std::size_t i = 1; i < c.thetas.size(); ++i) {
    if (!(c.thetas[i - 1] < c.thetas[i])) throw ConfigError("thetas must be sorted and distinct");
  }
  for (std::size_t i = 1; i < c.ns.size(); ++i) {
    if (!(c.ns[i - 1] < c.ns[i])) throw ConfigError("ns must be sorted and distinct");
  }
  if (c.wp_mode != "exact" && c.wp_mode != "iterate") throw ConfigError("wp_mode must be 'exact' or 'iterate'");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format must be 'csv' or 'json'");
  if (c.alpha != "empirical" && c.alpha != "fixed-point") {
    double a = 0.0;
    std::istringstream is(c.alpha);
    if (!(is >> a) || !(a >= 0.0 && a <= 1.0)) throw ConfigError("alpha must be 'empirical', 'fixed-point' or in [0,1]");
  }
  if (!(c.scan.lo < c.scan.hi) || !(c.scan.resolution > 0.0)) throw ConfigError("scan needs lo < hi and resolution > 0");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (c.ell < 2) throw ConfigError("ell must be >= 2");
}

inline ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig c;
    detail::read_opt(j, "experiment", c.experiment);
    const json p = j.value("params", json::object());
    detail::read_opt(p, "n", c.params.n);
    detail::read_opt(p, "k", c.params.k);
    if (p.contains("m")) c.params.m = p.at("m").get<std::size_t>();
    if (p.contains("d")) c.params.d = p.at("d").get<double>();
    detail::read_opt(p, "q", c.params.q);
    detail::read_opt(p, "seed", c.params.seed);
    detail::read_opt(j, "seed", c.params.seed);
    if (p.contains("scheme")) c.params.scheme = scheme_from_json(p.at("scheme"), c.params.seed);
    detail::read_opt(j, "densities", c.densities);
    detail::read_opt(j, "trials", c.trials);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      detail::read_opt(t, "tol_fp", c.tol.tol_fp);
      detail::read_opt(t, "tol_stats", c.tol.tol_stats);
      detail::read_opt(t, "tol_balance", c.tol.tol_balance);
      detail::read_opt(t, "tol_nullity", c.tol.tol_nullity);
    }
    detail::read_opt(j, "wp_mode", c.wp_mode);
    if (j.contains("alpha")) {
      c.alpha = j.at("alpha").is_number() ? j.at("alpha").dump() : j.at("alpha").get<std::string>();
    }
    detail::read_opt(j, "max_iter", c.max_iter);
    detail::read_opt(j, "samples", c.samples);
    detail::read_opt(j, "thetas", c.thetas);
    detail::read_opt(j, "ns", c.ns);
    detail::read_opt(j, "delta", c.delta);
    detail::read_opt(j, "ell", c.ell);
    detail::read_opt(j, "budget", c.budget);
    detail::read_opt(j, "wp_budget", c.wp_budget);
    if (j.contains("scan")) {
      const auto& s = j.at("scan");
      detail::read_opt(s, "lo", c.scan.lo);
      detail::read_opt(s, "hi", c.scan.hi);
      detail::read_opt(s, "resolution", c.scan.resolution);
    }
    detail::read_opt(j, "workers", c.workers);
    detail::read_opt(j, "out", c.out);
    detail::read_opt(j, "format", c.format);
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace xorlab::harness

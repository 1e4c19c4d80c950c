#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace xorlab::harness {

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// One Monte Carlo trial. Unmeasured numeric fields stay NaN / -1 and are
/// written as empty CSV cells.
struct TrialRecord {
  std::size_t trial = 0;  // global index within the run
  std::uint64_t seed = 0;
  std::size_t n = 0, m = 0, t = 0, k = 0;
  std::uint64_t q = 0;
  double d = kUnset;
  std::int64_t rank = -1, nullity = -1;
  int full_row_rank = -1;
  double alpha_hat = kUnset;
  std::int64_t core_rows = -1, core_cols = -1, excess = std::numeric_limits<std::int64_t>::min();
  std::int64_t wp_iterations = -1, fp_violations = -1;
  double stats_distance = kUnset;
  double balance_distance = kUnset;
  double runtime_ms = 0.0;  // written to the timing file only, so trial CSVs are reproducible
  std::vector<std::pair<std::string, double>> extra;  // experiment-specific columns, fixed order

  double get(const std::string& key) const {
    for (const auto& [k2, v] : extra) {
      if (k2 == key) return v;
    }
    return kUnset;
  }
  void set(std::string key, double v) {
    for (auto& [k2, v2] : extra) {
      if (k2 == key) {
        v2 = v;
        return;
      }
    }
    extra.emplace_back(std::move(key), v);
  }
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string format_int(std::int64_t v, std::int64_t unset = -1) {
  return v == unset ? std::string() : std::to_string(v);
}

inline const std::vector<std::string>& core_columns() {
  static const std::vector<std::string> cols = {
      "trial", "seed", "n", "m", "t", "k", "q", "d", "rank", "nullity", "full_row_rank", "alpha_hat",
      "core_rows", "core_cols", "excess", "wp_iterations", "fp_violations", "stats_distance", "balance_distance"};
  return cols;
}

inline std::vector<std::string> core_values(const TrialRecord& r) {
  return {std::to_string(r.trial),
          std::to_string(r.seed),
          std::to_string(r.n),
          std::to_string(r.m),
          std::to_string(r.t),
          std::to_string(r.k),
          std::to_string(r.q),
          format_number(r.d),
          format_int(r.rank),
          format_int(r.nullity),
          format_int(r.full_row_rank),
          format_number(r.alpha_hat),
          format_int(r.core_rows),
          format_int(r.core_cols),
          format_int(r.excess, std::numeric_limits<std::int64_t>::min()),
          format_int(r.wp_iterations),
          format_int(r.fp_violations),
          format_number(r.stats_distance),
          format_number(r.balance_distance)};
}

/// Trial CSV: core columns then the union of extra keys in first-seen order.
inline void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& recs) {
  std::vector<std::string> extra_keys;
  for (const auto& r : recs) {
    for (const auto& [k, v] : r.extra) {
      if (std::find(extra_keys.begin(), extra_keys.end(), k) == extra_keys.end()) extra_keys.push_back(k);
    }
  }
  bool first = true;
  for (const auto& c : core_columns()) {
    os << (first ? "" : ",") << c;
    first = false;
  }
  for (const auto& k : extra_keys) os << ',' << k;
  os << '\n';
  for (const auto& r : recs) {
    first = true;
    for (const auto& v : core_values(r)) {
      os << (first ? "" : ",") << v;
      first = false;
    }
    for (const auto& k : extra_keys) os << ',' << format_number(r.get(k));
    os << '\n';
  }
}

inline nlohmann::ordered_json trials_json(const std::vector<TrialRecord>& recs) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : recs) {
    nlohmann::ordered_json o;
    const auto vals = core_values(r);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i].empty()) continue;
      if (core_columns()[i] == "seed") {
        o["seed"] = r.seed;
      } else {
        o[core_columns()[i]] = std::stod(vals[i]);
      }
    }
    for (const auto& [k, v] : r.extra) {
      if (!std::isnan(v)) o[k] = v;
    }
    arr.push_back(std::move(o));
  }
  return arr;
}

/// Aggregated table: header plus rows of preformatted cells.
struct SummaryTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
  }

  nlohmann::ordered_json to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json o;
      for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) o[header[i]] = r[i];
      arr.push_back(std::move(o));
    }
    return arr;
  }

  /// Numeric cell lookup by column name; NaN when absent or empty.
  double value(std::size_t row, const std::string& col) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == col) return rows.at(row)[i].empty() ? kUnset : std::stod(rows.at(row)[i]);
    }
    return kUnset;
  }
};

}  // namespace xorlab::harness

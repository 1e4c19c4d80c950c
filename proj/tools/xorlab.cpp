// xorlab command line: threshold analysis, Monte Carlo experiments, matrix dumps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "xorlab/harness/runner.hpp"
#include "xorlab/xorlab.hpp"

namespace {

using xorlab::harness::json;

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kBudget = 3, kIo = 4 };

struct CommonOpts {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  std::optional<std::string> format;
  std::optional<std::size_t> n, k, m, trials;
  std::optional<double> d;
  std::optional<std::uint64_t> q;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config, "JSON experiment config");
  sub->add_option("--seed", o.seed, "master seed (overrides config)");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--workers", o.workers, "worker threads");
  sub->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--n", o.n, "number of columns");
  sub->add_option("--k", o.k, "row weight");
  sub->add_option("--m", o.m, "number of rows");
  sub->add_option("--d", o.d, "density d = k m / n");
  sub->add_option("--q", o.q, "field order");
  sub->add_option("--trials", o.trials, "trials per grid point");
}

xorlab::harness::ExperimentConfig make_config(const std::string& experiment, const CommonOpts& o) {
  xorlab::harness::ExperimentConfig c;
  if (!o.config.empty()) {
    c = xorlab::harness::load_config(o.config);
  } else {
    c.params.n = 1000;
    c.params.d = 2.5;
  }
  if (!c.experiment.empty() && c.experiment != experiment) {
    throw xorlab::ConfigError("config is for experiment '" + c.experiment + "', not '" + experiment + "'");
  }
  c.experiment = experiment;
  if (o.seed) c.params.seed = *o.seed;
  if (o.out) c.out = *o.out;
  if (o.workers) c.workers = *o.workers;
  if (o.format) c.format = *o.format;
  if (o.n) c.params.n = *o.n;
  if (o.k) c.params.k = *o.k;
  if (o.m) {
    c.params.m = *o.m;
    c.params.d.reset();
  }
  if (o.d) {
    c.params.d = *o.d;
    c.params.m.reset();
  }
  if (o.q) c.params.q = *o.q;
  if (o.trials) c.trials = *o.trials;
  xorlab::harness::validate(c);
  return c;
}

json report_json(const xorlab::ThresholdReport& r) {
  json j;
  j["d"] = r.d;
  j["k"] = r.k;
  j["alpha_u"] = r.fp.alpha_u;
  j["alpha_s"] = r.fp.alpha_s;
  j["alpha_f"] = r.fp.alpha_f;
  j["dk"] = r.dk;
  j["dk_over_k"] = r.dk / double(r.k);
  j["dk_star"] = r.dk_star;
  j["Phi_u"] = r.Phi_u;
  j["Phi_s"] = r.Phi_s;
  j["Phi_f"] = r.Phi_f;
  j["regime"] = r.regime;
  return j;
}

int cmd_threshold(std::size_t k, std::optional<double> d) {
  json j;
  if (d) {
    j = report_json(xorlab::threshold_report(*d, k));
  } else {
    j["k"] = k;
    j["dk"] = xorlab::threshold_dk(k);
    j["dk_over_k"] = j["dk"].get<double>() / double(k);
    j["dk_star"] = xorlab::threshold_dk_star(k);
  }
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int cmd_experiment(const std::string& name, const CommonOpts& o) {
  const auto c = make_config(name, o);
  const auto r = xorlab::harness::run(c);
  std::cout << "experiment " << name << ": " << r.result.trials.size() << " trials, " << r.wall_ms / 1000.0
            << " s, output in " << r.dir.string() << '\n';
  r.result.summary.write_csv(std::cout);
  if (!r.result.results.empty()) std::cout << r.result.results.dump(2) << '\n';
  return kOk;
}

json matrix_summary(const xorlab::SparseMatrix& a) {
  const auto core = xorlab::two_core(a);
  const std::size_t rk = xorlab::rank(a);
  json j;
  j["rows"] = a.n_rows();
  j["cols"] = a.n_cols();
  j["q"] = a.field().q();
  j["nnz"] = a.nnz();
  j["rank"] = rk;
  j["nullity"] = a.n_cols() - rk;
  j["full_row_rank"] = rk == a.n_rows();
  j["core_rows"] = core.core_rows();
  j["core_cols"] = core.core_cols();
  j["excess"] = core.excess();
  return j;
}

int cmd_dump(const CommonOpts& o, const std::string& input, bool pinned, bool wp) {
  std::optional<xorlab::SparseMatrix> a;
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw xorlab::IoError("cannot open matrix file '" + input + "'");
    a = xorlab::read_matrix(in);
  } else {
    const auto c = make_config("dump-matrix", o);
    xorlab::Rng rng(c.seed());
    a = pinned ? xorlab::gen_pinned(c.params, rng).matrix : xorlab::gen_base(c.params, rng);
  }
  if (!o.out) {
    if (input.empty()) {
      xorlab::write_matrix(std::cout, *a);
    } else {
      std::cout << matrix_summary(*a).dump(2) << '\n';
    }
    return kOk;
  }
  const std::filesystem::path dir(*o.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw xorlab::IoError("cannot create '" + dir.string() + "'");
  auto open = [&](const char* name) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw xorlab::IoError("cannot write '" + (dir / name).string() + "'");
    return os;
  };
  {
    auto os = open("matrix.txt");
    xorlab::write_matrix(os, *a);
  }
  {
    auto os = open("summary.json");
    os << matrix_summary(*a).dump(2) << '\n';
  }
  if (wp) {
    const xorlab::TannerGraph g(*a);
    const auto res = xorlab::wp_iterate(g, xorlab::WpInit::all_f, g.n_edges() + 1);
    auto ms = open("messages.csv");
    xorlab::write_messages_csv(ms, g, res.msgs);
    auto ls = open("labels.csv");
    xorlab::write_labels_csv(ls, xorlab::labels(g, res.msgs));
    json st;
    for (const auto& [key, count] : xorlab::stats(g, res.msgs).variables) {
      st["variables"][xorlab::stat_key_name(key.first, key.second)] = count;
    }
    for (const auto& [key, count] : xorlab::stats(g, res.msgs).checks) {
      st["checks"][xorlab::stat_key_name(key.first, key.second)] = count;
    }
    auto ss = open("wp_stats.json");
    ss << st.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xorlab: sparse random linear systems over finite fields"};
  app.require_subcommand(1);

  std::size_t th_k = 3;
  std::optional<double> th_d;
  auto* th = app.add_subcommand("threshold", "thresholds d_k, d_k* and fixed points");
  th->add_option("--k", th_k, "row weight")->check(CLI::Range(3, 16));
  th->add_option("--d", th_d, "density for fixed points and Phi values");

  CommonOpts opts;
  const char* experiments[] = {"rank-profile", "threshold-scan", "wp-stats", "balance",
                               "peel",         "interpolate",    "audit-freeness"};
  std::vector<CLI::App*> exp_cmds;
  for (const char* name : experiments) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    add_common(sub, opts);
    exp_cmds.push_back(sub);
  }

  std::string input;
  bool pinned = false, wp = false;
  auto* dump = app.add_subcommand("dump-matrix", "generate or load a matrix and write it out");
  add_common(dump, opts);
  dump->add_option("--input", input, "matrix file to load and summarise");
  dump->add_flag("--pinned", pinned, "append pinning rows");
  dump->add_flag("--wp", wp, "also dump WP messages, labels and statistics (needs --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (th->parsed()) return cmd_threshold(th_k, th_d);
    if (dump->parsed()) return cmd_dump(opts, input, pinned, wp);
    for (auto* sub : exp_cmds) {
      if (sub->parsed()) return cmd_experiment(sub->get_name(), opts);
    }
  } catch (const xorlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const xorlab::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const xorlab::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

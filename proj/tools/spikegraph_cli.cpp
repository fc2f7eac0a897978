// Command-line surface: simulation, coupling, counting, estimation, bound
// evaluation, Monte Carlo experiments and the counting benchmark.
// Exit codes: 0 success, 1 validation error, 2 I/O or parse error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikegraph/bounds.hpp"
#include "spikegraph/counting.hpp"
#include "spikegraph/estimator.hpp"
#include "spikegraph/experiments.hpp"
#include "spikegraph/io.hpp"
#include "spikegraph/model.hpp"
#include "spikegraph/simulate.hpp"

namespace {

using namespace spikegraph;

ValidatedNetwork load_validated(const std::string& path) {
  NetworkSpec spec = load_spec(path);
  ValidationResult res = validate_network(spec);
  for (const std::string& w : res.warnings)
    std::cerr << "warning: " << w << "\n";
  if (!res.ok()) {
    for (const std::string& e : res.errors) std::cerr << "error: " << e << "\n";
    throw std::invalid_argument("network spec failed validation: " + path);
  }
  return *res.network;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir);
}

EpsilonSpec parse_eps(const std::string& eps, double c) {
  if (eps == "auto") return EpsilonSpec::schedule(c);
  try {
    std::size_t used = 0;
    double v = std::stod(eps, &used);
    if (used != eps.size()) throw std::invalid_argument(eps);
    return EpsilonSpec::fixed(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("--eps must be \"auto\" or a number, got \"" +
                                eps + "\"");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiking-network interaction graph estimator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = ".";
  app.add_option("--seed", seed, "RNG seed (replicate k uses seed + k)");
  app.add_option("--threads", threads, "worker threads for parallel stages");
  app.add_option("--out-dir", out_dir, "directory for multi-file outputs");

  // simulate
  auto* sim = app.add_subcommand("simulate", "sample a spike raster");
  std::string sim_spec, sim_out = "raster.csv";
  std::int64_t sim_n = 0;
  sim->add_option("--spec", sim_spec, "network spec JSON")->required();
  sim->add_option("--n", sim_n, "time horizon (>= 3)")->required();
  sim->add_option("--out", sim_out, "output raster CSV");

  // couple
  auto* cpl = app.add_subcommand(
      "couple", "run the full process and its region restriction on shared noise");
  std::string cpl_spec;
  std::vector<int> cpl_region;
  int cpl_target = 0;
  std::int64_t cpl_n = 0;
  cpl->add_option("--spec", cpl_spec, "network spec JSON")->required();
  cpl->add_option("--region", cpl_region, "observed region ids, e.g. 1,2,3")
      ->required()
      ->delimiter(',');
  cpl->add_option("--target", cpl_target, "restricted neuron id")->required();
  cpl->add_option("--n", cpl_n, "time horizon (>= 3)")->required();

  // count
  auto* cnt = app.add_subcommand("count", "tabulate context occurrences");
  std::string cnt_raster, cnt_out = "table.csv";
  int cnt_target = 0;
  double cnt_xi = 0.25;
  std::int64_t cnt_ellmax = -1;
  cnt->add_option("--raster", cnt_raster, "raster CSV")->required();
  cnt->add_option("--target", cnt_target, "target neuron id")->required();
  cnt->add_option("--xi", cnt_xi, "admissibility exponent in (0, 1/2)");
  cnt->add_option("--ell-max", cnt_ellmax,
                  "window cap; default: the largest admissible-capable length");
  cnt->add_option("--out", cnt_out, "output table CSV");

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate the interaction graph");
  std::string est_raster, est_out = "graph.csv", est_eps = "auto";
  double est_xi = 0.25, est_c = 1.0;
  std::int64_t est_ellmax = -1;
  est->add_option("--raster", est_raster, "raster CSV")->required();
  est->add_option("--xi", est_xi, "admissibility exponent in (0, 1/2)");
  est->add_option("--eps", est_eps, "threshold: \"auto\" (schedule) or a value");
  est->add_option("--eps-c", est_c, "schedule constant for --eps auto");
  est->add_option("--ell-max", est_ellmax, "window cap; default provable cap");
  est->add_option("--out", est_out, "output graph CSV");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "evaluate the theoretical bounds");
  std::string bnd_spec, bnd_out = "report.json";
  std::vector<int> bnd_region;
  int bnd_target = 0;
  std::int64_t bnd_n = 0;
  double bnd_xi = 0.25, bnd_eps = 0.0, bnd_nu = 0.5, bnd_lambda = 0.0,
         bnd_ell = 1.0;
  bnd->add_option("--spec", bnd_spec, "network spec JSON")->required();
  bnd->add_option("--region", bnd_region,
                  "observed region ids; default: all neurons")
      ->delimiter(',');
  bnd->add_option("--target", bnd_target, "target neuron id")->required();
  bnd->add_option("--n", bnd_n, "sample length")->required();
  bnd->add_option("--xi", bnd_xi, "admissibility exponent in (0, 1/2)");
  bnd->add_option("--eps", bnd_eps, "selection threshold")->required();
  bnd->add_option("--nu", bnd_nu, "count-threshold split parameter in (0, 1)");
  bnd->add_option("--lambda", bnd_lambda,
                  "deviation level; adds the context-deviation bound");
  bnd->add_option("--ell", bnd_ell, "context length for --lambda");
  bnd->add_option("--out", bnd_out, "output report JSON");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a Monte Carlo study");
  std::string exp_config;
  exp->add_option("--config", exp_config, "experiment config JSON")->required();

  // bench
  auto* ben = app.add_subcommand("bench", "counting runtime benchmark");
  std::vector<std::int64_t> ben_grid = {1000, 2000, 4000, 8000};
  int ben_repeats = 9, ben_region = 5;
  ben->add_option("--n-grid", ben_grid, "raster lengths, e.g. 1000,2000")
      ->delimiter(',');
  ben->add_option("--repeats", ben_repeats, "timing repeats per length");
  ben->add_option("--region-size", ben_region, "columns in the raster");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      ValidatedNetwork net = load_validated(sim_spec);
      SpikeRaster raster = simulate(net, SimulationConfig{sim_n, seed});
      save_raster(raster, sim_out);
      std::cout << "wrote " << sim_out << "\n";
    } else if (cpl->parsed()) {
      ValidatedNetwork net = load_validated(cpl_spec);
      CoupledResult res = simulate_coupled(net, SimulationConfig{cpl_n, seed},
                                           cpl_region, cpl_target);
      ensure_dir(out_dir);
      save_raster(res.full, join_path(out_dir, "raster_full.csv"));
      save_raster(res.approx, join_path(out_dir, "raster_approx.csv"));
      std::ostringstream disc;
      disc << "neuron,first_discrepancy\n";
      for (std::size_t i = 0; i < res.first_discrepancy.size(); ++i) {
        disc << (i + 1) << ",";
        if (res.first_discrepancy[i]) disc << *res.first_discrepancy[i];
        disc << "\n";
      }
      save_text(disc.str(), join_path(out_dir, "discrepancy.csv"));
      std::cout << "wrote raster_full.csv, raster_approx.csv, discrepancy.csv"
                << " in " << out_dir << "\n";
    } else if (cnt->parsed()) {
      SpikeRaster raster = load_raster(cnt_raster);
      std::int64_t cap = cnt_ellmax >= 0 ? cnt_ellmax
                                         : provable_ell_cap(raster.n, cnt_xi);
      ContextTable table = count_contexts(raster, cnt_target, cap);
      save_table(table, cnt_out);
      std::cout << "wrote " << cnt_out << " (" << table.counts.size()
                << " contexts)\n";
    } else if (est->parsed()) {
      SpikeRaster raster = load_raster(est_raster);
      EpsilonSpec eps = parse_eps(est_eps, est_c);
      EstimatedGraph graph =
          estimate_graph(raster, est_xi, eps, est_ellmax, threads);
      save_graph(graph, est_out);
      std::cout << "wrote " << est_out << " (" << graph.edges().size()
                << " edges)\n";
    } else if (bnd->parsed()) {
      ValidatedNetwork net = load_validated(bnd_spec);
      std::vector<int> region = bnd_region;
      if (region.empty()) {
        for (int i = 1; i <= net.spec.neuron_count; ++i) region.push_back(i);
      }
      ModelConstants constants = compute_constants(net, bnd_target, region);
      BoundReport report =
          theorem2_bounds(static_cast<double>(bnd_n), bnd_xi, bnd_eps, net,
                          constants, bnd_nu, bnd_lambda, bnd_ell);
      save_bound_report(report, bnd_out);
      std::cout << "wrote " << bnd_out << "\n";
    } else if (exp->parsed()) {
      ExperimentConfig cfg =
          parse_experiment_config(load_json(exp_config), exp_config);
      if (app.count("--seed") > 0) cfg.seed = seed;
      if (app.count("--threads") > 0) cfg.threads = threads;
      ExperimentReport report = run_experiment(cfg);
      save_report(report, cfg, out_dir);
      std::cout << "wrote " << kind_name(cfg.kind) << "_report.{csv,json} in "
                << out_dir << "\n";
    } else if (ben->parsed()) {
      ExperimentConfig cfg;
      cfg.kind = ExperimentKind::Runtime;
      cfg.n_grid = ben_grid;
      cfg.bench_repeats = ben_repeats;
      cfg.bench_region_size = ben_region;
      cfg.seed = seed;
      ExperimentReport report = run_experiment(cfg);
      save_report(report, cfg, out_dir);
      for (const ReportRow& row : report.rows) {
        if (row.metric == "seconds_median")
          std::cout << "n=" << row.n << "  " << format_double(row.value)
                    << " s\n";
        if (row.metric == "loglog_slope")
          std::cout << "log-log slope: " << format_double(row.value) << "\n";
      }
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

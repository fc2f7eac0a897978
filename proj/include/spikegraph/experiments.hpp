#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikegraph/bounds.hpp"
#include "spikegraph/estimator.hpp"
#include "spikegraph/model.hpp"

namespace spikegraph {

// Monte Carlo studies pairing an empirical event frequency with the bound
// that is supposed to dominate it, plus the counting benchmark.
enum class ExperimentKind {
  Consistency,      // exact graph recovery across an n grid
  Overestimation,   // false selection of one non-presynaptic candidate
  Underestimation,  // missed selection of one presynaptic candidate
  Hoeffding,        // centered spike-count deviation for one fixed context
  Coupling,         // trajectory discrepancy under region restriction
  Runtime,          // counting cost scaling on adversarial rasters
};

[[nodiscard]] std::string kind_name(ExperimentKind kind);
[[nodiscard]] ExperimentKind kind_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Consistency;
  NetworkSpec spec;
  int replicates = 100;
  std::vector<std::int64_t> n_grid;
  double xi = 0.25;
  EpsilonSpec eps = EpsilonSpec::schedule(1.0);
  std::uint64_t seed = 1;  // replicate k simulates with seed + k
  int threads = 1;
  int target = 1;
  int candidate = 2;             // over/underestimation studies
  std::vector<int> region;       // coupling; empty means all neurons
  std::vector<double> lambda_grid;  // hoeffding
  std::vector<double> eps_grid;     // over/underestimation
  std::int64_t context_ell = 1;     // hoeffding context gap length
  std::string context_bits;         // hoeffding window, 0/1 string
  double nu = 0.5;
  int bench_repeats = 9;
  int bench_region_size = 5;
};

// One measurement. Fields that do not apply to the metric stay empty: a
// runtime row has no bound, a slope row has no n.
struct ReportRow {
  std::string kind;
  std::int64_t n = 0;
  std::string param_name;
  double param_value = 0.0;
  std::string metric;
  double value = 0.0;
  std::optional<double> wilson_lo;
  std::optional<double> wilson_hi;
  std::optional<double> bound_raw;
  std::optional<double> bound_clamped;
  std::optional<bool> bound_vacuous;
  std::int64_t replicates = 0;
};

struct ExperimentReport {
  nlohmann::json config_echo;  // the resolved config, for reproducibility
  std::vector<ReportRow> rows;

  [[nodiscard]] std::string csv() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for successes / trials.
[[nodiscard]] WilsonInterval wilson(std::int64_t successes,
                                    std::int64_t trials);

[[nodiscard]] ExperimentConfig parse_experiment_config(
    const nlohmann::json& doc, const std::string& where);
[[nodiscard]] nlohmann::json experiment_config_to_json(
    const ExperimentConfig& cfg);

// Runs the study. Replicates are distributed over cfg.threads workers;
// results are reduced in replicate order, so thread count never changes the
// report. No wall-clock stamps are emitted: reruns of the same config and
// seed are byte-identical (runtime rows excepted, they measure time).
[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Writes <kind>_report.csv and <kind>_report.json into out_dir.
void save_report(const ExperimentReport& report, const ExperimentConfig& cfg,
                 const std::string& out_dir);

// Raster that forces quadratic counting work: the target spikes once at
// t = 1 and stays silent, so every later step replays an ever-longer
// window. Other columns are fair coin flips.
[[nodiscard]] SpikeRaster adversarial_raster(std::int64_t n, int columns,
                                             std::uint64_t seed);

// Least-squares slope of log(y) against log(x). Used for the runtime rows.
[[nodiscard]] double loglog_slope(const std::vector<double>& x,
                                  const std::vector<double>& y);

}  // namespace spikegraph

#include "spikegraph/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "spikegraph/counting.hpp"
#include "spikegraph/io.hpp"
#include "spikegraph/parallel.hpp"
#include "spikegraph/rng.hpp"
#include "spikegraph/simulate.hpp"

namespace spikegraph {

namespace {

using nlohmann::json;

std::vector<int> all_ids(const NetworkSpec& spec) {
  std::vector<int> ids(static_cast<std::size_t>(spec.neuron_count));
  for (int i = 0; i < spec.neuron_count; ++i)
    ids[static_cast<std::size_t>(i)] = i + 1;
  return ids;
}

ReportRow base_row(const ExperimentConfig& cfg, std::int64_t n,
                   const std::string& metric) {
  ReportRow row;
  row.kind = kind_name(cfg.kind);
  row.n = n;
  row.metric = metric;
  row.replicates = cfg.replicates;
  return row;
}

void attach_frequency(ReportRow& row, std::int64_t successes,
                      std::int64_t trials) {
  row.value = static_cast<double>(successes) / static_cast<double>(trials);
  WilsonInterval w = wilson(successes, trials);
  row.wilson_lo = w.lo;
  row.wilson_hi = w.hi;
  row.replicates = trials;
}

void attach_bound(ReportRow& row, double raw) {
  BoundValue b = BoundValue::of(raw);
  row.bound_raw = b.raw;
  row.bound_clamped = b.clamped;
  row.bound_vacuous = b.vacuous;
}

// Per-replicate sensitivity of one candidate, shared by the over- and
// underestimation studies.
std::vector<double> replicate_deltas(const ValidatedNetwork& net,
                                     const ExperimentConfig& cfg,
                                     std::int64_t n) {
  std::vector<double> deltas(static_cast<std::size_t>(cfg.replicates), 0.0);
  std::int64_t cap = provable_ell_cap(n, cfg.xi);
  parallel_for(cfg.replicates, cfg.threads, [&](int k) {
    SimulationConfig sim{n, cfg.seed + static_cast<std::uint64_t>(k)};
    SpikeRaster raster = simulate(net, sim);
    ContextTable table = count_contexts(raster, cfg.target, cap);
    std::vector<ContextKey> adm = admissible_set(table, cfg.xi);
    deltas[static_cast<std::size_t>(k)] =
        sensitivity(table, adm, cfg.candidate).delta;
  });
  return deltas;
}

std::vector<double> eps_list_for(const ExperimentConfig& cfg, std::int64_t n) {
  if (!cfg.eps_grid.empty()) return cfg.eps_grid;
  return {cfg.eps.resolve(n, cfg.xi)};
}

std::vector<ReportRow> run_consistency(const ValidatedNetwork& net,
                                       const ExperimentConfig& cfg) {
  std::vector<int> ids = all_ids(net.spec);
  std::vector<std::pair<int, int>> truth;
  for (int i : ids) {
    for (int j : ids) {
      if (j != i && net.spec.weight(j, i) != 0.0) truth.emplace_back(j, i);
    }
  }
  std::vector<ModelConstants> constants;
  constants.reserve(ids.size());
  for (int i : ids) constants.push_back(compute_constants(net, i, ids));

  std::vector<ReportRow> rows;
  for (std::int64_t n : cfg.n_grid) {
    std::vector<char> exact(static_cast<std::size_t>(cfg.replicates), 0);
    parallel_for(cfg.replicates, cfg.threads, [&](int k) {
      SimulationConfig sim{n, cfg.seed + static_cast<std::uint64_t>(k)};
      SpikeRaster raster = simulate(net, sim);
      EstimatedGraph graph = estimate_graph(raster, cfg.xi, cfg.eps);
      exact[static_cast<std::size_t>(k)] = graph.edges() == truth;
    });
    std::int64_t succ = std::count(exact.begin(), exact.end(), char{1});

    ReportRow rec = base_row(cfg, n, "exact_recovery");
    attach_frequency(rec, succ, cfg.replicates);
    rows.push_back(rec);

    // Union bound over targets: each contributes a false-selection and a
    // missed-selection term at this (n, eps).
    double eps = cfg.eps.resolve(n, cfg.xi);
    double fail_bound = 0.0;
    for (const ModelConstants& c : constants) {
      fail_bound += overestimation_bound(static_cast<double>(n), cfg.xi, eps);
      if (c.m.has_value() && eps < *c.m) {
        fail_bound += underestimation_bound(static_cast<double>(n), cfg.xi,
                                            eps, *c.m,
                                            static_cast<int>(ids.size()),
                                            c.p_min, cfg.nu)
                          .total();
      } else if (c.m.has_value()) {
        fail_bound += 1.0;
      }
      // Targets with no presynaptic sources have nothing to miss.
    }
    ReportRow fail = base_row(cfg, n, "recovery_failure");
    attach_frequency(fail, cfg.replicates - succ, cfg.replicates);
    attach_bound(fail, fail_bound);
    rows.push_back(fail);
  }
  return rows;
}

std::vector<ReportRow> run_overestimation(const ValidatedNetwork& net,
                                          const ExperimentConfig& cfg) {
  std::vector<ReportRow> rows;
  for (std::int64_t n : cfg.n_grid) {
    std::vector<double> deltas = replicate_deltas(net, cfg, n);
    for (double eps : eps_list_for(cfg, n)) {
      std::int64_t succ = std::count_if(deltas.begin(), deltas.end(),
                                        [&](double d) { return d > eps; });
      ReportRow row = base_row(cfg, n, "false_selection");
      row.param_name = "eps";
      row.param_value = eps;
      attach_frequency(row, succ, cfg.replicates);
      attach_bound(row,
                   overestimation_bound(static_cast<double>(n), cfg.xi, eps));
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ReportRow> run_underestimation(const ValidatedNetwork& net,
                                           const ExperimentConfig& cfg) {
  std::vector<int> ids = all_ids(net.spec);
  ModelConstants constants = compute_constants(net, cfg.target, ids);
  std::vector<ReportRow> rows;
  for (std::int64_t n : cfg.n_grid) {
    std::vector<double> deltas = replicate_deltas(net, cfg, n);
    for (double eps : eps_list_for(cfg, n)) {
      std::int64_t missed = std::count_if(deltas.begin(), deltas.end(),
                                          [&](double d) { return !(d > eps); });
      ReportRow row = base_row(cfg, n, "missed_selection");
      row.param_name = "eps";
      row.param_value = eps;
      attach_frequency(row, missed, cfg.replicates);
      if (constants.m.has_value() && eps > 0.0 && eps < *constants.m) {
        attach_bound(row, underestimation_bound(
                              static_cast<double>(n), cfg.xi, eps,
                              *constants.m, static_cast<int>(ids.size()),
                              constants.p_min, cfg.nu)
                              .total());
      } else {
        attach_bound(row, 1.0);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ReportRow> run_hoeffding(const ValidatedNetwork& net,
                                     const ExperimentConfig& cfg) {
  if (cfg.lambda_grid.empty())
    throw std::invalid_argument("hoeffding experiment needs lambda_grid");
  std::vector<int> ids = all_ids(net.spec);
  int others = static_cast<int>(ids.size()) - 1;
  ContextKey key = key_from_bit_string(cfg.context_ell, cfg.context_bits,
                                       others);
  double p = model_transition_prob(net, ids, cfg.target, key);

  std::vector<ReportRow> rows;
  for (std::int64_t t : cfg.n_grid) {
    std::vector<double> abs_m(static_cast<std::size_t>(cfg.replicates), 0.0);
    parallel_for(cfg.replicates, cfg.threads, [&](int k) {
      SimulationConfig sim{t, cfg.seed + static_cast<std::uint64_t>(k)};
      SpikeRaster raster = simulate(net, sim);
      ContextTable table = count_contexts(raster, cfg.target, cfg.context_ell);
      auto it = table.counts.find(key);
      std::int64_t n0 = 0, n1 = 0;
      if (it != table.counts.end()) {
        n0 = it->second.no_spike;
        n1 = it->second.spike;
      }
      abs_m[static_cast<std::size_t>(k)] =
          std::abs(static_cast<double>(n1) - p * static_cast<double>(n0 + n1));
    });
    for (double lambda : cfg.lambda_grid) {
      std::int64_t succ = std::count_if(abs_m.begin(), abs_m.end(),
                                        [&](double m) { return m > lambda; });
      ReportRow row = base_row(cfg, t, "martingale_exceed");
      row.param_name = "lambda";
      row.param_value = lambda;
      attach_frequency(row, succ, cfg.replicates);
      attach_bound(row, hoeffding_bound(static_cast<double>(t),
                                        static_cast<double>(cfg.context_ell),
                                        lambda));
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ReportRow> run_coupling(const ValidatedNetwork& net,
                                    const ExperimentConfig& cfg) {
  std::vector<int> region =
      cfg.region.empty() ? all_ids(net.spec) : cfg.region;
  ModelConstants constants = compute_constants(net, cfg.target, region);
  std::vector<ReportRow> rows;
  for (std::int64_t n : cfg.n_grid) {
    std::vector<char> differs(static_cast<std::size_t>(cfg.replicates), 0);
    parallel_for(cfg.replicates, cfg.threads, [&](int k) {
      SimulationConfig sim{n, cfg.seed + static_cast<std::uint64_t>(k)};
      CoupledResult res = simulate_coupled(net, sim, region, cfg.target);
      differs[static_cast<std::size_t>(k)] = !res.target_agrees(cfg.target);
    });
    std::int64_t succ = std::count(differs.begin(), differs.end(), char{1});
    ReportRow row = base_row(cfg, n, "discrepancy");
    attach_frequency(row, succ, cfg.replicates);
    CouplingBound bound =
        coupling_bound(net, constants, static_cast<double>(n));
    if (bound.available) attach_bound(row, bound.value.raw);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ReportRow> run_runtime(const ExperimentConfig& cfg) {
  std::vector<ReportRow> rows;
  std::vector<double> ns, medians;
  for (std::int64_t n : cfg.n_grid) {
    SpikeRaster raster =
        adversarial_raster(n, cfg.bench_region_size, cfg.seed);
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(cfg.bench_repeats));
    std::int64_t checksum = 0;
    for (int r = 0; r < cfg.bench_repeats; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      ContextTable table = count_contexts(raster, raster.neurons.front());
      auto t1 = std::chrono::steady_clock::now();
      checksum += static_cast<std::int64_t>(table.counts.size());
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    double median = times[times.size() / 2];
    ReportRow row = base_row(cfg, n, "seconds_median");
    row.value = median;
    row.replicates = cfg.bench_repeats;
    // Fold the checksum into an inert field so the counting work cannot be
    // optimized away.
    row.param_name = "distinct_contexts";
    row.param_value = static_cast<double>(checksum / cfg.bench_repeats);
    rows.push_back(row);
    ns.push_back(static_cast<double>(n));
    medians.push_back(median);
  }
  ReportRow slope = base_row(cfg, 0, "loglog_slope");
  slope.value = loglog_slope(ns, medians);
  slope.replicates = cfg.bench_repeats;
  rows.push_back(slope);
  return rows;
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Consistency: return "consistency";
    case ExperimentKind::Overestimation: return "overestimation";
    case ExperimentKind::Underestimation: return "underestimation";
    case ExperimentKind::Hoeffding: return "hoeffding";
    case ExperimentKind::Coupling: return "coupling";
    case ExperimentKind::Runtime: return "runtime";
  }
  throw std::logic_error("unreachable experiment kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "consistency") return ExperimentKind::Consistency;
  if (name == "overestimation") return ExperimentKind::Overestimation;
  if (name == "underestimation") return ExperimentKind::Underestimation;
  if (name == "hoeffding") return ExperimentKind::Hoeffding;
  if (name == "coupling") return ExperimentKind::Coupling;
  if (name == "runtime") return ExperimentKind::Runtime;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

WilsonInterval wilson(std::int64_t successes, std::int64_t trials) {
  if (trials < 1) throw std::invalid_argument("wilson: trials must be >= 1");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson: successes out of range");
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

std::string ExperimentReport::csv() const {
  std::ostringstream os;
  os << "kind,n,param_name,param_value,metric,value,wilson_lo,wilson_hi,"
        "bound_raw,bound_clamped,bound_vacuous,replicates\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const ReportRow& r : rows) {
    os << r.kind << "," << r.n << "," << r.param_name << ","
       << (r.param_name.empty() ? std::string() : format_double(r.param_value))
       << "," << r.metric << "," << format_double(r.value) << ","
       << opt(r.wilson_lo) << "," << opt(r.wilson_hi) << ","
       << opt(r.bound_raw) << "," << opt(r.bound_clamped) << ","
       << (r.bound_vacuous ? (*r.bound_vacuous ? "1" : "0") : "") << ","
       << r.replicates << "\n";
  }
  return os.str();
}

nlohmann::json ExperimentReport::to_json() const {
  json doc;
  doc["config"] = config_echo;
  json arr = json::array();
  for (const ReportRow& r : rows) {
    json row{{"kind", r.kind},
             {"n", r.n},
             {"metric", r.metric},
             {"value", r.value},
             {"replicates", r.replicates}};
    if (!r.param_name.empty()) {
      row["param_name"] = r.param_name;
      row["param_value"] = r.param_value;
    }
    if (r.wilson_lo) row["wilson_lo"] = *r.wilson_lo;
    if (r.wilson_hi) row["wilson_hi"] = *r.wilson_hi;
    if (r.bound_raw) {
      row["bound_raw"] = std::isfinite(*r.bound_raw)
                             ? json(*r.bound_raw)
                             : json(format_double(*r.bound_raw));
      row["bound_clamped"] = *r.bound_clamped;
      row["bound_vacuous"] = *r.bound_vacuous;
    }
    arr.push_back(row);
  }
  doc["rows"] = arr;
  return doc;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::string& where) {
  auto fail = [&where](const std::string& what) -> void {
    throw ParseError(where + ": " + what);
  };
  if (!doc.is_object()) fail("config must be a JSON object");
  ExperimentConfig cfg;
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    fail("missing string key \"kind\"");
  const std::string kind_str = doc.at("kind").get<std::string>();
  try {
    cfg.kind = kind_from_name(kind_str);
  } catch (const std::invalid_argument&) {
    fail("unknown experiment kind: \"" + kind_str + "\"");
  }

  bool has_spec = doc.contains("spec");
  bool has_path = doc.contains("spec_path");
  if (cfg.kind != ExperimentKind::Runtime) {
    if (has_spec == has_path)
      fail("exactly one of \"spec\" or \"spec_path\" is required");
    cfg.spec = has_spec ? spec_from_json(doc.at("spec"), where + "#spec")
                        : load_spec(doc.at("spec_path").get<std::string>());
  } else if (has_spec || has_path) {
    fail("runtime experiments take no network spec");
  }

  auto get_int = [&](const char* key, std::int64_t dflt) -> std::int64_t {
    if (!doc.contains(key)) return dflt;
    if (!doc.at(key).is_number_integer())
      fail(std::string("\"") + key + "\" must be an integer");
    return doc.at(key).get<std::int64_t>();
  };
  auto get_double = [&](const char* key, double dflt) -> double {
    if (!doc.contains(key)) return dflt;
    if (!doc.at(key).is_number())
      fail(std::string("\"") + key + "\" must be a number");
    return doc.at(key).get<double>();
  };

  cfg.replicates = static_cast<int>(get_int("replicates", cfg.replicates));
  cfg.xi = get_double("xi", cfg.xi);
  cfg.seed = static_cast<std::uint64_t>(get_int("seed", 1));
  cfg.threads = static_cast<int>(get_int("threads", cfg.threads));
  cfg.target = static_cast<int>(get_int("target", cfg.target));
  cfg.candidate = static_cast<int>(get_int("candidate", cfg.candidate));
  cfg.context_ell = get_int("context_ell", cfg.context_ell);
  cfg.nu = get_double("nu", cfg.nu);

  if (doc.contains("n_grid")) {
    if (!doc.at("n_grid").is_array()) fail("\"n_grid\" must be an array");
    for (const json& v : doc.at("n_grid")) {
      if (!v.is_number_integer()) fail("n_grid entries must be integers");
      cfg.n_grid.push_back(v.get<std::int64_t>());
    }
  } else if (cfg.kind == ExperimentKind::Runtime) {
    cfg.n_grid = {1000, 2000, 4000, 8000};
  } else {
    fail("missing \"n_grid\"");
  }

  if (doc.contains("eps")) {
    const json& e = doc.at("eps");
    if (e.is_number()) {
      cfg.eps = EpsilonSpec::fixed(e.get<double>());
    } else if (e.is_object() && e.contains("value")) {
      cfg.eps = EpsilonSpec::fixed(e.at("value").get<double>());
    } else if (e.is_object() && e.contains("schedule_c")) {
      cfg.eps = EpsilonSpec::schedule(e.at("schedule_c").get<double>());
    } else {
      fail("\"eps\" must be a number, {\"value\": x} or {\"schedule_c\": c}");
    }
  }

  auto get_double_array = [&](const char* key, std::vector<double>& out) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_array())
      fail(std::string("\"") + key + "\" must be an array");
    for (const json& v : doc.at(key)) {
      if (!v.is_number())
        fail(std::string("\"") + key + "\" entries must be numbers");
      out.push_back(v.get<double>());
    }
  };
  get_double_array("lambda_grid", cfg.lambda_grid);
  get_double_array("eps_grid", cfg.eps_grid);

  if (doc.contains("region")) {
    if (!doc.at("region").is_array()) fail("\"region\" must be an array");
    for (const json& v : doc.at("region")) {
      if (!v.is_number_integer()) fail("region entries must be integers");
      cfg.region.push_back(v.get<int>());
    }
  }
  if (doc.contains("context_bits")) {
    if (!doc.at("context_bits").is_string())
      fail("\"context_bits\" must be a string of 0/1");
    cfg.context_bits = doc.at("context_bits").get<std::string>();
  }
  if (doc.contains("bench")) {
    const json& b = doc.at("bench");
    if (!b.is_object()) fail("\"bench\" must be an object");
    if (b.contains("repeats"))
      cfg.bench_repeats = b.at("repeats").get<int>();
    if (b.contains("region_size"))
      cfg.bench_region_size = b.at("region_size").get<int>();
  }
  return cfg;
}

nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg) {
  json doc{{"kind", kind_name(cfg.kind)},
           {"replicates", cfg.replicates},
           {"n_grid", cfg.n_grid},
           {"xi", cfg.xi},
           {"seed", cfg.seed},
           {"threads", cfg.threads},
           {"nu", cfg.nu}};
  if (cfg.eps.scheduled)
    doc["eps"] = json{{"schedule_c", cfg.eps.c}};
  else
    doc["eps"] = json{{"value", cfg.eps.value}};
  if (cfg.kind != ExperimentKind::Runtime) {
    doc["spec"] = spec_to_json(cfg.spec);
    doc["target"] = cfg.target;
  }
  switch (cfg.kind) {
    case ExperimentKind::Overestimation:
    case ExperimentKind::Underestimation:
      doc["candidate"] = cfg.candidate;
      doc["eps_grid"] = cfg.eps_grid;
      break;
    case ExperimentKind::Hoeffding:
      doc["lambda_grid"] = cfg.lambda_grid;
      doc["context_ell"] = cfg.context_ell;
      doc["context_bits"] = cfg.context_bits;
      break;
    case ExperimentKind::Coupling:
      doc["region"] = cfg.region;
      break;
    case ExperimentKind::Runtime:
      doc["bench"] = json{{"repeats", cfg.bench_repeats},
                          {"region_size", cfg.bench_region_size}};
      break;
    default:
      break;
  }
  return doc;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.replicates < 1)
    throw std::invalid_argument("run_experiment: replicates must be >= 1");
  if (cfg.n_grid.empty())
    throw std::invalid_argument("run_experiment: n_grid is empty");
  for (std::int64_t n : cfg.n_grid) {
    if (n < 3)
      throw std::invalid_argument("run_experiment: n grid entries must be >= 3");
  }

  ExperimentReport report;
  report.config_echo = experiment_config_to_json(cfg);
  if (cfg.kind == ExperimentKind::Runtime) {
    report.rows = run_runtime(cfg);
    return report;
  }

  ValidationResult vr = validate_network(cfg.spec);
  const ValidatedNetwork& net = vr.value();
  if (cfg.target < 1 || cfg.target > cfg.spec.neuron_count)
    throw std::invalid_argument("run_experiment: target out of range");

  switch (cfg.kind) {
    case ExperimentKind::Consistency:
      report.rows = run_consistency(net, cfg);
      break;
    case ExperimentKind::Overestimation:
      report.rows = run_overestimation(net, cfg);
      break;
    case ExperimentKind::Underestimation:
      report.rows = run_underestimation(net, cfg);
      break;
    case ExperimentKind::Hoeffding:
      report.rows = run_hoeffding(net, cfg);
      break;
    case ExperimentKind::Coupling:
      report.rows = run_coupling(net, cfg);
      break;
    case ExperimentKind::Runtime:
      break;  // handled above
  }
  return report;
}

void save_report(const ExperimentReport& report, const ExperimentConfig& cfg,
                 const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory " + out_dir);
  std::string stem =
      (std::filesystem::path(out_dir) / (kind_name(cfg.kind) + "_report"))
          .string();
  save_text(report.csv(), stem + ".csv");
  save_json(report.to_json(), stem + ".json");
}

SpikeRaster adversarial_raster(std::int64_t n, int columns,
                               std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("adversarial_raster: n < 3");
  if (columns < 2)
    throw std::invalid_argument("adversarial_raster: needs >= 2 columns");
  std::vector<int> ids(static_cast<std::size_t>(columns));
  for (int c = 0; c < columns; ++c) ids[static_cast<std::size_t>(c)] = c + 1;
  SpikeRaster raster = SpikeRaster::zeros(n, std::move(ids));
  CounterRng rng(seed);
  raster.set(1, 0, true);
  for (std::int64_t t = 1; t <= n; ++t) {
    for (int c = 1; c < columns; ++c) {
      raster.set(t, c,
                 rng.uniform(static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(c + 1)) < 0.5);
    }
  }
  return raster;
}

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    double lx = std::log(x[k]);
    double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace spikegraph

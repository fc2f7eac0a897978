#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "spikegraph/bounds.hpp"
#include "spikegraph/counting.hpp"
#include "spikegraph/estimator.hpp"
#include "spikegraph/model.hpp"

namespace spikegraph {

// File cannot be opened, created, or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File content is malformed; the message names the file, line and field.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal rendering; "inf"/"-inf"/"nan" for non-finite.
[[nodiscard]] std::string format_double(double v);

// Network document: {"neurons": N, "weights": [... N*N row-major ...],
// "rate": object or array of N objects, "pulse": likewise}. Rate objects:
// {"family": "clipped-sigmoid", "p_star": .., "beta": ..} or
// {"family": "clipped-linear", "p_star": .., "slope": .., "intercept": ..}.
// Pulse objects: {"family": "geometric", "lambda": ..} or
// {"family": "power", "q": ..}.
[[nodiscard]] NetworkSpec spec_from_json(const nlohmann::json& doc,
                                         const std::string& where);
[[nodiscard]] nlohmann::json spec_to_json(const NetworkSpec& spec);
[[nodiscard]] NetworkSpec load_spec(const std::string& path);
void save_spec(const NetworkSpec& spec, const std::string& path);

// Raster CSV: header row of neuron ids (strictly increasing), then one row
// per time step with 0/1 entries.
[[nodiscard]] SpikeRaster load_raster(const std::string& path);
void save_raster(const SpikeRaster& raster, const std::string& path);

// Context table CSV: columns ell, w (0/1 string, oldest step first), n0, n1;
// rows sorted by key.
void save_table(const ContextTable& table, const std::string& path);

// Graph CSV: columns source, target, delta, epsilon_used, selected.
void save_graph(const EstimatedGraph& graph, const std::string& path);

[[nodiscard]] nlohmann::json bound_report_to_json(const BoundReport& report);
void save_bound_report(const BoundReport& report, const std::string& path);

// Parsed JSON from a file, with filename-carrying errors.
[[nodiscard]] nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& doc, const std::string& path);
void save_text(const std::string& text, const std::string& path);

}  // namespace spikegraph

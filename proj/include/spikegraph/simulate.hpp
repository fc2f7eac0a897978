#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spikegraph/model.hpp"

namespace spikegraph {

struct SimulationConfig {
  std::int64_t horizon = 0;  // number of stored steps n, >= 3
  std::uint64_t seed = 0;
};

// Samples X_1..X_n of the full network given the all-spiked-at-time-0 past.
// Neuron i spikes at time t iff U_t(i) <= phi_i(potential at t - 1), with
// U_t(i) drawn from the counter RNG, so rasters are reproducible bit for bit
// from (spec, horizon, seed).
[[nodiscard]] SpikeRaster simulate(const ValidatedNetwork& net,
                                   const SimulationConfig& cfg);

// Same trajectory; additionally records the potential each spike decision
// used: potentials[(t-1) * N + (i-1)] is the argument passed to phi_i when
// sampling X_t(i).
[[nodiscard]] SpikeRaster simulate(const ValidatedNetwork& net,
                                   const SimulationConfig& cfg,
                                   std::vector<double>* potentials);

struct CoupledResult {
  SpikeRaster full;    // the unmodified process
  SpikeRaster approx;  // target's inputs restricted to region
  // Per network neuron (index id - 1): first t with differing spike
  // indicators, empty when the trajectories agree on all of 1..n.
  std::vector<std::optional<std::int64_t>> first_discrepancy;
  [[nodiscard]] bool target_agrees(int target) const {
    return !first_discrepancy[static_cast<std::size_t>(target - 1)]
                .has_value();
  }
};

// Runs the full process and the region-restricted modification of neuron
// `target` on the same noise. In the approx process only row `target`
// changes: its potential sums over presynaptic sources inside `region` and
// uses its own last-spike clock; every other neuron applies full dynamics to
// the approx trajectory. region must contain target.
[[nodiscard]] CoupledResult simulate_coupled(const ValidatedNetwork& net,
                                             const SimulationConfig& cfg,
                                             const std::vector<int>& region,
                                             int target);

}  // namespace spikegraph

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spikegraph/counting.hpp"

namespace spikegraph {

struct SensitivityValue {
  double delta = 0.0;
  // The admissible context pair attaining delta: same ell, identical off the
  // candidate's columns. The lexicographically smallest attaining pair,
  // smaller key first. Empty when no eligible pair exists (then delta = 0).
  std::optional<std::pair<ContextKey, ContextKey>> witness;
};

// Largest empirical transition-probability change produced by rewriting the
// candidate's bits inside an admissible context. Pairs are enumerated by
// grouping the admissible set on the key with the candidate's columns
// deleted; within a group delta is max - min of the empirical
// probabilities.
[[nodiscard]] SensitivityValue sensitivity(
    const ContextTable& table, const std::vector<ContextKey>& admissible,
    int candidate);

struct SensitivityProfile {
  int target = 0;
  std::int64_t n = 0;
  double xi = 0.0;
  std::size_t admissible_count = 0;
  std::vector<int> candidates;  // region minus target, in region order
  std::vector<SensitivityValue> values;  // aligned with candidates
};

[[nodiscard]] SensitivityProfile sensitivity_profile(const ContextTable& table,
                                                     double xi);

// Candidates whose sensitivity strictly exceeds eps.
[[nodiscard]] std::vector<int> select_neighborhood(
    const SensitivityProfile& profile, double eps);

// Threshold schedule c * n^{-xi/2}; decays slower than the admissible
// probability fluctuations (order n^{-xi}), which is what drives
// consistency.
[[nodiscard]] double epsilon_schedule(std::int64_t n, double xi, double c);

struct EpsilonSpec {
  bool scheduled = true;
  double value = 0.0;  // fixed threshold when !scheduled
  double c = 1.0;      // schedule constant when scheduled
  [[nodiscard]] static EpsilonSpec fixed(double eps) {
    return EpsilonSpec{false, eps, 0.0};
  }
  [[nodiscard]] static EpsilonSpec schedule(double c) {
    return EpsilonSpec{true, 0.0, c};
  }
  [[nodiscard]] double resolve(std::int64_t n, double xi) const {
    return scheduled ? epsilon_schedule(n, xi, c) : value;
  }
};

struct GraphEntry {
  int source = 0;
  int target = 0;
  double delta = 0.0;
  double epsilon_used = 0.0;
  bool selected = false;
};

struct EstimatedGraph {
  std::vector<int> region;
  std::int64_t n = 0;
  double xi = 0.0;
  // One entry per ordered pair (source, target) of distinct region neurons,
  // sorted by target then source.
  std::vector<GraphEntry> entries;

  [[nodiscard]] std::vector<std::pair<int, int>> edges() const;
};

// Runs counting, admissibility, sensitivity and thresholding for every
// region neuron as target. ell_max < 0 caps window length at the provable
// bound for (n, xi); threads > 1 distributes targets across worker threads
// with a deterministic result order.
[[nodiscard]] EstimatedGraph estimate_graph(const SpikeRaster& raster,
                                            double xi, const EpsilonSpec& eps,
                                            std::int64_t ell_max = -1,
                                            int threads = 1);

}  // namespace spikegraph

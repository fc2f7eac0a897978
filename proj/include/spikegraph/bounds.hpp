#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spikegraph/model.hpp"

namespace spikegraph {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// A probability bound kept in both raw and display form. Raw values may
// exceed 1 or be infinite; clamped is min(raw, 1) and vacuous bounds are
// flagged rather than hidden.
struct BoundValue {
  double raw = 0.0;
  double clamped = 0.0;
  bool vacuous = false;
  [[nodiscard]] static BoundValue of(double raw);
};

struct Alpha0Result {
  double chi = 0.0;
  double alpha0 = 0.0;
  double norm_at_alpha0 = 0.0;  // row-sup operator norm at the returned alpha0
  bool ok = false;
  std::string error;
};

// Kernel envelope sup_j g_j(t) aggregates: total mass and the discounted
// mass sum_t exp(-alpha t) sup_j g_j(t).
[[nodiscard]] PulseKernel::Mass envelope_mass(const NetworkSpec& spec);
[[nodiscard]] double envelope_discounted_mass(const NetworkSpec& spec,
                                              double alpha);

// Row-sup norm of the discounted interaction operator: entry (j, k) is
// gamma * |W(k -> j)| * sum_t exp(-alpha t) g_k(t) for k != j, with row
// `target` keeping only sources in the target's neighborhood intersected
// with region, plus a (1 - p_star) * exp(-alpha) self entry on every row.
[[nodiscard]] double lambda_operator_norm(double p_star, double gamma,
                                          const NetworkSpec& spec, int target,
                                          const std::vector<int>& region,
                                          double alpha);

// Contraction constant chi = (1 - p_star) + gamma * sup_j sum_k rho_k
// |W(k -> j)| and the smallest decay rate alpha0 in [0, 64] at which the
// discounted operator norm drops to 1 - 1e-6. chi < 1 short-circuits to
// alpha0 = 0. Raw-parameter core; callers normally go through solve_alpha0.
[[nodiscard]] Alpha0Result solve_alpha0_core(double p_star, double gamma,
                                             const NetworkSpec& spec,
                                             int target,
                                             const std::vector<int>& region);

[[nodiscard]] Alpha0Result solve_alpha0(const ValidatedNetwork& net,
                                        int target,
                                        const std::vector<int>& region);

// Everything the bound formulas need about one (target, region) pair.
struct ModelConstants {
  int target = 0;
  std::vector<int> region;
  std::vector<int> neighborhood;         // presynaptic sources, whole network
  std::vector<int> neighborhood_region;  // intersected with region
  Interval K;         // reachable one-step potential range over neighborhood
  Interval K_region;  // same, sources restricted to region
  // Separation constants. Undefined (empty) when the relevant source set is
  // empty; 0 with the clipped flag when a linear rate saturates on K.
  std::optional<double> m;
  std::optional<double> m_region;
  bool m_clipped = false;
  bool m_region_clipped = false;
  double sigma_region = 0.0;  // total inbound weight ignored by the region
  double gamma = 0.0;
  double r = 0.0;
  double p_star_min = 0.0;
  double p_min = 0.0;
  double q_star = 0.0;  // p_min^(|region| + 1)
  std::vector<double> rho;  // per-neuron kernel mass (+inf when divergent)
  PulseKernel::Mass rho_envelope;
  Alpha0Result alpha0;
};

[[nodiscard]] ModelConstants compute_constants(const ValidatedNetwork& net,
                                               int target,
                                               const std::vector<int>& region);

// 4 n^{3/2 - xi} exp(-eps^2 n^{2 xi} / 2): false-selection probability of
// one non-presynaptic candidate.
[[nodiscard]] double overestimation_bound(double n, double xi, double eps);

struct UnderestimationTerms {
  double term1 = 0.0;  // 4 exp(-(m - eps)^2 n^{2 xi} / 2)
  double term2 = 1.0;  // explicit small-count probability, 1 when invalid
  bool term2_valid = false;
  [[nodiscard]] double total() const { return term1 + term2; }
};

// Missed-edge probability pieces. Requires 0 < eps < m. term2 is the
// explicit exp(-floor(n/2) q_star (1 - nu)^2 / 4) with q_star =
// p_min^{region_size + 1}; it only holds once floor(n/2) nu q_star and the
// exponent argument both exceed n^{1/2 + xi}, so below that it is reported
// as 1 with term2_valid = false.
[[nodiscard]] UnderestimationTerms underestimation_bound(double n, double xi,
                                                         double eps, double m,
                                                         int region_size,
                                                         double p_min,
                                                         double nu = 0.5);

// 2 exp(-2 lambda^2 / (t - ell + 1)): deviation bound for the centered
// spike-count martingale of one context. Requires t > ell + 1, lambda > 0.
[[nodiscard]] double hoeffding_bound(double t, double ell, double lambda);

struct CouplingBound {
  BoundValue value;
  std::string branch;  // "zero-tail", "contractive", "discounted"
  bool available = false;
  std::string error;
};

// P(target's trajectory differs from its region-restricted modification
// somewhere in 1..n). chi < 1: gamma * rho_envelope * n * sigma / (1 - chi).
// Otherwise the discounted-operator form
// (1 - norm)^{-1} (1 - e^{-alpha0})^{-1} ||g~||_1 e^{alpha0 n} sigma.
[[nodiscard]] CouplingBound coupling_bound(const ValidatedNetwork& net,
                                           const ModelConstants& constants,
                                           double n);

struct BoundReport {
  double n = 0.0;
  double xi = 0.0;
  double eps = 0.0;
  double nu = 0.5;
  ModelConstants constants;

  BoundValue over;  // Theorem-1-style overestimation, full network constants
  struct Under {
    UnderestimationTerms terms;
    BoundValue total;
    bool available = false;  // false when m undefined or eps >= m
    std::string reason;
  };
  Under under;  // uses m

  CouplingBound coupling;
  BoundValue over_region;  // over + coupling correction
  Under under_region;      // uses m_region, plus coupling correction

  // Optional context-deviation entry, filled when hoeff_lambda > 0.
  std::optional<BoundValue> hoeffding;
  double hoeff_lambda = 0.0;
  double hoeff_ell = 1.0;
};

// Evaluates every bound for one (n, xi, eps) point. Sub-bounds whose
// hypotheses fail are flagged unavailable instead of aborting the report.
[[nodiscard]] BoundReport theorem2_bounds(double n, double xi, double eps,
                                          const ValidatedNetwork& net,
                                          const ModelConstants& constants,
                                          double nu = 0.5,
                                          double hoeff_lambda = 0.0,
                                          double hoeff_ell = 1.0);

}  // namespace spikegraph

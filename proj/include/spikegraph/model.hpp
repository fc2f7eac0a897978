#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikegraph {

// Spiking probability as a function of the accumulated membrane potential.
// Both families are bounded away from 0 and 1 by p_star and are Lipschitz;
// p_star must lie in (0, 1/2).
enum class RateFamily { ClippedSigmoid, ClippedLinear };

struct RateFunction {
  RateFamily family = RateFamily::ClippedSigmoid;
  double p_star = 0.1;
  double beta = 1.0;       // sigmoid gain, > 0
  double slope = 0.0;      // linear slope a, > 0
  double intercept = 0.0;  // linear intercept b

  [[nodiscard]] double operator()(double u) const;

  // Pointwise derivative. For the linear family the derivative at a clip
  // point is taken from the flat side (0), so the infimum over a closed
  // interval that touches a clip is 0.
  [[nodiscard]] double derivative(double u) const;

  // sup over all u of the derivative. Sigmoid: (1 - 2 p_star) * beta / 4,
  // attained at u = 0. Linear: the slope a.
  [[nodiscard]] double derivative_sup() const;

  // Potentials below/above these bounds saturate the linear family at
  // p_star / 1 - p_star. Meaningless for the sigmoid family.
  [[nodiscard]] double linear_clip_lo() const;
  [[nodiscard]] double linear_clip_hi() const;

  [[nodiscard]] static RateFunction clipped_sigmoid(double p_star, double beta);
  [[nodiscard]] static RateFunction clipped_linear(double p_star, double slope,
                                                   double intercept);
};

struct DerivativeInf {
  double value = 0.0;
  // Set when a linear rate's clip region intersects the interval, which
  // forces the infimum to 0 and makes separation-based bounds vacuous.
  bool clipped = false;
};

// inf of rate.derivative over the closed interval [lo, hi].
// Sigmoid: the derivative is unimodal with its maximum at 0, so the infimum
// over an interval is attained at an endpoint.
[[nodiscard]] DerivativeInf rate_derivative_inf(const RateFunction& rate,
                                                double lo, double hi);

// Synaptic memory kernel g(t), t = 1, 2, ...; both families have g(1) = 1
// and are nonincreasing.
enum class PulseFamily { Geometric, Power };

struct PulseKernel {
  PulseFamily family = PulseFamily::Geometric;
  double lambda = 0.5;  // geometric ratio, in [0, 1)
  double q = 2.0;       // power exponent, > 0

  [[nodiscard]] double operator()(std::int64_t t) const;

  // True when the total mass sum_t g(t) is finite: always for geometric,
  // q > 1 for power.
  [[nodiscard]] bool summable() const;

  struct Mass {
    double value = 0.0;  // +inf when not finite
    double error = 0.0;  // bound on |value - true mass| when finite
    bool finite = true;
  };
  // rho = sum_{t>=1} g(t). Geometric: 1 / (1 - lambda), exact. Power:
  // truncated sum to t = 10^6 plus a midpoint integral remainder.
  [[nodiscard]] Mass total_mass() const;

  // sum_{t>=1} exp(-alpha t) g(t), alpha >= 0. Requires summable() when
  // alpha == 0. Geometric: exp(-alpha) / (1 - lambda exp(-alpha)). Power
  // with q <= 1 throws when alpha is too small to certify the dropped tail.
  [[nodiscard]] double discounted_mass(double alpha) const;

  [[nodiscard]] static PulseKernel geometric(double lambda);
  [[nodiscard]] static PulseKernel power(double q);
};

// Network parameters. Weights are stored row-major with source index major:
// weights[(j-1) * neuron_count + (i-1)] is the synaptic weight from neuron j
// to neuron i (1-based ids everywhere in the public API). rate and pulse
// hold either a single shared entry or one entry per neuron.
struct NetworkSpec {
  int neuron_count = 0;
  std::vector<double> weights;
  std::vector<RateFunction> rate;
  std::vector<PulseKernel> pulse;

  [[nodiscard]] double weight(int from_id, int to_id) const;
  [[nodiscard]] const RateFunction& rate_of(int id) const;
  [[nodiscard]] const PulseKernel& pulse_of(int id) const;
};

// Presynaptic neighborhood of neuron i: all j != i with W(j -> i) != 0.
[[nodiscard]] std::vector<int> true_neighborhood(const NetworkSpec& spec,
                                                 int target);

// Spike history over a finite observation window. Column c of row t holds
// the indicator that neuron neurons[c] spiked at time t, t = 1..n. The
// process convention is that every neuron spiked at time 0, so time-0 state
// is not stored.
struct SpikeRaster {
  std::int64_t n = 0;
  std::vector<int> neurons;        // 1-based external ids, strictly increasing
  std::vector<std::uint8_t> bits;  // size n * neurons.size(), time major

  [[nodiscard]] int columns() const { return static_cast<int>(neurons.size()); }
  [[nodiscard]] int column_of(int neuron_id) const;  // -1 when absent

  [[nodiscard]] std::uint8_t at(std::int64_t t, int col) const {
    return bits[static_cast<std::size_t>(t - 1) * neurons.size() +
                static_cast<std::size_t>(col)];
  }
  void set(std::int64_t t, int col, bool v) {
    bits[static_cast<std::size_t>(t - 1) * neurons.size() +
         static_cast<std::size_t>(col)] = v ? 1 : 0;
  }

  [[nodiscard]] static SpikeRaster zeros(std::int64_t n,
                                         std::vector<int> neurons);
};

// Network with validated assumptions and the constants derived from them.
struct ValidatedNetwork {
  NetworkSpec spec;
  double max_abs_inbound_sum = 0.0;  // r: max_i sum_j |W(j -> i)|
  double gamma = 0.0;                // max_i sup φ_i'
  double p_star_min = 0.0;           // min_i p_star of rate i
  double p_min = 0.0;                // min_i min(p_star_i, 1 - p_star_i)
  std::vector<PulseKernel::Mass> kernel_mass;  // rho_j per neuron
  bool all_kernels_summable = true;
};

struct ValidationResult {
  std::optional<ValidatedNetwork> network;  // engaged iff errors is empty
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  [[nodiscard]] bool ok() const { return errors.empty(); }
  // Convenience for tests and call sites that treat failure as exceptional.
  [[nodiscard]] const ValidatedNetwork& value() const;
};

// Checks structural and model assumptions: positive neuron count, weight
// matrix shape, zero diagonal, finite inbound weight sums, valid rate and
// pulse parameters. Non-summable kernels are a warning (simulation is fine,
// coupling bounds are not), as is a linear rate whose clip region is
// reachable.
[[nodiscard]] ValidationResult validate_network(const NetworkSpec& spec);

// Accumulated potential of neuron `target` just before time t + 1, reading
// spikes from a raster that covers every neuron of the network:
// sum_j W(j -> target) * sum_{s = L+1}^{t} g_j(t + 1 - s) X_s(j), where L is
// the last spike time <= t of `target` in the raster (0 when it never
// spiked, per the all-spiked-at-0 convention). Returns 0 when L == t.
// Plain double loop in ascending s; the simulator's incremental paths must
// reproduce this exactly.
[[nodiscard]] double membrane_potential(const NetworkSpec& spec,
                                        const SpikeRaster& raster, int target,
                                        std::int64_t t);

// sum_{s=from}^{to} g(to + 1 - s) * X_s(col), ascending s. Shared between
// membrane_potential and the simulator's replay path so the two agree
// bitwise.
[[nodiscard]] double kernel_window_sum(const PulseKernel& kernel,
                                       const SpikeRaster& raster, int col,
                                       std::int64_t from, std::int64_t to);

}  // namespace spikegraph

#include "spikegraph/simulate.hpp"

#include <algorithm>
#include <stdexcept>

#include "spikegraph/rng.hpp"

namespace spikegraph {

namespace {

struct Source {
  int col = 0;  // 0-based raster column of the presynaptic neuron
  double w = 0.0;
  bool geometric = false;
  double lambda = 0.0;
};

// One trajectory with incremental potential bookkeeping. Geometric sources
// keep a per-(postsynaptic, source) decaying sum that is reset when the
// postsynaptic neuron spikes; power-law sources replay the stored window
// through kernel_window_sum so their potentials match membrane_potential
// bit for bit.
struct Engine {
  const NetworkSpec* spec = nullptr;
  SpikeRaster raster;
  std::vector<std::vector<Source>> sources;  // per postsynaptic column
  std::vector<std::vector<double>> accum;    // aligned with sources
  std::vector<std::int64_t> last;            // last spike time, 0 = never

  Engine(const NetworkSpec& s, std::int64_t n,
         const std::vector<char>* target_source_mask, int target_col)
      : spec(&s) {
    int N = s.neuron_count;
    std::vector<int> ids(static_cast<std::size_t>(N));
    for (int c = 0; c < N; ++c) ids[static_cast<std::size_t>(c)] = c + 1;
    raster = SpikeRaster::zeros(n, std::move(ids));
    sources.resize(static_cast<std::size_t>(N));
    accum.resize(static_cast<std::size_t>(N));
    last.assign(static_cast<std::size_t>(N), 0);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (j == i) continue;
        double w = s.weight(j + 1, i + 1);
        if (w == 0.0) continue;
        if (target_source_mask && i == target_col &&
            !(*target_source_mask)[static_cast<std::size_t>(j)])
          continue;
        const PulseKernel& k = s.pulse_of(j + 1);
        Source src;
        src.col = j;
        src.w = w;
        src.geometric = k.family == PulseFamily::Geometric;
        src.lambda = k.lambda;
        sources[static_cast<std::size_t>(i)].push_back(src);
      }
      accum[static_cast<std::size_t>(i)].assign(
          sources[static_cast<std::size_t>(i)].size(), 0.0);
    }
  }

  // Potential entering the spike decision at time t, i.e. accumulated over
  // s in (last[i], t - 1].
  [[nodiscard]] double potential(int i, std::int64_t t) const {
    double pot = 0.0;
    const auto& srcs = sources[static_cast<std::size_t>(i)];
    const auto& acc = accum[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < srcs.size(); ++k) {
      const Source& src = srcs[k];
      if (src.geometric) {
        pot += src.w * acc[k];
      } else {
        pot += src.w * kernel_window_sum(spec->pulse_of(src.col + 1), raster,
                                         src.col,
                                         last[static_cast<std::size_t>(i)] + 1,
                                         t - 1);
      }
    }
    return pot;
  }

  // Folds the freshly sampled X_t into the decaying sums. Must run after
  // every neuron's time-t state is stored in the raster.
  void advance(std::int64_t t) {
    int N = spec->neuron_count;
    for (int i = 0; i < N; ++i) {
      auto& acc = accum[static_cast<std::size_t>(i)];
      const auto& srcs = sources[static_cast<std::size_t>(i)];
      if (raster.at(t, i)) {
        last[static_cast<std::size_t>(i)] = t;
        std::fill(acc.begin(), acc.end(), 0.0);
        continue;
      }
      for (std::size_t k = 0; k < srcs.size(); ++k) {
        if (!srcs[k].geometric) continue;
        acc[k] = srcs[k].lambda * acc[k] +
                 static_cast<double>(raster.at(t, srcs[k].col));
      }
    }
  }
};

void check_config(const SimulationConfig& cfg) {
  if (cfg.horizon < 3)
    throw std::invalid_argument("simulate: horizon must be >= 3");
}

}  // namespace

SpikeRaster simulate(const ValidatedNetwork& net, const SimulationConfig& cfg,
                     std::vector<double>* potentials) {
  check_config(cfg);
  const NetworkSpec& spec = net.spec;
  int N = spec.neuron_count;
  Engine eng(spec, cfg.horizon, nullptr, -1);
  CounterRng rng(cfg.seed);
  if (potentials)
    potentials->assign(
        static_cast<std::size_t>(cfg.horizon) * static_cast<std::size_t>(N),
        0.0);
  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    for (int i = 0; i < N; ++i) {
      double pot = eng.potential(i, t);
      if (potentials)
        (*potentials)[static_cast<std::size_t>(t - 1) *
                          static_cast<std::size_t>(N) +
                      static_cast<std::size_t>(i)] = pot;
      double phi = spec.rate_of(i + 1)(pot);
      bool spike = rng.uniform(static_cast<std::uint64_t>(t),
                               static_cast<std::uint64_t>(i + 1)) <= phi;
      eng.raster.set(t, i, spike);
    }
    eng.advance(t);
  }
  return std::move(eng.raster);
}

SpikeRaster simulate(const ValidatedNetwork& net,
                     const SimulationConfig& cfg) {
  return simulate(net, cfg, nullptr);
}

CoupledResult simulate_coupled(const ValidatedNetwork& net,
                               const SimulationConfig& cfg,
                               const std::vector<int>& region, int target) {
  check_config(cfg);
  const NetworkSpec& spec = net.spec;
  int N = spec.neuron_count;
  if (target < 1 || target > N)
    throw std::invalid_argument("simulate_coupled: target out of range");
  std::vector<char> mask(static_cast<std::size_t>(N), 0);
  bool target_in_region = false;
  for (int id : region) {
    if (id < 1 || id > N)
      throw std::invalid_argument("simulate_coupled: region id out of range");
    if (mask[static_cast<std::size_t>(id - 1)])
      throw std::invalid_argument("simulate_coupled: duplicate region id");
    mask[static_cast<std::size_t>(id - 1)] = 1;
    if (id == target) target_in_region = true;
  }
  if (!target_in_region)
    throw std::invalid_argument("simulate_coupled: region must contain target");

  Engine full(spec, cfg.horizon, nullptr, -1);
  Engine approx(spec, cfg.horizon, &mask, target - 1);
  CounterRng rng(cfg.seed);
  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    for (int i = 0; i < N; ++i) {
      double u = rng.uniform(static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(i + 1));
      const RateFunction& rate = spec.rate_of(i + 1);
      full.raster.set(t, i, u <= rate(full.potential(i, t)));
      approx.raster.set(t, i, u <= rate(approx.potential(i, t)));
    }
    full.advance(t);
    approx.advance(t);
  }

  CoupledResult out;
  out.first_discrepancy.assign(static_cast<std::size_t>(N), std::nullopt);
  for (int i = 0; i < N; ++i) {
    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
      if (full.raster.at(t, i) != approx.raster.at(t, i)) {
        out.first_discrepancy[static_cast<std::size_t>(i)] = t;
        break;
      }
    }
  }
  out.full = std::move(full.raster);
  out.approx = std::move(approx.raster);
  return out;
}

}  // namespace spikegraph

#include "spikegraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spikegraph {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double RateFunction::operator()(double u) const {
  if (family == RateFamily::ClippedSigmoid) {
    return p_star + (1.0 - 2.0 * p_star) * sigmoid(beta * u);
  }
  double v = slope * u + intercept;
  return std::min(1.0 - p_star, std::max(p_star, v));
}

double RateFunction::derivative(double u) const {
  if (family == RateFamily::ClippedSigmoid) {
    double s = sigmoid(beta * u);
    return (1.0 - 2.0 * p_star) * beta * s * (1.0 - s);
  }
  double v = slope * u + intercept;
  if (v < p_star || v > 1.0 - p_star) return 0.0;
  return slope;
}

double RateFunction::derivative_sup() const {
  if (family == RateFamily::ClippedSigmoid) {
    return (1.0 - 2.0 * p_star) * beta / 4.0;
  }
  return slope;
}

double RateFunction::linear_clip_lo() const {
  return (p_star - intercept) / slope;
}

double RateFunction::linear_clip_hi() const {
  return (1.0 - p_star - intercept) / slope;
}

RateFunction RateFunction::clipped_sigmoid(double p_star, double beta) {
  RateFunction r;
  r.family = RateFamily::ClippedSigmoid;
  r.p_star = p_star;
  r.beta = beta;
  return r;
}

RateFunction RateFunction::clipped_linear(double p_star, double slope,
                                          double intercept) {
  RateFunction r;
  r.family = RateFamily::ClippedLinear;
  r.p_star = p_star;
  r.slope = slope;
  r.intercept = intercept;
  return r;
}

DerivativeInf rate_derivative_inf(const RateFunction& rate, double lo,
                                  double hi) {
  if (lo > hi) throw std::invalid_argument("rate_derivative_inf: lo > hi");
  DerivativeInf out;
  if (rate.family == RateFamily::ClippedSigmoid) {
    // Unimodal with the peak at 0, so the interval infimum sits at the
    // endpoint farther from 0.
    out.value = std::min(rate.derivative(lo), rate.derivative(hi));
    return out;
  }
  if (lo < rate.linear_clip_lo() || hi > rate.linear_clip_hi()) {
    out.value = 0.0;
    out.clipped = true;
    return out;
  }
  out.value = rate.slope;
  return out;
}

double PulseKernel::operator()(std::int64_t t) const {
  if (t < 1) throw std::invalid_argument("PulseKernel: t must be >= 1");
  if (family == PulseFamily::Geometric) {
    if (t == 1) return 1.0;
    return std::pow(lambda, static_cast<double>(t - 1));
  }
  return std::pow(static_cast<double>(t), -q);
}

bool PulseKernel::summable() const {
  if (family == PulseFamily::Geometric) return true;
  return q > 1.0;
}

namespace {

constexpr std::int64_t kPowerMassTerms = 1'000'000;

}  // namespace

PulseKernel::Mass PulseKernel::total_mass() const {
  Mass m;
  if (family == PulseFamily::Geometric) {
    m.value = 1.0 / (1.0 - lambda);
    m.error = 0.0;
    m.finite = true;
    return m;
  }
  if (q <= 1.0) {
    m.value = std::numeric_limits<double>::infinity();
    m.error = std::numeric_limits<double>::infinity();
    m.finite = false;
    return m;
  }
  // Descending accumulation keeps the small tail terms from being absorbed
  // by the large head.
  double sum = 0.0;
  for (std::int64_t t = kPowerMassTerms; t >= 1; --t) {
    sum += std::pow(static_cast<double>(t), -q);
  }
  double T = static_cast<double>(kPowerMassTerms);
  double mid = std::pow(T + 0.5, 1.0 - q) / (q - 1.0);
  double upper = std::pow(T, 1.0 - q) / (q - 1.0);
  double lower = std::pow(T + 1.0, 1.0 - q) / (q - 1.0);
  m.value = sum + mid;
  m.error = (upper - lower) / 2.0 + 1e-12 * sum;
  m.finite = true;
  return m;
}

double PulseKernel::discounted_mass(double alpha) const {
  if (alpha < 0.0)
    throw std::invalid_argument("discounted_mass: alpha must be >= 0");
  if (family == PulseFamily::Geometric) {
    double x = std::exp(-alpha);
    return x / (1.0 - lambda * x);
  }
  if (alpha == 0.0) {
    if (!summable())
      throw std::domain_error("discounted_mass: kernel not summable at alpha=0");
    return total_mass().value;
  }
  double sum = 0.0;
  double term = 0.0;
  std::int64_t t = 1;
  for (; t <= kPowerMassTerms; ++t) {
    term = std::exp(-alpha * static_cast<double>(t)) *
           std::pow(static_cast<double>(t), -q);
    sum += term;
    if (term < 1e-18 * (sum + 1e-300)) break;
  }
  if (q > 1.0) {
    double T = static_cast<double>(std::min(t, kPowerMassTerms));
    // Damped midpoint remainder; the exponential factor only shrinks it.
    double tail = std::exp(-alpha * (T + 0.5)) * std::pow(T + 0.5, 1.0 - q) /
                  (q - 1.0);
    return sum + tail;
  }
  // q <= 1: t^{-q} is nonincreasing, so the dropped tail is at most the
  // geometric series term * exp(-alpha) / (1 - exp(-alpha)).
  const double tail_bound = term * std::exp(-alpha) / (1.0 - std::exp(-alpha));
  if (!(tail_bound <= 1e-9 * (sum + 1e-300)))
    throw std::domain_error(
        "discounted_mass: alpha too small to certify the power-kernel tail");
  return sum;
}

PulseKernel PulseKernel::geometric(double lambda) {
  PulseKernel k;
  k.family = PulseFamily::Geometric;
  k.lambda = lambda;
  return k;
}

PulseKernel PulseKernel::power(double q) {
  PulseKernel k;
  k.family = PulseFamily::Power;
  k.q = q;
  return k;
}

double NetworkSpec::weight(int from_id, int to_id) const {
  return weights[static_cast<std::size_t>(from_id - 1) *
                     static_cast<std::size_t>(neuron_count) +
                 static_cast<std::size_t>(to_id - 1)];
}

const RateFunction& NetworkSpec::rate_of(int id) const {
  return rate.size() == 1 ? rate[0] : rate[static_cast<std::size_t>(id - 1)];
}

const PulseKernel& NetworkSpec::pulse_of(int id) const {
  return pulse.size() == 1 ? pulse[0]
                           : pulse[static_cast<std::size_t>(id - 1)];
}

std::vector<int> true_neighborhood(const NetworkSpec& spec, int target) {
  if (target < 1 || target > spec.neuron_count)
    throw std::invalid_argument("true_neighborhood: target out of range");
  std::vector<int> out;
  for (int j = 1; j <= spec.neuron_count; ++j) {
    if (j != target && spec.weight(j, target) != 0.0) out.push_back(j);
  }
  return out;
}

int SpikeRaster::column_of(int neuron_id) const {
  auto it = std::lower_bound(neurons.begin(), neurons.end(), neuron_id);
  if (it == neurons.end() || *it != neuron_id) return -1;
  return static_cast<int>(it - neurons.begin());
}

SpikeRaster SpikeRaster::zeros(std::int64_t n, std::vector<int> neurons) {
  SpikeRaster r;
  r.n = n;
  r.neurons = std::move(neurons);
  r.bits.assign(static_cast<std::size_t>(n) * r.neurons.size(), 0);
  return r;
}

const ValidatedNetwork& ValidationResult::value() const {
  if (!network) {
    std::string msg = "network validation failed:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
  return *network;
}

ValidationResult validate_network(const NetworkSpec& spec) {
  ValidationResult res;
  auto err = [&res](const std::string& m) { res.errors.push_back(m); };

  if (spec.neuron_count < 1) {
    err("neuron_count must be >= 1");
    return res;
  }
  std::size_t nn = static_cast<std::size_t>(spec.neuron_count);
  if (spec.weights.size() != nn * nn) {
    err("weights must have neuron_count^2 entries");
    return res;
  }
  if (spec.rate.size() != 1 && spec.rate.size() != nn)
    err("rate must have 1 or neuron_count entries");
  if (spec.pulse.size() != 1 && spec.pulse.size() != nn)
    err("pulse must have 1 or neuron_count entries");
  if (!res.errors.empty()) return res;

  for (int j = 1; j <= spec.neuron_count; ++j) {
    if (spec.weight(j, j) != 0.0) {
      std::ostringstream os;
      os << "self-weight W[" << j << "][" << j << "] must be 0";
      err(os.str());
    }
  }
  for (double w : spec.weights) {
    if (!std::isfinite(w)) {
      err("weights must be finite");
      break;
    }
  }

  for (std::size_t k = 0; k < spec.rate.size(); ++k) {
    const RateFunction& r = spec.rate[k];
    std::ostringstream who;
    who << "rate[" << k << "]: ";
    if (!(r.p_star > 0.0 && r.p_star < 0.5))
      err(who.str() + "p_star must lie in (0, 1/2)");
    if (r.family == RateFamily::ClippedSigmoid) {
      if (!(r.beta > 0.0) || !std::isfinite(r.beta))
        err(who.str() + "beta must be positive and finite");
    } else {
      if (!(r.slope > 0.0) || !std::isfinite(r.slope))
        err(who.str() + "slope must be positive and finite");
      if (!std::isfinite(r.intercept))
        err(who.str() + "intercept must be finite");
    }
  }
  for (std::size_t k = 0; k < spec.pulse.size(); ++k) {
    const PulseKernel& p = spec.pulse[k];
    std::ostringstream who;
    who << "pulse[" << k << "]: ";
    if (p.family == PulseFamily::Geometric) {
      if (!(p.lambda >= 0.0 && p.lambda < 1.0))
        err(who.str() + "lambda must lie in [0, 1)");
    } else {
      if (!(p.q > 0.0) || !std::isfinite(p.q))
        err(who.str() + "q must be positive and finite");
    }
  }
  if (!res.errors.empty()) return res;

  ValidatedNetwork vn;
  vn.spec = spec;
  for (int i = 1; i <= spec.neuron_count; ++i) {
    double s = 0.0;
    for (int j = 1; j <= spec.neuron_count; ++j)
      s += std::abs(spec.weight(j, i));
    vn.max_abs_inbound_sum = std::max(vn.max_abs_inbound_sum, s);
  }
  vn.gamma = 0.0;
  vn.p_star_min = 0.5;
  vn.p_min = 0.5;
  for (const RateFunction& r : spec.rate) {
    vn.gamma = std::max(vn.gamma, r.derivative_sup());
    vn.p_star_min = std::min(vn.p_star_min, r.p_star);
    vn.p_min = std::min(vn.p_min, std::min(r.p_star, 1.0 - r.p_star));
  }
  vn.kernel_mass.reserve(nn);
  for (int j = 1; j <= spec.neuron_count; ++j) {
    PulseKernel::Mass m = spec.pulse_of(j).total_mass();
    if (!m.finite) {
      vn.all_kernels_summable = false;
      std::ostringstream os;
      os << "pulse kernel of neuron " << j
         << " has infinite total mass; coupling and ergodicity bounds are "
            "unavailable";
      res.warnings.push_back(os.str());
    }
    vn.kernel_mass.push_back(m);
  }
  // A linear rate whose clip region is reachable from the weight range makes
  // the derivative infimum 0; flag it early so bound users are not surprised.
  for (int i = 1; i <= spec.neuron_count; ++i) {
    const RateFunction& r = spec.rate_of(i);
    if (r.family != RateFamily::ClippedLinear) continue;
    double lo = 0.0, hi = 0.0;
    for (int j = 1; j <= spec.neuron_count; ++j) {
      double w = spec.weight(j, i) * spec.pulse_of(j)(1);
      if (w < 0.0) lo += w;
      if (w > 0.0) hi += w;
    }
    if (lo < r.linear_clip_lo() || hi > r.linear_clip_hi()) {
      std::ostringstream os;
      os << "linear rate of neuron " << i
         << " can saturate within the reachable potential range; its "
            "derivative infimum is 0";
      res.warnings.push_back(os.str());
    }
  }
  res.network = std::move(vn);
  return res;
}

double kernel_window_sum(const PulseKernel& kernel, const SpikeRaster& raster,
                         int col, std::int64_t from, std::int64_t to) {
  double inner = 0.0;
  for (std::int64_t s = from; s <= to; ++s) {
    if (raster.at(s, col)) inner += kernel(to + 1 - s);
  }
  return inner;
}

double membrane_potential(const NetworkSpec& spec, const SpikeRaster& raster,
                          int target, std::int64_t t) {
  if (t < 1 || t > raster.n)
    throw std::out_of_range("membrane_potential: t outside raster window");
  if (raster.columns() != spec.neuron_count)
    throw std::invalid_argument(
        "membrane_potential: raster must cover the whole network");
  int tc = raster.column_of(target);
  if (tc < 0)
    throw std::invalid_argument("membrane_potential: target not in raster");

  std::int64_t last = 0;
  for (std::int64_t s = t; s >= 1; --s) {
    if (raster.at(s, tc)) {
      last = s;
      break;
    }
  }
  if (last == t) return 0.0;

  double pot = 0.0;
  for (int j = 1; j <= spec.neuron_count; ++j) {
    if (j == target) continue;
    double w = spec.weight(j, target);
    if (w == 0.0) continue;
    int jc = raster.column_of(j);
    pot += w * kernel_window_sum(spec.pulse_of(j), raster, jc, last + 1, t);
  }
  return pot;
}

}  // namespace spikegraph

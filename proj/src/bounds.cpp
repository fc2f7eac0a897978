#include "spikegraph/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spikegraph {

BoundValue BoundValue::of(double raw) {
  BoundValue b;
  b.raw = raw;
  b.clamped = std::isnan(raw) ? 1.0 : std::min(raw, 1.0);
  b.vacuous = !(raw < 1.0);
  return b;
}

namespace {

std::vector<PulseKernel> distinct_kernels(const NetworkSpec& spec) {
  std::vector<PulseKernel> out;
  for (const PulseKernel& k : spec.pulse) {
    bool seen = false;
    for (const PulseKernel& o : out) {
      if (o.family == k.family && o.lambda == k.lambda && o.q == k.q) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(k);
  }
  return out;
}

double envelope_g(const std::vector<PulseKernel>& kernels, std::int64_t t) {
  double g = 0.0;
  for (const PulseKernel& k : kernels) g = std::max(g, k(t));
  return g;
}

constexpr std::int64_t kEnvelopeTerms = 1'000'000;

void check_region(const NetworkSpec& spec, int target,
                  const std::vector<int>& region, const char* who) {
  if (target < 1 || target > spec.neuron_count)
    throw std::invalid_argument(std::string(who) + ": target out of range");
  if (region.empty())
    throw std::invalid_argument(std::string(who) + ": region is empty");
  std::vector<char> seen(static_cast<std::size_t>(spec.neuron_count), 0);
  bool has_target = false;
  for (int id : region) {
    if (id < 1 || id > spec.neuron_count)
      throw std::invalid_argument(std::string(who) +
                                  ": region id out of range");
    if (seen[static_cast<std::size_t>(id - 1)])
      throw std::invalid_argument(std::string(who) + ": duplicate region id");
    seen[static_cast<std::size_t>(id - 1)] = 1;
    if (id == target) has_target = true;
  }
  if (!has_target)
    throw std::invalid_argument(std::string(who) +
                                ": region must contain target");
}

}  // namespace

PulseKernel::Mass envelope_mass(const NetworkSpec& spec) {
  std::vector<PulseKernel> kernels = distinct_kernels(spec);
  for (const PulseKernel& k : kernels) {
    if (!k.summable()) {
      PulseKernel::Mass m;
      m.value = std::numeric_limits<double>::infinity();
      m.error = std::numeric_limits<double>::infinity();
      m.finite = false;
      return m;
    }
  }
  bool all_geometric = true;
  double lambda_max = 0.0;
  for (const PulseKernel& k : kernels) {
    if (k.family == PulseFamily::Geometric)
      lambda_max = std::max(lambda_max, k.lambda);
    else
      all_geometric = false;
  }
  if (all_geometric) return PulseKernel::geometric(lambda_max).total_mass();

  PulseKernel::Mass m;
  double sum = 0.0;
  for (std::int64_t t = kEnvelopeTerms; t >= 1; --t)
    sum += envelope_g(kernels, t);
  m.value = sum;
  m.error = 1e-12 * sum;
  // The envelope tail is at most the sum of the individual tails; fold it
  // into the error estimate.
  for (const PulseKernel& k : kernels) {
    double T = static_cast<double>(kEnvelopeTerms);
    if (k.family == PulseFamily::Geometric) {
      m.error += std::pow(k.lambda, T) / (1.0 - k.lambda);
    } else {
      m.error += 2.0 * std::pow(T + 0.5, 1.0 - k.q) / (k.q - 1.0);
    }
  }
  m.finite = true;
  return m;
}

double envelope_discounted_mass(const NetworkSpec& spec, double alpha) {
  std::vector<PulseKernel> kernels = distinct_kernels(spec);
  bool all_geometric = true;
  double lambda_max = 0.0;
  for (const PulseKernel& k : kernels) {
    if (k.family == PulseFamily::Geometric)
      lambda_max = std::max(lambda_max, k.lambda);
    else
      all_geometric = false;
  }
  if (all_geometric)
    return PulseKernel::geometric(lambda_max).discounted_mass(alpha);
  if (alpha <= 0.0) {
    for (const PulseKernel& k : kernels) {
      if (!k.summable())
        throw std::domain_error(
            "envelope_discounted_mass: divergent envelope at alpha = 0");
    }
    // Mixed families at alpha = 0: fall back to the plain envelope mass.
    return envelope_mass(spec).value;
  }
  double sum = 0.0;
  std::int64_t t = 1;
  double last_g = 1.0;
  for (; t <= 2 * kEnvelopeTerms; ++t) {
    last_g = envelope_g(kernels, t);
    double term = std::exp(-alpha * static_cast<double>(t)) * last_g;
    sum += term;
    if (term < 1e-18 * (sum + 1e-300)) break;
  }
  double T = static_cast<double>(t);
  // g is nonincreasing, so the tail is under a geometric series.
  double tail = last_g * std::exp(-alpha * (T + 1.0)) / (1.0 - std::exp(-alpha));
  return sum + tail;
}

double lambda_operator_norm(double p_star, double gamma,
                            const NetworkSpec& spec, int target,
                            const std::vector<int>& region, double alpha) {
  check_region(spec, target, region, "lambda_operator_norm");
  int N = spec.neuron_count;
  std::vector<char> in_region(static_cast<std::size_t>(N), 0);
  for (int id : region) in_region[static_cast<std::size_t>(id - 1)] = 1;

  // Discounted kernel mass per source, shared across rows.
  std::vector<double> dmass(static_cast<std::size_t>(N), 0.0);
  for (int k = 1; k <= N; ++k)
    dmass[static_cast<std::size_t>(k - 1)] =
        spec.pulse_of(k).discounted_mass(alpha);

  double self = (1.0 - p_star) * std::exp(-alpha);
  double norm = 0.0;
  for (int j = 1; j <= N; ++j) {
    double row = self;
    for (int k = 1; k <= N; ++k) {
      if (k == j) continue;
      double w = std::abs(spec.weight(k, j));
      if (w == 0.0) continue;
      if (j == target && !in_region[static_cast<std::size_t>(k - 1)]) continue;
      row += gamma * w * dmass[static_cast<std::size_t>(k - 1)];
    }
    norm = std::max(norm, row);
  }
  return norm;
}

Alpha0Result solve_alpha0_core(double p_star, double gamma,
                               const NetworkSpec& spec, int target,
                               const std::vector<int>& region) {
  check_region(spec, target, region, "solve_alpha0");
  Alpha0Result res;

  // chi uses full rows (no region restriction on the target row).
  double sup = 0.0;
  bool finite = true;
  for (int j = 1; j <= spec.neuron_count; ++j) {
    double s = 0.0;
    for (int k = 1; k <= spec.neuron_count; ++k) {
      double w = std::abs(spec.weight(k, j));
      if (w == 0.0) continue;
      PulseKernel::Mass mass = spec.pulse_of(k).total_mass();
      if (!mass.finite) {
        finite = false;
        break;
      }
      s += mass.value * w;
    }
    if (!finite) break;
    sup = std::max(sup, s);
  }
  if (!finite) {
    res.chi = std::numeric_limits<double>::infinity();
    res.error =
        "kernel mass is infinite; discounted-operator bounds are unavailable";
    return res;
  }
  res.chi = (1.0 - p_star) + gamma * sup;

  if (res.chi < 1.0) {
    res.alpha0 = 0.0;
    res.norm_at_alpha0 =
        lambda_operator_norm(p_star, gamma, spec, target, region, 0.0);
    res.ok = true;
    return res;
  }

  constexpr double kTarget = 1.0 - 1e-6;
  constexpr double kAlphaMax = 64.0;
  double norm0 = lambda_operator_norm(p_star, gamma, spec, target, region, 0.0);
  if (norm0 <= kTarget) {
    res.alpha0 = 0.0;
    res.norm_at_alpha0 = norm0;
    res.ok = true;
    return res;
  }
  double norm_hi =
      lambda_operator_norm(p_star, gamma, spec, target, region, kAlphaMax);
  if (norm_hi > kTarget) {
    res.error = "network too strongly coupled for the bound";
    return res;
  }
  // The norm is continuous and strictly decreasing in alpha, so bisect for
  // the crossing; hi always satisfies the condition.
  double lo = 0.0, hi = kAlphaMax;
  for (int it = 0; it < 80 && hi - lo > 1e-9; ++it) {
    double mid = 0.5 * (lo + hi);
    if (lambda_operator_norm(p_star, gamma, spec, target, region, mid) <=
        kTarget)
      hi = mid;
    else
      lo = mid;
  }
  res.alpha0 = hi;
  res.norm_at_alpha0 =
      lambda_operator_norm(p_star, gamma, spec, target, region, hi);
  res.ok = true;
  return res;
}

Alpha0Result solve_alpha0(const ValidatedNetwork& net, int target,
                          const std::vector<int>& region) {
  return solve_alpha0_core(net.p_star_min, net.gamma, net.spec, target,
                           region);
}

ModelConstants compute_constants(const ValidatedNetwork& net, int target,
                                 const std::vector<int>& region) {
  const NetworkSpec& spec = net.spec;
  check_region(spec, target, region, "compute_constants");

  ModelConstants c;
  c.target = target;
  c.region = region;
  std::sort(c.region.begin(), c.region.end());
  c.neighborhood = true_neighborhood(spec, target);
  std::vector<char> in_region(static_cast<std::size_t>(spec.neuron_count), 0);
  for (int id : c.region) in_region[static_cast<std::size_t>(id - 1)] = 1;
  for (int j : c.neighborhood) {
    if (in_region[static_cast<std::size_t>(j - 1)])
      c.neighborhood_region.push_back(j);
  }

  const RateFunction& rate = spec.rate_of(target);
  auto fill = [&](const std::vector<int>& sources, Interval& K,
                  std::optional<double>& m, bool& clipped) {
    K = Interval{};
    for (int j : sources) {
      double w = spec.weight(j, target) * spec.pulse_of(j)(1);
      if (w < 0.0) K.lo += w;
      if (w > 0.0) K.hi += w;
    }
    if (sources.empty()) {
      m.reset();
      clipped = false;
      return;
    }
    DerivativeInf d = rate_derivative_inf(rate, K.lo, K.hi);
    double wmin = std::numeric_limits<double>::infinity();
    for (int j : sources)
      wmin = std::min(wmin,
                      std::abs(spec.weight(j, target)) * spec.pulse_of(j)(1));
    m = d.value * wmin;
    clipped = d.clipped;
  };
  fill(c.neighborhood, c.K, c.m, c.m_clipped);
  fill(c.neighborhood_region, c.K_region, c.m_region, c.m_region_clipped);

  c.sigma_region = 0.0;
  for (int j = 1; j <= spec.neuron_count; ++j) {
    if (j == target) continue;
    bool kept = in_region[static_cast<std::size_t>(j - 1)] &&
                spec.weight(j, target) != 0.0;
    if (!kept) c.sigma_region += std::abs(spec.weight(j, target));
  }

  c.gamma = net.gamma;
  c.r = net.max_abs_inbound_sum;
  c.p_star_min = net.p_star_min;
  c.p_min = net.p_min;
  c.q_star =
      std::pow(net.p_min, static_cast<double>(c.region.size()) + 1.0);
  c.rho.reserve(net.kernel_mass.size());
  for (const PulseKernel::Mass& m : net.kernel_mass) c.rho.push_back(m.value);
  c.rho_envelope = envelope_mass(spec);
  c.alpha0 = solve_alpha0(net, target, c.region);
  return c;
}

double overestimation_bound(double n, double xi, double eps) {
  if (!(n >= 3.0)) throw std::invalid_argument("overestimation_bound: n < 3");
  if (!(xi > 0.0 && xi < 0.5))
    throw std::invalid_argument("overestimation_bound: xi not in (0, 1/2)");
  if (!(eps > 0.0))
    throw std::invalid_argument("overestimation_bound: eps must be > 0");
  return 4.0 * std::pow(n, 1.5 - xi) *
         std::exp(-eps * eps * std::pow(n, 2.0 * xi) / 2.0);
}

UnderestimationTerms underestimation_bound(double n, double xi, double eps,
                                           double m, int region_size,
                                           double p_min, double nu) {
  if (!(n >= 3.0)) throw std::invalid_argument("underestimation_bound: n < 3");
  if (!(xi > 0.0 && xi < 0.5))
    throw std::invalid_argument("underestimation_bound: xi not in (0, 1/2)");
  if (!(eps > 0.0 && eps < m))
    throw std::domain_error(
        "underestimation_bound: requires 0 < eps < m");
  if (!(nu > 0.0 && nu < 1.0))
    throw std::invalid_argument("underestimation_bound: nu not in (0, 1)");
  if (!(p_min > 0.0 && p_min <= 0.5))
    throw std::invalid_argument("underestimation_bound: p_min not in (0, 1/2]");
  if (region_size < 1)
    throw std::invalid_argument("underestimation_bound: region_size < 1");

  UnderestimationTerms out;
  double d = m - eps;
  out.term1 = 4.0 * std::exp(-d * d * std::pow(n, 2.0 * xi) / 2.0);

  double q_star = std::pow(p_min, static_cast<double>(region_size) + 1.0);
  double half = std::floor(n / 2.0);
  double threshold = std::pow(n, 0.5 + xi);
  double exponent = half * q_star * (1.0 - nu) * (1.0 - nu) / 4.0;
  bool valid = nu * q_star * half > threshold && exponent > threshold;
  if (valid) {
    out.term2 = std::exp(-exponent);
    out.term2_valid = true;
  } else {
    out.term2 = 1.0;
    out.term2_valid = false;
  }
  return out;
}

double hoeffding_bound(double t, double ell, double lambda) {
  if (!(t > ell + 1.0))
    throw std::invalid_argument("hoeffding_bound: requires t > ell + 1");
  if (!(lambda > 0.0))
    throw std::invalid_argument("hoeffding_bound: lambda must be > 0");
  return 2.0 * std::exp(-2.0 * lambda * lambda / (t - ell + 1.0));
}

CouplingBound coupling_bound(const ValidatedNetwork& net,
                             const ModelConstants& constants, double n) {
  CouplingBound out;
  if (constants.sigma_region == 0.0) {
    out.value = BoundValue::of(0.0);
    out.branch = "zero-tail";
    out.available = true;
    return out;
  }
  const Alpha0Result& a = constants.alpha0;
  if (a.chi < 1.0) {
    if (!constants.rho_envelope.finite) {
      out.error = "kernel envelope mass is infinite";
      return out;
    }
    double raw = constants.gamma * constants.rho_envelope.value * n *
                 constants.sigma_region / (1.0 - a.chi);
    out.value = BoundValue::of(raw);
    out.branch = "contractive";
    out.available = true;
    return out;
  }
  if (!a.ok) {
    out.error = a.error.empty() ? "alpha0 unavailable" : a.error;
    return out;
  }
  if (a.alpha0 <= 0.0) {
    // chi >= 1 with a zero decay rate: the discounted form degenerates.
    out.value = BoundValue::of(std::numeric_limits<double>::infinity());
    out.branch = "discounted";
    out.available = true;
    return out;
  }
  double c_alpha = 1.0 / (1.0 - a.norm_at_alpha0);
  double geo = 1.0 / (1.0 - std::exp(-a.alpha0));
  double gmass = envelope_discounted_mass(net.spec, a.alpha0);
  double raw = c_alpha * geo * gmass * std::exp(a.alpha0 * n) *
               constants.sigma_region;
  out.value = BoundValue::of(raw);
  out.branch = "discounted";
  out.available = true;
  return out;
}

namespace {

BoundReport::Under make_under(double n, double xi, double eps,
                              const std::optional<double>& m, bool clipped,
                              int region_size, double p_min, double nu,
                              double extra) {
  BoundReport::Under u;
  if (!m.has_value()) {
    u.reason = "no presynaptic sources in scope";
    u.total = BoundValue::of(1.0);
    return u;
  }
  if (clipped && *m == 0.0) {
    u.reason = "rate saturates on the reachable range (m = 0)";
    u.total = BoundValue::of(1.0);
    return u;
  }
  if (!(eps < *m)) {
    u.reason = "eps >= m";
    u.total = BoundValue::of(1.0);
    return u;
  }
  u.terms = underestimation_bound(n, xi, eps, *m, region_size, p_min, nu);
  u.total = BoundValue::of(u.terms.total() + extra);
  u.available = true;
  return u;
}

}  // namespace

BoundReport theorem2_bounds(double n, double xi, double eps,
                            const ValidatedNetwork& net,
                            const ModelConstants& constants, double nu,
                            double hoeff_lambda, double hoeff_ell) {
  BoundReport rep;
  rep.n = n;
  rep.xi = xi;
  rep.eps = eps;
  rep.nu = nu;
  rep.constants = constants;

  rep.over = BoundValue::of(overestimation_bound(n, xi, eps));
  int region_size = static_cast<int>(constants.region.size());
  rep.under = make_under(n, xi, eps, constants.m, constants.m_clipped,
                         region_size, constants.p_min, nu, 0.0);

  rep.coupling = coupling_bound(net, constants, n);
  double coupling_raw = rep.coupling.available
                            ? rep.coupling.value.raw
                            : std::numeric_limits<double>::infinity();
  rep.over_region = BoundValue::of(rep.over.raw + coupling_raw);
  rep.under_region =
      make_under(n, xi, eps, constants.m_region, constants.m_region_clipped,
                 region_size, constants.p_min, nu, coupling_raw);
  if (!rep.coupling.available) {
    rep.under_region.available = false;
    if (rep.under_region.reason.empty())
      rep.under_region.reason = "coupling bound unavailable";
  }

  if (hoeff_lambda > 0.0) {
    rep.hoeff_lambda = hoeff_lambda;
    rep.hoeff_ell = hoeff_ell;
    rep.hoeffding = BoundValue::of(hoeffding_bound(n, hoeff_ell, hoeff_lambda));
  }
  return rep;
}

}  // namespace spikegraph

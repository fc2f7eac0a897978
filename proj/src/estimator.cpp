#include "spikegraph/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "spikegraph/parallel.hpp"

namespace spikegraph {

namespace {

// Key with the candidate's per-step bit deleted; two contexts are
// comparable for the candidate exactly when their masked keys agree.
ContextKey masked_key(const ContextKey& key, int others, int drop) {
  ContextKey m = ContextKey::empty(key.ell, others - 1);
  std::int64_t out = 0;
  for (std::int64_t a = 0; a < key.ell; ++a) {
    for (int b = 0; b < others; ++b) {
      if (b == drop) continue;
      if (key.bit(a * others + b)) m.set_bit(out);
      ++out;
    }
  }
  return m;
}

bool pair_less(const std::pair<ContextKey, ContextKey>& a,
               const std::pair<ContextKey, ContextKey>& b) {
  ContextKeyLess less;
  if (less(a.first, b.first)) return true;
  if (less(b.first, a.first)) return false;
  return less(a.second, b.second);
}

}  // namespace

SensitivityValue sensitivity(const ContextTable& table,
                             const std::vector<ContextKey>& admissible,
                             int candidate) {
  int drop = -1;
  int b = 0;
  for (int id : table.region) {
    if (id == table.target) continue;
    if (id == candidate) drop = b;
    ++b;
  }
  if (candidate == table.target || drop < 0)
    throw std::invalid_argument(
        "sensitivity: candidate must be a non-target region neuron");

  struct Group {
    double min_p = 0.0, max_p = 0.0;
    ContextKey min_key, max_key;
    int size = 0;
  };
  std::unordered_map<ContextKey, Group, ContextKeyHash> groups;
  // admissible is sorted, so the first key reaching a group's extreme value
  // is also the lexicographically smallest one attaining it.
  for (const ContextKey& key : admissible) {
    double p = empirical_prob(table, key);
    ContextKey mk = masked_key(key, table.others, drop);
    auto [it, fresh] = groups.try_emplace(std::move(mk));
    Group& g = it->second;
    if (fresh) {
      g.min_p = g.max_p = p;
      g.min_key = g.max_key = key;
      g.size = 1;
    } else {
      ++g.size;
      if (p < g.min_p) {
        g.min_p = p;
        g.min_key = key;
      }
      if (p > g.max_p) {
        g.max_p = p;
        g.max_key = key;
      }
    }
  }

  SensitivityValue out;
  for (const auto& [mk, g] : groups) {
    if (g.size < 2) continue;
    double delta = g.max_p - g.min_p;
    auto pair = std::minmax(g.min_key, g.max_key, ContextKeyLess{});
    std::pair<ContextKey, ContextKey> witness{pair.first, pair.second};
    if (!out.witness || delta > out.delta ||
        (delta == out.delta && pair_less(witness, *out.witness))) {
      out.delta = delta;
      out.witness = std::move(witness);
    }
  }
  return out;
}

SensitivityProfile sensitivity_profile(const ContextTable& table, double xi) {
  SensitivityProfile profile;
  profile.target = table.target;
  profile.n = table.n;
  profile.xi = xi;
  std::vector<ContextKey> admissible = admissible_set(table, xi);
  profile.admissible_count = admissible.size();
  for (int id : table.region) {
    if (id == table.target) continue;
    profile.candidates.push_back(id);
    profile.values.push_back(sensitivity(table, admissible, id));
  }
  return profile;
}

std::vector<int> select_neighborhood(const SensitivityProfile& profile,
                                     double eps) {
  std::vector<int> selected;
  for (std::size_t k = 0; k < profile.candidates.size(); ++k) {
    if (profile.values[k].delta > eps) selected.push_back(profile.candidates[k]);
  }
  return selected;
}

double epsilon_schedule(std::int64_t n, double xi, double c) {
  if (!(xi > 0.0 && xi < 0.5))
    throw std::invalid_argument("epsilon_schedule: xi must lie in (0, 1/2)");
  if (!(c > 0.0))
    throw std::invalid_argument("epsilon_schedule: c must be positive");
  if (n < 1) throw std::invalid_argument("epsilon_schedule: n < 1");
  return c * std::pow(static_cast<double>(n), -xi / 2.0);
}

std::vector<std::pair<int, int>> EstimatedGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (const GraphEntry& e : entries) {
    if (e.selected) out.emplace_back(e.source, e.target);
  }
  return out;
}

EstimatedGraph estimate_graph(const SpikeRaster& raster, double xi,
                              const EpsilonSpec& eps, std::int64_t ell_max,
                              int threads) {
  if (raster.columns() < 2)
    throw std::invalid_argument(
        "estimate_graph: raster must observe at least 2 neurons");
  EstimatedGraph graph;
  graph.region = raster.neurons;
  graph.n = raster.n;
  graph.xi = xi;
  double eps_value = eps.resolve(raster.n, xi);
  std::int64_t cap = ell_max < 0 ? provable_ell_cap(raster.n, xi) : ell_max;

  int m = raster.columns();
  std::vector<SensitivityProfile> profiles(static_cast<std::size_t>(m));
  parallel_for(m, threads, [&](int k) {
    int target = raster.neurons[static_cast<std::size_t>(k)];
    ContextTable table = count_contexts(raster, target, cap);
    profiles[static_cast<std::size_t>(k)] = sensitivity_profile(table, xi);
  });

  for (int k = 0; k < m; ++k) {
    const SensitivityProfile& p = profiles[static_cast<std::size_t>(k)];
    for (std::size_t c = 0; c < p.candidates.size(); ++c) {
      GraphEntry e;
      e.source = p.candidates[c];
      e.target = p.target;
      e.delta = p.values[c].delta;
      e.epsilon_used = eps_value;
      e.selected = e.delta > eps_value;
      graph.entries.push_back(e);
    }
  }
  return graph;
}

}  // namespace spikegraph

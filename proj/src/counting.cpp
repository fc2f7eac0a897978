#include "spikegraph/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace spikegraph {

bool ContextKeyLess::operator()(const ContextKey& a,
                                const ContextKey& b) const {
  if (a.ell != b.ell) return a.ell < b.ell;
  // Equal ell implies equal word counts. Chronological order maps to the
  // low bits of low words, so the first differing bit decides.
  for (std::size_t w = 0; w < a.bits.size(); ++w) {
    std::uint64_t x = a.bits[w] ^ b.bits[w];
    if (x == 0) continue;
    int l = std::countr_zero(x);
    return ((a.bits[w] >> l) & 1u) == 0;
  }
  return false;
}

std::vector<ContextKey> ContextTable::sorted_keys() const {
  std::vector<ContextKey> keys;
  keys.reserve(counts.size());
  for (const auto& [k, v] : counts) keys.push_back(k);
  std::sort(keys.begin(), keys.end(), ContextKeyLess{});
  return keys;
}

ContextTable count_contexts(const SpikeRaster& raster, int target,
                            std::int64_t ell_max) {
  if (raster.n < 3)
    throw std::invalid_argument("count_contexts: raster horizon must be >= 3");
  int tc = raster.column_of(target);
  if (tc < 0)
    throw std::invalid_argument("count_contexts: target not in raster");
  if (raster.columns() < 2)
    throw std::invalid_argument(
        "count_contexts: raster must observe at least 2 neurons");

  ContextTable table;
  table.target = target;
  table.region = raster.neurons;
  table.n = raster.n;
  table.others = raster.columns() - 1;
  std::int64_t cap = ell_max < 0 ? raster.n : ell_max;
  // At most n - 2 keys can ever arise; sizing up front keeps the scan free
  // of rehash spikes, which matters for the runtime benchmark.
  table.counts.reserve(static_cast<std::size_t>(
      std::min<std::int64_t>(raster.n, 1 << 20)));

  int m = raster.columns();
  std::vector<int> other_cols;
  other_cols.reserve(static_cast<std::size_t>(table.others));
  for (int c = 0; c < m; ++c)
    if (c != tc) other_cols.push_back(c);

  // Bits of the current gap, packed time major with the oldest step first.
  // Maintained incrementally so each key is assembled by a word copy; at the
  // top of iteration t the buffer holds exactly (t - 1 - last) * others
  // bits and every word beyond them is zero.
  std::vector<std::uint64_t> window;
  std::int64_t window_bits = 0;

  // last = most recent observed spike time of the target, 0 before the
  // first one. Windows anchored at the conventional time-0 spike are
  // excluded, which is what keeps total counts <= n - 2.
  std::int64_t last = 0;
  for (std::int64_t t = 1; t <= raster.n; ++t) {
    if (last >= 1) {
      std::int64_t ell = t - 1 - last;
      if (ell >= 1 && ell <= cap) {
        const auto words =
            static_cast<std::ptrdiff_t>((ell * table.others + 63) / 64);
        ContextKey key;
        key.ell = ell;
        key.bits.assign(window.begin(), window.begin() + words);
        CountPair& pair = table.counts[std::move(key)];
        if (raster.at(t, tc))
          ++pair.spike;
        else
          ++pair.no_spike;
      }
    }
    if (raster.at(t, tc)) {
      last = t;
      std::fill(window.begin(),
                window.begin() +
                    static_cast<std::ptrdiff_t>((window_bits + 63) / 64),
                0);
      window_bits = 0;
    } else if (last >= 1) {
      const auto needed =
          static_cast<std::size_t>((window_bits + table.others + 63) / 64);
      if (needed > window.size())
        window.resize(std::max(needed, window.size() * 2), 0);
      for (int b = 0; b < table.others; ++b) {
        if (raster.at(t, other_cols[static_cast<std::size_t>(b)])) {
          const std::int64_t flat = window_bits + b;
          window[static_cast<std::size_t>(flat >> 6)] |=
              std::uint64_t{1} << (static_cast<std::uint64_t>(flat) & 63);
        }
      }
      window_bits += table.others;
    }
  }
  return table;
}

namespace {

void check_xi(double xi) {
  if (!(xi > 0.0 && xi < 0.5))
    throw std::invalid_argument("xi must lie in (0, 1/2)");
}

}  // namespace

double admissibility_threshold(std::int64_t n, double xi) {
  check_xi(xi);
  if (n < 1) throw std::invalid_argument("admissibility_threshold: n < 1");
  return std::pow(static_cast<double>(n), 0.5 + xi);
}

std::int64_t provable_ell_cap(std::int64_t n, double xi) {
  double cap = static_cast<double>(n) - 2.0 - admissibility_threshold(n, xi);
  if (cap < 0.0) return 0;
  std::int64_t c = static_cast<std::int64_t>(std::floor(cap));
  return std::min(c, n - 2);
}

std::vector<ContextKey> admissible_set(const ContextTable& table, double xi) {
  double threshold = admissibility_threshold(table.n, xi);
  std::vector<ContextKey> keys;
  for (const auto& [k, v] : table.counts) {
    if (static_cast<double>(v.total()) >= threshold) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end(), ContextKeyLess{});
  return keys;
}

double empirical_prob(const ContextTable& table, const ContextKey& key) {
  auto it = table.counts.find(key);
  if (it == table.counts.end() || it->second.total() == 0)
    throw std::invalid_argument("empirical_prob: context never observed");
  return static_cast<double>(it->second.spike) /
         static_cast<double>(it->second.total());
}

double model_transition_prob(const ValidatedNetwork& net,
                             const std::vector<int>& region, int target,
                             const ContextKey& key) {
  const NetworkSpec& spec = net.spec;
  if (target < 1 || target > spec.neuron_count)
    throw std::invalid_argument("model_transition_prob: target out of range");
  int others = 0;
  for (int id : region) {
    if (id < 1 || id > spec.neuron_count)
      throw std::invalid_argument(
          "model_transition_prob: region id out of range");
    if (id != target) ++others;
  }
  double pot = 0.0;
  int b = 0;
  for (int id : region) {
    if (id == target) continue;
    double w = spec.weight(id, target);
    if (w != 0.0) {
      const PulseKernel& g = spec.pulse_of(id);
      double inner = 0.0;
      for (std::int64_t a = 0; a < key.ell; ++a) {
        if (key.bit(a * others + b)) inner += g(key.ell - a);
      }
      pot += w * inner;
    }
    ++b;
  }
  return spec.rate_of(target)(pot);
}

std::string key_bit_string(const ContextKey& key, int others) {
  std::string s;
  std::int64_t len = key.ell * others;
  s.reserve(static_cast<std::size_t>(len));
  for (std::int64_t i = 0; i < len; ++i) s.push_back(key.bit(i) ? '1' : '0');
  return s;
}

ContextKey key_from_bit_string(std::int64_t ell, const std::string& s,
                               int others) {
  if (ell < 0 || others < 0)
    throw std::invalid_argument("key_from_bit_string: negative dimensions");
  if (static_cast<std::int64_t>(s.size()) != ell * others)
    throw std::invalid_argument(
        "key_from_bit_string: bit string length must be ell * others");
  ContextKey key = ContextKey::empty(ell, others);
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(s.size()); ++i) {
    char c = s[static_cast<std::size_t>(i)];
    if (c == '1')
      key.set_bit(i);
    else if (c != '0')
      throw std::invalid_argument("key_from_bit_string: invalid character");
  }
  return key;
}

}  // namespace spikegraph

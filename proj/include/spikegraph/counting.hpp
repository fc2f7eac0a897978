#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "spikegraph/model.hpp"
#include "spikegraph/rng.hpp"

namespace spikegraph {

// One observed context of the target neuron: a gap of exactly `ell` silent
// steps since its previous spike together with the spikes of the other
// observed neurons during that gap. Bits are packed time major with the
// OLDEST gap step first: bit a * others + b is the state of the b-th
// non-target column at gap offset a, a = 0 .. ell-1.
struct ContextKey {
  std::int64_t ell = 0;
  std::vector<std::uint64_t> bits;

  bool operator==(const ContextKey&) const = default;

  [[nodiscard]] bool bit(std::int64_t flat) const {
    return (bits[static_cast<std::size_t>(flat >> 6)] >>
            (static_cast<std::uint64_t>(flat) & 63)) &
           1u;
  }
  void set_bit(std::int64_t flat) {
    bits[static_cast<std::size_t>(flat >> 6)] |=
        std::uint64_t{1} << (static_cast<std::uint64_t>(flat) & 63);
  }
  [[nodiscard]] static ContextKey empty(std::int64_t ell, int others) {
    ContextKey k;
    k.ell = ell;
    k.bits.assign(static_cast<std::size_t>((ell * others + 63) / 64), 0);
    return k;
  }
};

// Total order: by ell, then by the bit string read chronologically (oldest
// step first, columns in region order). Used for deterministic output and
// witness tie-breaking.
struct ContextKeyLess {
  bool operator()(const ContextKey& a, const ContextKey& b) const;
};

struct ContextKeyHash {
  std::size_t operator()(const ContextKey& k) const {
    std::uint64_t h = 0x12345678ULL ^ static_cast<std::uint64_t>(k.ell);
    for (std::uint64_t w : k.bits) h = (h ^ w) * 0x9E3779B97F4A7C15ULL;
    return static_cast<std::size_t>(mix64(h));
  }
};

struct CountPair {
  std::int64_t no_spike = 0;  // continuations with X_t(target) = 0
  std::int64_t spike = 0;     // continuations with X_t(target) = 1
  [[nodiscard]] std::int64_t total() const { return no_spike + spike; }
};

struct ContextTable {
  int target = 0;           // external id
  std::vector<int> region;  // raster columns' external ids, in raster order
  std::int64_t n = 0;
  int others = 0;  // region size minus one
  std::unordered_map<ContextKey, CountPair, ContextKeyHash> counts;

  [[nodiscard]] std::vector<ContextKey> sorted_keys() const;
};

// Scans the raster once. At each time t the gap back to the target's
// previous observed spike determines at most one (ell, w) context; windows
// whose opening spike is unobserved (the conventional time-0 spike) are not
// counted, so the sum of all counts is at most n - 2. ell_max < 0 means no
// cap.
[[nodiscard]] ContextTable count_contexts(const SpikeRaster& raster,
                                          int target,
                                          std::int64_t ell_max = -1);

// n^{1/2 + xi}: a context is admissible when it was seen at least this many
// times. xi must lie in (0, 1/2).
[[nodiscard]] double admissibility_threshold(std::int64_t n, double xi);

// Largest ell that can still clear the admissibility threshold,
// floor(n - 2 - n^{1/2+xi}), clamped to [0, n - 2]. Contexts longer than
// this cannot be admissible, so capping the counter there changes nothing
// downstream.
[[nodiscard]] std::int64_t provable_ell_cap(std::int64_t n, double xi);

// Keys with total count >= admissibility_threshold, sorted by
// ContextKeyLess. Size is at most n^{1/2 - xi}.
[[nodiscard]] std::vector<ContextKey> admissible_set(const ContextTable& table,
                                                     double xi);

// spike / (spike + no_spike) for one context. Throws when the context was
// never observed.
[[nodiscard]] double empirical_prob(const ContextTable& table,
                                    const ContextKey& key);

// Model transition probability phi_target(potential) for the window encoded
// by `key`, with the weighted kernel sums running over the presynaptic
// sources inside `region` only. Exact for the full process whenever the
// region covers the target's true presynaptic set.
[[nodiscard]] double model_transition_prob(const ValidatedNetwork& net,
                                           const std::vector<int>& region,
                                           int target, const ContextKey& key);

// "101..." rendering of the packed window, oldest gap step first, columns in
// region order within each step. For ell = 0 returns the empty string.
[[nodiscard]] std::string key_bit_string(const ContextKey& key, int others);

// Inverse of key_bit_string; validates length and characters.
[[nodiscard]] ContextKey key_from_bit_string(std::int64_t ell,
                                             const std::string& s, int others);

}  // namespace spikegraph

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spikegraph/counting.hpp>
#include <spikegraph/simulate.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace spikegraph;

namespace {

SpikeRaster raster_from_rows(const std::vector<std::string>& per_neuron,
                             std::vector<int> ids) {
    const std::int64_t n = static_cast<std::int64_t>(per_neuron[0].size());
    auto raster = SpikeRaster::zeros(n, std::move(ids));
    for (std::size_t c = 0; c < per_neuron.size(); ++c)
        for (std::int64_t t = 1; t <= n; ++t)
            raster.set(t, static_cast<int>(c), per_neuron[c][t - 1] == '1');
    return raster;
}

}  // namespace

TEST_CASE("worked two-neuron example") {
    // Target spikes at t = 1 and t = 4; gaps of length 1, 2, 1 end at
    // t = 3, 4, 6.
    const auto raster = raster_from_rows({"100100", "101011"}, {1, 2});
    const auto table = count_contexts(raster, 1);
    CHECK(table.target == 1);
    CHECK(table.n == 6);
    CHECK(table.others == 1);
    CHECK(table.region == std::vector<int>{1, 2});
    REQUIRE(table.counts.size() == 3);

    const auto k10 = key_from_bit_string(1, "0", 1);
    const auto k201 = key_from_bit_string(2, "01", 1);
    const auto k11 = key_from_bit_string(1, "1", 1);
    REQUIRE(table.counts.count(k10) == 1);
    REQUIRE(table.counts.count(k201) == 1);
    REQUIRE(table.counts.count(k11) == 1);
    CHECK(table.counts.at(k10).no_spike == 1);
    CHECK(table.counts.at(k10).spike == 0);
    CHECK(table.counts.at(k201).no_spike == 0);
    CHECK(table.counts.at(k201).spike == 1);
    CHECK(table.counts.at(k11).no_spike == 1);
    CHECK(table.counts.at(k11).spike == 0);
}

TEST_CASE("a target that always spikes yields an empty table") {
    const auto raster = raster_from_rows({"111111", "010101"}, {1, 2});
    const auto table = count_contexts(raster, 1);
    CHECK(table.counts.empty());
}

TEST_CASE("a gap anchored at the unobserved time-0 spike is not counted") {
    // Target never spikes inside the window: no observed opening spike, so
    // nothing is counted even though the convention says it spiked at 0.
    const auto raster = raster_from_rows({"000000", "110100"}, {1, 2});
    const auto table = count_contexts(raster, 1);
    CHECK(table.counts.empty());
}

TEST_CASE("recurring context accumulates both continuations") {
    // Gaps of length 2 at t = 4, 7, 10 with window bits 10, 10, 00.
    const auto raster =
        raster_from_rows({"1001001000", "0100100000"}, {1, 2});
    const auto table = count_contexts(raster, 1);
    const auto k = key_from_bit_string(2, "10", 1);
    REQUIRE(table.counts.count(k) == 1);
    CHECK(table.counts.at(k).spike == 2);
    CHECK(table.counts.at(k).no_spike == 0);
    const auto k00 = key_from_bit_string(2, "00", 1);
    REQUIRE(table.counts.count(k00) == 1);
    CHECK(table.counts.at(k00).no_spike == 1);
    CHECK(empirical_prob(table, k) == 1.0);
    CHECK(empirical_prob(table, k00) == 0.0);
}

TEST_CASE("window bits are time major with sources in column order") {
    // Three neurons, target 2. One gap of length 2 ending at t = 4.
    // Window rows (s = 2, 3): neuron 1 = (1, 0), neuron 3 = (0, 1).
    const auto raster =
        raster_from_rows({"0100", "1000", "0010"}, {1, 2, 3});
    const auto table = count_contexts(raster, 2);
    // Expected bit string: s=2 gives "10", s=3 gives "01".
    const auto k = key_from_bit_string(2, "1001", 2);
    REQUIRE(table.counts.count(k) == 1);
    CHECK(table.counts.at(k).no_spike == 1);
}

TEST_CASE("every time step feeds at most one context") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 100; ++rep) {
        const int cols = 2 + static_cast<int>(rng() % 3);
        std::vector<int> ids(cols);
        for (int c = 0; c < cols; ++c) ids[c] = c + 1;
        const std::int64_t n = 3 + static_cast<std::int64_t>(rng() % 80);
        const auto raster = oracles::random_raster(rng, n, ids, 0.35);
        const auto table = count_contexts(raster, 1);
        std::int64_t total = 0;
        for (const auto& [k, pair] : table.counts) total += pair.total();
        CHECK(total <= n - 2);
    }
}

TEST_CASE("counter matches the naive reference on random rasters") {
    std::mt19937_64 rng(202);
    for (int rep = 0; rep < 120; ++rep) {
        const int cols = 2 + static_cast<int>(rng() % 4);
        std::vector<int> ids;
        int next = 1;
        for (int c = 0; c < cols; ++c) {
            next += static_cast<int>(rng() % 3);
            ids.push_back(next++);
        }
        const std::int64_t n = 3 + static_cast<std::int64_t>(rng() % 120);
        const double dens = 0.15 + 0.5 * (static_cast<double>(rng() % 100) / 100.0);
        const auto raster = oracles::random_raster(rng, n, ids, dens);
        const int target = ids[static_cast<std::size_t>(rng() % ids.size())];
        const std::int64_t cap =
            rep % 3 == 0 ? static_cast<std::int64_t>(rng() % 10) : -1;
        const auto table = count_contexts(raster, target, cap);
        CHECK(oracles::to_naive(table) == oracles::naive_count(raster, target, cap));
    }
}

TEST_CASE("ell cap truncates long gaps") {
    const auto raster = raster_from_rows({"10000001", "01010101"}, {1, 2});
    const auto full = count_contexts(raster, 1);
    bool has_long = false;
    for (const auto& [k, pair] : full.counts) has_long |= k.ell > 2;
    CHECK(has_long);
    const auto capped = count_contexts(raster, 1, 2);
    for (const auto& [k, pair] : capped.counts) CHECK(k.ell <= 2);
    // Short contexts are unchanged by the cap.
    for (const auto& [k, pair] : capped.counts) {
        REQUIRE(full.counts.count(k) == 1);
        CHECK(full.counts.at(k).spike == pair.spike);
        CHECK(full.counts.at(k).no_spike == pair.no_spike);
    }
}

TEST_CASE("admissibility threshold and ell cap formulas") {
    CHECK(admissibility_threshold(16, 0.25) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(admissibility_threshold(10000, 0.25) ==
          doctest::Approx(1000.0).epsilon(1e-12));
    CHECK_THROWS_AS(admissibility_threshold(16, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(admissibility_threshold(16, 0.5), std::invalid_argument);
    CHECK(provable_ell_cap(16, 0.25) == 6);
    CHECK(provable_ell_cap(3, 0.25) == 0);
    CHECK(provable_ell_cap(10000, 0.25) == 10000 - 2 - 1000);
}

TEST_CASE("admissible set keeps frequent contexts in sorted order") {
    ContextTable table;
    table.target = 1;
    table.region = {1, 2};
    table.n = 16;
    table.others = 1;
    const auto a = key_from_bit_string(1, "0", 1);
    const auto b = key_from_bit_string(1, "1", 1);
    const auto c = key_from_bit_string(2, "00", 1);
    table.counts[b] = {5, 3};   // total 8, admissible
    table.counts[a] = {4, 3};   // total 7, not admissible
    table.counts[c] = {8, 1};   // total 9, admissible
    const auto adm = admissible_set(table, 0.25);
    REQUIRE(adm.size() == 2);
    CHECK(adm[0] == b);
    CHECK(adm[1] == c);
}

TEST_CASE("admissible set size obeys the pigeonhole cap") {
    std::mt19937_64 rng(303);
    for (int rep = 0; rep < 60; ++rep) {
        const std::int64_t n = 50 + static_cast<std::int64_t>(rng() % 2000);
        const auto raster = oracles::random_raster(rng, n, {1, 2, 3}, 0.4);
        const auto table = count_contexts(raster, 2);
        const double xi = 0.1 + 0.3 * (static_cast<double>(rng() % 100) / 100.0);
        const auto adm = admissible_set(table, xi);
        CHECK(static_cast<double>(adm.size()) <=
              std::pow(static_cast<double>(n), 0.5 - xi));
        for (const auto& k : adm)
            CHECK(static_cast<double>(table.counts.at(k).total()) >=
                  admissibility_threshold(n, xi));
    }
}

TEST_CASE("sorted keys follow ell then chronological bits") {
    ContextTable table;
    table.target = 1;
    table.region = {1, 2, 3};
    table.n = 100;
    table.others = 2;
    for (const auto& [ell, s] :
         std::vector<std::pair<std::int64_t, std::string>>{
             {2, "1001"}, {1, "10"}, {1, "01"}, {2, "0110"}, {1, "00"}}) {
        table.counts[key_from_bit_string(ell, s, 2)] = {1, 0};
    }
    const auto keys = table.sorted_keys();
    std::vector<std::pair<std::int64_t, std::string>> got;
    for (const auto& k : keys) got.emplace_back(k.ell, key_bit_string(k, 2));
    const std::vector<std::pair<std::int64_t, std::string>> want = {
        {1, "00"}, {1, "01"}, {1, "10"}, {2, "0110"}, {2, "1001"}};
    CHECK(got == want);
}

TEST_CASE("bit string round trip") {
    std::mt19937_64 rng(404);
    for (int rep = 0; rep < 200; ++rep) {
        const int others = 1 + static_cast<int>(rng() % 4);
        const std::int64_t ell = 1 + static_cast<std::int64_t>(rng() % 40);
        std::string s;
        for (std::int64_t k = 0; k < ell * others; ++k)
            s.push_back(rng() % 2 ? '1' : '0');
        const auto key = key_from_bit_string(ell, s, others);
        CHECK(key.ell == ell);
        CHECK(key_bit_string(key, others) == s);
    }
    CHECK_THROWS_AS(key_from_bit_string(2, "011", 1), std::invalid_argument);
    CHECK_THROWS_AS(key_from_bit_string(1, "0x", 2), std::invalid_argument);
}

TEST_CASE("empirical prob requires an observed context") {
    const auto raster = raster_from_rows({"100100", "101011"}, {1, 2});
    const auto table = count_contexts(raster, 1);
    CHECK(empirical_prob(table, key_from_bit_string(2, "01", 1)) == 1.0);
    CHECK_THROWS(empirical_prob(table, key_from_bit_string(2, "11", 1)));
}

TEST_CASE("count preconditions") {
    const auto raster = raster_from_rows({"10", "01"}, {1, 2});
    CHECK_THROWS_AS(count_contexts(raster, 1), std::invalid_argument);
    const auto ok = raster_from_rows({"100", "010"}, {1, 2});
    CHECK_THROWS_AS(count_contexts(ok, 7), std::invalid_argument);
    const auto solo = raster_from_rows({"100"}, {1});
    CHECK_THROWS_AS(count_contexts(solo, 1), std::invalid_argument);
}

TEST_CASE("model transition prob reproduces the rate on encoded windows") {
    NetworkSpec spec;
    spec.neuron_count = 2;
    spec.weights = {0.0, 0.0, 1.0, 0.0};  // W(2->1) = 1
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::geometric(0.5)};
    const auto net = validate_network(spec).value();
    CHECK(model_transition_prob(net, {1, 2}, 1, key_from_bit_string(1, "1", 1)) ==
          doctest::Approx(0.638635147178003).epsilon(1e-12));
    CHECK(model_transition_prob(net, {1, 2}, 1, key_from_bit_string(1, "0", 1)) ==
          doctest::Approx(0.5).epsilon(1e-14));
    // Window 11 over ell = 2: potential g(2) + g(1) = 1.5.
    CHECK(model_transition_prob(net, {1, 2}, 1, key_from_bit_string(2, "11", 1)) ==
          doctest::Approx(0.6905446857161861).epsilon(1e-12));
    // Oldest step first: for ell = 2, "10" means the spike sits 2 steps back.
    CHECK(model_transition_prob(net, {1, 2}, 1, key_from_bit_string(2, "10", 1)) ==
          doctest::Approx(spec.rate[0](0.5)).epsilon(1e-12));
    CHECK(model_transition_prob(net, {1, 2}, 1, key_from_bit_string(2, "01", 1)) ==
          doctest::Approx(spec.rate[0](1.0)).epsilon(1e-12));
}

TEST_CASE("simulated spike gaps reproduce empirical transition probabilities") {
    // With the true neighborhood inside the region, the model probability of
    // an admissible context matches its empirical frequency.
    NetworkSpec spec;
    spec.neuron_count = 2;
    spec.weights = {0.0, 0.0, 1.0, 0.0};
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::geometric(0.5)};
    const auto net = validate_network(spec).value();
    const auto raster = simulate(net, SimulationConfig{200000, 77});
    const auto table = count_contexts(raster, 1, 1);
    const auto key = key_from_bit_string(1, "1", 1);
    REQUIRE(table.counts.count(key) == 1);
    const auto& pair = table.counts.at(key);
    REQUIRE(pair.total() > 5000);
    const double p_hat = empirical_prob(table, key);
    const double p = model_transition_prob(net, {1, 2}, 1, key);
    const double sd = std::sqrt(p * (1 - p) / static_cast<double>(pair.total()));
    CHECK(std::abs(p_hat - p) < 4.0 * sd);
}

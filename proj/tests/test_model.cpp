#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spikegraph/model.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"

using namespace spikegraph;

TEST_CASE("sigmoid rate values and range") {
    const auto rate = RateFunction::clipped_sigmoid(0.2, 1.0);
    CHECK(rate(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-60.0, 60.0);
    for (int k = 0; k < 200000; ++k) {
        const double v = rate(u(rng));
        CHECK(v >= 0.2);
        CHECK(v <= 0.8);
    }
    // Extreme inputs saturate at the floors without leaving them.
    CHECK(rate(-1e9) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rate(1e9) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("sigmoid rate is nondecreasing") {
    const auto rate = RateFunction::clipped_sigmoid(0.1, 2.5);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = u(rng);
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 1; k < xs.size(); ++k)
        CHECK(rate(xs[k]) >= rate(xs[k - 1]));
}

TEST_CASE("sigmoid derivative values") {
    const auto rate = RateFunction::clipped_sigmoid(0.2, 1.0);
    CHECK(rate.derivative_sup() == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(rate.derivative(2.0) ==
          doctest::Approx(0.06299615124210398).epsilon(1e-12));
    CHECK(rate.derivative(-1.0) ==
          doctest::Approx(0.1179671599448891).epsilon(1e-12));
    // Even function of u.
    CHECK(rate.derivative(3.0) == doctest::Approx(rate.derivative(-3.0)));
}

TEST_CASE("sigmoid derivative infimum sits at an endpoint") {
    const auto rate = RateFunction::clipped_sigmoid(0.2, 1.0);
    const auto inf = rate_derivative_inf(rate, -1.0, 2.0);
    CHECK_FALSE(inf.clipped);
    CHECK(inf.value == doctest::Approx(0.06299615124210398).epsilon(1e-12));
    // Interval on one side of 0: the far endpoint wins.
    const auto left = rate_derivative_inf(rate, -5.0, -2.0);
    CHECK(left.value == doctest::Approx(rate.derivative(-5.0)));
    // Degenerate interval.
    const auto point = rate_derivative_inf(rate, 1.5, 1.5);
    CHECK(point.value == doctest::Approx(rate.derivative(1.5)));
}

TEST_CASE("linear rate evaluation and clip points") {
    const auto rate = RateFunction::clipped_linear(0.1, 0.1, 0.5);
    CHECK(rate.linear_clip_lo() == doctest::Approx(-4.0));
    CHECK(rate.linear_clip_hi() == doctest::Approx(4.0));
    CHECK(rate(0.0) == doctest::Approx(0.5));
    CHECK(rate(1.0) == doctest::Approx(0.6));
    CHECK(rate(-100.0) == doctest::Approx(0.1));
    CHECK(rate(100.0) == doctest::Approx(0.9));
    CHECK(rate.derivative_sup() == doctest::Approx(0.1));
}

TEST_CASE("linear derivative infimum clips to zero when the flat part is hit") {
    const auto rate = RateFunction::clipped_linear(0.1, 0.1, 0.5);
    const auto mid = rate_derivative_inf(rate, -0.5, 1.0);
    CHECK_FALSE(mid.clipped);
    CHECK(mid.value == doctest::Approx(0.1));
    const auto low = rate_derivative_inf(rate, -5.0, 0.0);
    CHECK(low.clipped);
    CHECK(low.value == 0.0);
    const auto high = rate_derivative_inf(rate, 3.0, 10.0);
    CHECK(high.clipped);
    CHECK(high.value == 0.0);
}

TEST_CASE("derivative infimum matches a finite difference grid search") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> pu(0.05, 0.45);
    std::uniform_real_distribution<double> bu(0.2, 4.0);
    std::uniform_real_distribution<double> xu(-3.0, 3.0);
    for (int rep = 0; rep < 25; ++rep) {
        const auto rate = RateFunction::clipped_sigmoid(pu(rng), bu(rng));
        double a = xu(rng), b = xu(rng);
        if (a > b) std::swap(a, b);
        const auto inf = rate_derivative_inf(rate, a, b);
        const double grid = oracles::fd_derivative_min(rate, a, b);
        CHECK(inf.value == doctest::Approx(grid).epsilon(1e-6));
    }
    // Clip-free linear interval.
    const auto lin = RateFunction::clipped_linear(0.2, 0.05, 0.5);
    const auto inf = rate_derivative_inf(lin, -1.0, 1.0);
    CHECK(inf.value ==
          doctest::Approx(oracles::fd_derivative_min(lin, -1.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("geometric kernel values and masses") {
    const auto g = PulseKernel::geometric(0.5);
    CHECK(g(1) == 1.0);
    CHECK(g(2) == 0.5);
    CHECK(g(3) == 0.25);
    CHECK(g.summable());
    const auto m = g.total_mass();
    CHECK(m.finite);
    CHECK(m.value == doctest::Approx(2.0).epsilon(1e-15));
    // Discounted mass at alpha = ln 2: x = 1/2, x / (1 - x/2) = 2/3.
    CHECK(g.discounted_mass(std::log(2.0)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(g.discounted_mass(0.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("power kernel values and masses") {
    const auto g = PulseKernel::power(2.0);
    CHECK(g(1) == 1.0);
    CHECK(g(2) == doctest::Approx(0.25));
    CHECK(g.summable());
    const auto m = g.total_mass();
    CHECK(m.finite);
    CHECK(std::abs(m.value - 1.6449340668482264) <= 1e-9);
    CHECK(m.error >= std::abs(m.value - 1.6449340668482264));
    CHECK(m.error < 1e-6);

    const auto slow = PulseKernel::power(0.5);
    CHECK_FALSE(slow.summable());
    const auto sm = slow.total_mass();
    CHECK_FALSE(sm.finite);
    CHECK(std::isinf(sm.value));
    // Discounting restores a finite mass for any alpha > 0.
    CHECK(std::isfinite(slow.discounted_mass(0.1)));
}

TEST_CASE("kernels are nonincreasing") {
    for (const auto& g :
         {PulseKernel::geometric(0.9), PulseKernel::geometric(0.0),
          PulseKernel::power(2.0), PulseKernel::power(0.7)}) {
        for (std::int64_t t = 1; t < 200; ++t) CHECK(g(t + 1) <= g(t));
        CHECK(g(1) == 1.0);
    }
}

TEST_CASE("weight storage is source major with 1-based ids") {
    NetworkSpec spec;
    spec.neuron_count = 2;
    spec.weights = {0.0, 1.0, 0.5, 0.0};  // W(1->2) = 1, W(2->1) = 0.5
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::geometric(0.5)};
    CHECK(spec.weight(1, 2) == 1.0);
    CHECK(spec.weight(2, 1) == 0.5);
    CHECK(spec.weight(1, 1) == 0.0);
    // Shared rate and pulse entries serve every neuron.
    CHECK(&spec.rate_of(1) == &spec.rate_of(2));
    CHECK(&spec.pulse_of(1) == &spec.pulse_of(2));
}

TEST_CASE("true neighborhood reads the target column") {
    NetworkSpec spec;
    spec.neuron_count = 4;
    spec.weights.assign(16, 0.0);
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::geometric(0.5)};
    spec.weights[(2 - 1) * 4 + (3 - 1)] = 1.0;   // W(2->3)
    spec.weights[(4 - 1) * 4 + (3 - 1)] = -0.5;  // W(4->3)
    CHECK(true_neighborhood(spec, 3) == std::vector<int>{2, 4});
    CHECK(true_neighborhood(spec, 1).empty());
}

TEST_CASE("network validation computes constants") {
    NetworkSpec spec;
    spec.neuron_count = 2;
    spec.weights = {0.0, 1.0, 0.5, 0.0};
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::geometric(0.5)};
    const auto res = validate_network(spec);
    REQUIRE(res.ok());
    const auto& net = res.value();
    // Inbound sums: column 1 gets 0.5, column 2 gets 1.
    CHECK(net.max_abs_inbound_sum == doctest::Approx(1.0));
    CHECK(net.gamma == doctest::Approx(0.15));
    CHECK(net.p_star_min == doctest::Approx(0.2));
    CHECK(net.p_min == doctest::Approx(0.2));
    REQUIRE(net.kernel_mass.size() == 2);
    CHECK(net.kernel_mass[0].value == doctest::Approx(2.0));
    CHECK(net.all_kernels_summable);
    CHECK(res.warnings.empty());
}

TEST_CASE("network validation rejects broken specs") {
    NetworkSpec spec;
    spec.neuron_count = 2;
    spec.weights = {0.3, 1.0, 0.5, 0.0};  // nonzero diagonal
    spec.rate = {RateFunction::clipped_sigmoid(0.6, 1.0)};  // p_star too big
    spec.pulse = {PulseKernel::geometric(0.5)};
    const auto res = validate_network(spec);
    REQUIRE_FALSE(res.ok());
    bool saw_diag = false, saw_pstar = false;
    for (const auto& e : res.errors) {
        if (e.find("self-weight") != std::string::npos) saw_diag = true;
        if (e.find("p_star") != std::string::npos) saw_pstar = true;
    }
    CHECK(saw_diag);
    CHECK(saw_pstar);
    CHECK_THROWS_AS(static_cast<void>(res.value()), std::invalid_argument);

    NetworkSpec bad_shape = spec;
    bad_shape.weights = {0.0, 1.0};
    CHECK_FALSE(validate_network(bad_shape).ok());
    NetworkSpec none;
    CHECK_FALSE(validate_network(none).ok());
}

TEST_CASE("network validation warns on non-summable kernels and reachable clips") {
    NetworkSpec spec;
    spec.neuron_count = 2;
    spec.weights = {0.0, 1.0, 0.5, 0.0};
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::power(0.8)};
    const auto res = validate_network(spec);
    REQUIRE(res.ok());
    CHECK_FALSE(res.warnings.empty());
    CHECK_FALSE(res.value().all_kernels_summable);

    NetworkSpec clippy = spec;
    clippy.pulse = {PulseKernel::geometric(0.5)};
    // Reachable potentials span [-1, 3]; clips at (p* - b)/a = 0.5 sit inside.
    clippy.weights = {0.0, 3.0, -1.0, 0.0};
    clippy.rate = {RateFunction::clipped_linear(0.1, 0.2, 0.0)};
    const auto cres = validate_network(clippy);
    REQUIRE(cres.ok());
    CHECK_FALSE(cres.warnings.empty());
}

TEST_CASE("membrane potential worked example") {
    NetworkSpec spec;
    spec.neuron_count = 2;
    spec.weights = {0.0, 0.0, 1.0, 0.0};  // W(2->1) = 1
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::geometric(0.5)};
    auto raster = SpikeRaster::zeros(4, {1, 2});
    // Neuron 1: spike at t = 2. Neuron 2: spikes at t = 3, 4.
    raster.set(2, 0, 1);
    raster.set(3, 1, 1);
    raster.set(4, 1, 1);
    // Window s in {3, 4}: g(2) + g(1) = 1.5.
    CHECK(membrane_potential(spec, raster, 1, 4) == 1.5);
    // Fresh spike resets the potential to 0.
    CHECK(membrane_potential(spec, raster, 1, 2) == 0.0);
    // Neuron 2 has no presynaptic weight.
    CHECK(membrane_potential(spec, raster, 2, 4) == 0.0);
    CHECK_THROWS_AS(static_cast<void>(membrane_potential(spec, raster, 1, 0)), std::out_of_range);
    CHECK_THROWS_AS(static_cast<void>(membrane_potential(spec, raster, 1, 5)), std::out_of_range);
}

TEST_CASE("membrane potential uses the all-spiked-at-0 convention") {
    NetworkSpec spec;
    spec.neuron_count = 2;
    spec.weights = {0.0, 0.0, 1.0, 0.0};
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::geometric(0.5)};
    auto raster = SpikeRaster::zeros(3, {1, 2});
    raster.set(1, 1, 1);
    raster.set(3, 1, 1);
    // Neuron 1 never spiked in the window, so integration starts at s = 1.
    CHECK(membrane_potential(spec, raster, 1, 3) ==
          doctest::Approx(0.25 + 1.0).epsilon(1e-15));
}

TEST_CASE("membrane potential requires a full-network raster") {
    NetworkSpec spec;
    spec.neuron_count = 3;
    spec.weights.assign(9, 0.0);
    spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
    spec.pulse = {PulseKernel::geometric(0.5)};
    auto raster = SpikeRaster::zeros(4, {1, 2});
    CHECK_THROWS_AS(static_cast<void>(membrane_potential(spec, raster, 1, 2)), std::invalid_argument);
}

TEST_CASE("membrane potential matches the naive oracle exactly") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> nu(3, 60);
    std::uniform_real_distribution<double> wu(-2.0, 2.0);
    for (int rep = 0; rep < 60; ++rep) {
        const int N = 2 + static_cast<int>(rng() % 4);
        NetworkSpec spec;
        spec.neuron_count = N;
        spec.weights.assign(static_cast<std::size_t>(N) * N, 0.0);
        for (int j = 1; j <= N; ++j)
            for (int i = 1; i <= N; ++i)
                if (i != j && rng() % 2 == 0)
                    spec.weights[(j - 1) * N + (i - 1)] = wu(rng);
        spec.rate = {RateFunction::clipped_sigmoid(0.2, 1.0)};
        spec.pulse.clear();
        for (int j = 0; j < N; ++j)
            spec.pulse.push_back(j % 2 == 0 ? PulseKernel::geometric(0.6)
                                            : PulseKernel::power(1.5));
        std::vector<int> ids(N);
        for (int j = 0; j < N; ++j) ids[j] = j + 1;
        const auto raster = oracles::random_raster(rng, nu(rng), ids, 0.3);
        for (int target = 1; target <= N; ++target)
            for (std::int64_t t = 1; t <= raster.n; ++t)
                CHECK(membrane_potential(spec, raster, target, t) ==
                      oracles::naive_potential(spec, raster, target, t));
    }
}

TEST_CASE("kernel window sum matches direct evaluation") {
    const auto g = PulseKernel::power(1.2);
    auto raster = SpikeRaster::zeros(6, {1});
    for (std::int64_t t : {1, 3, 4, 6}) raster.set(t, 0, 1);
    // to = 6, window 2..6: spikes at 3, 4, 6 contribute g(4) + g(3) + g(1).
    CHECK(kernel_window_sum(g, raster, 0, 2, 6) ==
          doctest::Approx(g(4) + g(3) + g(1)).epsilon(1e-15));
    // Empty window.
    CHECK(kernel_window_sum(g, raster, 0, 5, 4) == 0.0);
}

TEST_CASE("spike raster helpers") {
    auto raster = SpikeRaster::zeros(3, {2, 5, 9});
    CHECK(raster.columns() == 3);
    CHECK(raster.column_of(5) == 1);
    CHECK(raster.column_of(9) == 2);
    CHECK(raster.column_of(3) == -1);
    CHECK(raster.bits.size() == 9);
    raster.set(2, 1, 1);
    CHECK(raster.at(2, 1) == 1);
    CHECK(raster.at(1, 1) == 0);
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "cqft/corridor.hpp"

using namespace cqft;

TEST_CASE("weight_small_volume: worked values") {
    CHECK(weight_small_volume(2.0, 0.0, {1.0}) == 1.0);
    CHECK(weight_small_volume(2.0, 1.0, {1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(weight_small_volume(1.0, 2.0, {0.5}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(weight_small_volume(1.0, 0.3, {1.0}) < 1.0);
    CHECK_THROWS_AS(weight_small_volume(0.0, 1.0, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(weight_small_volume(1.0, 1.0, {0.0}), std::invalid_argument);
}

TEST_CASE("delta_phi_formula: worked values and scaling") {
    CHECK(delta_phi_formula(2.0, {1.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(delta_phi_formula(0.5, {4.0}) == doctest::Approx(1.0).epsilon(1e-15));
    // quadrupling dv halves the width
    CHECK(delta_phi_formula(0.7, {4.0 * 0.3}) ==
          doctest::Approx(0.5 * delta_phi_formula(0.7, {0.3})).epsilon(1e-15));
    // general inverse-sqrt scaling
    for (double c : {2.0, 3.0, 10.0}) {
        const double scaled = delta_phi_formula(1.3, {c * 0.9}) * std::sqrt(c);
        CHECK(scaled == doctest::Approx(delta_phi_formula(1.3, {0.9})).epsilon(1e-14));
    }
    CHECK_THROWS_AS(delta_phi_formula(-1.0, {1.0}), std::invalid_argument);
}

TEST_CASE("delta_phi_formula: the 1/e half-width reading, sqrt(2) above sigma") {
    const double eps = 0.8, dv = 2.5;
    const double width = delta_phi_formula(eps, {dv});
    CHECK(weight_small_volume(eps, width, {dv}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    const double sigma = 1.0 / std::sqrt(eps * dv);
    CHECK(width == doctest::Approx(std::sqrt(2.0) * sigma).epsilon(1e-14));
}

TEST_CASE("delta_phi_from_lifetime: worked values and the substitution identity") {
    CHECK(delta_phi_from_lifetime(2.0, 1.0, {1.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(delta_phi_from_lifetime(8.0, 1.0, {1.0}) == doctest::Approx(2.0).epsilon(1e-15));
    // equals delta_phi_formula through eps = 4m/tau
    for (double tau : {0.5, 2.0, 400.0}) {
        for (double m : {0.5, 1.0, 2.0}) {
            for (double dv : {0.01, 1.0, 4.0}) {
                const double viaLifetime = delta_phi_from_lifetime(tau, m, {dv});
                const double viaEpsilon = delta_phi_formula(4.0 * m / tau, {dv});
                CHECK(std::abs(viaLifetime - viaEpsilon) <= 1e-14 * viaEpsilon);
            }
        }
    }
    CHECK_THROWS_AS(delta_phi_from_lifetime(0.0, 1.0, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(delta_phi_from_lifetime(1.0, -1.0, {1.0}), std::invalid_argument);
}

TEST_CASE("sample_corridor: unit case lands in the 3-sigma band") {
    const CorridorStats stats = sample_corridor(1.0, {1.0}, 1'000'000, 2024);
    const double band = 3.0 / std::sqrt(2.0 * 1e6);
    CHECK(std::abs(stats.sigmaSample - 1.0) <= band);
    CHECK(stats.halfWidth1e == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(stats.predictedDeltaPhi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(stats.sigmaTrue == 1.0);
}

TEST_CASE("sample_corridor: scaled volume halves the spread") {
    const CorridorStats stats = sample_corridor(1.0, {4.0}, 1'000'000, 99);
    const double band = 3.0 * 0.5 / std::sqrt(2.0 * 1e6);
    CHECK(std::abs(stats.sigmaSample - 0.5) <= band);
    CHECK(stats.predictedDeltaPhi == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("sample_corridor: deterministic for a fixed seed") {
    const CorridorStats a = sample_corridor(0.5, {2.0}, 10'000, 7);
    const CorridorStats b = sample_corridor(0.5, {2.0}, 10'000, 7);
    CHECK(a.sigmaSample == b.sigmaSample);
    const CorridorStats c = sample_corridor(0.5, {2.0}, 10'000, 8);
    CHECK(a.sigmaSample != c.sigmaSample);
}

TEST_CASE("sample_corridor: stream is keyed by sample index, shard-safe") {
    // collecting draws in four interleaved shards reproduces the serial
    // stream value-for-value
    const std::uint64_t seed = 31337;
    const int n = 1000;
    std::vector<double> serial(n);
    for (int i = 0; i < n; ++i) serial[i] = standard_normal_at(seed, i);
    std::vector<double> sharded(n);
    for (int shard = 0; shard < 4; ++shard)
        for (int i = shard; i < n; i += 4) sharded[i] = standard_normal_at(seed, i);
    CHECK(serial == sharded);
}

TEST_CASE("sample_corridor: input validation") {
    CHECK_THROWS_AS(sample_corridor(1.0, {1.0}, 5000, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_corridor(0.0, {1.0}, 20'000, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_corridor(1.0, {-1.0}, 20'000, 1), std::invalid_argument);
}

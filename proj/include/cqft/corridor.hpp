#pragma once

// Measurement precision over a small four-volume dv: the corridor weight
// w = e^{-eps (dphi)^2 dv / 2}, its printed width Delta_phi = sqrt(2/(eps*dv))
// (exactly the 1/e half-width of w, a factor sqrt(2) above the Gaussian sigma
// of the normalized weight density -- both are reported), the substitution
// through the lifetime Delta_phi = sqrt(tau/(2 m dv)), and a Monte Carlo check
// of the width statistics with a counter-based RNG so results are independent
// of any sharding of the sample loop.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace cqft {

struct VolumeElement {
    double dv = 0.0;  // four-volume of the measured region, > 0
};

inline void validate_volume(const VolumeElement& v) {
    if (!(v.dv > 0.0) || !std::isfinite(v.dv))
        throw std::invalid_argument("VolumeElement: dv must be > 0");
}

// w(dphi) = exp(-eps * dphi^2 * dv / 2), in (0, 1], equal to 1 iff dphi = 0.
inline double weight_small_volume(double epsilon, double deltaPhi, const VolumeElement& dv) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("weight_small_volume: epsilon must be > 0");
    validate_volume(dv);
    if (!std::isfinite(deltaPhi))
        throw std::invalid_argument("weight_small_volume: deltaPhi must be finite");
    return std::exp(-0.5 * epsilon * deltaPhi * deltaPhi * dv.dv);
}

// Delta_phi = sqrt(2/(eps*dv)): the dphi at which the weight has dropped to 1/e.
inline double delta_phi_formula(double epsilon, const VolumeElement& dv) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("delta_phi_formula: epsilon must be > 0");
    validate_volume(dv);
    return std::sqrt(2.0 / (epsilon * dv.dv));
}

// Delta_phi = sqrt(tau/(2 m dv)); identical to delta_phi_formula(4m/tau, dv)
// through eps = 4 omega_k / tau at omega_k = m.
inline double delta_phi_from_lifetime(double tau, double mass, const VolumeElement& dv) {
    if (!(tau > 0.0) || !(mass > 0.0))
        throw std::invalid_argument("delta_phi_from_lifetime: inputs must be positive");
    validate_volume(dv);
    return std::sqrt(tau / (2.0 * mass * dv.dv));
}

namespace detail {

// splitmix64 finalizer; full 64-bit avalanche
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// uniform in (0, 1]; counter-based, keyed by (seed, counter)
inline double uniform_open(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t h = mix64(mix64(seed) ^ mix64(counter * 0xda942042e4dd58b5ull + 1));
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace detail

// One standard-normal draw per sample index, reproducible in isolation:
// shard a sample loop any way you like and the stream does not change.
inline double standard_normal_at(std::uint64_t seed, std::uint64_t index) {
    const double u1 = detail::uniform_open(seed, 2 * index);
    const double u2 = detail::uniform_open(seed, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct CorridorStats {
    double sigmaSample = 0.0;        // Monte Carlo sample standard deviation
    double halfWidth1e = 0.0;        // located 1/e half-width of the weight
    double predictedDeltaPhi = 0.0;  // sqrt(2/(eps*dv))
    double sigmaTrue = 0.0;          // Gaussian sigma of the weight density, 1/sqrt(eps*dv)
    long long nSamples = 0;
    std::int64_t seed = 0;
};

// Locate the dphi where the weight crosses 1/e by bisection on the monotone
// decay; deliberately does not evaluate the closed-form width.
inline double locate_half_width_1e(double epsilon, const VolumeElement& dv) {
    const double target = std::exp(-1.0);
    double lo = 0.0;
    double hi = 1.0;
    while (weight_small_volume(epsilon, hi, dv) > target) hi *= 2.0;
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-16 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (weight_small_volume(epsilon, mid, dv) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Draw dphi from the normalized weight density (a centered Gaussian with
// sigma = 1/sqrt(eps*dv)) and report the measured and predicted widths.
// Deterministic for fixed (seed, nSamples).
inline CorridorStats sample_corridor(double epsilon, const VolumeElement& dv, long long nSamples,
                                     std::int64_t seed) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("sample_corridor: epsilon must be > 0");
    validate_volume(dv);
    if (nSamples < 10'000)
        throw std::invalid_argument("sample_corridor: need at least 1e4 samples");

    const double sigma = 1.0 / std::sqrt(epsilon * dv.dv);
    const std::uint64_t key = static_cast<std::uint64_t>(seed);

    double sum = 0.0, sumSq = 0.0;
    for (long long i = 0; i < nSamples; ++i) {
        const double x = sigma * standard_normal_at(key, static_cast<std::uint64_t>(i));
        sum += x;
        sumSq += x * x;
    }
    const double mean = sum / static_cast<double>(nSamples);
    const double variance =
        (sumSq - static_cast<double>(nSamples) * mean * mean) / static_cast<double>(nSamples - 1);

    CorridorStats stats;
    stats.sigmaSample = std::sqrt(variance);
    stats.halfWidth1e = locate_half_width_1e(epsilon, dv);
    stats.predictedDeltaPhi = delta_phi_formula(epsilon, dv);
    stats.sigmaTrue = sigma;
    stats.nSamples = nSamples;
    stats.seed = seed;
    return stats;
}

}  // namespace cqft

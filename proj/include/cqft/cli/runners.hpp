#pragma once

// Experiment drivers: each walks its config's parameter grid in a fixed
// order, runs the corresponding library checks, and returns tidy rows.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cqft/cli/config.hpp"
#include "cqft/cli/rows.hpp"
#include "cqft/corridor.hpp"
#include "cqft/equivalence.hpp"
#include "cqft/gaussian.hpp"
#include "cqft/lattice.hpp"
#include "cqft/spectral.hpp"

namespace cqft::cli {

namespace detail_run {

inline std::string dims_label(const std::vector<int>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += 'x';
        out += std::to_string(dims[i]);
    }
    return out;
}

// center draws are keyed by (seed, draw, site) only, so an epsilon sweep
// reuses the same centers
inline Vector draw_center(const EquivalenceConfig& c, int siteCount, int draw) {
    Vector v(siteCount);
    if (c.centerMode == CenterMode::constant) {
        v.setConstant(c.centerValue);
        return v;
    }
    const auto key = static_cast<std::uint64_t>(c.seed);
    for (int site = 0; site < siteCount; ++site) {
        const std::uint64_t counter =
            static_cast<std::uint64_t>(draw) * static_cast<std::uint64_t>(siteCount) +
            static_cast<std::uint64_t>(site);
        const double u = cqft::detail::uniform_open(key, counter);
        v[site] = c.centerMin + (c.centerMax - c.centerMin) * u;
    }
    return v;
}

}  // namespace detail_run

inline std::vector<ResultRow> run_equivalence(const EquivalenceConfig& c) {
    const LatticeSpec lattice = build_lattice(c.dims, c.spacing);
    const std::string dims = detail_run::dims_label(c.dims);
    std::vector<ResultRow> rows;
    for (double eps : c.epsilons) {
        for (int draw = 0; draw < c.draws; ++draw) {
            const ClassicalField center(lattice,
                                        detail_run::draw_center(c, lattice.siteCount, draw));
            const EquivalenceReport rep =
                equivalence_check(lattice, ModelParams{c.mass, eps}, center);
            ResultRow row;
            row.add("experiment", std::string("equivalence"))
                .add("dims", dims)
                .add("spacing", c.spacing)
                .add("mass", c.mass)
                .add("epsilon", eps)
                .add("draw", draw)
                .add("log_z_source", rep.lhs)
                .add("log_z_mensky", rep.rhs);
            row.gap = rep.absGap;
            row.tolerance = 1e-10 * std::max(1.0, std::abs(rep.lhs));
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline std::vector<ResultRow> run_propagator(const PropagatorConfig& c) {
    std::vector<ResultRow> rows;
    for (double eps : c.epsilons) {
        for (int i = 0; i < c.tCount; ++i) {
            const double t =
                c.tCount == 1 ? c.tMin : c.tMin + (c.tMax - c.tMin) * i / (c.tCount - 1);
            const SpectralQuery q{c.omega_k, eps, t};
            const PropagatorSample res = omega_integral_residue(q);
            const PropagatorSample app = omega_integral_approx(q);

            const bool direct = std::abs(t) <= kQuadratureMaxAbsTime;
            // beyond the quadrature policy the closed form is the value
            const Complex quadValue =
                direct ? omega_integral_quadrature(q, c.tol).value : res.value;

            ResultRow row;
            row.add("experiment", std::string("propagator"))
                .add("omega_k", c.omega_k)
                .add("epsilon", eps)
                .add("t", t)
                .add("method", std::string(direct ? "quadrature" : "residue-only"))
                .add("value_quad", quadValue)
                .add("value_residue", res.value)
                .add("value_approx", app.value)
                .add("gap_quad_residue", std::abs(quadValue - res.value))
                .add("gap_approx_residue", std::abs(app.value - res.value));
            row.gap = std::abs(quadValue - res.value);
            row.tolerance = c.tol;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline std::vector<ResultRow> run_lifetime(const LifetimeConfig& c) {
    std::vector<ResultRow> rows;
    auto addCheck = [&](const std::string& check, double eps, double gamma, double value,
                        double expected, double tolerance) {
        ResultRow row;
        row.add("experiment", std::string("lifetime"))
            .add("check", check)
            .add("mass", c.mass)
            .add("omega_k", c.omega_k)
            .add("epsilon", eps)
            .add("gamma", gamma)
            .add("value", value)
            .add("expected", expected);
        row.gap = std::abs(value - expected);
        row.tolerance = tolerance;
        rows.push_back(std::move(row));
    };

    for (double eps : c.epsilons) {
        std::vector<SpectralQuery> grid;
        for (int i = 0; i < c.tCount; ++i)
            grid.push_back({c.omega_k, eps, c.tMin + (c.tMax - c.tMin) * i / (c.tCount - 1)});

        const DecayFit fitApprox = fit_decay_envelope(grid, PropagatorMethod::approx);
        addCheck("envelope_rate_approx", eps, 1.0, fitApprox.rate, eps / (2.0 * c.omega_k), 1e-10);

        const DecayFit fitResidue = fit_decay_envelope(grid, PropagatorMethod::residue);
        const double rootRate = std::sqrt(Complex(c.omega_k * c.omega_k, eps)).imag();
        addCheck("envelope_rate_residue", eps, 1.0, fitResidue.rate, rootRate, 1e-8);

        for (double gamma : c.gammas) {
            const LifetimeResult boosted = lifetime_boosted(c.mass, eps, gamma);
            addCheck("tau_rest", eps, gamma, boosted.tauRest, 4.0 * c.mass / eps,
                     1e-12 * boosted.tauRest);
            addCheck("tau_dilation", eps, gamma, boosted.tau, gamma * boosted.tauRest,
                     1e-12 * boosted.tau);
            addCheck("tau_vs_mode_frequency", eps, gamma, boosted.tau,
                     lifetime(gamma * c.mass, eps), 1e-12 * boosted.tau);
        }
    }
    return rows;
}

inline std::vector<ResultRow> run_corridor(const CorridorConfig& c) {
    std::vector<ResultRow> rows;
    auto addCheck = [&](const std::string& check, double dv, double value, double expected,
                        double tolerance) {
        ResultRow row;
        row.add("experiment", std::string("corridor"))
            .add("check", check)
            .add("epsilon", c.epsilon)
            .add("dv", dv)
            .add("n_samples", static_cast<long long>(c.nSamples))
            .add("seed", static_cast<long long>(c.seed))
            .add("value", value)
            .add("expected", expected);
        row.gap = std::abs(value - expected);
        row.tolerance = tolerance;
        rows.push_back(std::move(row));
    };

    const double dv0 = c.dvs.front();
    for (double dv : c.dvs) {
        const CorridorStats stats = sample_corridor(c.epsilon, {dv}, c.nSamples, c.seed);
        const double band = 3.0 * stats.sigmaTrue / std::sqrt(2.0 * static_cast<double>(c.nSamples));

        addCheck("half_width_1e", dv, stats.halfWidth1e, stats.predictedDeltaPhi,
                 1e-10 * stats.predictedDeltaPhi);
        addCheck("mc_sigma", dv, stats.sigmaSample, stats.sigmaTrue, band);
        addCheck("sqrt2_factor", dv, stats.predictedDeltaPhi,
                 std::sqrt(2.0) * stats.sigmaSample, std::sqrt(2.0) * band);
        const double tau = 4.0 * c.mass / c.epsilon;
        addCheck("lifetime_substitution", dv, delta_phi_from_lifetime(tau, c.mass, {dv}),
                 delta_phi_formula(c.epsilon, {dv}), 1e-14 * stats.predictedDeltaPhi);
        addCheck("dv_scaling", dv,
                 delta_phi_formula(c.epsilon, {dv}) * std::sqrt(dv / dv0),
                 delta_phi_formula(c.epsilon, {dv0}),
                 1e-12 * delta_phi_formula(c.epsilon, {dv0}));
    }
    return rows;
}

}  // namespace cqft::cli

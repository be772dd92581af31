#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "cqft/spectral.hpp"

using namespace cqft;
using std::numbers::pi;

namespace {

std::vector<SpectralQuery> time_grid(double omega_k, double epsilon, double t0, double t1, int n) {
    std::vector<SpectralQuery> grid;
    for (int k = 0; k < n; ++k)
        grid.push_back({omega_k, epsilon, t0 + (t1 - t0) * k / (n - 1)});
    return grid;
}

}  // namespace

TEST_CASE("gauss-kronrod engine: known integrals") {
    auto sine = [](double x) { return Complex(std::sin(x), 0.0); };
    const auto a = cqft::detail::integrate_adaptive(sine, 0.0, pi, 1e-12);
    CHECK(std::abs(a.value - 2.0) <= 1e-12);

    // full turns of e^{ix} cancel exactly; panel cap keeps the estimate honest
    auto phase = [](double x) { return std::exp(Complex(0.0, x)); };
    const auto b = cqft::detail::integrate_adaptive(phase, 0.0, 40.0 * pi, 1e-10, {}, 20000, 1.0);
    CHECK(std::abs(b.value) <= 1e-10);

    // Lorentzian spike at a seeded breakpoint
    auto spike = [](double x) { return Complex(1.0 / ((x - 3.0) * (x - 3.0) + 1e-6), 0.0); };
    const auto c = cqft::detail::integrate_adaptive(spike, 0.0, 6.0, 1e-9, {3.0});
    const double exact = 2.0 * std::atan(3.0 / 1e-3) / 1e-3;
    CHECK(std::abs(c.value.real() - exact) <= 1e-6 * exact);

    // refinement budget exhausts on an unresolvable tolerance
    CHECK_THROWS_AS(cqft::detail::integrate_adaptive(spike, 0.0, 6.0, 1e-30, {}, 16),
                    std::runtime_error);
}

TEST_CASE("residue: t = 0 specialization") {
    const PropagatorSample s = omega_integral_residue({1.0, 0.1, 0.0});
    const Complex expected = pi * Complex(0.0, 1.0) / std::sqrt(Complex(1.0, 0.1));
    CHECK(std::abs(s.value - expected) <= 1e-15);
}

TEST_CASE("residue: small-epsilon limit approaches pi*i*e^{i}") {
    const PropagatorSample s = omega_integral_residue({1.0, 1e-12, 1.0});
    const Complex expected = pi * Complex(0.0, 1.0) * std::exp(Complex(0.0, 1.0));
    CHECK(std::abs(s.value - expected) <= 1e-9);
}

TEST_CASE("residue: magnitude decays with the square root's imaginary part") {
    // Im sqrt(1 + 0.1i) = sqrt((|z| - Re z)/2) = 0.04993777... (hand value 0.049938)
    const double imRoot = std::sqrt((std::abs(Complex(1.0, 0.1)) - 1.0) / 2.0);
    CHECK(imRoot == doctest::Approx(0.049938).epsilon(1e-5));
    const PropagatorSample s = omega_integral_residue({1.0, 0.1, 10.0});
    const double expected = pi / std::abs(std::sqrt(Complex(1.0, 0.1))) * std::exp(-10.0 * imRoot);
    CHECK(std::abs(s.value) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("residue: even in time, exactly") {
    for (double t : {0.3, 2.0, 17.5}) {
        const PropagatorSample plus = omega_integral_residue({1.4, 0.2, t});
        const PropagatorSample minus = omega_integral_residue({1.4, 0.2, -t});
        CHECK(plus.value == minus.value);
    }
}

TEST_CASE("quadrature: matches the closed form on the worked queries") {
    const double tol = 1e-6;
    for (const SpectralQuery q : {SpectralQuery{1.0, 0.1, 0.0}, {1.0, 0.1, 5.0},
                                  {2.0, 0.05, -3.0}}) {
        const PropagatorSample quad = omega_integral_quadrature(q, tol);
        const PropagatorSample res = omega_integral_residue(q);
        CHECK(std::abs(quad.value - res.value) <= tol);
    }
}

TEST_CASE("quadrature: tight tolerance still verifies") {
    const SpectralQuery q{1.3, 0.25, 7.5};
    const PropagatorSample quad = omega_integral_quadrature(q, 1e-8);
    const PropagatorSample res = omega_integral_residue(q);
    CHECK(std::abs(quad.value - res.value) <= 1e-8);
}

TEST_CASE("quadrature: 30 random queries against the closed form") {
    std::mt19937 rng(6021023);
    std::uniform_real_distribution<double> wkDraw(0.5, 3.0);
    std::uniform_real_distribution<double> epsDraw(0.01, 0.5);
    std::uniform_real_distribution<double> tDraw(-20.0, 20.0);
    for (int k = 0; k < 30; ++k) {
        const SpectralQuery q{wkDraw(rng), epsDraw(rng), tDraw(rng)};
        const PropagatorSample quad = omega_integral_quadrature(q, 1e-6);
        const PropagatorSample res = omega_integral_residue(q);
        CHECK(std::abs(quad.value - res.value) <= 1e-6);
    }
}

TEST_CASE("quadrature: policy and tolerance validation") {
    CHECK_THROWS_AS(omega_integral_quadrature({1.0, 0.1, 60.0}, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(omega_integral_quadrature({1.0, 0.1, 1.0}, 1e-2), std::invalid_argument);
    CHECK_THROWS_AS(omega_integral_quadrature({1.0, 0.1, 1.0}, 1e-11), std::invalid_argument);
    CHECK_THROWS_AS(omega_integral_quadrature({0.0, 0.1, 1.0}, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(omega_integral_quadrature({1.0, -0.1, 1.0}, 1e-6), std::invalid_argument);
}

TEST_CASE("approx: coincides with the closed form at t = 0") {
    const PropagatorSample a = omega_integral_approx({2.0, 0.3, 0.0});
    const PropagatorSample r = omega_integral_residue({2.0, 0.3, 0.0});
    CHECK(a.value == r.value);
}

TEST_CASE("approx: gap to the closed form shrinks as epsilon^2") {
    auto gap = [](double omega_k, double eps, double t) {
        return std::abs(omega_integral_approx({omega_k, eps, t}).value -
                        omega_integral_residue({omega_k, eps, t}).value);
    };
    // worked pair
    const double ratio = gap(1.0, 0.1, 1.0) / gap(1.0, 0.05, 1.0);
    CHECK(ratio >= 2.5);
    CHECK(ratio <= 5.5);

    // successive halvings once eps <= 0.1 * omega_k^2
    const double wk = 1.2, t = 3.4;
    const double eps0 = 0.9 * 0.1 * wk * wk;
    const double r1 = gap(wk, eps0, t) / gap(wk, eps0 / 2.0, t);
    const double r2 = gap(wk, eps0 / 2.0, t) / gap(wk, eps0 / 4.0, t);
    for (double r : {r1, r2}) {
        CHECK(r >= 3.0);
        CHECK(r <= 5.5);
    }
}

TEST_CASE("fit_decay_envelope: closed-form samples return the exact root rate") {
    const auto grid = time_grid(1.0, 0.1, 1.0, 40.0, 40);
    const DecayFit fit = fit_decay_envelope(grid, PropagatorMethod::residue);
    const double expected = std::sqrt(Complex(1.0, 0.1)).imag();
    CHECK(std::abs(fit.rate - expected) <= 1e-8);
    CHECK(fit.residual <= 1e-10);
}

TEST_CASE("fit_decay_envelope: expanded samples return eps/(2 omega_k)") {
    const auto grid = time_grid(1.0, 0.1, 1.0, 40.0, 40);
    const DecayFit fit = fit_decay_envelope(grid, PropagatorMethod::approx);
    CHECK(std::abs(fit.rate - 0.05) <= 1e-10);

    // doubling epsilon doubles the envelope rate
    const auto grid2 = time_grid(1.0, 0.2, 1.0, 40.0, 40);
    const DecayFit fit2 = fit_decay_envelope(grid2, PropagatorMethod::approx);
    CHECK(std::abs(fit2.rate - 2.0 * fit.rate) <= 1e-10);
}

TEST_CASE("fit_decay_envelope: input validation") {
    CHECK_THROWS_AS(fit_decay_envelope(time_grid(1.0, 0.1, 1.0, 10.0, 5),
                                       PropagatorMethod::residue),
                    std::invalid_argument);
    std::vector<SpectralQuery> flat(10, SpectralQuery{1.0, 0.1, 3.0});
    CHECK_THROWS_AS(fit_decay_envelope(flat, PropagatorMethod::residue), std::invalid_argument);
    auto mixed = time_grid(1.0, 0.1, 1.0, 10.0, 10);
    mixed[3].omega_k = 2.0;
    CHECK_THROWS_AS(fit_decay_envelope(mixed, PropagatorMethod::residue), std::invalid_argument);
}

TEST_CASE("lifetime: worked values and the 1/e reading") {
    CHECK(lifetime(1.0, 0.01) == doctest::Approx(400.0).epsilon(1e-15));
    CHECK(lifetime(5.0, 0.1) == doctest::Approx(200.0).epsilon(1e-15));
    // tau is twice the per-direction 1/e time of e^{-eps|t|/(2 w_k)}
    const double omega_k = 1.7, eps = 0.04;
    const double oneOverE = 2.0 * omega_k / eps;
    CHECK(lifetime(omega_k, eps) == doctest::Approx(2.0 * oneOverE).epsilon(1e-15));
    CHECK_THROWS_AS(lifetime(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(lifetime(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("lifetime_boosted: rest frame, dilation, and cross-check") {
    const LifetimeResult rest = lifetime_boosted(1.0, 0.01, 1.0);
    CHECK(rest.tau == rest.tauRest);
    CHECK(rest.tauRest == doctest::Approx(400.0).epsilon(1e-15));

    const LifetimeResult boosted = lifetime_boosted(1.0, 0.01, 2.0);
    CHECK(boosted.tauRest == doctest::Approx(400.0).epsilon(1e-15));
    CHECK(boosted.tau == doctest::Approx(800.0).epsilon(1e-15));

    const LifetimeResult moving = lifetime_boosted(0.5, 0.02, 3.0);
    CHECK(moving.tau == doctest::Approx(300.0).epsilon(1e-15));
    CHECK(moving.tau == doctest::Approx(lifetime(3.0 * 0.5, 0.02)).epsilon(1e-12));

    CHECK_THROWS_AS(lifetime_boosted(1.0, 0.01, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(lifetime_boosted(0.0, 0.01, 1.0), std::invalid_argument);
}

TEST_CASE("lifetime: scaling identities") {
    const double m = 0.8, eps = 0.05;
    for (double gamma : {1.0, 1.5, 4.0}) {
        CHECK(std::abs(lifetime(gamma * m, eps) - gamma * lifetime(m, eps)) <=
              1e-12 * lifetime(gamma * m, eps));
    }
    CHECK(std::abs(lifetime(m, 2.0 * eps) - 0.5 * lifetime(m, eps)) <= 1e-12 * lifetime(m, eps));
}

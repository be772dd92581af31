#pragma once

// Single-mode frequency integral of the regulated propagator,
//
//   I(t) = integral dw  e^{-i w t} / (w^2 - w_k^2 - i*eps),
//
// evaluated three ways: direct real-axis quadrature, the exact contour-closure
// closed form
//
//   I(t) = (pi*i / sqrt(w_k^2 + i*eps)) * e^{ i |t| sqrt(w_k^2 + i*eps) },
//
// and the small-eps expansion of its exponent,
//
//   I(t) ~ (pi*i / sqrt(w_k^2 + i*eps)) * e^{ i w_k |t| } * e^{ -eps |t| / (2 w_k) },
//
// whose gap to the closed form shrinks as eps^2.  The principal square root
// (positive real part) is used everywhere; for eps > 0 its imaginary part is
// positive, producing decay for both time signs.  Plus the decay-envelope fit
// and the lifetime bookkeeping tau = 4 w_k / eps built on top.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cqft/detail/gauss_kronrod.hpp"

namespace cqft {

using Complex = std::complex<double>;

struct SpectralQuery {
    double omega_k = 0.0;  // mode frequency, > 0
    double epsilon = 0.0;  // regulator, > 0
    double t = 0.0;        // time, either sign
};

inline void validate_query(const SpectralQuery& q) {
    if (!(q.omega_k > 0.0) || !std::isfinite(q.omega_k))
        throw std::invalid_argument("SpectralQuery: omega_k must be > 0");
    if (!(q.epsilon > 0.0) || !std::isfinite(q.epsilon))
        throw std::invalid_argument("SpectralQuery: epsilon must be > 0");
    if (!std::isfinite(q.t)) throw std::invalid_argument("SpectralQuery: t must be finite");
}

enum class PropagatorMethod { quadrature, residue, approx };

struct PropagatorSample {
    SpectralQuery query;
    Complex value;
    PropagatorMethod method = PropagatorMethod::residue;
};

// Direct quadrature gives up beyond this |t|; the closed form stays exact.
inline constexpr double kQuadratureMaxAbsTime = 50.0;

// Exact closed form, valid for both time signs through |t|.
inline PropagatorSample omega_integral_residue(const SpectralQuery& q) {
    validate_query(q);
    const Complex root = std::sqrt(Complex(q.omega_k * q.omega_k, q.epsilon));
    const Complex i(0.0, 1.0);
    const Complex value = std::numbers::pi * i / root * std::exp(i * root * std::abs(q.t));
    return PropagatorSample{q, value, PropagatorMethod::residue};
}

// Expanded-exponent form; prefactor kept exact, only the exponent expanded.
inline PropagatorSample omega_integral_approx(const SpectralQuery& q) {
    validate_query(q);
    const Complex root = std::sqrt(Complex(q.omega_k * q.omega_k, q.epsilon));
    const Complex i(0.0, 1.0);
    const double at = std::abs(q.t);
    const Complex value = std::numbers::pi * i / root *
                          std::exp(i * q.omega_k * at - q.epsilon * at / (2.0 * q.omega_k));
    return PropagatorSample{q, value, PropagatorMethod::approx};
}

// Real-axis quadrature.  The pole pair sits at +-sqrt(w_k^2 + i*eps), a
// distance ~eps/(2 w_k) off the axis, so the integrand peaks near w = w_k at
// height ~1/eps; adaptive refinement resolves it.  The slow 1/w^2 falloff is
// handled by subtracting two Lorentzian references with known transforms,
//
//   1/(w^2+s^2)        ->  (pi/s) e^{-s|t|}
//   1/(w^2+s^2)^2      ->  (pi/(2 s^3)) (1 + s|t|) e^{-s|t|}
//
// which leaves a remainder decaying like w^{-6}:
//
//   r(w) = (s^2+c2)^2 / ((w^2-c2)(w^2+s^2)^2),   c2 = w_k^2 + i*eps.
//
// The cutoff Omega is chosen so the analytic remainder-tail bound is below
// tol/2; the leading tail term is then added back explicitly.  The subtracted
// path never touches the contour-closure closed form, so the two stay
// independent checks of each other.
inline PropagatorSample omega_integral_quadrature(const SpectralQuery& q, double tol) {
    validate_query(q);
    if (!(tol >= 1e-10 && tol <= 1e-3))
        throw std::invalid_argument("omega_integral_quadrature: tol out of [1e-10, 1e-3]");
    if (std::abs(q.t) > kQuadratureMaxAbsTime)
        throw std::invalid_argument(
            "omega_integral_quadrature: |t| beyond direct-quadrature policy; use the closed form");

    const double wk = q.omega_k;
    const Complex c2(wk * wk, q.epsilon);
    const double s = wk + 1.0;
    const Complex s2pc2 = s * s + c2;
    const double at = std::abs(q.t);

    // remainder tail bound: |r| <= (4/3)|s^2+c2|^2 / w^6 once w >= Omega0
    const double omega0 = std::max({2.0 * std::sqrt(std::abs(c2)), 2.0 * s, 5.0});
    const double bound = 16.0 / 15.0 * std::norm(s2pc2) / tol;  // Omega^5 target
    const double omega = std::max(omega0, std::pow(bound, 0.2));

    auto remainder = [&](double w) -> Complex {
        const double w2 = w * w;
        const double lorentz = w2 + s * s;
        return s2pc2 * s2pc2 / ((w2 - c2) * (lorentz * lorentz));
    };
    auto integrand = [&](double w) -> Complex { return 2.0 * std::cos(w * q.t) * remainder(w); };

    // Panels shrink geometrically toward the pole so its ~eps/(2 w_k)-wide
    // peak cannot slip between quadrature nodes of a wide panel; the number
    // of extra panels grows only like log(1/eps).
    std::vector<double> breakpoints;
    for (double b : {0.5 * wk, wk - 1.0, wk, wk + 1.0, 2.0 * wk + 2.0})
        if (b > 0.0 && b < omega) breakpoints.push_back(b);
    const double poleHalfWidth = q.epsilon / (2.0 * wk);
    for (double radius = poleHalfWidth; radius < 1.0; radius *= 2.0) {
        for (double b : {wk - radius, wk + radius})
            if (b > 0.0 && b < omega) breakpoints.push_back(b);
    }

    // seed panels no wider than half an oscillation period
    const double maxPanel = std::numbers::pi / std::max(std::abs(q.t), 0.5);
    const int budget = std::max(40000, 8 * static_cast<int>(omega / maxPanel + 1.0));
    const detail::QuadratureResult quad =
        detail::integrate_adaptive(integrand, 0.0, omega, 0.4 * tol, breakpoints, budget, maxPanel);

    // analytic transforms of the subtracted Lorentzians
    const double pi = std::numbers::pi;
    const Complex lorentzPart = pi / s * std::exp(-s * at) +
                                s2pc2 * pi / (2.0 * s * s * s) * (1.0 + s * at) * std::exp(-s * at);

    // leading tail term of the remainder integral beyond Omega
    Complex tailCorrection;
    if (at * omega <= 1.0) {
        tailCorrection = 2.0 * s2pc2 * s2pc2 / (5.0 * std::pow(omega, 5));
    } else {
        tailCorrection =
            2.0 * s2pc2 * s2pc2 * (-std::sin(omega * q.t) / (q.t * std::pow(omega, 6)));
    }

    return PropagatorSample{q, quad.value + lorentzPart + tailCorrection,
                            PropagatorMethod::quadrature};
}

inline PropagatorSample evaluate_propagator(const SpectralQuery& q, PropagatorMethod method,
                                            double tol = 1e-8) {
    switch (method) {
        case PropagatorMethod::quadrature: return omega_integral_quadrature(q, tol);
        case PropagatorMethod::residue: return omega_integral_residue(q);
        case PropagatorMethod::approx: return omega_integral_approx(q);
    }
    throw std::logic_error("evaluate_propagator: unknown method");
}

// Exponential envelope rate of |value| over |t|, by least squares on
// log|value| = intercept - rate * |t|.
struct DecayFit {
    double rate = 0.0;      // fitted decay rate, > 0
    double residual = 0.0;  // RMS residual of the log-linear fit
};

inline DecayFit fit_decay_envelope(const std::vector<SpectralQuery>& grid,
                                   PropagatorMethod method, double tol = 1e-8) {
    if (grid.size() < 8)
        throw std::invalid_argument("fit_decay_envelope: need at least 8 samples");
    for (const SpectralQuery& q : grid) {
        validate_query(q);
        if (std::abs(q.omega_k - grid.front().omega_k) > 1e-12 ||
            std::abs(q.epsilon - grid.front().epsilon) > 1e-12)
            throw std::invalid_argument("fit_decay_envelope: grid must share omega_k and epsilon");
    }

    const std::size_t n = grid.size();
    double minT = std::abs(grid.front().t), maxT = minT;
    std::vector<double> absT(n), logMag(n);
    for (std::size_t k = 0; k < n; ++k) {
        absT[k] = std::abs(grid[k].t);
        minT = std::min(minT, absT[k]);
        maxT = std::max(maxT, absT[k]);
        logMag[k] = std::log(std::abs(evaluate_propagator(grid[k], method, tol).value));
    }
    if (!(maxT > minT)) throw std::invalid_argument("fit_decay_envelope: degenerate t-grid");

    // ordinary least squares for slope/intercept
    double sumT = 0.0, sumY = 0.0, sumTT = 0.0, sumTY = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sumT += absT[k];
        sumY += logMag[k];
        sumTT += absT[k] * absT[k];
        sumTY += absT[k] * logMag[k];
    }
    const double denom = n * sumTT - sumT * sumT;
    const double slope = (n * sumTY - sumT * sumY) / denom;
    const double intercept = (sumY - slope * sumT) / n;

    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = logMag[k] - (intercept + slope * absT[k]);
        ss += r * r;
    }
    const double rate = -slope;
    if (!(rate > 0.0)) throw std::domain_error("fit_decay_envelope: nonpositive fitted rate");
    return DecayFit{rate, std::sqrt(ss / n)};
}

// Lifetime bookkeeping: 1/e amplitude time of the envelope e^{-eps|t|/2 w_k}
// is 2 w_k / eps per time direction; both directions give tau = 4 w_k / eps.
inline double lifetime(double omega_k, double epsilon) {
    if (!(omega_k > 0.0) || !(epsilon > 0.0))
        throw std::invalid_argument("lifetime: inputs must be positive");
    return 4.0 * omega_k / epsilon;
}

struct LifetimeResult {
    double tau = 0.0;
    double tauRest = 0.0;
    double gamma = 1.0;
};

// tau_rest = 4 m / eps in the rest frame; time dilation with omega_k = gamma*m
// gives tau = gamma * tau_rest = 4 omega_k / eps.
inline LifetimeResult lifetime_boosted(double mass, double epsilon, double gamma) {
    if (!(mass > 0.0) || !(epsilon > 0.0))
        throw std::invalid_argument("lifetime_boosted: mass and epsilon must be positive");
    if (!(gamma >= 1.0)) throw std::invalid_argument("lifetime_boosted: gamma must be >= 1");
    const double tauRest = 4.0 * mass / epsilon;
    return LifetimeResult{gamma * tauRest, tauRest, gamma};
}

}  // namespace cqft

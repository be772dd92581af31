#pragma once

// Test-only oracles. These deliberately avoid the library's evaluation paths
// (LU solves, spectral log-determinants, closed-form contour results) so a
// bug there cannot hide behind a matching bug here.

#include <complex>
#include <functional>
#include <vector>

#include "cqft/detail/gauss_kronrod.hpp"

namespace oracles {

using Complex = std::complex<double>;

// integral over the real line of exp(-(a/2) phi^2 + b phi), by direct
// quadrature on a window wide enough that the Gaussian tail is negligible
inline Complex gaussian_integral_1d(Complex a, Complex b, double absTol = 1e-11) {
    const double decay = a.real();  // must be > 0 for convergence
    const double sigma = 1.0 / std::sqrt(decay);
    const double shift = std::abs(b) / decay;
    const double window = shift + 14.0 * sigma;
    auto f = [&](double phi) { return std::exp(-0.5 * a * phi * phi + b * phi); };
    return cqft::detail::integrate_adaptive(f, -window, window, absTol, {0.0}, 200000).value;
}

// log( I(b) / I(0) ) for the same integrand; the measure factor cancels
inline Complex log_gaussian_ratio_1d(Complex a, Complex b) {
    return std::log(gaussian_integral_1d(a, b) / gaussian_integral_1d(a, 0.0));
}

// integral over the real line of exp(E(phi)) for a caller-supplied 1-D
// exponent with decaying real part; decayScale sets the window
inline Complex exponent_integral_1d(const std::function<Complex(double)>& exponent,
                                    double decayScale, double center = 0.0,
                                    double absTol = 1e-11) {
    const double window = 14.0 / std::sqrt(decayScale);
    auto f = [&](double phi) { return std::exp(exponent(phi)); };
    return cqft::detail::integrate_adaptive(f, center - window, center + window, absTol, {center},
                                            200000)
        .value;
}

// n-th order central difference of g along the given source sites at J = 0,
// with two Richardson levels (leading error O(h^6)); used on Z itself to
// recover moments independently of the Wick pairing code
template <typename Fn>
Complex central_moment_derivative(Fn&& g, int latticeSites, const std::vector<int>& sites,
                                  double h) {
    auto stencil = [&](double step) {
        const int n = static_cast<int>(sites.size());
        Complex acc = 0.0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<Complex> j(static_cast<std::size_t>(latticeSites), Complex(0.0));
            int parity = 0;
            for (int k = 0; k < n; ++k) {
                const bool minus = (mask >> k) & 1u;
                parity ^= static_cast<int>(minus);
                j[static_cast<std::size_t>(sites[k])] += minus ? -step : step;
            }
            const Complex term = g(j);
            acc += (parity ? -term : term);
        }
        double denom = 1.0;
        for (int k = 0; k < n; ++k) denom *= 2.0 * step;
        return acc / denom;
    };
    const Complex d1 = stencil(h);
    const Complex d2 = stencil(h / 2.0);
    const Complex d4 = stencil(h / 4.0);
    const Complex r1 = (4.0 * d2 - d1) / 3.0;
    const Complex r2 = (4.0 * d4 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

}  // namespace oracles

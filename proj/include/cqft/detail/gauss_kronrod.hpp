#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature for complex-valued integrands on
// a real interval.  Refinement always splits the segment carrying the largest
// error estimate; convergence is declared on the summed absolute error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace cqft::detail {

// QUADPACK dqk15 nodes and weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct QuadratureResult {
    std::complex<double> value;
    double error = 0.0;
    int segments = 0;
};

template <typename Fn>
void gk15(Fn&& f, double a, double b, std::complex<double>& value, double& error) {
    const double center = 0.5 * (a + b);
    const double halfLength = 0.5 * (b - a);

    std::complex<double> resultGauss = 0.0;
    std::complex<double> resultKronrod = 0.0;

    const std::complex<double> fc = f(center);
    resultKronrod = kKronrodWeights[7] * fc;
    resultGauss = kGaussWeights[3] * fc;

    for (int j = 0; j < 7; ++j) {
        const double dx = halfLength * kKronrodNodes[j];
        const std::complex<double> fsum = f(center - dx) + f(center + dx);
        resultKronrod += kKronrodWeights[j] * fsum;
        if (j % 2 == 1) resultGauss += kGaussWeights[j / 2] * fsum;
    }
    value = resultKronrod * halfLength;
    error = std::abs(resultKronrod - resultGauss) * halfLength;
}

// Integrate f over [a, b] to absolute tolerance absTol.  breakpoints seeds the
// initial partition (useful when a sharp feature's location is known);
// maxInitialWidth caps the seed panel width.  For oscillatory integrands the
// cap must stay below half a wavelength: on wider panels the Gauss and
// Kronrod rules can alias to the same wrong value, the error estimate
// collapses, and the panel is never refined.
template <typename Fn>
QuadratureResult integrate_adaptive(Fn&& f, double a, double b, double absTol,
                                    std::vector<double> breakpoints = {},
                                    int maxSegments = 20000, double maxInitialWidth = 0.0) {
    struct Segment {
        double a, b, error;
        std::complex<double> value;
        bool operator<(const Segment& o) const { return error < o.error; }
    };

    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    std::priority_queue<Segment> queue;
    std::complex<double> total = 0.0;
    double totalError = 0.0;
    int count = 0;

    auto push = [&](double lo, double hi) {
        Segment s{lo, hi, 0.0, 0.0};
        gk15(f, lo, hi, s.value, s.error);
        total += s.value;
        totalError += s.error;
        queue.push(s);
        ++count;
    };

    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        if (breakpoints[k] < a || breakpoints[k + 1] > b) continue;
        const double width = breakpoints[k + 1] - breakpoints[k];
        int pieces = 1;
        if (maxInitialWidth > 0.0 && width > maxInitialWidth)
            pieces = static_cast<int>(std::ceil(width / maxInitialWidth));
        for (int p = 0; p < pieces; ++p)
            push(breakpoints[k] + width * p / pieces, breakpoints[k] + width * (p + 1) / pieces);
    }

    while (totalError > absTol) {
        if (count >= maxSegments)
            throw std::runtime_error("integrate_adaptive: refinement budget exhausted");
        Segment worst = queue.top();
        queue.pop();
        total -= worst.value;
        totalError -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw std::runtime_error("integrate_adaptive: interval collapsed below precision");
        push(worst.a, mid);
        push(mid, worst.b);
    }

    return QuadratureResult{total, totalError, count};
}

}  // namespace cqft::detail

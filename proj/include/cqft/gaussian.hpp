#pragma once

// Exact evaluation of the complex Gaussian path integral on a lattice kernel:
//
//   Z(J) = integral of exp( -(1/2) phi^T A phi + b^T phi ),  b = -i*dv*J,
//   log Z(J) = logZ0 + (1/2) b^T A^{-1} b,   logZ0 = -(1/2) log det A,
//
// with the (2*pi)^{N/2} measure constant dropped; every reported quantity is a
// difference or derivative in which it cancels.  log det A is defined as the
// sum of principal logs of the eigenvalues of A.  A = dv*(eps*I - i*(K+m^2 I))
// is normal with every eigenvalue in the open right half-plane, so each
// principal log is smooth and the convention is unambiguous.
//
// Derivatives are taken with respect to the sitewise value J(x); a different
// convention rescales the two-point function by powers of dv only.

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cqft/lattice.hpp"

namespace cqft {

// Two-point function D(x1,x2) = d^2 log Z / dJ(x1) dJ(x2) at J = 0.
struct PropagatorValue {
    int x1 = 0;
    int x2 = 0;
    Complex value;
};

// Sitewise source shift f(J) = c * J^2 added to the Lagrangian density.
struct SourceShift {
    Complex coefficient;  // c

    Complex apply(Complex j) const { return coefficient * j * j; }
    Complex secondDerivativeAtZero() const { return 2.0 * coefficient; }
};

// Central finite-difference estimate with Richardson extrapolation.
struct FdDerivative {
    Complex value;
    double error = 0.0;  // |D(h/2) - D(h)|/3, the extrapolation defect
};

class GaussianEvaluation {
  public:
    explicit GaussianEvaluation(ComplexKernel kernel)
        : kernel_(std::move(kernel)), lu_(kernel_.matrix) {
        const int n = kernel_.lattice.siteCount;
        const double dv = kernel_.volumeElement;
        const double eps = kernel_.params.epsilon;
        const double m = kernel_.params.mass;

        // log det A from the real spectral decomposition of K + m^2 I:
        // eigenvalues of A are dv*(eps - i*sigma_j), sigma_j >= 0.
        Matrix s = build_laplacian(kernel_.lattice) + m * m * Matrix::Identity(n, n);
        Eigen::SelfAdjointEigenSolver<Matrix> es(s);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("GaussianEvaluation: eigensolver failed");
        Complex logDet = 0.0;
        for (int j = 0; j < n; ++j)
            logDet += std::log(dv * Complex(eps, -es.eigenvalues()[j]));
        logZ0_ = -0.5 * logDet;

        // Cache A^{-1}, symmetrized so D(x1,x2) = D(x2,x1) holds exactly.
        inverse_ = lu_.inverse();
        inverse_ = 0.5 * (inverse_ + inverse_.transpose()).eval();
        inverseNorm1_ = inverse_.cwiseAbs().colwise().sum().maxCoeff();
    }

    const ComplexKernel& kernel() const { return kernel_; }
    Complex logZ0() const { return logZ0_; }
    double inverseNorm1() const { return inverseNorm1_; }

    // Apply A^{-1} through the LU factorization.
    ComplexVector solve(const ComplexVector& v) const {
        if (v.size() != kernel_.matrix.rows())
            throw std::invalid_argument("GaussianEvaluation::solve: size mismatch");
        return lu_.solve(v);
    }

    Complex inverseEntry(int row, int col) const { return inverse_(row, col); }

  private:
    ComplexKernel kernel_;
    Eigen::PartialPivLU<ComplexMatrix> lu_;
    Complex logZ0_;
    ComplexMatrix inverse_;
    double inverseNorm1_ = 0.0;
};

// log Z(J) - log Z(0) is exactly quadratic in J; the b = -i*dv*J bookkeeping
// lives here and nowhere else.
inline Complex log_partition(const GaussianEvaluation& eval, const SourceField& source) {
    if (!source.lattice.sameGeometry(eval.kernel().lattice))
        throw std::invalid_argument("log_partition: source on different lattice");
    const Complex minusI(0.0, -1.0);
    const ComplexVector b = minusI * eval.kernel().volumeElement * source.values;
    const ComplexVector x = eval.solve(b);
    // unconjugated bilinear form b^T A^{-1} b: A is symmetric, not Hermitian
    const Complex quad = b.cwiseProduct(x).sum();
    return eval.logZ0() + 0.5 * quad;
}

inline PropagatorValue two_point(const GaussianEvaluation& eval, int x1, int x2) {
    const int n = eval.kernel().lattice.siteCount;
    if (x1 < 0 || x1 >= n || x2 < 0 || x2 >= n)
        throw std::out_of_range("two_point: site index out of range");
    const double dv = eval.kernel().volumeElement;
    // (-i*dv)^2 (A^{-1})[x1][x2]
    return PropagatorValue{x1, x2, -dv * dv * eval.inverseEntry(x1, x2)};
}

namespace detail {

// Composed central-difference stencil for mixed partials of g(J) at J = 0:
// product over sites of [g(.+h e_s) - g(.-h e_s)]/(2h), repeated sites allowed.
template <typename Fn>
Complex central_difference(Fn&& g, const LatticeSpec& lattice,
                           const std::vector<int>& sites, double h) {
    const int n = static_cast<int>(sites.size());
    Complex acc = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        ComplexVector j = ComplexVector::Zero(lattice.siteCount);
        int parity = 0;
        for (int k = 0; k < n; ++k) {
            const bool minus = (mask >> k) & 1u;
            parity ^= static_cast<int>(minus);
            j[sites[k]] += minus ? -h : h;
        }
        const Complex term = g(j);
        acc += (parity ? -term : term);
    }
    double denom = 1.0;
    for (int k = 0; k < n; ++k) denom *= 2.0 * h;
    return acc / denom;
}

}  // namespace detail

// Independent derivative oracle: central differences of log Z at J = 0 with
// Richardson extrapolation over {h, h/2}.  log Z is exactly quadratic, so the
// extrapolation guards against cancellation noise only.
inline FdDerivative fd_derivative(const GaussianEvaluation& eval,
                                  const std::vector<int>& sites, double step = 0.0) {
    if (sites.empty() || sites.size() > 4)
        throw std::invalid_argument("fd_derivative: need 1-4 sites");
    const int n = eval.kernel().lattice.siteCount;
    for (int s : sites)
        if (s < 0 || s >= n) throw std::out_of_range("fd_derivative: site out of range");

    double h = step;
    if (h == 0.0) {
        // default: scale against the kernel's response so the quadratic term
        // stays well above rounding
        h = 1e-3 * std::max(1.0, 1.0 / eval.inverseNorm1());
    }
    if (!(h > 1e-8)) throw std::invalid_argument("fd_derivative: degenerate step");

    auto g = [&](const ComplexVector& j) {
        return log_partition(eval, SourceField(eval.kernel().lattice, j));
    };
    const Complex coarse = detail::central_difference(g, eval.kernel().lattice, sites, h);
    const Complex fine = detail::central_difference(g, eval.kernel().lattice, sites, h / 2.0);
    const Complex richardson = fine + (fine - coarse) / 3.0;
    return FdDerivative{richardson, std::abs(fine - coarse) / 3.0};
}

// Gaussian n-point function: sum over perfect pairings of two-point values.
// Odd n vanishes identically; n > 8 is rejected (the pairing count grows as
// (n-1)!! and larger orders have no use here).
inline Complex wick_n_point(const GaussianEvaluation& eval, const std::vector<int>& sites) {
    const int n = static_cast<int>(sites.size());
    if (n > 8) throw std::invalid_argument("wick_n_point: order above 8 not supported");
    const int nsites = eval.kernel().lattice.siteCount;
    for (int s : sites)
        if (s < 0 || s >= nsites) throw std::out_of_range("wick_n_point: site out of range");
    if (n % 2 == 1) return 0.0;
    if (n == 0) return 1.0;

    std::vector<int> remaining(sites);
    // pair the first element with each partner, recurse on the rest
    auto pairings = [&](auto&& self, std::vector<int>& rem) -> Complex {
        if (rem.empty()) return 1.0;
        const int first = rem.front();
        Complex total = 0.0;
        for (std::size_t k = 1; k < rem.size(); ++k) {
            const int partner = rem[k];
            std::vector<int> rest;
            rest.reserve(rem.size() - 2);
            for (std::size_t i = 1; i < rem.size(); ++i)
                if (i != k) rest.push_back(rem[i]);
            total += two_point(eval, first, partner).value * self(self, rest);
        }
        return total;
    };
    return pairings(pairings, remaining);
}

}  // namespace cqft

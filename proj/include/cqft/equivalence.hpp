#pragma once

// The corridor/source equivalence chain: sitewise source shifts, completing
// the square, the Mensky-weighted partition function, and the check that
//
//   log Z(J = -i*eps*phi_cl) + dv/(2*eps) * sum_x J(x)^2
//     == log Z_M(alpha = eps, phi_cl)
//
// holds to machine precision.  The two sides are computed through independent
// code paths: the left through the kernel factorization of GaussianEvaluation,
// the right through direct assembly of the weighted exponent with its own
// eigendecomposition and solver, so the identity is never tested against
// itself.
//
// Sign bookkeeping, pinned by the pointwise exponent identity test: with the
// convergent exponent convention used throughout (corridor term enters as
// -(eps*dv/2) phi^T phi), the square completes as
//
//   -(eps*dv/2) phi^2 - i*dv*J*phi
//     = -(eps*dv/2) (phi + iJ/eps)^2 - dv/(2*eps) J^2,
//
// so the additive shift is +dv/(2*eps) J^2 per site, i.e. f(J) = -i J^2/(2*eps)
// in the i*dv*f(J) convention, and the completed square centers on -iJ/eps.
// For purely imaginary J both center signs give the same partition value (the
// exponent is even in the pair (phi, center)), so complete_square reports the
// center +iJ/eps that round-trips with source_from_classical.

#include <cmath>
#include <complex>

#include "cqft/gaussian.hpp"
#include "cqft/lattice.hpp"

namespace cqft {

// Inverse squared corridor width; a constant of the model, not a lab scale.
struct CorridorParams {
    double alpha = 0.0;
};

inline void validate_corridor(const CorridorParams& p) {
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
        throw std::invalid_argument("CorridorParams: alpha must be > 0");
}

// Gaussian weight exp(-(alpha*dv/2) sum_x (phi - phi_cl)^2) attached to the
// path integral; the center stays real.
struct MenskyWeight {
    CorridorParams params;
    ClassicalField center;
};

// log Z'(J) for the shifted Lagrangian L + f(J): adds i*dv*sum_x f(J(x)).
// A sitewise shift only moves same-site second derivatives of log Z, by
// exactly i*dv*f''(0); mixed derivatives at distinct sites are untouched.
inline Complex shifted_log_partition(const GaussianEvaluation& eval, const SourceField& source,
                                     const SourceShift& shift) {
    if (!source.lattice.sameGeometry(eval.kernel().lattice))
        throw std::invalid_argument("shifted_log_partition: source on different lattice");
    Complex sum = 0.0;
    for (Eigen::Index x = 0; x < source.values.size(); ++x)
        sum += shift.apply(source.values[x]);
    const Complex i(0.0, 1.0);
    return log_partition(eval, source) + i * eval.kernel().volumeElement * sum;
}

// The additive constant that completes the square: dv/(2*eps) * sum_x J(x)^2.
inline Complex completed_square_shift(const ModelParams& params, const SourceField& source) {
    validate_params(params);
    Complex sum = 0.0;
    for (Eigen::Index x = 0; x < source.values.size(); ++x)
        sum += source.values[x] * source.values[x];
    return source.lattice.volumeElement() / (2.0 * params.epsilon) * sum;
}

// J = -i*eps*phi_cl.
inline SourceField source_from_classical(const ModelParams& params, const ClassicalField& center) {
    validate_params(params);
    ComplexVector j(center.values.size());
    const Complex minusIEps(0.0, -params.epsilon);
    for (Eigen::Index x = 0; x < center.values.size(); ++x)
        j[x] = minusIEps * center.values[x];
    return SourceField(center.lattice, std::move(j));
}

// Reads off alpha = eps and phi_cl = i*J/eps.  Rejects sources with a real
// part, which would force a complex center.
inline MenskyWeight complete_square(const ModelParams& params, const SourceField& source) {
    validate_params(params);
    Vector center(source.values.size());
    for (Eigen::Index x = 0; x < source.values.size(); ++x) {
        const Complex c = Complex(0.0, 1.0) * source.values[x] / params.epsilon;
        if (std::abs(c.imag()) > 1e-12)
            throw std::invalid_argument(
                "complete_square: source must be purely imaginary (real center required)");
        center[x] = c.real();
    }
    return MenskyWeight{CorridorParams{params.epsilon},
                        ClassicalField(source.lattice, std::move(center))};
}

// Action exponent of the sourced theory at a field configuration:
// -(1/2) phi^T A phi + b^T phi with b = -i*dv*J.
inline Complex action_exponent(const ComplexKernel& kernel, const SourceField& source,
                               const FieldConfiguration& phi) {
    const ComplexVector phiC = phi.values.cast<Complex>();
    const Complex quad = phiC.cwiseProduct(kernel.matrix * phiC).sum();
    const ComplexVector b =
        Complex(0.0, -1.0) * kernel.volumeElement * source.values;
    return -0.5 * quad + b.cwiseProduct(phiC).sum();
}

// Mensky exponent at a field configuration, evaluated link-by-link without
// any matrix assembly: i*dv*(1/2)(phi^T K phi + m^2 phi^2) - (alpha*dv/2)(phi-phi_cl)^2.
inline Complex mensky_exponent(const LatticeSpec& lattice, double mass, const MenskyWeight& weight,
                               const FieldConfiguration& phi) {
    validate_corridor(weight.params);
    if (!phi.lattice.sameGeometry(lattice) || !weight.center.lattice.sameGeometry(lattice))
        throw std::invalid_argument("mensky_exponent: lattice mismatch");
    const double dv = lattice.volumeElement();
    const double inv_a2 = 1.0 / (lattice.spacing * lattice.spacing);

    double kinetic = 0.0;
    for (const Link& ln : lattice.links) {
        const double d = phi.values[ln.a] - phi.values[ln.b];
        kinetic += d * d * inv_a2;
    }
    const double massTerm = mass * mass * phi.values.squaredNorm();
    const double corridor = (phi.values - weight.center.values).squaredNorm();
    return Complex(0.0, 0.5 * dv * (kinetic + massTerm)) -
           0.5 * weight.params.alpha * dv * corridor;
}

// Exact Gaussian evaluation of the Mensky-weighted partition function.  Same
// log-det and measure conventions as log_partition, but computed through its
// own pipeline: entrywise assembly of the exponent matrix from the links, a
// complex eigendecomposition for the log determinant (every eigenvalue has
// real part alpha*dv > 0, so principal logs sum without branch ambiguity),
// and a QR solve for the completed square.
inline Complex mensky_log_partition(const LatticeSpec& lattice, double mass,
                                    const MenskyWeight& weight) {
    validate_corridor(weight.params);
    if (!(mass >= 0.0)) throw std::invalid_argument("mensky_log_partition: mass must be >= 0");
    if (!weight.center.lattice.sameGeometry(lattice))
        throw std::invalid_argument("mensky_log_partition: center on different lattice");

    const int n = lattice.siteCount;
    const double dv = lattice.volumeElement();
    const double alpha = weight.params.alpha;
    const double inv_a2 = 1.0 / (lattice.spacing * lattice.spacing);
    const Complex i(0.0, 1.0);

    // quadratic coefficient M of -(1/2) phi^T M phi, straight from the exponent
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int x = 0; x < n; ++x) m(x, x) = alpha * dv - i * dv * mass * mass;
    for (const Link& ln : lattice.links) {
        m(ln.a, ln.a) += -i * dv * inv_a2;
        m(ln.b, ln.b) += -i * dv * inv_a2;
        m(ln.a, ln.b) += i * dv * inv_a2;
        m(ln.b, ln.a) += i * dv * inv_a2;
    }

    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("mensky_log_partition: eigensolver failed");
    Complex logDet = 0.0;
    for (int k = 0; k < n; ++k) logDet += std::log(es.eigenvalues()[k]);

    const ComplexVector c = (alpha * dv) * weight.center.values.cast<Complex>();
    const ComplexVector x = m.householderQr().solve(c);
    const Complex quad = c.cwiseProduct(x).sum();
    const double constTerm = -0.5 * alpha * dv * weight.center.values.squaredNorm();

    return -0.5 * logDet + 0.5 * quad + constTerm;
}

struct EquivalenceReport {
    Complex lhs;
    Complex rhs;
    double absGap = 0.0;
};

// The headline identity, both sides through independent pipelines.
inline EquivalenceReport equivalence_check(const LatticeSpec& lattice, const ModelParams& params,
                                           const ClassicalField& center) {
    validate_params(params);
    const GaussianEvaluation eval(build_kernel(lattice, params));
    const SourceField j = source_from_classical(params, center);
    const Complex lhs = log_partition(eval, j) + completed_square_shift(params, j);

    const MenskyWeight weight{CorridorParams{params.epsilon}, center};
    const Complex rhs = mensky_log_partition(lattice, params.mass, weight);

    return EquivalenceReport{lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace cqft

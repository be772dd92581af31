#pragma once

// Finite periodic hypercubic lattices (1-4 axes) and the complex quadratic
// kernel of the discretized free-field action exponent,
//
//   E(phi) = i*dv*( (1/2) phi^T (K + m^2) phi - J^T phi ) - (eps*dv/2) phi^T phi
//          = -(1/2) phi^T A phi + b^T phi,
//
// with A = -i*dv*(K + m^2 I) + eps*dv*I and b = -i*dv*J.  Re(A) = eps*dv*I is
// positive definite for eps > 0, which is the convergence condition for every
// Gaussian integral evaluated downstream.  Natural units, hbar = c = 1.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cqft {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

// One nearest-neighbor link. Periodic wrap on a length-2 axis produces the
// same unordered pair twice; the doubled multiplicity is intentional.
struct Link {
    int a = 0;
    int b = 0;
};

struct LatticeSpec {
    std::vector<int> dims;  // sites per axis, row-major indexing, axis 0 slowest
    double spacing = 1.0;   // lattice constant a
    int siteCount = 0;
    std::vector<Link> links;

    int axes() const { return static_cast<int>(dims.size()); }

    // d-dimensional cell volume a^d
    double volumeElement() const {
        double dv = 1.0;
        for (int k = 0; k < axes(); ++k) dv *= spacing;
        return dv;
    }

    bool sameGeometry(const LatticeSpec& other) const {
        return dims == other.dims && spacing == other.spacing;
    }

    int siteIndex(const std::vector<int>& coords) const {
        if (static_cast<int>(coords.size()) != axes())
            throw std::invalid_argument("siteIndex: coordinate rank mismatch");
        int idx = 0;
        for (int k = 0; k < axes(); ++k) {
            int c = coords[k];
            if (c < 0 || c >= dims[k])
                throw std::out_of_range("siteIndex: coordinate out of range");
            idx = idx * dims[k] + c;
        }
        return idx;
    }

    std::vector<int> siteCoords(int index) const {
        if (index < 0 || index >= siteCount)
            throw std::out_of_range("siteCoords: index out of range");
        std::vector<int> coords(axes());
        for (int k = axes() - 1; k >= 0; --k) {
            coords[k] = index % dims[k];
            index /= dims[k];
        }
        return coords;
    }
};

struct ModelParams {
    double mass = 0.0;     // m >= 0
    double epsilon = 0.0;  // eps > 0, keeps A invertible and the weight normalizable
};

inline void validate_params(const ModelParams& p) {
    if (!(p.epsilon > 0.0))
        throw std::invalid_argument("ModelParams: epsilon must be > 0");
    if (!(p.mass >= 0.0))
        throw std::invalid_argument("ModelParams: mass must be >= 0");
    if (!std::isfinite(p.mass) || !std::isfinite(p.epsilon))
        throw std::invalid_argument("ModelParams: mass/epsilon must be finite");
}

namespace detail {

inline void check_values_finite(const char* what, const Eigen::Ref<const Vector>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

inline void check_values_finite(const char* what, const Eigen::Ref<const ComplexVector>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace detail

// Real field phi on lattice sites.
struct FieldConfiguration {
    LatticeSpec lattice;
    Vector values;

    FieldConfiguration(LatticeSpec lat, Vector vals)
        : lattice(std::move(lat)), values(std::move(vals)) {
        if (values.size() != lattice.siteCount)
            throw std::invalid_argument("FieldConfiguration: length mismatch with lattice");
        detail::check_values_finite("FieldConfiguration", values);
    }
};

// Complex source J on lattice sites. Imaginary entries are allowed; the
// corridor identification below needs them.
struct SourceField {
    LatticeSpec lattice;
    ComplexVector values;

    SourceField(LatticeSpec lat, ComplexVector vals)
        : lattice(std::move(lat)), values(std::move(vals)) {
        if (values.size() != lattice.siteCount)
            throw std::invalid_argument("SourceField: length mismatch with lattice");
        detail::check_values_finite("SourceField", values);
    }
};

// Real corridor center phi_cl; kept real by construction.
struct ClassicalField {
    LatticeSpec lattice;
    Vector values;

    ClassicalField(LatticeSpec lat, Vector vals)
        : lattice(std::move(lat)), values(std::move(vals)) {
        if (values.size() != lattice.siteCount)
            throw std::invalid_argument("ClassicalField: length mismatch with lattice");
        detail::check_values_finite("ClassicalField", values);
    }
};

// Quadratic form of the action exponent. Complex symmetric (A = A^T), not
// Hermitian; Re(A) = eps*dv*I exactly.
struct ComplexKernel {
    LatticeSpec lattice;
    ModelParams params;
    ComplexMatrix matrix;
    double volumeElement = 1.0;
};

inline LatticeSpec build_lattice(const std::vector<int>& dims, double spacing) {
    if (dims.empty() || dims.size() > 4)
        throw std::invalid_argument("build_lattice: need 1-4 axes");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw std::invalid_argument("build_lattice: spacing must be > 0");

    LatticeSpec spec;
    spec.dims = dims;
    spec.spacing = spacing;

    std::int64_t n = 1;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("build_lattice: every dim must be >= 1");
        n *= d;
        if (n > 1'000'000) throw std::invalid_argument("build_lattice: lattice too large");
    }
    spec.siteCount = static_cast<int>(n);

    // One forward link per (site, axis); axes of length 1 carry no links
    // (the wrap neighbor is the site itself and the difference cancels).
    for (int site = 0; site < spec.siteCount; ++site) {
        std::vector<int> coords = spec.siteCoords(site);
        for (int k = 0; k < spec.axes(); ++k) {
            if (spec.dims[k] < 2) continue;
            std::vector<int> nb = coords;
            nb[k] = (nb[k] + 1) % spec.dims[k];
            spec.links.push_back({site, spec.siteIndex(nb)});
        }
    }
    return spec;
}

// Nearest-neighbor second-difference Laplacian, periodic boundaries.
// K[x][x] = (#links at x)/a^2, K[x][y] = -(link multiplicity x-y)/a^2.
// Symmetric, zero row sums, positive semidefinite with spectrum in [0, 4d/a^2].
inline Matrix build_laplacian(const LatticeSpec& lattice) {
    const int n = lattice.siteCount;
    const double w = 1.0 / (lattice.spacing * lattice.spacing);
    Matrix k = Matrix::Zero(n, n);
    for (const Link& ln : lattice.links) {
        k(ln.a, ln.a) += w;
        k(ln.b, ln.b) += w;
        k(ln.a, ln.b) -= w;
        k(ln.b, ln.a) -= w;
    }
    return k;
}

inline ComplexKernel build_kernel(const LatticeSpec& lattice, const ModelParams& params) {
    validate_params(params);
    const double dv = lattice.volumeElement();
    const Matrix klat = build_laplacian(lattice);
    const int n = lattice.siteCount;

    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    a.real() = Matrix::Identity(n, n) * (params.epsilon * dv);
    a.imag() = -dv * (klat + params.mass * params.mass * Matrix::Identity(n, n));

    return ComplexKernel{lattice, params, std::move(a), dv};
}

}  // namespace cqft

#include "dilkit/contraction.hpp"

#include <cmath>

namespace dilkit {

namespace {

// Square root of a defect operator 1 - A*A. The contraction precondition
// bounds its spectrum below by roughly -2 eq_tol independently of the
// defect's own magnitude, so negatives are clamped on that absolute scale
// rather than through the relative PSD floor of sqrt_psd.
ComplexMatrix defect_sqrt(const ComplexMatrix& m, const Tolerance& tol) {
    HermitianEigen eig = hermitian_eigensystem(m);
    const std::size_t n = m.rows();
    const double top = n == 0 ? 0.0 : std::max(0.0, eig.eigenvalues.back());
    const double floor = -8.0 * tol.eq_tol * (1.0 + top);
    if (n > 0 && eig.eigenvalues.front() < floor)
        throw PreconditionError("defect operator has eigenvalue " +
                                std::to_string(eig.eigenvalues.front()) +
                                "; the argument is not a contraction");
    const double cutoff = tol.rank_tol * top;
    ComplexMatrix root(n, n);
    if (top <= tol.eq_tol) return root;  // defect vanishes at tolerance
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = eig.eigenvalues[k] <= cutoff ? 0.0 : eig.eigenvalues[k];
        if (lambda == 0.0) continue;
        const double s = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                root(i, j) += s * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return root;
}

}  // namespace

void require_contraction(const ComplexMatrix& a, const Tolerance& tol) {
    if (!a.is_square())
        throw DimensionError("contraction must be square, got " + shape_string(a));
    const double norm = operator_norm(a);
    if (norm > 1.0 + tol.eq_tol)
        throw PreconditionError("operator norm " + std::to_string(norm) + " exceeds 1");
}

ComplexMatrix halmos_dilate(const ComplexMatrix& a, const Tolerance& tol) {
    require_contraction(a, tol);
    const std::size_t n = a.rows();
    ComplexMatrix a_adj = adjoint(a);
    ComplexMatrix eye = ComplexMatrix::identity(n);
    ComplexMatrix defect = defect_sqrt(eye - a_adj * a, tol);      // D_A
    ComplexMatrix defect_adj = defect_sqrt(eye - a * a_adj, tol);  // D_{A*}
    ComplexMatrix u(2 * n, 2 * n);
    set_block(u, 0, 0, a);
    set_block(u, 0, n, defect_adj);
    set_block(u, n, 0, defect);
    set_block(u, n, n, -a_adj);
    const double unitarity = max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(2 * n));
    if (unitarity > tol.eq_tol)
        throw Error("halmos_dilate: construction failed unitarity check (residual " +
                    std::to_string(unitarity) + ")");
    return u;
}

PowerDilation sznagy_finite(const ComplexMatrix& a, std::size_t horizon, const Tolerance& tol) {
    require_contraction(a, tol);
    if (horizon < 1) throw PreconditionError("sznagy_finite requires horizon >= 1");
    const std::size_t n = a.rows();
    const std::size_t blocks = horizon + 1;
    ComplexMatrix eye = ComplexMatrix::identity(n);
    ComplexMatrix a_adj = adjoint(a);
    ComplexMatrix defect = defect_sqrt(eye - a_adj * a, tol);
    ComplexMatrix defect_adj = defect_sqrt(eye - a * a_adj, tol);

    // First block row (A, 0, ..., 0, D_{A*}), second (D_A, 0, ..., 0, -A*),
    // the remaining rows an identity shift. Unitarity rests on the
    // intertwining A D_A = D_{A*} A, which is checked below rather than
    // trusted.
    PowerDilation out;
    out.horizon = horizon;
    out.block = n;
    out.U = ComplexMatrix(blocks * n, blocks * n);
    set_block(out.U, 0, 0, a);
    set_block(out.U, 0, (blocks - 1) * n, defect_adj);
    set_block(out.U, n, 0, defect);
    set_block(out.U, n, (blocks - 1) * n, -a_adj);
    for (std::size_t j = 2; j < blocks; ++j) set_block(out.U, j * n, (j - 1) * n, eye);

    const double intertwining = max_abs_diff(a * defect, defect_adj * a);
    const double unitarity =
        max_abs_diff(adjoint(out.U) * out.U, ComplexMatrix::identity(blocks * n));
    if (intertwining > tol.eq_tol || unitarity > tol.eq_tol)
        throw Error("sznagy_finite: construction failed unitarity check (residual " +
                    std::to_string(std::max(intertwining, unitarity)) + ")");
    return out;
}

ComplexMatrix power_compression(const PowerDilation& d, std::size_t m) {
    return get_block(matrix_power(d.U, m), 0, 0, d.block, d.block);
}

ComplexMatrix polynomial_at(const ComplexMatrix& a, const std::vector<Complex>& coeffs) {
    if (!a.is_square()) throw DimensionError("polynomial_at expects a square matrix");
    const std::size_t n = a.rows();
    if (coeffs.empty()) return ComplexMatrix(n, n);
    ComplexMatrix result = ComplexMatrix::identity(n) * coeffs.back();
    for (std::size_t j = coeffs.size() - 1; j-- > 0;)
        result = result * a + ComplexMatrix::identity(n) * coeffs[j];
    return result;
}

Complex polynomial_at(Complex z, const std::vector<Complex>& coeffs) {
    Complex result = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) result = result * z + coeffs[j];
    return result;
}

VonNeumannReport von_neumann_check(const ComplexMatrix& a, const std::vector<Complex>& poly,
                                   std::size_t grid, const Tolerance& tol) {
    require_contraction(a, tol);
    if (poly.empty()) throw PreconditionError("von_neumann_check: empty polynomial");
    const std::size_t degree = poly.size() - 1;
    if (grid < 4 * (degree + 1))
        throw PreconditionError("grid size " + std::to_string(grid) +
                                " is below 4*(degree+1) = " + std::to_string(4 * (degree + 1)));

    VonNeumannReport report;
    report.lhs = operator_norm(polynomial_at(a, poly));
    for (std::size_t j = 0; j < grid; ++j) {
        const double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(grid);
        const Complex z(std::cos(theta), std::sin(theta));
        report.rhs = std::max(report.rhs, std::abs(polynomial_at(z, poly)));
    }
    // |f'| <= sum_k k |a_k| on the circle; the farthest boundary point sits
    // at arc distance pi/grid from its nearest sample.
    double lipschitz = 0.0;
    for (std::size_t k = 1; k <= degree; ++k)
        lipschitz += static_cast<double>(k) * std::abs(poly[k]);
    report.slack = lipschitz * M_PI / static_cast<double>(grid);
    report.margin = report.rhs + report.slack - report.lhs;
    report.holds = report.margin >= -tol.eq_tol * (1.0 + report.rhs);
    return report;
}

std::size_t RationalMatrixFunction::size() const {
    return numerator.empty() ? 0 : numerator.front().rows();
}

void RationalMatrixFunction::validate() const {
    if (numerator.empty()) throw PreconditionError("rational function has no numerator");
    const std::size_t s = numerator.front().rows();
    for (const auto& c : numerator)
        if (c.rows() != s || c.cols() != s)
            throw DimensionError("numerator coefficient has shape " + shape_string(c));
    bool nonzero = false;
    for (const auto& c : denominator)
        if (c != Complex(0.0, 0.0)) nonzero = true;
    if (denominator.empty() || !nonzero)
        throw PreconditionError("rational function has a zero denominator");
}

RationalMatrixFunction RationalMatrixFunction::polynomial(const std::vector<Complex>& coeffs) {
    RationalMatrixFunction f;
    for (const Complex& c : coeffs) f.numerator.push_back(ComplexMatrix{{c}});
    f.denominator = {Complex(1.0, 0.0)};
    return f;
}

ComplexMatrix rational_at(const RationalMatrixFunction& f, Complex z) {
    f.validate();
    const std::size_t s = f.size();
    ComplexMatrix num(s, s);
    for (std::size_t j = f.numerator.size(); j-- > 0;) num = num * z + f.numerator[j];
    const Complex den = polynomial_at(z, f.denominator);
    if (std::abs(den) == 0.0)
        throw PreconditionError("rational function evaluated at a pole");
    return num * (Complex(1.0, 0.0) / den);
}

namespace {

std::vector<Complex> derivative_coeffs(const std::vector<Complex>& coeffs) {
    std::vector<Complex> out;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        out.push_back(coeffs[k] * Complex(static_cast<double>(k), 0.0));
    if (out.empty()) out.push_back(Complex(0.0, 0.0));
    return out;
}

std::vector<ComplexMatrix> derivative_coeffs(const std::vector<ComplexMatrix>& coeffs,
                                             std::size_t s) {
    std::vector<ComplexMatrix> out;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        out.push_back(coeffs[k] * Complex(static_cast<double>(k), 0.0));
    if (out.empty()) out.push_back(ComplexMatrix(s, s));
    return out;
}

// d/dz [N(z)/q(z)] = (N'(z) q(z) - N(z) q'(z)) / q(z)^2
ComplexMatrix rational_derivative_at(const RationalMatrixFunction& f, Complex z) {
    const std::size_t s = f.size();
    ComplexMatrix num(s, s);
    for (std::size_t j = f.numerator.size(); j-- > 0;) num = num * z + f.numerator[j];
    ComplexMatrix dnum(s, s);
    auto dn = derivative_coeffs(f.numerator, s);
    for (std::size_t j = dn.size(); j-- > 0;) dnum = dnum * z + dn[j];
    const Complex den = polynomial_at(z, f.denominator);
    const Complex dden = polynomial_at(z, derivative_coeffs(f.denominator));
    return (dnum * den - num * dden) * (Complex(1.0, 0.0) / (den * den));
}

}  // namespace

ComplexMatrix eval_rational_matrix(const RationalMatrixFunction& f, const ComplexMatrix& a,
                                   const Tolerance& tol, double* denom_cond) {
    f.validate();
    if (!a.is_square()) throw DimensionError("eval_rational_matrix expects a square matrix");
    const std::size_t n = a.rows();
    const std::size_t s = f.size();

    std::vector<Complex> spectrum = general_eigenvalues(a);
    for (const Complex& pole : f.poles)
        for (const Complex& lambda : spectrum)
            if (std::abs(lambda - pole) <= 1e3 * tol.eq_tol * (1.0 + std::abs(pole)))
                throw PreconditionError("declared pole meets the spectrum of the argument");

    ComplexMatrix den = polynomial_at(a, f.denominator);
    double cond = 0.0;
    ComplexMatrix den_inv = inverse(den, &cond);
    if (denom_cond) *denom_cond = cond;

    // Horner on the tensored numerator: coefficients kron(N_j, 1) against
    // powers of kron(1, A).
    ComplexMatrix eye_n = ComplexMatrix::identity(n);
    ComplexMatrix x = kron(ComplexMatrix::identity(s), a);
    ComplexMatrix result = kron(f.numerator.back(), eye_n);
    for (std::size_t j = f.numerator.size() - 1; j-- > 0;)
        result = result * x + kron(f.numerator[j], eye_n);
    return result * kron(ComplexMatrix::identity(s), den_inv);
}

std::vector<SpectralReport> complete_spectral_check(
    const ComplexMatrix& a, const std::vector<Complex>& boundary_samples,
    const std::vector<RationalMatrixFunction>& funcs, const Tolerance& tol) {
    if (!a.is_square()) throw DimensionError("complete_spectral_check expects a square matrix");
    if (boundary_samples.empty())
        throw PreconditionError("complete_spectral_check needs at least one boundary sample");

    double spectral_radius = 0.0;
    for (const Complex& lambda : general_eigenvalues(a))
        spectral_radius = std::max(spectral_radius, std::abs(lambda));
    double sample_radius = 0.0;
    for (const Complex& z : boundary_samples) sample_radius = std::max(sample_radius, std::abs(z));

    // Covering-radius proxy: the largest nearest-neighbor gap among samples.
    double covering = 0.0;
    for (std::size_t i = 0; i < boundary_samples.size(); ++i) {
        double nearest = 0.0;
        bool have = false;
        for (std::size_t j = 0; j < boundary_samples.size(); ++j) {
            if (i == j) continue;
            const double dist = std::abs(boundary_samples[i] - boundary_samples[j]);
            if (!have || dist < nearest) {
                nearest = dist;
                have = true;
            }
        }
        if (have) covering = std::max(covering, nearest);
    }

    std::vector<SpectralReport> reports;
    for (const auto& f : funcs) {
        f.validate();
        for (const Complex& z : boundary_samples)
            if (std::abs(polynomial_at(z, f.denominator)) <=
                tol.eq_tol * (1.0 + std::abs(z)))
                throw PreconditionError("pole collides with a boundary sample");

        SpectralReport report;
        report.spectral_radius = spectral_radius;
        report.sample_radius = sample_radius;
        report.lhs = operator_norm(eval_rational_matrix(f, a, tol, &report.denominator_condition));
        double lipschitz = 0.0;
        for (const Complex& z : boundary_samples) {
            report.boundary_max = std::max(report.boundary_max, operator_norm(rational_at(f, z)));
            lipschitz = std::max(lipschitz, operator_norm(rational_derivative_at(f, z)));
        }
        report.slack = lipschitz * 0.5 * covering;
        report.violation =
            report.lhs > report.boundary_max + report.slack + tol.eq_tol * (1.0 + report.boundary_max);
        reports.push_back(report);
    }
    return reports;
}

std::vector<SpectralReport> spectral_set_check(const ComplexMatrix& a,
                                               const std::vector<Complex>& boundary_samples,
                                               const std::vector<RationalMatrixFunction>& funcs,
                                               const Tolerance& tol) {
    for (const auto& f : funcs)
        if (f.size() != 1)
            throw DimensionError("spectral_set_check expects scalar (1x1) rational functions");
    return complete_spectral_check(a, boundary_samples, funcs, tol);
}

}  // namespace dilkit

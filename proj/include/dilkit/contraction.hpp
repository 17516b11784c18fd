#pragma once

#include "dilkit/linalg.hpp"

namespace dilkit {

/// Throws PreconditionError unless operator_norm(a) <= 1 + eq_tol.
void require_contraction(const ComplexMatrix& a, const Tolerance& tol);

/// One-step unitary dilation [[A, D_{A*}], [D_A, -A*]] on C^{2n} with the
/// defect operators D_A = (1 - A*A)^{1/2}, D_{A*} = (1 - AA*)^{1/2}.
ComplexMatrix halmos_dilate(const ComplexMatrix& a, const Tolerance& tol);

/// Finite-horizon unitary power dilation: the top-left n x n block of U^m
/// equals A^m for 0 <= m <= horizon.
struct PowerDilation {
    std::size_t horizon = 0;
    std::size_t block = 0;  // n; H sits in the first block
    ComplexMatrix U;        // (horizon+1)n x (horizon+1)n
};

/// Explicit (N+1)-block construction; N >= 1. Unitarity and the compression
/// identity are verified at construction.
PowerDilation sznagy_finite(const ComplexMatrix& a, std::size_t horizon, const Tolerance& tol);

/// Compression of U^m to the embedded copy of H.
ComplexMatrix power_compression(const PowerDilation& d, std::size_t m);

/// f(A) for a polynomial with coefficients a_0 + a_1 z + ... (Horner).
ComplexMatrix polynomial_at(const ComplexMatrix& a, const std::vector<Complex>& coeffs);
Complex polynomial_at(Complex z, const std::vector<Complex>& coeffs);

struct VonNeumannReport {
    double lhs = 0.0;    // |f(A)|
    double rhs = 0.0;    // max |f| over the unit-circle grid
    double slack = 0.0;  // Lipschitz cover bound: sum_k k|a_k| * (pi / grid)
    double margin = 0.0; // rhs + slack - lhs
    bool holds = false;
    explicit operator bool() const { return holds; }
};

/// Checks |f(A)| <= max_grid |f| + slack on a uniform unit-circle grid.
/// grid must be at least 4 * (degree + 1).
VonNeumannReport von_neumann_check(const ComplexMatrix& a, const std::vector<Complex>& poly,
                                   std::size_t grid, const Tolerance& tol);

/// Matrix-valued rational function: numerator coefficients N_0..N_p (each
/// s x s) over a scalar polynomial denominator, with declared pole locations.
struct RationalMatrixFunction {
    std::vector<ComplexMatrix> numerator;
    std::vector<Complex> denominator;
    std::vector<Complex> poles;

    std::size_t size() const;  // s
    void validate() const;

    static RationalMatrixFunction polynomial(const std::vector<Complex>& coeffs);
};

/// Value of F at a scalar point (s x s matrix).
ComplexMatrix rational_at(const RationalMatrixFunction& f, Complex z);

/// F(A): numerator coefficients tensored against powers of A, divided by the
/// scalar denominator evaluated at A. If denom_cond is non-null it receives
/// the condition number of the denominator matrix. Throws PreconditionError
/// when the denominator is singular at A or a declared pole meets the
/// spectrum.
ComplexMatrix eval_rational_matrix(const RationalMatrixFunction& f, const ComplexMatrix& a,
                                   const Tolerance& tol, double* denom_cond = nullptr);

struct SpectralReport {
    double lhs = 0.0;            // |F(A)|
    double boundary_max = 0.0;   // max_j |F(z_j)|
    double slack = 0.0;          // derivative estimate x sample covering radius
    bool violation = false;      // lhs > boundary_max + slack (a certificate)
    double spectral_radius = 0.0;
    double sample_radius = 0.0;
    double denominator_condition = 0.0;
    // A non-violation is sampled evidence only, never a proof.
    static constexpr const char* evidence_note =
        "pass is evidence from boundary samples, not a proof";
};

/// Spectral-set test (scalar rational functions) against a sampled boundary.
std::vector<SpectralReport> spectral_set_check(const ComplexMatrix& a,
                                               const std::vector<Complex>& boundary_samples,
                                               const std::vector<RationalMatrixFunction>& funcs,
                                               const Tolerance& tol);

/// Complete spectral-set test: matrix-valued functions, norms at every level.
std::vector<SpectralReport> complete_spectral_check(
    const ComplexMatrix& a, const std::vector<Complex>& boundary_samples,
    const std::vector<RationalMatrixFunction>& funcs, const Tolerance& tol);

}  // namespace dilkit

#pragma once

#include "dilkit/matrix.hpp"

namespace dilkit {

/// Eigensystem of a Hermitian matrix, eigenvalues ascending,
/// vectors(:,k) the unit eigenvector for eigenvalues[k].
struct HermitianEigen {
    std::vector<double> eigenvalues;
    ComplexMatrix vectors;
};

/// Eigensystem of (M + M*)/2. Throws DimensionError on non-square input.
HermitianEigen hermitian_eigensystem(const ComplexMatrix& m);

/// Eigenvalues of a general square matrix (unordered pairs from Eigen,
/// sorted here by real part then imaginary part for determinism).
std::vector<Complex> general_eigenvalues(const ComplexMatrix& m);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

/// Verdict of a PSD test with the minimizing eigenpair as witness.
struct PsdVerdict {
    bool psd = false;
    bool hermitian = false;
    double hermitian_residual = 0.0;  // max |M - M*| entrywise
    double min_eigenvalue = 0.0;      // of the Hermitian part
    ComplexMatrix witness;            // unit eigenvector for min_eigenvalue
    explicit operator bool() const { return psd; }
};

/// True iff m is Hermitian within eq_tol and its minimum eigenvalue is
/// >= -psd_tol * ||m||. Throws DimensionError if m is not square.
PsdVerdict is_psd(const ComplexMatrix& m, const Tolerance& tol);

/// Hermitian PSD square root; throws PreconditionError if m fails is_psd.
ComplexMatrix sqrt_psd(const ComplexMatrix& m, const Tolerance& tol);

/// Rank-revealing factorization of a PSD Gram matrix G: returns F (r x m)
/// with adjoint(F) * F = G and r the numerical rank of G at rank_tol.
/// The rows of F are orthogonal, so F * adjoint(F) is diagonal.
struct GramFactor {
    ComplexMatrix factor;
    std::size_t rank = 0;
};
GramFactor gram_factor(const ComplexMatrix& g, const Tolerance& tol);

/// Columns f_1..f_m in C^r with inner(f_a, f_b) = G(a,b) under the
/// linear-in-first-argument convention; r = numerical rank of G.
/// This is conj(gram_factor(G).factor), packaged once so the convention
/// lives in exactly one place.
struct GramEmbedding {
    ComplexMatrix columns;  // r x m
    std::size_t rank = 0;
};
GramEmbedding embedding_of_gram(const ComplexMatrix& g, const Tolerance& tol);

/// Orthonormal basis of the column span of m (result is n x r with
/// orthonormal columns), rank decided at rank_tol relative to sigma_max.
ComplexMatrix orthonormal_range(const ComplexMatrix& m, const Tolerance& tol);

std::size_t numerical_rank(const ComplexMatrix& m, const Tolerance& tol);

/// Inverse of a square matrix. If cond is non-null it receives the
/// 2-norm condition number. Throws PreconditionError when singular
/// at working precision.
ComplexMatrix inverse(const ComplexMatrix& m, double* cond = nullptr);

/// Unitary polar factor (the isometric part of the polar decomposition).
ComplexMatrix polar_unitary(const ComplexMatrix& m);

/// Given two frames S1, S2 (r x D, full row rank r) with equal Gram
/// matrices S*S, returns the unitary W with W*S1 = S2. Throws
/// PreconditionError when the common Gram has numerical rank != r
/// (the frames do not span) or the frames are incompatible.
ComplexMatrix frame_match_unitary(const ComplexMatrix& s1, const ComplexMatrix& s2,
                                  const Tolerance& tol);

/// Value of the sesquilinear form with coefficient matrix g on coefficient
/// vectors u, v: sum_{a,b} u_a conj(v_b) g(a,b).
Complex sesquilinear(const ComplexMatrix& g, const ComplexMatrix& u, const ComplexMatrix& v);

}  // namespace dilkit

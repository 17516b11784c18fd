#pragma once

#include "dilkit/cpmap.hpp"

namespace dilkit {

/// Finite-outcome positive operator valued measure on C^n.
struct Povm {
    std::size_t n = 0;
    std::vector<ComplexMatrix> effects;
};

struct PovmVerdict {
    bool valid = false;
    std::vector<PsdVerdict> effect_verdicts;  // one per effect
    double sum_residual = 0.0;                // |sum E_i - 1| entrywise max
    explicit operator bool() const { return valid; }
};

/// Checks every effect PSD and the completeness relation sum E_i = 1.
PovmVerdict validate_povm(const Povm& p, const Tolerance& tol);

/// Projective dilation: V : C^n -> C^K_dim isometry and orthogonal
/// projections Q_i with sum Q_i = 1 and adjoint(V) Q_i V = E_i.
struct NaimarkDilation {
    std::size_t K_dim = 0;
    ComplexMatrix V;  // K_dim x n
    std::vector<ComplexMatrix> projections;
};

/// Block construction: stack the sqrt blocks E_i^{1/2}, take coordinate-block
/// projections, then compress to the span of {Q_i V xi}. The reduced
/// dimension is exactly sum_i rank(E_i).
NaimarkDilation naimark_dilate(const Povm& p, const Tolerance& tol);

struct NaimarkReport {
    double compression_residual = 0.0;  // max_i |V* Q_i V - E_i|
    double isometry_residual = 0.0;     // |V*V - 1|
    double pvm_residual = 0.0;          // projection / orthogonality / sum laws
    bool ok = false;
    explicit operator bool() const { return ok; }
};

NaimarkReport verify_naimark(const Povm& p, const NaimarkDilation& d, const Tolerance& tol);

/// The POVM's induced map on M_k (k = number of outcomes):
/// phi(e_pq) = delta_pq E_p, i.e. f -> sum_i f(i) E_i on the diagonal.
MatrixMap povm_induced_map(const Povm& p);

/// Alternative dilation through the Stinespring construction of the induced
/// commutative-algebra map, reduced to the span generated by the diagonal
/// units. Used as an independent cross-check of naimark_dilate.
NaimarkDilation naimark_via_stinespring(const Povm& p, const Tolerance& tol);

/// Unitary W matching two Naimark dilations of the same POVM
/// (W V1 = V2, W Q1_i W* = Q2_i), by Gram matching of generating sets.
ComplexMatrix match_naimark(const NaimarkDilation& d1, const NaimarkDilation& d2,
                            const Tolerance& tol);

}  // namespace dilkit

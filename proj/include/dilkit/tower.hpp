#pragma once

#include "dilkit/cpmap.hpp"

// Finite-horizon reduction, stated up front: no genuine unital
// *-endomorphism dilating a UCP map is constructed here, because on a
// finite-dimensional matrix algebra every unital *-endomorphism is an
// automorphism (a dimension count), which makes a strictly increasing
// projection ladder impossible at fixed finite dimension. What this module
// builds is every finite-horizon consequence of such a dilation: the moment
// compressions phi^k(a) = iota_k* (a (x) 1) iota_k for k <= N, the
// increasing projection ladder Q_0 <= ... <= Q_N, and properness at the cap
// (Q_N = 1).

namespace dilkit {

/// Kraus decomposition from the Choi eigendecomposition:
/// phi(a) = sum_i adjoint(V_i) a V_i with as many operators as the Choi rank.
/// Throws PreconditionError when phi is not completely positive.
std::vector<ComplexMatrix> kraus_of(const MatrixMap& phi, const Tolerance& tol);

/// Unital completely positive endomap of the n x n matrices, carried with a
/// Kraus family. Build through make_ucp so the invariants are checked.
struct UcpMap {
    MatrixMap phi;
    std::vector<ComplexMatrix> kraus;

    std::size_t dim() const { return phi.n(); }
    std::size_t multiplicity() const { return kraus.size(); }
};

/// Validates d = n, complete positivity and unitality (phi(1) = 1,
/// equivalently sum V_i* V_i = 1), then extracts the Kraus family.
UcpMap make_ucp(const MatrixMap& phi, const Tolerance& tol);

/// The per-step Stinespring isometry V : H -> H (x) E with
/// V xi = sum_i (V_i xi) (x) e_i, E of dimension multiplicity().
/// Satisfies V* (a (x) 1_E) V = phi(a).
ComplexMatrix stinespring_isometry(const UcpMap& u);

/// Finite-horizon tower of iterated isometries
///   iota_1 = V,   iota_{k+1} = (iota_k (x) 1_E) o V,
/// with new E factors appended last (the fastest tensor index). Moments
/// phi^k(a) = iota_k* (a (x) 1_{E^k}) iota_k hold for all k <= horizon.
///
/// The append-last order is what makes the ladder increase: range(iota_{k+1})
/// = (iota_k (x) 1_E)(range V) sits inside range(iota_k) (x) E, so
/// iota_{k+1} iota_{k+1}* <= iota_k iota_k* (x) 1_E. Prepending the new
/// factor instead would compare range(iota_{k+1}) against E (x) range(iota_k),
/// an inclusion that already fails for a rank-one V with entangled range;
/// that convention is rejected.
struct DilationTower {
    std::size_t horizon = 0;
    std::size_t n = 0;
    std::size_t E_dim = 0;
    ComplexMatrix V;                   // nE x n
    std::vector<ComplexMatrix> iotas;  // iotas[k-1] = iota_k, k = 1..horizon
    UcpMap map;

    const ComplexMatrix& iota(std::size_t k) const;  // k >= 1
};

/// Builds and verifies the tower. Throws PreconditionError when
/// n * E_dim^horizon would exceed dim_cap (the message reports the required
/// dimension).
DilationTower build_tower(const UcpMap& u, std::size_t horizon, const Tolerance& tol,
                          std::size_t dim_cap = 4096);

/// Same construction and verification starting from a caller-supplied
/// per-step isometry (used to re-check stored towers); E_dim is read off the
/// shape of v, and v* (a (x) 1_E) v = phi(a) is part of the verification.
DilationTower tower_from_isometry(const UcpMap& u, const ComplexMatrix& v, std::size_t horizon,
                                  const Tolerance& tol, std::size_t dim_cap = 4096);

/// (a (x) 1_{E^k}) iota_k without materializing the Kronecker factor.
ComplexMatrix apply_slow_factor(const ComplexMatrix& a, const ComplexMatrix& iota,
                                std::size_t fast_dim);

/// iota_k* (a (x) 1_{E^k}) iota_k.
ComplexMatrix tower_moment(const DilationTower& t, std::size_t k, const ComplexMatrix& a);

/// k-fold iterate of the map.
ComplexMatrix iterate_map(const MatrixMap& phi, std::size_t k, const ComplexMatrix& a);

/// Increasing ladder Q_0 <= Q_1 <= ... <= Q_N = 1 on H (x) E^{(x)N}, where
/// Q_k = (iota_{N-k} iota_{N-k}*) (x) 1_{E^k} and Q_0 is the embedded copy
/// of H. Held in factored form; the gap eigenvalues are computed exactly on
/// an equivalent small pencil, and dense blocks are materialized on demand.
struct ProjectionLadder {
    std::size_t n = 0;
    std::size_t E_dim = 0;
    std::size_t horizon = 0;
    std::vector<ComplexMatrix> iotas;
    std::vector<std::size_t> ranks;              // rank Q_k, k = 0..N
    std::vector<double> gap_min_eigenvalues;     // min eig(Q_{k+1} - Q_k), k = 0..N-1

    /// Dense Q_k; throws PreconditionError when the top dimension exceeds
    /// dense_cap.
    ComplexMatrix q(std::size_t k, std::size_t dense_cap = 4096) const;
};

/// Builds the ladder and verifies monotonicity (every gap eigenvalue
/// >= -psd_tol) and properness (Q_N = 1, which holds structurally).
ProjectionLadder projection_ladder(const DilationTower& t, const Tolerance& tol);

}  // namespace dilkit

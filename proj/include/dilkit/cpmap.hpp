#pragma once

#include "dilkit/linalg.hpp"

#include <optional>

namespace dilkit {

/// Linear map from the d x d matrix algebra into n x n matrices, stored by
/// its values on matrix units and, redundantly, by its Choi matrix. The Choi
/// block convention is fixed once: choi is the d x d block matrix whose
/// (p, q) block is phi(e_pq).
class MatrixMap {
public:
    MatrixMap() = default;  // empty map; populate through the named factories
    MatrixMap(std::size_t d, std::size_t n, std::vector<ComplexMatrix> images);

    static MatrixMap from_choi(const ComplexMatrix& choi, std::size_t d, std::size_t n);

    /// phi(a) = sum_i adjoint(V_i) * a * V_i; each V_i is d x n.
    static MatrixMap from_kraus(std::size_t d, std::size_t n,
                                const std::vector<ComplexMatrix>& kraus);

    std::size_t d() const { return d_; }
    std::size_t n() const { return n_; }

    const ComplexMatrix& image(std::size_t p, std::size_t q) const;
    const std::vector<ComplexMatrix>& images() const { return images_; }
    const ComplexMatrix& choi() const { return choi_; }

    /// phi applied to an arbitrary d x d matrix by linearity.
    ComplexMatrix apply(const ComplexMatrix& a) const;

    /// phi(identity).
    ComplexMatrix unit_image() const;

    bool hermiticity_preserving(const Tolerance& tol) const;

private:
    std::size_t d_ = 0;
    std::size_t n_ = 0;
    std::vector<ComplexMatrix> images_;  // index p * d + q
    ComplexMatrix choi_;                 // dn x dn, cached at construction
};

/// Assembles the Choi matrix from images of matrix units (index p*d+q).
ComplexMatrix choi_of(const std::vector<ComplexMatrix>& images, std::size_t d, std::size_t n);

/// Inverse of choi_of.
MatrixMap map_of_choi(const ComplexMatrix& choi, std::size_t d, std::size_t n);

struct CpVerdict {
    bool cp = false;
    double min_eigenvalue = 0.0;
    ComplexMatrix witness;  // stacked block vector (xi_1; ...; xi_m), empty on success
    explicit operator bool() const { return cp; }
};

/// Positivity of the block matrix [phi(a_i* a_j)] for the given algebra
/// elements; the witness on failure is the stacked vector violating the
/// level-m inequality.
CpVerdict cp_level_check(const MatrixMap& phi, const std::vector<ComplexMatrix>& elements,
                         const Tolerance& tol);

/// Complete positivity decided through Choi-matrix positivity.
CpVerdict is_completely_positive(const MatrixMap& phi, const Tolerance& tol);

/// A representation pi of M_d on C^K_dim together with a linking operator
/// V : C^n -> C^K_dim such that phi(a) = V* pi(a) V.
struct DilationPair {
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t K_dim = 0;
    std::vector<ComplexMatrix> rep_images;  // pi(e_pq), index p*d+q
    ComplexMatrix V;                        // K_dim x n

    const ComplexMatrix& rep(std::size_t p, std::size_t q) const;
    ComplexMatrix rep_apply(const ComplexMatrix& a) const;
    /// The compressed map a -> V* pi(a) V.
    MatrixMap compression() const;
};

/// Residuals of the dilation-pair laws; all should sit at numerical noise.
struct PairResiduals {
    double star = 0.0;            // max |pi(e_pq)* - pi(e_qp)|
    double multiplicativity = 0.0;
    double unit = 0.0;            // |sum_p pi(e_pp) - 1|
    double norm_identity = 0.0;   // | ||V||^2 - ||phi(1)|| |
    double max() const;
};
PairResiduals pair_residuals(const DilationPair& pair);

/// Throws PreconditionError when the pair laws fail beyond tol.eq_tol
/// (scaled by the pair's magnitude).
void validate_pair(const DilationPair& pair, const Tolerance& tol);

/// The Stinespring construction, run verbatim at finite scale: Gram matrix
/// of the basis {e_pq (x) xi_k} under <a (x) xi, b (x) eta> =
/// <phi(b* a) xi, eta>, quotient by its null space, left multiplication on
/// the quotient, V xi = class of 1 (x) xi. Throws PreconditionError (with
/// the Gram witness) when phi is not completely positive.
///
/// Lemma (why no completion step appears): the pre-space is d^2 n
/// dimensional, so the quotient by the null space is a finite-dimensional
/// inner-product space and hence already complete; gram_factor's eigenvalue
/// truncation realizes exactly that quotient, and K is its image.
DilationPair stinespring(const MatrixMap& phi, const Tolerance& tol);

/// Same construction with the pre-space basis enumerated in a caller-chosen
/// order; used to produce independent minimal pairs for uniqueness checks.
DilationPair stinespring(const MatrixMap& phi, const Tolerance& tol,
                         const std::vector<std::size_t>& basis_order);

/// Compresses a pair to the span of { pi(e_pq) V xi }; the result is minimal
/// and dilates the same map.
DilationPair minimal_reduce(const DilationPair& pair, const Tolerance& tol);

/// Conjugates a pair by a unitary on K (test helper for uniqueness).
DilationPair rotate_pair(const DilationPair& pair, const ComplexMatrix& w);

/// The unique unitary W with W V1 = V2 and W pi1(a) = pi2(a) W, built by
/// Gram matching on the generating sets. Preconditions (verified): both
/// pairs minimal, both dilating the same map.
ComplexMatrix match_minimal(const DilationPair& p1, const DilationPair& p2,
                            const Tolerance& tol);

/// Operator space spanned by finitely many n x n matrices.
struct OperatorSpaceSpan {
    std::size_t n = 0;
    std::vector<ComplexMatrix> basis;
};

/// Element of the Paulsen system: [[lambda 1, A], [B*, lambda 1]] with
/// A, B in the span.
struct PaulsenElement {
    Complex scalar;
    ComplexMatrix upper;  // A
    ComplexMatrix lower;  // B
};

struct PaulsenLevelCheck {
    PsdVerdict input;   // PSD verdict of the assembled system element matrix
    PsdVerdict output;  // PSD verdict of its image under the lifted map
    /// True when a PSD input was mapped to a non-PSD output.
    bool violation() const { return input.psd && !output.psd; }
};

/// Paulsen's 2x2 device: embeds a map on an operator space into a map on the
/// operator system inside M_2(M_n), where positivity levels can be tested.
/// The lifted map sends corners A, B and scalar lambda to phi(A), phi(B) and
/// the same scalar.
class PaulsenLift {
public:
    PaulsenLift(OperatorSpaceSpan span, std::vector<ComplexMatrix> values, Tolerance tol);

    std::size_t n() const { return span_.n; }
    std::size_t m() const { return m_; }

    /// Splits a 2n x 2n matrix into (scalar, A, B); throws PreconditionError
    /// when a corner falls outside the span or the diagonal is not scalar.
    PaulsenElement decompose(const ComplexMatrix& x) const;

    ComplexMatrix assemble(const PaulsenElement& el) const;          // 2n x 2n
    ComplexMatrix apply(const PaulsenElement& el) const;             // 2m x 2m
    ComplexMatrix apply(const ComplexMatrix& x) const;               // decompose + apply

    /// phi extended linearly to the span; throws when outside the span.
    ComplexMatrix phi(const ComplexMatrix& a) const;

    /// Level-k positivity probe: cells is a k x k matrix of system elements
    /// (each 2n x 2n); the assembled 2nk x 2nk matrix and its entrywise
    /// image are both PSD-tested.
    PaulsenLevelCheck level_check(const std::vector<std::vector<ComplexMatrix>>& cells) const;

private:
    OperatorSpaceSpan span_;
    std::vector<ComplexMatrix> values_;
    Tolerance tol_;
    std::size_t m_ = 0;       // target size
    ComplexMatrix basis_mat_; // n^2 x dim(span), vectorized basis
};

PaulsenLift paulsen_lift(const OperatorSpaceSpan& span, const std::vector<ComplexMatrix>& values,
                         const Tolerance& tol);

}  // namespace dilkit

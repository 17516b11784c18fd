#pragma once

#include "dilkit/linalg.hpp"

namespace dilkit {

/// A positive definite kernel restricted to a finite point set:
/// gram(i, j) = u(x_i, x_j).
struct FiniteKernel {
    std::vector<std::string> points;
    ComplexMatrix gram;
};

/// Minimal Hilbert-space realization of a finite kernel. Column j of
/// features is the vector f(x_j) in C^dim, and
///     inner(f(x_i), f(x_j)) = gram(i, j)
/// under the toolkit's linear-in-first-argument inner product.
struct FeatureEmbedding {
    FiniteKernel kernel;
    std::size_t dim = 0;
    ComplexMatrix features;  // dim x m
};

/// A map of point sets that preserves kernel values:
/// target.gram(map(i), map(j)) = source.gram(i, j).
struct KernelMorphism {
    FiniteKernel source;
    FiniteKernel target;
    std::vector<std::size_t> point_map;
};

struct KernelVerdict {
    bool positive = false;
    double min_eigenvalue = 0.0;
    ComplexMatrix witness;  // coefficient vector violating positivity, empty on success
    explicit operator bool() const { return positive; }
};

/// Checks positive definiteness of the kernel's Gram matrix. On failure the
/// witness holds coefficients lambda with sum u(x_k,x_j) conj(lambda_j)
/// lambda_k < 0.
KernelVerdict validate_kernel(const FiniteKernel& k, const Tolerance& tol);

/// Builds the minimal embedding; throws PreconditionError on invalid kernels.
FeatureEmbedding build_embedding(const FiniteKernel& k, const Tolerance& tol);

/// The unique isometry U with U f1(x) = f2(phi(x)). Throws DimensionError on
/// inconsistent shapes and PreconditionError when phi fails to preserve the
/// kernel values.
ComplexMatrix morphism_isometry(const KernelMorphism& m, const FeatureEmbedding& e1,
                                const FeatureEmbedding& e2, const Tolerance& tol);

/// Unitary implementing a kernel-preserving permutation of the point set.
ComplexMatrix automorphism_unitary(const FeatureEmbedding& e,
                                   const std::vector<std::size_t>& bijection,
                                   const Tolerance& tol);

/// Kernel u(z, w) = exp(inner(z, w)) sampled on a finite vector set.
FiniteKernel exp_kernel(const std::vector<std::vector<Complex>>& vectors);

/// Index map i -> j with samples[j] = U samples[i], matched nearest-neighbor
/// within eq_tol. Throws PreconditionError when a sample escapes the set or
/// two candidates fall within tolerance of each other.
std::vector<std::size_t> induced_point_map(const std::vector<std::vector<Complex>>& samples,
                                           const ComplexMatrix& u, const Tolerance& tol);

/// Second quantization at finite sample scale: the unitary Gamma(U) induced
/// on the feature space of exp_kernel(samples) by z -> Uz. Requires the
/// sample set to be closed under U; point matching is nearest-neighbor
/// within eq_tol and ambiguous matches are rejected.
ComplexMatrix second_quantize(const FeatureEmbedding& e,
                              const std::vector<std::vector<Complex>>& samples,
                              const ComplexMatrix& u, const Tolerance& tol);

}  // namespace dilkit

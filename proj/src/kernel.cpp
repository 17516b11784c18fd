#include "dilkit/kernel.hpp"

#include <cmath>
#include <limits>

namespace dilkit {

namespace {

void check_kernel_shape(const FiniteKernel& k) {
    if (!k.gram.is_square())
        throw DimensionError("kernel gram must be square, got " + shape_string(k.gram));
    if (k.points.size() != k.gram.rows())
        throw DimensionError("kernel has " + std::to_string(k.points.size()) + " points but a " +
                             shape_string(k.gram) + " gram");
}

Complex vector_inner(const std::vector<Complex>& x, const std::vector<Complex>& y) {
    if (x.size() != y.size()) throw DimensionError("exp_kernel: vectors of unequal dimension");
    Complex s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

}  // namespace

KernelVerdict validate_kernel(const FiniteKernel& k, const Tolerance& tol) {
    check_kernel_shape(k);
    PsdVerdict psd = is_psd(k.gram, tol);
    KernelVerdict out;
    out.positive = psd.psd;
    out.min_eigenvalue = psd.min_eigenvalue;
    // c* G c = form(conj c, conj c), so the violating coefficients are the
    // conjugate of the minimizing eigenvector.
    if (!psd.psd && !psd.witness.empty()) out.witness = conj(psd.witness);
    return out;
}

FeatureEmbedding build_embedding(const FiniteKernel& k, const Tolerance& tol) {
    KernelVerdict verdict = validate_kernel(k, tol);
    if (!verdict.positive)
        throw PreconditionError("build_embedding: kernel is not positive definite (min eigenvalue " +
                                std::to_string(verdict.min_eigenvalue) + ")");
    GramEmbedding emb = embedding_of_gram(k.gram, tol);
    return FeatureEmbedding{k, emb.rank, emb.columns};
}

ComplexMatrix morphism_isometry(const KernelMorphism& m, const FeatureEmbedding& e1,
                                const FeatureEmbedding& e2, const Tolerance& tol) {
    check_kernel_shape(m.source);
    check_kernel_shape(m.target);
    const std::size_t m1 = m.source.points.size();
    const std::size_t m2 = m.target.points.size();
    if (m.point_map.size() != m1)
        throw DimensionError("morphism point_map has " + std::to_string(m.point_map.size()) +
                             " entries for " + std::to_string(m1) + " source points");
    for (std::size_t i = 0; i < m1; ++i)
        if (m.point_map[i] >= m2)
            throw DimensionError("morphism point_map entry " + std::to_string(m.point_map[i]) +
                                 " out of range");
    if (e1.features.cols() != m1 || e2.features.cols() != m2)
        throw DimensionError("embeddings do not match the morphism's kernels");

    // Kernel preservation, checked before any construction.
    double violation = 0.0;
    for (std::size_t i = 0; i < m1; ++i)
        for (std::size_t j = 0; j < m1; ++j)
            violation = std::max(violation,
                                 std::abs(m.target.gram(m.point_map[i], m.point_map[j]) -
                                          m.source.gram(i, j)));
    if (violation > tol.eq_tol)
        throw PreconditionError("morphism does not preserve the kernel (max violation " +
                                std::to_string(violation) + ")");

    // Solve U * f1 = f2 o phi on the full feature span.
    ComplexMatrix mapped(e2.dim, m1);
    for (std::size_t j = 0; j < m1; ++j)
        set_column(mapped, j, get_column(e2.features, m.point_map[j]));
    // f1 has orthogonal rows with positive norms, so f1 f1* is invertible.
    ComplexMatrix gram_rows = e1.features * adjoint(e1.features);
    ComplexMatrix u = mapped * adjoint(e1.features) * inverse(gram_rows);

    // Guaranteed by the checked kernel preservation; verified, not trusted.
    const double scale = 1.0 + max_abs(e1.features);
    const double isometry = max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(e1.dim));
    const double action = max_abs_diff(u * e1.features, mapped);
    if (isometry > 100.0 * tol.eq_tol || action > 100.0 * tol.eq_tol * scale)
        throw Error("morphism_isometry: construction failed verification (residual " +
                    std::to_string(std::max(isometry, action)) + ")");
    return u;
}

ComplexMatrix automorphism_unitary(const FeatureEmbedding& e,
                                   const std::vector<std::size_t>& bijection,
                                   const Tolerance& tol) {
    const std::size_t m = e.kernel.points.size();
    if (bijection.size() != m)
        throw DimensionError("bijection has " + std::to_string(bijection.size()) +
                             " entries for " + std::to_string(m) + " points");
    std::vector<bool> hit(m, false);
    for (std::size_t i : bijection) {
        if (i >= m || hit[i]) throw PreconditionError("index map is not a bijection");
        hit[i] = true;
    }
    KernelMorphism phi{e.kernel, e.kernel, bijection};
    return morphism_isometry(phi, e, e, tol);
}

FiniteKernel exp_kernel(const std::vector<std::vector<Complex>>& vectors) {
    const std::size_t m = vectors.size();
    FiniteKernel k;
    k.gram = ComplexMatrix(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        k.points.push_back("z" + std::to_string(i));
        for (std::size_t j = 0; j < m; ++j)
            k.gram(i, j) = std::exp(vector_inner(vectors[i], vectors[j]));
    }
    return k;
}

std::vector<std::size_t> induced_point_map(const std::vector<std::vector<Complex>>& samples,
                                           const ComplexMatrix& u, const Tolerance& tol) {
    const std::size_t m = samples.size();
    const std::size_t d = u.rows();
    if (!u.is_square()) throw DimensionError("induced_point_map expects a square unitary");
    for (const auto& z : samples)
        if (z.size() != d)
            throw DimensionError("sample dimension does not match the unitary");

    std::vector<std::size_t> induced(m);
    for (std::size_t i = 0; i < m; ++i) {
        // image of sample i under U
        std::vector<Complex> uz(d, 0.0);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) uz[r] += u(r, c) * samples[i][c];
        // nearest-neighbor match, loud on ambiguity
        std::size_t best = m;
        double best_dist = std::numeric_limits<double>::infinity();
        double second_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            double dist = 0.0;
            for (std::size_t r = 0; r < d; ++r) dist = std::max(dist, std::abs(uz[r] - samples[j][r]));
            if (dist < best_dist) {
                second_dist = best_dist;
                best = j;
                best_dist = dist;
            } else if (dist < second_dist) {
                second_dist = dist;
            }
        }
        if (best == m || best_dist > tol.eq_tol)
            throw PreconditionError("sample set is not closed under U: image of sample " +
                                    std::to_string(i) + " escapes (distance " +
                                    std::to_string(best_dist) + ")");
        if (m > 1 && second_dist <= tol.eq_tol)
            throw PreconditionError("ambiguous point match for sample " + std::to_string(i) +
                                    ": two candidates within tolerance");
        induced[i] = best;
    }
    return induced;
}

ComplexMatrix second_quantize(const FeatureEmbedding& e,
                              const std::vector<std::vector<Complex>>& samples,
                              const ComplexMatrix& u, const Tolerance& tol) {
    const std::size_t m = samples.size();
    if (e.kernel.points.size() != m)
        throw DimensionError("embedding was not built from the given sample set");
    FiniteKernel expected = exp_kernel(samples);
    if (max_abs_diff(expected.gram, e.kernel.gram) > tol.eq_tol)
        throw PreconditionError("embedding gram does not match exp_kernel of the samples");
    return automorphism_unitary(e, induced_point_map(samples, u, tol), tol);
}

}  // namespace dilkit

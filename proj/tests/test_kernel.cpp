#include "dilkit/kernel.hpp"
#include "dilkit/io.hpp"
#include "dilkit/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace dilkit;

namespace {
const Tolerance tol;

FiniteKernel ones_kernel(std::size_t m) {
    FiniteKernel k;
    k.gram = ComplexMatrix(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        k.points.push_back("p" + std::to_string(i));
        for (std::size_t j = 0; j < m; ++j) k.gram(i, j) = 1.0;
    }
    return k;
}

FiniteKernel kernel_from_gram(const ComplexMatrix& g) {
    FiniteKernel k;
    k.gram = g;
    for (std::size_t i = 0; i < g.rows(); ++i) k.points.push_back("p" + std::to_string(i));
    return k;
}

// Random PSD gram invariant under the cyclic shift i -> i+1 (mod m).
FiniteKernel cyclic_invariant_kernel(Rng& rng, std::size_t m) {
    ComplexMatrix g = random_psd(rng, m, m);
    ComplexMatrix shift(m, m);
    for (std::size_t i = 0; i < m; ++i) shift((i + 1) % m, i) = 1.0;
    ComplexMatrix sum(m, m);
    ComplexMatrix rotated = g;
    for (std::size_t j = 0; j < m; ++j) {
        sum = sum + rotated;
        rotated = shift * rotated * adjoint(shift);
    }
    return kernel_from_gram(sum * Complex(1.0 / static_cast<double>(m), 0.0));
}

}  // namespace

TEST_CASE("validate_kernel") {
    CHECK(validate_kernel(ones_kernel(3), tol).positive);
    CHECK(validate_kernel(kernel_from_gram(ComplexMatrix::identity(4)), tol).positive);

    KernelVerdict bad = validate_kernel(kernel_from_gram({{1.0, 2.0}, {2.0, 1.0}}), tol);
    CHECK(!bad.positive);
    CHECK(bad.min_eigenvalue == doctest::Approx(-1.0));
    // witness coefficients reproduce a negative form value
    Complex form = 0.0;
    const ComplexMatrix& g = ComplexMatrix{{1.0, 2.0}, {2.0, 1.0}};
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < 2; ++j)
            form += g(k, j) * std::conj(bad.witness(j, 0)) * bad.witness(k, 0);
    CHECK(form.real() < 0.0);
    CHECK(std::abs(form.imag()) < 1e-12);

    FiniteKernel mismatched = ones_kernel(3);
    mismatched.points.pop_back();
    CHECK_THROWS_AS(validate_kernel(mismatched, tol), DimensionError);
}

TEST_CASE("build_embedding") {
    SUBCASE("identity gram gives the standard basis") {
        FeatureEmbedding e = build_embedding(kernel_from_gram(ComplexMatrix::identity(3)), tol);
        CHECK(e.dim == 3);
        CHECK(max_abs_diff(embedding_gram(e.features), ComplexMatrix::identity(3)) <= 1e-12);
    }
    SUBCASE("all points of the ones kernel collapse") {
        FeatureEmbedding e = build_embedding(ones_kernel(3), tol);
        CHECK(e.dim == 1);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(frobenius_norm(get_column(e.features, j)) - 1.0) <= 1e-12);
            CHECK(max_abs_diff(get_column(e.features, 0), get_column(e.features, j)) <= 1e-12);
        }
    }
    SUBCASE("gram of explicit vectors is reproduced") {
        Rng rng(2024);
        ComplexMatrix vectors = random_matrix(rng, 2, 3);  // three vectors in C^2
        ComplexMatrix g(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                g(i, j) = inner(get_column(vectors, i), get_column(vectors, j));
        FeatureEmbedding e = build_embedding(kernel_from_gram(g), tol);
        CHECK(e.dim <= 2);
        CHECK(max_abs_diff(embedding_gram(e.features), g) <= 1e-10);
    }
    SUBCASE("invalid kernel is rejected") {
        CHECK_THROWS_AS(build_embedding(kernel_from_gram({{1.0, 2.0}, {2.0, 1.0}}), tol),
                        PreconditionError);
    }
    SUBCASE("continuity identity") {
        Rng rng(77);
        FiniteKernel k = kernel_from_gram(random_psd(rng, 5, 3));
        FeatureEmbedding e = build_embedding(k, tol);
        for (std::size_t x = 0; x < 5; ++x)
            for (std::size_t y = 0; y < 5; ++y) {
                ComplexMatrix diff = get_column(e.features, x) - get_column(e.features, y);
                double lhs = std::pow(frobenius_norm(diff), 2.0);
                Complex rhs = k.gram(x, x) + k.gram(y, y) - k.gram(x, y) - k.gram(y, x);
                CHECK(std::abs(lhs - rhs.real()) <= 1e-9 * (1.0 + std::abs(rhs)));
            }
    }
}

TEST_CASE("morphism_isometry") {
    SUBCASE("identity morphism gives the identity") {
        Rng rng(5);
        FiniteKernel k = kernel_from_gram(random_psd(rng, 4, 4));
        FeatureEmbedding e = build_embedding(k, tol);
        KernelMorphism phi{k, k, {0, 1, 2, 3}};
        ComplexMatrix u = morphism_isometry(phi, e, e, tol);
        CHECK(max_abs_diff(u, ComplexMatrix::identity(e.dim)) <= 1e-9);
    }
    SUBCASE("one-point kernel maps onto a unit-norm point") {
        FiniteKernel source = kernel_from_gram({{Complex(1.0, 0.0)}});
        ComplexMatrix g{{1.0, 0.5}, {0.5, 1.0}};
        FiniteKernel target = kernel_from_gram(g);
        FeatureEmbedding e1 = build_embedding(source, tol);
        FeatureEmbedding e2 = build_embedding(target, tol);
        KernelMorphism phi{source, target, {1}};
        ComplexMatrix u = morphism_isometry(phi, e1, e2, tol);
        CHECK(u.rows() == e2.dim);
        CHECK(u.cols() == 1);
        CHECK(max_abs_diff(u * e1.features, get_column(e2.features, 1)) <= 1e-9);
        CHECK(max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(1)) <= 1e-9);
    }
    SUBCASE("collapsed two-point kernel embeds into a target point") {
        FiniteKernel source = ones_kernel(2);
        ComplexMatrix g{{1.0, 0.0}, {0.0, 2.0}};
        FiniteKernel target = kernel_from_gram(g);
        FeatureEmbedding e1 = build_embedding(source, tol);
        FeatureEmbedding e2 = build_embedding(target, tol);
        KernelMorphism phi{source, target, {0, 0}};
        ComplexMatrix u = morphism_isometry(phi, e1, e2, tol);
        CHECK(u.cols() == 1);
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(max_abs_diff(u * get_column(e1.features, j), get_column(e2.features, 0)) <=
                  1e-9);
    }
    SUBCASE("non-preserving map raises PreconditionError, not DimensionError") {
        FiniteKernel source = kernel_from_gram(ComplexMatrix::identity(2));
        FiniteKernel target = kernel_from_gram({{1.0, 0.9}, {0.9, 1.0}});
        FeatureEmbedding e1 = build_embedding(source, tol);
        FeatureEmbedding e2 = build_embedding(target, tol);
        KernelMorphism phi{source, target, {0, 1}};
        CHECK_THROWS_AS(morphism_isometry(phi, e1, e2, tol), PreconditionError);
        KernelMorphism ragged{source, target, {0}};
        CHECK_THROWS_AS(morphism_isometry(ragged, e1, e2, tol), DimensionError);
    }
}

TEST_CASE("automorphism_unitary") {
    SUBCASE("identity permutation") {
        Rng rng(6);
        FeatureEmbedding e = build_embedding(kernel_from_gram(random_psd(rng, 3, 3)), tol);
        CHECK(max_abs_diff(automorphism_unitary(e, {0, 1, 2}, tol),
                           ComplexMatrix::identity(e.dim)) <= 1e-9);
    }
    SUBCASE("cyclic shift on the ones kernel acts trivially") {
        FeatureEmbedding e = build_embedding(ones_kernel(3), tol);
        ComplexMatrix u = automorphism_unitary(e, {1, 2, 0}, tol);
        CHECK(u.rows() == 1);
        CHECK(max_abs_diff(u, ComplexMatrix::identity(1)) <= 1e-9);
    }
    SUBCASE("swap of a symmetric two-point kernel squares to identity") {
        FiniteKernel k = kernel_from_gram({{1.0, 0.3}, {0.3, 1.0}});
        FeatureEmbedding e = build_embedding(k, tol);
        ComplexMatrix u = automorphism_unitary(e, {1, 0}, tol);
        CHECK(max_abs_diff(u * u, ComplexMatrix::identity(e.dim)) <= 1e-9);
        CHECK(max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(e.dim)) <= 1e-9);
    }
    SUBCASE("functor law on random invariant kernels") {
        Rng rng(99);
        for (int trial = 0; trial < 10; ++trial) {
            std::size_t m = 4 + rng.uniform_index(3);
            FiniteKernel k = cyclic_invariant_kernel(rng, m);
            FeatureEmbedding e = build_embedding(k, tol);
            std::vector<std::size_t> shift(m), shift2(m), composed(m);
            for (std::size_t i = 0; i < m; ++i) {
                shift[i] = (i + 1) % m;
                shift2[i] = (i + 2) % m;
                composed[i] = (i + 3) % m;
            }
            ComplexMatrix u1 = automorphism_unitary(e, shift, tol);
            ComplexMatrix u2 = automorphism_unitary(e, shift2, tol);
            ComplexMatrix u12 = automorphism_unitary(e, composed, tol);
            CHECK(max_abs_diff(u1 * u2, u12) <= 1e-8);
        }
    }
    SUBCASE("non-preserving permutation is rejected") {
        FiniteKernel k = kernel_from_gram({{1.0, 0.0}, {0.0, 2.0}});
        FeatureEmbedding e = build_embedding(k, tol);
        CHECK_THROWS_AS(automorphism_unitary(e, {1, 0}, tol), PreconditionError);
    }
}

TEST_CASE("exp_kernel") {
    SUBCASE("vacuum") {
        FiniteKernel k = exp_kernel({{Complex(0.0, 0.0)}});
        CHECK(k.gram(0, 0) == Complex(1.0, 0.0));
    }
    SUBCASE("orthogonal unit vectors") {
        FiniteKernel k = exp_kernel({{1.0, 0.0}, {0.0, 1.0}});
        CHECK(std::abs(k.gram(0, 0) - std::exp(1.0)) <= 1e-12);
        CHECK(std::abs(k.gram(0, 1) - 1.0) <= 1e-12);
        CHECK(std::abs(k.gram(1, 0) - 1.0) <= 1e-12);
    }
    SUBCASE("random vector sets are positive definite") {
        Rng rng(123);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::vector<Complex>> vectors;
            for (int i = 0; i < 4; ++i)
                vectors.push_back({rng.complex_normal(), rng.complex_normal()});
            CHECK(validate_kernel(exp_kernel(vectors), tol).positive);
        }
    }
}

TEST_CASE("second_quantize") {
    SUBCASE("identity unitary") {
        std::vector<std::vector<Complex>> samples{{Complex(0.3, 0.1)}, {Complex(-0.2, 0.4)}};
        FeatureEmbedding e = build_embedding(exp_kernel(samples), tol);
        ComplexMatrix gamma = second_quantize(e, samples, ComplexMatrix::identity(1), tol);
        CHECK(max_abs_diff(gamma, ComplexMatrix::identity(e.dim)) <= 1e-9);
    }
    SUBCASE("vacuum alone is fixed by any unitary") {
        std::vector<std::vector<Complex>> samples{{Complex(0.0, 0.0)}};
        FeatureEmbedding e = build_embedding(exp_kernel(samples), tol);
        ComplexMatrix u{{std::polar(1.0, 0.7)}};
        ComplexMatrix gamma = second_quantize(e, samples, u, tol);
        CHECK(gamma.rows() == 1);
        CHECK(std::abs(gamma(0, 0) - Complex(1.0, 0.0)) <= 1e-9);
    }
    SUBCASE("cube roots of unity induce the 3-cycle fixing the vacuum") {
        const Complex omega = std::polar(1.0, 2.0 * M_PI / 3.0);
        const Complex z(0.9, 0.2);
        std::vector<std::vector<Complex>> samples{{Complex(0.0, 0.0)}, {z}, {omega * z},
                                                  {omega * omega * z}};
        FeatureEmbedding e = build_embedding(exp_kernel(samples), tol);
        ComplexMatrix u{{omega}};
        ComplexMatrix gamma = second_quantize(e, samples, u, tol);
        ComplexMatrix expected = automorphism_unitary(e, {0, 2, 3, 1}, tol);
        CHECK(max_abs_diff(gamma, expected) <= 1e-9);
        // composition law: Gamma(U)^3 = Gamma(U^3) = identity
        CHECK(max_abs_diff(gamma * gamma * gamma, ComplexMatrix::identity(e.dim)) <= 1e-8);
    }
    SUBCASE("escaping sample is reported") {
        std::vector<std::vector<Complex>> samples{{Complex(1.0, 0.0)}};
        FeatureEmbedding e = build_embedding(exp_kernel(samples), tol);
        ComplexMatrix u{{Complex(-1.0, 0.0)}};
        CHECK_THROWS_AS(second_quantize(e, samples, u, tol), PreconditionError);
    }
    SUBCASE("ambiguous duplicate samples are rejected loudly") {
        std::vector<std::vector<Complex>> samples{{Complex(0.5, 0.0)}, {Complex(0.5, 0.0)}};
        FeatureEmbedding e = build_embedding(exp_kernel(samples), tol);
        CHECK_THROWS_AS(second_quantize(e, samples, ComplexMatrix::identity(1), tol),
                        PreconditionError);
    }
}

TEST_CASE("uniqueness of minimal embeddings up to unitary") {
    // Two independent factorizations of the same gram are frame-matched.
    Rng rng(31);
    ComplexMatrix g = random_psd(rng, 5, 3);
    FeatureEmbedding e1 = build_embedding(kernel_from_gram(g), tol);
    ComplexMatrix w = random_unitary(rng, e1.dim);
    ComplexMatrix rotated = w * e1.features;  // a second minimal function for the same kernel
    ComplexMatrix match = frame_match_unitary(e1.features, rotated, tol);
    CHECK(max_abs_diff(match * e1.features, rotated) <= 1e-9);
}

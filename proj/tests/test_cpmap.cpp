#include "dilkit/cpmap.hpp"
#include "dilkit/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace dilkit;

namespace {
const Tolerance tol;

MatrixMap identity_map(std::size_t d) {
    std::vector<ComplexMatrix> images;
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            ComplexMatrix unit(d, d);
            unit(p, q) = 1.0;
            images.push_back(unit);
        }
    return MatrixMap(d, d, std::move(images));
}

MatrixMap transpose_map(std::size_t d) {
    std::vector<ComplexMatrix> images;
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            ComplexMatrix unit(d, d);
            unit(q, p) = 1.0;  // phi(e_pq) = e_qp
            images.push_back(unit);
        }
    return MatrixMap(d, d, std::move(images));
}

MatrixMap depolarizing_map(std::size_t d) {
    std::vector<ComplexMatrix> images;
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            ComplexMatrix img(d, d);
            if (p == q)
                for (std::size_t i = 0; i < d; ++i) img(i, i) = 1.0 / static_cast<double>(d);
            images.push_back(img);
        }
    return MatrixMap(d, d, std::move(images));
}

MatrixMap random_cp_map(Rng& rng, std::size_t d, std::size_t n, std::size_t kraus_count) {
    std::vector<ComplexMatrix> kraus;
    for (std::size_t i = 0; i < kraus_count; ++i) kraus.push_back(random_matrix(rng, d, n));
    return MatrixMap::from_kraus(d, n, kraus);
}

std::vector<ComplexMatrix> matrix_units(std::size_t d) {
    std::vector<ComplexMatrix> units;
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            ComplexMatrix unit(d, d);
            unit(p, q) = 1.0;
            units.push_back(unit);
        }
    return units;
}

double dilation_residual(const MatrixMap& phi, const DilationPair& pair) {
    MatrixMap compressed = pair.compression();
    double r = 0.0;
    for (std::size_t i = 0; i < phi.images().size(); ++i)
        r = std::max(r, max_abs_diff(compressed.images()[i], phi.images()[i]));
    return r;
}

}  // namespace

TEST_CASE("choi round trip and conventions") {
    SUBCASE("identity map choi is the rank-one entangled projector") {
        MatrixMap id = identity_map(2);
        // assembled directly from phi(e_pq) = e_pq
        ComplexMatrix expected(4, 4);
        expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
        CHECK(max_abs_diff(id.choi(), expected) == 0.0);
        CHECK(numerical_rank(id.choi(), tol) == 1);
    }
    SUBCASE("zero map") {
        std::vector<ComplexMatrix> zeros(4, ComplexMatrix(3, 3));
        MatrixMap z(2, 3, zeros);
        CHECK(max_abs(z.choi()) == 0.0);
    }
    SUBCASE("round trip on a random map") {
        Rng rng(17);
        std::vector<ComplexMatrix> images;
        for (int i = 0; i < 9; ++i) images.push_back(random_matrix(rng, 2, 2));
        MatrixMap m(3, 2, images);
        MatrixMap back = map_of_choi(m.choi(), 3, 2);
        for (std::size_t i = 0; i < images.size(); ++i)
            CHECK(max_abs_diff(back.images()[i], m.images()[i]) == 0.0);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(map_of_choi(ComplexMatrix::identity(5), 2, 2), DimensionError);
        CHECK_THROWS_AS(choi_of(std::vector<ComplexMatrix>(3, ComplexMatrix(2, 2)), 2, 2),
                        DimensionError);
    }
}

TEST_CASE("cp_level_check") {
    SUBCASE("a *-homomorphism passes on any elements") {
        Rng rng(55);
        MatrixMap id = identity_map(3);
        std::vector<ComplexMatrix> elements;
        for (int i = 0; i < 4; ++i) elements.push_back(random_matrix(rng, 3, 3));
        CHECK(cp_level_check(id, elements, tol).cp);
    }
    SUBCASE("transpose fails on the matrix-unit basis") {
        CpVerdict v = cp_level_check(transpose_map(2), matrix_units(2), tol);
        CHECK(!v.cp);
        CHECK(v.min_eigenvalue < -0.1);
        CHECK(v.witness.rows() == 8);
    }
    SUBCASE("single unit element reduces to positivity of phi(1)") {
        MatrixMap dep = depolarizing_map(2);
        CpVerdict v = cp_level_check(dep, {ComplexMatrix::identity(2)}, tol);
        CHECK(v.cp);
    }
}

TEST_CASE("is_completely_positive") {
    SUBCASE("transpose is rejected with Choi eigenvalue -1") {
        CpVerdict v = is_completely_positive(transpose_map(2), tol);
        CHECK(!v.cp);
        CHECK(v.min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-9));
    }
    SUBCASE("depolarizing accepted, choi = identity / d") {
        MatrixMap dep = depolarizing_map(2);
        CHECK(max_abs_diff(dep.choi(), ComplexMatrix::identity(4) * Complex(0.5, 0.0)) <= 1e-15);
        CHECK(is_completely_positive(dep, tol).cp);
    }
    SUBCASE("identity map accepted") { CHECK(is_completely_positive(identity_map(3), tol).cp); }
    SUBCASE("agrees with the matrix-unit level check on random maps") {
        Rng rng(404);
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t d = 2 + rng.uniform_index(2);
            std::size_t n = 2 + rng.uniform_index(2);
            // Hermiticity-preserving but usually not CP
            ComplexMatrix choi = random_hermitian(rng, d * n);
            MatrixMap phi = map_of_choi(choi, d, n);
            CpVerdict via_choi = is_completely_positive(phi, tol);
            CpVerdict via_level = cp_level_check(phi, matrix_units(d), tol);
            CHECK(via_choi.cp == via_level.cp);
        }
    }
    SUBCASE("sums and compositions of CP maps stay CP") {
        Rng rng(73);
        for (int trial = 0; trial < 10; ++trial) {
            MatrixMap a = random_cp_map(rng, 2, 2, 2);
            MatrixMap b = random_cp_map(rng, 2, 2, 3);
            std::vector<ComplexMatrix> sum_images, comp_images;
            for (std::size_t i = 0; i < 4; ++i)
                sum_images.push_back(a.images()[i] + b.images()[i]);
            for (std::size_t p = 0; p < 2; ++p)
                for (std::size_t q = 0; q < 2; ++q) {
                    ComplexMatrix unit(2, 2);
                    unit(p, q) = 1.0;
                    comp_images.push_back(b.apply(a.apply(unit)));
                }
            CHECK(is_completely_positive(MatrixMap(2, 2, sum_images), tol).cp);
            CHECK(is_completely_positive(MatrixMap(2, 2, comp_images), tol).cp);
        }
    }
}

TEST_CASE("stinespring construction") {
    SUBCASE("identity map dilates to itself") {
        DilationPair pair = stinespring(identity_map(2), tol);
        CHECK(pair.K_dim == 2);
        CHECK(dilation_residual(identity_map(2), pair) <= 1e-10);
        // V is unitary here
        CHECK(max_abs_diff(adjoint(pair.V) * pair.V, ComplexMatrix::identity(2)) <= 1e-10);
        CHECK(max_abs_diff(pair.V * adjoint(pair.V), ComplexMatrix::identity(2)) <= 1e-10);
    }
    SUBCASE("depolarizing map needs K_dim 8") {
        MatrixMap dep = depolarizing_map(2);
        DilationPair pair = stinespring(dep, tol);
        CHECK(pair.K_dim == 8);
        validate_pair(pair, tol);
        CHECK(dilation_residual(dep, pair) <= 1e-10);
        // construction is already minimal
        DilationPair reduced = minimal_reduce(pair, tol);
        CHECK(reduced.K_dim == 8);
    }
    SUBCASE("isometry conjugation is reproduced") {
        Rng rng(8);
        ComplexMatrix w = get_block(random_unitary(rng, 3), 0, 0, 3, 2);  // isometry 3 -> 2?
        // columns of a unitary: take first 2 columns as a 3x2 isometry W, phi(a) = W* a W
        std::vector<ComplexMatrix> images;
        for (std::size_t p = 0; p < 3; ++p)
            for (std::size_t q = 0; q < 3; ++q) {
                ComplexMatrix unit(3, 3);
                unit(p, q) = 1.0;
                images.push_back(adjoint(w) * unit * w);
            }
        MatrixMap phi(3, 2, images);
        DilationPair pair = stinespring(phi, tol);
        CHECK(pair.K_dim == 3);
        validate_pair(pair, tol);
        CHECK(dilation_residual(phi, pair) <= 1e-10);
        // the map is already in dilated form: unitarily equivalent to the
        // literal pair (V = W, pi = identity representation)
        DilationPair literal;
        literal.d = 3;
        literal.n = 2;
        literal.K_dim = 3;
        for (std::size_t p = 0; p < 3; ++p)
            for (std::size_t q = 0; q < 3; ++q) {
                ComplexMatrix unit(3, 3);
                unit(p, q) = 1.0;
                literal.rep_images.push_back(unit);
            }
        literal.V = w;
        validate_pair(literal, tol);
        ComplexMatrix match = match_minimal(pair, literal, tol);
        CHECK(max_abs_diff(match * pair.V, literal.V) <= 1e-9);
    }
    SUBCASE("norm identity and critical estimate on random CP maps") {
        Rng rng(300);
        for (int trial = 0; trial < 10; ++trial) {
            MatrixMap phi = random_cp_map(rng, 2, 3, 1 + rng.uniform_index(3));
            DilationPair pair = stinespring(phi, tol);
            validate_pair(pair, tol);
            CHECK(dilation_residual(phi, pair) <=
                  1e-9 * (1.0 + max_abs(phi.choi())));
            const double v2 = std::pow(operator_norm(pair.V), 2.0);
            const double phi1 = operator_norm(phi.unit_image());
            CHECK(std::abs(v2 - phi1) <= 1e-9 * (1.0 + phi1));
        }
    }
    SUBCASE("non-CP input is refused with a witness message") {
        CHECK_THROWS_AS(stinespring(transpose_map(2), tol), PreconditionError);
    }
}

TEST_CASE("critical estimate for left multiplication on the pre-space") {
    // form(L_a zeta, L_a zeta) <= |a|^2 form(zeta, zeta) sampled over random
    // a and zeta, with the Gram evaluated through the sesquilinear helper.
    Rng rng(1001);
    MatrixMap phi = random_cp_map(rng, 2, 2, 2);
    const std::size_t d = 2, n = 2, D = d * d * n;
    // Gram in the pre-space basis order (p,q,k)
    ComplexMatrix g(D, D);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t s = 0; s < d; ++s)
                    for (std::size_t l = 0; l < n; ++l)
                        g((p * d + q) * n + k, (p * d + s) * n + l) = phi.image(s, q)(l, k);
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix a = random_matrix(rng, d, d);
        ComplexMatrix zeta = random_matrix(rng, D, 1);
        // L_a zeta in coordinates: (e_uv-component) via a acting on the left factor
        ComplexMatrix moved(D, 1);
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = 0; q < d; ++q)
                for (std::size_t k = 0; k < n; ++k) {
                    Complex acc = 0.0;
                    for (std::size_t r = 0; r < d; ++r)
                        acc += a(p, r) * zeta((r * d + q) * n + k, 0);
                    moved((p * d + q) * n + k, 0) = acc;
                }
        const double lhs = sesquilinear(g, moved, moved).real();
        const double rhs = std::pow(operator_norm(a), 2.0) * sesquilinear(g, zeta, zeta).real();
        CHECK(lhs <= rhs + 1e-9 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("minimal_reduce") {
    Rng rng(21);
    MatrixMap phi = random_cp_map(rng, 2, 2, 2);
    DilationPair pair = stinespring(phi, tol);

    SUBCASE("already minimal pairs keep their dimension") {
        DilationPair reduced = minimal_reduce(pair, tol);
        CHECK(reduced.K_dim == pair.K_dim);
        CHECK(dilation_residual(phi, reduced) <= 1e-9);
        validate_pair(reduced, tol);
    }
    SUBCASE("a dead summand is removed") {
        // pad with a second copy of the representation that V never reaches
        DilationPair padded;
        padded.d = pair.d;
        padded.n = pair.n;
        padded.K_dim = 2 * pair.K_dim;
        for (std::size_t p = 0; p < pair.d; ++p)
            for (std::size_t q = 0; q < pair.d; ++q) {
                ComplexMatrix big(padded.K_dim, padded.K_dim);
                set_block(big, 0, 0, pair.rep(p, q));
                set_block(big, pair.K_dim, pair.K_dim, pair.rep(p, q));
                padded.rep_images.push_back(big);
            }
        padded.V = ComplexMatrix(padded.K_dim, pair.n);
        set_block(padded.V, 0, 0, pair.V);
        validate_pair(padded, tol);
        DilationPair reduced = minimal_reduce(padded, tol);
        CHECK(reduced.K_dim == pair.K_dim);
        CHECK(dilation_residual(phi, reduced) <= 1e-9);
        validate_pair(reduced, tol);
    }
}

TEST_CASE("match_minimal") {
    Rng rng(500);
    MatrixMap phi = random_cp_map(rng, 2, 2, 2);
    DilationPair p1 = stinespring(phi, tol);

    SUBCASE("identical pairs match with the identity") {
        ComplexMatrix w = match_minimal(p1, p1, tol);
        CHECK(max_abs_diff(w, ComplexMatrix::identity(p1.K_dim)) <= 1e-8);
    }
    SUBCASE("a rotated copy is recovered") {
        ComplexMatrix r = random_unitary(rng, p1.K_dim);
        DilationPair p2 = rotate_pair(p1, r);
        ComplexMatrix w = match_minimal(p1, p2, tol);
        CHECK(max_abs_diff(w, r) <= 1e-8);
    }
    SUBCASE("permuted-basis construction is matched") {
        std::vector<std::size_t> order(8);
        for (std::size_t i = 0; i < 8; ++i) order[i] = (i * 3 + 5) % 8;
        DilationPair p2 = stinespring(phi, tol, order);
        ComplexMatrix w = match_minimal(p1, p2, tol);
        CHECK(max_abs_diff(w * p1.V, p2.V) <= 1e-8);
        double intertwining = 0.0;
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t q = 0; q < 2; ++q)
                intertwining = std::max(intertwining,
                                        max_abs_diff(w * p1.rep(p, q), p2.rep(p, q) * w));
        CHECK(intertwining <= 1e-8);
    }
    SUBCASE("pairs for different maps are refused") {
        MatrixMap other = random_cp_map(rng, 2, 2, 3);
        DilationPair p2 = stinespring(other, tol);
        CHECK_THROWS_AS(match_minimal(p1, p2, tol), PreconditionError);
    }
    SUBCASE("non-minimal pairs are refused") {
        DilationPair padded;
        padded.d = p1.d;
        padded.n = p1.n;
        padded.K_dim = 2 * p1.K_dim;
        for (std::size_t p = 0; p < p1.d; ++p)
            for (std::size_t q = 0; q < p1.d; ++q) {
                ComplexMatrix big(padded.K_dim, padded.K_dim);
                set_block(big, 0, 0, p1.rep(p, q));
                set_block(big, p1.K_dim, p1.K_dim, p1.rep(p, q));
                padded.rep_images.push_back(big);
            }
        padded.V = ComplexMatrix(padded.K_dim, p1.n);
        set_block(padded.V, 0, 0, p1.V);
        CHECK_THROWS_AS(match_minimal(padded, padded, tol), PreconditionError);
    }
}

TEST_CASE("paulsen_lift") {
    SUBCASE("identity on the full algebra is CP at all tested levels") {
        OperatorSpaceSpan span{2, matrix_units(2)};
        PaulsenLift lift = paulsen_lift(span, matrix_units(2), tol);
        Rng rng(9);
        for (std::size_t level = 1; level <= 3; ++level) {
            // PSD input [[t 1, A], [A*, t 1]] cellwise with t = |A| + margin
            std::vector<std::vector<ComplexMatrix>> cells(level,
                                                          std::vector<ComplexMatrix>(level));
            std::vector<std::vector<ComplexMatrix>> corner(level,
                                                           std::vector<ComplexMatrix>(level));
            double norm_bound = 0.0;
            for (std::size_t i = 0; i < level; ++i)
                for (std::size_t j = 0; j < level; ++j) {
                    corner[i][j] = random_matrix(rng, 2, 2);
                    norm_bound += operator_norm(corner[i][j]);
                }
            for (std::size_t i = 0; i < level; ++i)
                for (std::size_t j = 0; j < level; ++j) {
                    PaulsenElement el;
                    el.scalar = i == j ? Complex(norm_bound + 1.0, 0.0) : Complex(0.0, 0.0);
                    el.upper = corner[i][j];
                    el.lower = corner[j][i];  // makes the assembled matrix Hermitian
                    cells[i][j] = lift.assemble(el);
                }
            PaulsenLevelCheck check = lift.level_check(cells);
            CHECK(check.input.psd);
            CHECK(check.output.psd);
            CHECK(!check.violation());
        }
    }
    SUBCASE("scalar map with |c| <= 1 passes level 1, |c| > 1 fails") {
        OperatorSpaceSpan span{2, {ComplexMatrix::identity(2)}};
        auto run = [&](double c) {
            PaulsenLift lift =
                paulsen_lift(span, {ComplexMatrix::identity(2) * Complex(c, 0.0)}, tol);
            PaulsenElement el;
            el.scalar = 1.0;
            el.upper = ComplexMatrix::identity(2);
            el.lower = ComplexMatrix::identity(2);
            // [[1, I], [I, 1]] is PSD with norm-1 corner
            PaulsenLevelCheck check = lift.level_check({{lift.assemble(el)}});
            return check;
        };
        PaulsenLevelCheck inside = run(0.9);
        CHECK(inside.input.psd);
        CHECK(inside.output.psd);
        PaulsenLevelCheck outside = run(1.5);
        CHECK(outside.input.psd);
        CHECK(!outside.output.psd);
        CHECK(outside.violation());
    }
    SUBCASE("membership errors") {
        OperatorSpaceSpan span{2, {ComplexMatrix::identity(2)}};
        PaulsenLift lift = paulsen_lift(span, {ComplexMatrix::identity(2)}, tol);
        ComplexMatrix outside{{0.0, 1.0}, {0.0, 0.0}};
        CHECK_THROWS_AS(lift.phi(outside), PreconditionError);
        PaulsenElement el;
        el.scalar = 1.0;
        el.upper = outside;
        el.lower = ComplexMatrix::identity(2);
        CHECK_THROWS_AS(lift.decompose(lift.assemble(el)), PreconditionError);
        // non-scalar diagonal corner
        ComplexMatrix bad(4, 4);
        bad(0, 0) = 1.0;
        bad(1, 1) = 2.0;
        CHECK_THROWS_AS(lift.decompose(bad), PreconditionError);
    }
}

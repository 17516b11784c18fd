#include "dilkit/contraction.hpp"
#include "dilkit/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace dilkit;

namespace {
const Tolerance tol;

std::vector<Complex> circle_samples(std::size_t count) {
    std::vector<Complex> samples;
    for (std::size_t j = 0; j < count; ++j) {
        const double theta = 2.0 * M_PI * j / static_cast<double>(count);
        samples.emplace_back(std::cos(theta), std::sin(theta));
    }
    return samples;
}

}  // namespace

TEST_CASE("halmos_dilate") {
    SUBCASE("zero contraction gives the swap") {
        ComplexMatrix u = halmos_dilate(ComplexMatrix(1, 1), tol);
        ComplexMatrix expected{{0.0, 1.0}, {1.0, 0.0}};
        CHECK(max_abs_diff(u, expected) <= 1e-12);
    }
    SUBCASE("unitary input has vanishing defects") {
        Rng rng(12);
        ComplexMatrix w = random_unitary(rng, 3);
        ComplexMatrix u = halmos_dilate(w, tol);
        CHECK(max_abs_diff(get_block(u, 0, 0, 3, 3), w) <= 1e-12);
        CHECK(max_abs(get_block(u, 3, 0, 3, 3)) <= 1e-7);
        CHECK(max_abs(get_block(u, 0, 3, 3, 3)) <= 1e-7);
        CHECK(max_abs_diff(get_block(u, 3, 3, 3, 3), -adjoint(w)) <= 1e-12);
    }
    SUBCASE("scalar one half") {
        ComplexMatrix a{{Complex(0.5, 0.0)}};
        ComplexMatrix u = halmos_dilate(a, tol);
        const double root3over2 = std::sqrt(3.0) / 2.0;
        CHECK(std::abs(u(0, 0) - Complex(0.5, 0.0)) <= 1e-12);
        CHECK(std::abs(u(0, 1) - Complex(root3over2, 0.0)) <= 1e-12);
        CHECK(std::abs(u(1, 0) - Complex(root3over2, 0.0)) <= 1e-12);
        CHECK(std::abs(u(1, 1) - Complex(-0.5, 0.0)) <= 1e-12);
    }
    SUBCASE("unitarity and intertwining on random contractions") {
        Rng rng(34);
        for (int trial = 0; trial < 20; ++trial) {
            std::size_t n = 1 + rng.uniform_index(8);
            ComplexMatrix a = random_with_norm(rng, n, rng.uniform(0.2, 1.0));
            ComplexMatrix u = halmos_dilate(a, tol);
            CHECK(max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(2 * n)) <= 1e-10);
            ComplexMatrix da = sqrt_psd(ComplexMatrix::identity(n) - adjoint(a) * a, tol);
            ComplexMatrix dastar = sqrt_psd(ComplexMatrix::identity(n) - a * adjoint(a), tol);
            CHECK(max_abs_diff(a * da, dastar * a) <= 1e-10);
        }
    }
    SUBCASE("non-contractions are refused") {
        CHECK_THROWS_AS(halmos_dilate(ComplexMatrix::diagonal({2.0}), tol), PreconditionError);
    }
}

TEST_CASE("sznagy_finite") {
    SUBCASE("horizon 1 coincides with halmos") {
        Rng rng(56);
        ComplexMatrix a = random_with_norm(rng, 3, 0.8);
        PowerDilation d = sznagy_finite(a, 1, tol);
        CHECK(max_abs_diff(d.U, halmos_dilate(a, tol)) <= 1e-12);
    }
    SUBCASE("zero contraction gives a shift with vanishing compressions") {
        PowerDilation d = sznagy_finite(ComplexMatrix(2, 2), 4, tol);
        for (std::size_t m = 1; m <= 4; ++m) CHECK(max_abs(power_compression(d, m)) <= 1e-12);
        CHECK(max_abs_diff(power_compression(d, 0), ComplexMatrix::identity(2)) <= 1e-12);
    }
    SUBCASE("random contractions satisfy the compression identity") {
        Rng rng(78);
        for (int trial = 0; trial < 10; ++trial) {
            std::size_t n = 1 + rng.uniform_index(3);
            ComplexMatrix a = random_with_norm(rng, n, rng.uniform(0.3, 1.0));
            PowerDilation d = sznagy_finite(a, 6, tol);
            CHECK(max_abs_diff(adjoint(d.U) * d.U,
                               ComplexMatrix::identity(d.U.rows())) <= 1e-10);
            for (std::size_t m = 0; m <= 6; ++m)
                CHECK(max_abs_diff(power_compression(d, m), matrix_power(a, m)) <= 1e-8);
        }
    }
    SUBCASE("horizon 0 is rejected") {
        CHECK_THROWS_AS(sznagy_finite(ComplexMatrix(2, 2), 0, tol), PreconditionError);
    }
}

TEST_CASE("von_neumann_check") {
    SUBCASE("monomials of a contraction") {
        Rng rng(90);
        ComplexMatrix a = random_with_norm(rng, 4, 0.95);
        std::vector<Complex> monomial(6, Complex(0.0, 0.0));
        monomial.back() = 1.0;
        VonNeumannReport r = von_neumann_check(a, monomial, 64, tol);
        CHECK(r.holds);
        CHECK(r.rhs == doctest::Approx(1.0));
        CHECK(r.lhs <= 1.0 + 1e-12);
    }
    SUBCASE("constants are tight") {
        ComplexMatrix a{{Complex(0.3, 0.2)}};
        VonNeumannReport r = von_neumann_check(a, {Complex(2.0, -1.0)}, 8, tol);
        CHECK(r.lhs == doctest::Approx(std::abs(Complex(2.0, -1.0))));
        CHECK(r.rhs == doctest::Approx(std::abs(Complex(2.0, -1.0))));
        CHECK(r.slack == 0.0);
        CHECK(r.holds);
    }
    SUBCASE("Jordan block with 1 + z") {
        ComplexMatrix a{{0.0, 1.0}, {0.0, 0.0}};
        VonNeumannReport r = von_neumann_check(a, {1.0, 1.0}, 64, tol);
        // |1 + A| is the golden ratio, below the boundary value 2
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        CHECK(r.lhs == doctest::Approx(golden));
        CHECK(r.rhs == doctest::Approx(2.0));
        CHECK(r.holds);
    }
    SUBCASE("grid precondition") {
        CHECK_THROWS_AS(von_neumann_check(ComplexMatrix(2, 2), {1.0, 1.0}, 4, tol),
                        PreconditionError);
    }
    SUBCASE("never fails on random contraction/polynomial pairs") {
        Rng rng(2718);
        for (int trial = 0; trial < 50; ++trial) {
            std::size_t n = 1 + rng.uniform_index(5);
            ComplexMatrix a = random_with_norm(rng, n, rng.uniform(0.1, 1.0));
            std::vector<Complex> poly = random_polynomial(rng, rng.uniform_index(9));
            CHECK(von_neumann_check(a, poly, 4096, tol).holds);
        }
    }
}

TEST_CASE("eval_rational_matrix") {
    SUBCASE("the coordinate function returns the argument") {
        Rng rng(4);
        ComplexMatrix a = random_matrix(rng, 3, 3);
        RationalMatrixFunction f = RationalMatrixFunction::polynomial({0.0, 1.0});
        CHECK(max_abs_diff(eval_rational_matrix(f, a, tol), a) <= 1e-12);
    }
    SUBCASE("1/z inverts") {
        ComplexMatrix a = ComplexMatrix::diagonal({2.0, Complex(0.0, 1.0)});
        RationalMatrixFunction f;
        f.numerator = {ComplexMatrix{{1.0}}};
        f.denominator = {0.0, 1.0};
        f.poles = {Complex(0.0, 0.0)};
        CHECK(max_abs_diff(eval_rational_matrix(f, a, tol), inverse(a)) <= 1e-12);
    }
    SUBCASE("(z^2 - 1)/(z - 2) at diag(0, 1)") {
        ComplexMatrix a = ComplexMatrix::diagonal({0.0, 1.0});
        RationalMatrixFunction f;
        f.numerator = {ComplexMatrix{{-1.0}}, ComplexMatrix{{0.0}}, ComplexMatrix{{1.0}}};
        f.denominator = {-2.0, 1.0};
        f.poles = {Complex(2.0, 0.0)};
        double cond = 0.0;
        ComplexMatrix value = eval_rational_matrix(f, a, tol, &cond);
        CHECK(max_abs_diff(value, ComplexMatrix::diagonal({0.5, 0.0})) <= 1e-12);
        CHECK(cond == doctest::Approx(2.0));
    }
    SUBCASE("pole on the spectrum is refused") {
        ComplexMatrix a = ComplexMatrix::diagonal({2.0, 1.0});
        RationalMatrixFunction f;
        f.numerator = {ComplexMatrix{{1.0}}};
        f.denominator = {-2.0, 1.0};
        f.poles = {Complex(2.0, 0.0)};
        CHECK_THROWS_AS(eval_rational_matrix(f, a, tol), PreconditionError);
    }
    SUBCASE("multiplicative on products of rational functions") {
        Rng rng(8);
        ComplexMatrix a = random_with_norm(rng, 3, 0.5);
        // f(z) = z / (z - 2), g(z) = (1 + z^2) / (z - 3)
        RationalMatrixFunction f, g, fg;
        f.numerator = {ComplexMatrix{{0.0}}, ComplexMatrix{{1.0}}};
        f.denominator = {-2.0, 1.0};
        g.numerator = {ComplexMatrix{{1.0}}, ComplexMatrix{{0.0}}, ComplexMatrix{{1.0}}};
        g.denominator = {-3.0, 1.0};
        fg.numerator = {ComplexMatrix{{0.0}}, ComplexMatrix{{1.0}}, ComplexMatrix{{0.0}},
                        ComplexMatrix{{1.0}}};
        fg.denominator = {6.0, -5.0, 1.0};
        ComplexMatrix lhs = eval_rational_matrix(f, a, tol) * eval_rational_matrix(g, a, tol);
        ComplexMatrix rhs = eval_rational_matrix(fg, a, tol);
        CHECK(max_abs_diff(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("spectral_set_check") {
    SUBCASE("contractions never violate the disk") {
        Rng rng(15);
        ComplexMatrix a = random_with_norm(rng, 3, 0.9);
        std::vector<RationalMatrixFunction> funcs;
        funcs.push_back(RationalMatrixFunction::polynomial({0.5, 0.0, 1.0}));
        funcs.push_back(RationalMatrixFunction::polynomial({0.0, 1.0}));
        auto reports = spectral_set_check(a, circle_samples(256), funcs, tol);
        for (const auto& r : reports) CHECK(!r.violation);
    }
    SUBCASE("escaping spectrum is flagged for f(z) = z") {
        ComplexMatrix a = ComplexMatrix::diagonal({0.0, 2.0});
        auto reports = spectral_set_check(
            a, circle_samples(128), {RationalMatrixFunction::polynomial({0.0, 1.0})}, tol);
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].violation);
        CHECK(reports[0].lhs == doctest::Approx(2.0));
        CHECK(reports[0].boundary_max == doctest::Approx(1.0));
        CHECK(reports[0].spectral_radius == doctest::Approx(2.0));
    }
    SUBCASE("normal matrices with spectrum inside the samples never violate") {
        Rng rng(44);
        for (int trial = 0; trial < 5; ++trial) {
            ComplexMatrix w = random_unitary(rng, 3);
            ComplexMatrix a =
                w *
                ComplexMatrix::diagonal({Complex(0.1, 0.2), Complex(-0.4, 0.1),
                                         Complex(0.0, -0.6)}) *
                adjoint(w);
            std::vector<RationalMatrixFunction> funcs;
            funcs.push_back(
                RationalMatrixFunction::polynomial(random_polynomial(rng, 3)));
            auto reports = spectral_set_check(a, circle_samples(512), funcs, tol);
            CHECK(!reports[0].violation);
        }
    }
    SUBCASE("pole on a sample point is refused") {
        RationalMatrixFunction f;
        f.numerator = {ComplexMatrix{{1.0}}};
        f.denominator = {-1.0, 1.0};  // pole at z = 1
        f.poles = {Complex(1.0, 0.0)};
        CHECK_THROWS_AS(
            spectral_set_check(ComplexMatrix(2, 2), circle_samples(8), {f}, tol),
            PreconditionError);
    }
}

TEST_CASE("complete_spectral_check") {
    SUBCASE("level 1 reduces to the scalar check") {
        Rng rng(61);
        ComplexMatrix a = random_with_norm(rng, 2, 0.7);
        auto scalar = spectral_set_check(
            a, circle_samples(128), {RationalMatrixFunction::polynomial({1.0, 1.0})}, tol);
        auto complete = complete_spectral_check(
            a, circle_samples(128), {RationalMatrixFunction::polynomial({1.0, 1.0})}, tol);
        CHECK(scalar[0].lhs == doctest::Approx(complete[0].lhs));
        CHECK(scalar[0].boundary_max == doctest::Approx(complete[0].boundary_max));
    }
    SUBCASE("diagonal matrix functions decouple") {
        Rng rng(62);
        ComplexMatrix a = random_with_norm(rng, 2, 0.8);
        // F = diag(f1, f2) with f1(z) = z, f2(z) = 1/2 + z^2
        RationalMatrixFunction f;
        f.numerator = {ComplexMatrix{{0.0, 0.0}, {0.0, 0.5}},
                       ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}},
                       ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}};
        f.denominator = {1.0};
        auto joint = complete_spectral_check(a, circle_samples(128), {f}, tol);
        auto f1 = spectral_set_check(a, circle_samples(128),
                                     {RationalMatrixFunction::polynomial({0.0, 1.0})}, tol);
        auto f2 = spectral_set_check(
            a, circle_samples(128), {RationalMatrixFunction::polynomial({0.5, 0.0, 1.0})}, tol);
        CHECK(joint[0].lhs == doctest::Approx(std::max(f1[0].lhs, f2[0].lhs)));
        CHECK(!joint[0].violation);
    }
    SUBCASE("matrix polynomials of contractions never flag the disk at levels 2 and 3") {
        Rng rng(63);
        for (int trial = 0; trial < 8; ++trial) {
            const std::size_t level = 2 + rng.uniform_index(2);
            ComplexMatrix a = random_with_norm(rng, 3, rng.uniform(0.2, 1.0));
            RationalMatrixFunction f;
            for (int j = 0; j <= 3; ++j) {
                ComplexMatrix coeff = random_matrix(rng, level, level);
                f.numerator.push_back(coeff * Complex(0.5, 0.0));
            }
            f.denominator = {1.0};
            auto reports = complete_spectral_check(a, circle_samples(1024), {f}, tol);
            CHECK(!reports[0].violation);
        }
    }
}

#include "dilkit/rng.hpp"

#include "dilkit/linalg.hpp"

#include <cmath>

namespace dilkit {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::uniform_index(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * (1.0 / std::sqrt(2.0));
}

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
    return m;
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
    ComplexMatrix g = random_matrix(rng, n, n);
    return (g + adjoint(g)) * Complex(0.5, 0.0);
}

ComplexMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank) {
    ComplexMatrix b = random_matrix(rng, rank, n);
    return adjoint(b) * b;
}

ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
    // Twice-iterated modified Gram-Schmidt on a Gaussian matrix.
    ComplexMatrix g = random_matrix(rng, n, n);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < n; ++j) {
            ComplexMatrix col = get_column(g, j);
            for (std::size_t k = 0; k < j; ++k) {
                ComplexMatrix prev = get_column(g, k);
                col = col - prev * inner(col, prev);
            }
            double norm = frobenius_norm(col);
            if (norm < 1e-12) throw Error("random_unitary: degenerate draw");
            set_column(g, j, col * Complex(1.0 / norm, 0.0));
        }
    }
    return g;
}

ComplexMatrix random_with_norm(Rng& rng, std::size_t n, double norm) {
    ComplexMatrix g = random_matrix(rng, n, n);
    const double current = operator_norm(g);
    if (current == 0.0) return g;
    return g * Complex(norm / current, 0.0);
}

std::vector<Complex> random_polynomial(Rng& rng, std::size_t degree) {
    std::vector<Complex> coeffs(degree + 1);
    for (auto& c : coeffs) c = rng.complex_normal();
    return coeffs;
}

}  // namespace dilkit

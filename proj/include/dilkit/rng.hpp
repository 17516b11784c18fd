#pragma once

#include "dilkit/matrix.hpp"

#include <cstdint>

namespace dilkit {

/// xoshiro256** with splitmix64 seeding. Self-contained so that seeded
/// runs are byte-identical across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    std::size_t uniform_index(std::size_t n);  // [0, n)

    /// Standard normal via Box-Muller (two uniforms per call, no cache).
    double normal();
    Complex complex_normal();

private:
    std::uint64_t state_[4];
};

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);
ComplexMatrix random_hermitian(Rng& rng, std::size_t n);
ComplexMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank);
ComplexMatrix random_unitary(Rng& rng, std::size_t n);

/// Random matrix with operator norm exactly norm (norm <= 1 for contractions).
ComplexMatrix random_with_norm(Rng& rng, std::size_t n, double norm);

std::vector<Complex> random_polynomial(Rng& rng, std::size_t degree);

}  // namespace dilkit

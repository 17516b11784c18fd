#pragma once

#include "dilkit/linalg.hpp"

namespace dilkit {

/// Commuting operators A_1..A_d on C^n. Construction-validated: pairwise
/// commutators must vanish within eq_tol * (1 + |A_i| |A_j|).
struct CommutingTuple {
    std::vector<ComplexMatrix> mats;

    std::size_t generators() const { return mats.size(); }
    std::size_t space_dim() const { return mats.empty() ? 0 : mats.front().rows(); }
};

/// Throws PreconditionError when the matrices fail to commute at tolerance.
void validate_tuple(const CommutingTuple& t, const Tolerance& tol);

/// Multi-index (n_1, ..., n_d) labelling A_1^{n_1} ... A_d^{n_d}.
struct SemigroupWord {
    std::vector<std::size_t> exponents;
    std::size_t degree() const;
};

/// All words of total degree <= degree in d generators, lexicographically
/// ordered; the count is binomial(degree + d, d).
std::vector<SemigroupWord> words_up_to(std::size_t d, std::size_t degree);

/// The ordered product of powers; the empty word evaluates to the identity.
ComplexMatrix evaluate_word(const CommutingTuple& t, const SemigroupWord& w);

/// Positivity certificate for the block matrix M[i][j] = A(s_j)* A(s_i).
/// A FAIL refutes subnormality; a PASS is evidence up to the word-degree cap
/// only (in finite dimensions subnormal coincides with normal, so no finite
/// word set can certify subnormality of a genuine truncation).
struct BramCertificate {
    std::vector<SemigroupWord> words;
    ComplexMatrix block;         // (words * n) square
    double min_eigenvalue = 0.0;
    ComplexMatrix witness;       // stacked (xi_1; ...; xi_N) on failure
    bool pass = false;
    std::size_t degree_cap = 0;  // max degree among the words used
    explicit operator bool() const { return pass; }
};

BramCertificate bram_test(const CommutingTuple& t, const std::vector<SemigroupWord>& words,
                          const Tolerance& tol);

/// A*A - AA* >= 0; the degree-one specialization of the Bram inequalities.
PsdVerdict hyponormal_check(const ComplexMatrix& a, const Tolerance& tol);

}  // namespace dilkit

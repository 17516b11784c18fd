#include "dilkit/subnormal.hpp"

#include <algorithm>
#include <cmath>

namespace dilkit {

void validate_tuple(const CommutingTuple& t, const Tolerance& tol) {
    if (t.mats.empty()) throw DimensionError("empty tuple");
    const std::size_t n = t.mats.front().rows();
    for (const auto& a : t.mats)
        if (!a.is_square() || a.rows() != n)
            throw DimensionError("tuple member has shape " + shape_string(a) + ", expected " +
                                 std::to_string(n) + "x" + std::to_string(n));
    for (std::size_t i = 0; i < t.mats.size(); ++i)
        for (std::size_t j = i + 1; j < t.mats.size(); ++j) {
            const double commutator =
                operator_norm(t.mats[i] * t.mats[j] - t.mats[j] * t.mats[i]);
            const double allowed =
                tol.eq_tol * (1.0 + operator_norm(t.mats[i]) * operator_norm(t.mats[j]));
            if (commutator > allowed)
                throw PreconditionError("matrices " + std::to_string(i) + " and " +
                                        std::to_string(j) + " do not commute (residual " +
                                        std::to_string(commutator) + ")");
        }
}

std::size_t SemigroupWord::degree() const {
    std::size_t s = 0;
    for (std::size_t e : exponents) s += e;
    return s;
}

namespace {

void enumerate_words(std::size_t d, std::size_t budget, std::vector<std::size_t>& current,
                     std::vector<SemigroupWord>& out) {
    if (current.size() == d) {
        out.push_back(SemigroupWord{current});
        return;
    }
    for (std::size_t e = 0; e <= budget; ++e) {
        current.push_back(e);
        enumerate_words(d, budget - e, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<SemigroupWord> words_up_to(std::size_t d, std::size_t degree) {
    if (d == 0) throw PreconditionError("words_up_to needs at least one generator");
    std::vector<SemigroupWord> out;
    std::vector<std::size_t> current;
    enumerate_words(d, degree, current, out);
    std::sort(out.begin(), out.end(), [](const SemigroupWord& a, const SemigroupWord& b) {
        return a.exponents < b.exponents;
    });
    return out;
}

ComplexMatrix evaluate_word(const CommutingTuple& t, const SemigroupWord& w) {
    if (w.exponents.size() != t.generators())
        throw DimensionError("word has " + std::to_string(w.exponents.size()) +
                             " exponents for " + std::to_string(t.generators()) + " generators");
    ComplexMatrix result = ComplexMatrix::identity(t.space_dim());
    for (std::size_t i = 0; i < t.mats.size(); ++i)
        if (w.exponents[i] > 0) result = result * matrix_power(t.mats[i], w.exponents[i]);
    return result;
}

BramCertificate bram_test(const CommutingTuple& t, const std::vector<SemigroupWord>& words,
                          const Tolerance& tol) {
    validate_tuple(t, tol);
    if (words.empty()) throw PreconditionError("bram_test needs at least one word");
    const std::size_t n = t.space_dim();
    const std::size_t count = words.size();

    std::vector<ComplexMatrix> values;
    values.reserve(count);
    for (const auto& w : words) values.push_back(evaluate_word(t, w));

    // M[i][j] = A(s_j)* A(s_i), so that <M xi, xi> over stacked xi equals
    // sum_{i,j} <A(s_i) xi_j, A(s_j) xi_i>.
    BramCertificate cert;
    cert.words = words;
    cert.block = ComplexMatrix(count * n, count * n);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j)
            set_block(cert.block, i * n, j * n, adjoint(values[j]) * values[i]);
    PsdVerdict psd = is_psd(cert.block, tol);
    cert.min_eigenvalue = psd.min_eigenvalue;
    cert.pass = psd.psd;
    if (!psd.psd) cert.witness = psd.witness;
    for (const auto& w : words) cert.degree_cap = std::max(cert.degree_cap, w.degree());
    return cert;
}

PsdVerdict hyponormal_check(const ComplexMatrix& a, const Tolerance& tol) {
    if (!a.is_square())
        throw DimensionError("hyponormal_check expects a square matrix, got " + shape_string(a));
    return is_psd(adjoint(a) * a - a * adjoint(a), tol);
}

}  // namespace dilkit

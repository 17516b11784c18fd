#include "dilkit/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace dilkit {

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return out;
}

ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
    ComplexMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    return out;
}

double hermitian_residual_of(const ComplexMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
    return r;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    std::vector<double> s(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
    return s;
}

}  // namespace

HermitianEigen hermitian_eigensystem(const ComplexMatrix& m) {
    if (!m.is_square())
        throw DimensionError("hermitian_eigensystem requires a square matrix, got " +
                             shape_string(m));
    Eigen::MatrixXcd em = to_eigen(m);
    Eigen::MatrixXcd sym = 0.5 * (em + em.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw Error("Hermitian eigensolver failed to converge on " + shape_string(m));
    HermitianEigen out;
    out.eigenvalues.assign(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    out.vectors = from_eigen(solver.eigenvectors());
    return out;
}

std::vector<Complex> general_eigenvalues(const ComplexMatrix& m) {
    if (!m.is_square())
        throw DimensionError("general_eigenvalues requires a square matrix, got " +
                             shape_string(m));
    if (m.rows() == 0) return {};
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), false);
    if (solver.info() != Eigen::Success)
        throw Error("eigensolver failed to converge on " + shape_string(m));
    std::vector<Complex> vals(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(vals.begin(), vals.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return vals;
}

double operator_norm(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    // sqrt of the top eigenvalue of M*M, on the smaller side.
    Eigen::MatrixXcd em = to_eigen(m);
    Eigen::MatrixXcd gram =
        em.rows() <= em.cols() ? Eigen::MatrixXcd(em * em.adjoint()) : Eigen::MatrixXcd(em.adjoint() * em);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    double top = solver.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

PsdVerdict is_psd(const ComplexMatrix& m, const Tolerance& tol) {
    tol.validate();
    if (!m.is_square())
        throw DimensionError("is_psd requires a square matrix, got " + shape_string(m));
    PsdVerdict verdict;
    if (m.rows() == 0) {
        verdict.psd = verdict.hermitian = true;
        return verdict;
    }
    verdict.hermitian_residual = hermitian_residual_of(m);
    verdict.hermitian = verdict.hermitian_residual <= tol.eq_tol;
    HermitianEigen eig = hermitian_eigensystem(m);
    verdict.min_eigenvalue = eig.eigenvalues.front();
    verdict.witness = get_column(eig.vectors, 0);
    const double scale = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    verdict.psd = verdict.hermitian && verdict.min_eigenvalue >= -tol.psd_tol * scale;
    // A matrix that equals zero within the entrywise equality tolerance is
    // PSD; the relative floor alone would reject pure rounding noise.
    if (verdict.hermitian && scale <= tol.eq_tol) verdict.psd = true;
    return verdict;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m, const Tolerance& tol) {
    PsdVerdict verdict = is_psd(m, tol);
    if (!verdict.psd)
        throw PreconditionError("sqrt_psd: input is not PSD (min eigenvalue " +
                                std::to_string(verdict.min_eigenvalue) + ")");
    HermitianEigen eig = hermitian_eigensystem(m);
    const std::size_t n = m.rows();
    // Eigenvalues below the rank cutoff are treated as exact zeros; without
    // this, null-direction noise eps comes back as sqrt(eps).
    const double top = n == 0 ? 0.0 : std::max(0.0, eig.eigenvalues.back());
    const double cutoff = tol.rank_tol * top;
    ComplexMatrix root(n, n);
    if (top <= tol.eq_tol) return root;  // zero at equality tolerance
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = eig.eigenvalues[k] <= cutoff ? 0.0 : eig.eigenvalues[k];
        const double s = std::sqrt(lambda);
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                root(i, j) += s * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return root;
}

GramFactor gram_factor(const ComplexMatrix& g, const Tolerance& tol) {
    PsdVerdict verdict = is_psd(g, tol);
    if (!verdict.psd)
        throw PreconditionError("gram_factor: input is not PSD (min eigenvalue " +
                                std::to_string(verdict.min_eigenvalue) + ")");
    HermitianEigen eig = hermitian_eigensystem(g);
    const std::size_t m = g.rows();
    const double top = m == 0 ? 0.0 : std::max(0.0, eig.eigenvalues.back());
    const double cutoff = tol.rank_tol * top;
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < m; ++k)
        if (eig.eigenvalues[k] > cutoff && eig.eigenvalues[k] > 0.0) kept.push_back(k);
    // Rows ordered by descending eigenvalue.
    std::reverse(kept.begin(), kept.end());
    GramFactor out;
    out.rank = kept.size();
    out.factor = ComplexMatrix(out.rank, m);
    for (std::size_t r = 0; r < kept.size(); ++r) {
        const std::size_t k = kept[r];
        const double s = std::sqrt(eig.eigenvalues[k]);
        for (std::size_t j = 0; j < m; ++j)
            out.factor(r, j) = s * std::conj(eig.vectors(j, k));
    }
    return out;
}

GramEmbedding embedding_of_gram(const ComplexMatrix& g, const Tolerance& tol) {
    GramFactor f = gram_factor(g, tol);
    return GramEmbedding{conj(f.factor), f.rank};
}

ComplexMatrix orthonormal_range(const ComplexMatrix& m, const Tolerance& tol) {
    tol.validate();
    if (m.rows() == 0 || m.cols() == 0) return ComplexMatrix(m.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeThinU);
    const auto& sigma = svd.singularValues();
    const double cutoff = tol.rank_tol * sigma(0);
    Eigen::Index r = 0;
    while (r < sigma.size() && sigma(r) > cutoff && sigma(r) > 0.0) ++r;
    return from_eigen(svd.matrixU().leftCols(r));
}

std::size_t numerical_rank(const ComplexMatrix& m, const Tolerance& tol) {
    tol.validate();
    std::vector<double> sigma = singular_values(m);
    if (sigma.empty()) return 0;
    const double cutoff = tol.rank_tol * sigma.front();
    std::size_t r = 0;
    while (r < sigma.size() && sigma[r] > cutoff && sigma[r] > 0.0) ++r;
    return r;
}

ComplexMatrix inverse(const ComplexMatrix& m, double* cond) {
    if (!m.is_square()) throw DimensionError("inverse of non-square " + shape_string(m));
    if (m.rows() == 0) return m;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double smin = sigma(sigma.size() - 1);
    const double smax = sigma(0);
    if (cond) *cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (smin <= smax * 1e-14 || smin == 0.0)
        throw PreconditionError("inverse: matrix numerically singular (sigma_min " +
                                std::to_string(smin) + ")");
    Eigen::VectorXd inv_sigma = sigma.cwiseInverse();
    Eigen::MatrixXcd result =
        svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().adjoint();
    return from_eigen(result);
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullU | Eigen::ComputeFullV);
    return from_eigen(svd.matrixU() * svd.matrixV().adjoint());
}

ComplexMatrix frame_match_unitary(const ComplexMatrix& s1, const ComplexMatrix& s2,
                                  const Tolerance& tol) {
    if (s1.cols() != s2.cols())
        throw DimensionError("frame_match_unitary: frames index different generating sets");
    if (s1.rows() != s2.rows())
        throw PreconditionError("frame_match_unitary: spaces have different dimensions " +
                                std::to_string(s1.rows()) + " vs " + std::to_string(s2.rows()));
    const std::size_t r = s1.rows();
    // Shared Gram; the two copies agree when both frames realize the same form.
    ComplexMatrix g = (adjoint(s1) * s1 + adjoint(s2) * s2) * Complex(0.5, 0.0);
    const double gram_gap = max_abs_diff(adjoint(s1) * s1, adjoint(s2) * s2);
    const double scale = 1.0 + max_abs(g);
    if (gram_gap > 1e3 * tol.eq_tol * scale)
        throw PreconditionError("frame_match_unitary: Gram matrices disagree by " +
                                std::to_string(gram_gap));
    HermitianEigen eig = hermitian_eigensystem(g);
    const double top = std::max(0.0, eig.eigenvalues.back());
    const double cutoff = tol.rank_tol * top;
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
        if (eig.eigenvalues[k] > cutoff && eig.eigenvalues[k] > 0.0) kept.push_back(k);
    if (kept.size() != r)
        throw PreconditionError("frame_match_unitary: Gram rank " + std::to_string(kept.size()) +
                                " does not match space dimension " + std::to_string(r) +
                                " (frames are not spanning)");
    // Q_i = S_i V Lambda^{-1/2} is unitary; W = Q2 Q1* matches the frames.
    ComplexMatrix vl(g.rows(), r);
    for (std::size_t c = 0; c < r; ++c) {
        const std::size_t k = kept[c];
        const double s = 1.0 / std::sqrt(eig.eigenvalues[k]);
        for (std::size_t i = 0; i < g.rows(); ++i) vl(i, c) = eig.vectors(i, k) * s;
    }
    ComplexMatrix q1 = s1 * vl;
    ComplexMatrix q2 = s2 * vl;
    return polar_unitary(q2 * adjoint(q1));
}

Complex sesquilinear(const ComplexMatrix& g, const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.cols() != 1 || v.cols() != 1 || g.rows() != u.rows() || g.cols() != v.rows())
        throw DimensionError("sesquilinear: incompatible shapes");
    Complex s = 0.0;
    for (std::size_t a = 0; a < g.rows(); ++a)
        for (std::size_t b = 0; b < g.cols(); ++b)
            s += u(a, 0) * std::conj(v(b, 0)) * g(a, b);
    return s;
}

}  // namespace dilkit

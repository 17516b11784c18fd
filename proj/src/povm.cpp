#include "dilkit/povm.hpp"

#include <cmath>

namespace dilkit {

namespace {

void check_povm_shape(const Povm& p) {
    if (p.effects.empty()) throw DimensionError("POVM has no effects");
    for (const auto& e : p.effects)
        if (e.rows() != p.n || e.cols() != p.n)
            throw DimensionError("POVM effect has shape " + shape_string(e) + ", expected " +
                                 std::to_string(p.n) + "x" + std::to_string(p.n));
}

ComplexMatrix generating_frame(const NaimarkDilation& d) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(d.projections.size());
    for (const auto& q : d.projections) blocks.push_back(q * d.V);
    return hstack(blocks);
}

}  // namespace

PovmVerdict validate_povm(const Povm& p, const Tolerance& tol) {
    check_povm_shape(p);
    PovmVerdict out;
    out.valid = true;
    ComplexMatrix sum(p.n, p.n);
    for (const auto& e : p.effects) {
        out.effect_verdicts.push_back(is_psd(e, tol));
        if (!out.effect_verdicts.back().psd) out.valid = false;
        sum = sum + e;
    }
    out.sum_residual = max_abs_diff(sum, ComplexMatrix::identity(p.n));
    if (out.sum_residual > tol.eq_tol) out.valid = false;
    return out;
}

NaimarkDilation naimark_dilate(const Povm& p, const Tolerance& tol) {
    PovmVerdict verdict = validate_povm(p, tol);
    if (!verdict.valid)
        throw PreconditionError("naimark_dilate: invalid POVM (sum residual " +
                                std::to_string(verdict.sum_residual) + ")");
    const std::size_t k = p.effects.size();
    const std::size_t n = p.n;

    // Stacked sqrt blocks give an isometry into C^{kn}; the coordinate-block
    // projections compress back to the effects.
    std::vector<ComplexMatrix> roots;
    roots.reserve(k);
    for (const auto& e : p.effects) roots.push_back(sqrt_psd(e, tol));

    // Minimal reduction of span{Q_i V xi}. The span is block diagonal, so it
    // reduces blockwise; block i is range(E_i^{1/2}) = range(E_i), and taking
    // the basis from E_i itself keeps the reduced dimension at
    // sum_i rank(E_i) exactly.
    std::vector<ComplexMatrix> bases;
    std::size_t K = 0;
    for (const auto& e : p.effects) {
        bases.push_back(orthonormal_range(e, tol));
        K += bases.back().cols();
    }

    NaimarkDilation out;
    out.K_dim = K;
    out.V = ComplexMatrix(K, n);
    std::size_t row = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t r = bases[i].cols();
        set_block(out.V, row, 0, adjoint(bases[i]) * roots[i]);
        ComplexMatrix q(K, K);
        for (std::size_t j = 0; j < r; ++j) q(row + j, row + j) = 1.0;
        out.projections.push_back(q);
        row += r;
    }
    return out;
}

NaimarkReport verify_naimark(const Povm& p, const NaimarkDilation& d, const Tolerance& tol) {
    check_povm_shape(p);
    if (p.effects.size() != d.projections.size())
        throw DimensionError("dilation has " + std::to_string(d.projections.size()) +
                             " projections for " + std::to_string(p.effects.size()) +
                             " effects");
    if (d.V.rows() != d.K_dim || d.V.cols() != p.n)
        throw DimensionError("dilation V has shape " + shape_string(d.V));

    NaimarkReport report;
    ComplexMatrix v_adj = adjoint(d.V);
    ComplexMatrix q_sum(d.K_dim, d.K_dim);
    for (std::size_t i = 0; i < p.effects.size(); ++i) {
        const ComplexMatrix& q = d.projections[i];
        if (q.rows() != d.K_dim || q.cols() != d.K_dim)
            throw DimensionError("projection has shape " + shape_string(q));
        report.compression_residual =
            std::max(report.compression_residual, max_abs_diff(v_adj * q * d.V, p.effects[i]));
        report.pvm_residual = std::max(report.pvm_residual, max_abs_diff(q * q, q));
        report.pvm_residual = std::max(report.pvm_residual, max_abs_diff(adjoint(q), q));
        for (std::size_t j = 0; j < i; ++j)
            report.pvm_residual = std::max(report.pvm_residual, max_abs(q * d.projections[j]));
        q_sum = q_sum + q;
    }
    report.pvm_residual =
        std::max(report.pvm_residual, max_abs_diff(q_sum, ComplexMatrix::identity(d.K_dim)));
    report.isometry_residual =
        max_abs_diff(v_adj * d.V, ComplexMatrix::identity(p.n));
    report.ok = report.compression_residual <= tol.eq_tol &&
                report.isometry_residual <= tol.eq_tol && report.pvm_residual <= tol.eq_tol;
    return report;
}

MatrixMap povm_induced_map(const Povm& p) {
    check_povm_shape(p);
    const std::size_t k = p.effects.size();
    std::vector<ComplexMatrix> images;
    images.reserve(k * k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            images.push_back(a == b ? p.effects[a] : ComplexMatrix(p.n, p.n));
    return MatrixMap(k, p.n, std::move(images));
}

NaimarkDilation naimark_via_stinespring(const Povm& p, const Tolerance& tol) {
    MatrixMap induced = povm_induced_map(p);
    DilationPair pair = stinespring(induced, tol);
    const std::size_t k = p.effects.size();

    // The pair dilates the full M_k map; the commutative dilation only needs
    // the span of the diagonal units' orbit, which is smaller (the classes of
    // e_pp (x) xi). Reduce to it before reading off the spectral measure.
    std::vector<ComplexMatrix> blocks;
    for (std::size_t i = 0; i < k; ++i) blocks.push_back(pair.rep(i, i) * pair.V);
    ComplexMatrix basis = orthonormal_range(hstack(blocks), tol);
    ComplexMatrix basis_adj = adjoint(basis);

    NaimarkDilation out;
    out.K_dim = basis.cols();
    out.V = basis_adj * pair.V;
    for (std::size_t i = 0; i < k; ++i)
        out.projections.push_back(basis_adj * pair.rep(i, i) * basis);
    return out;
}

ComplexMatrix match_naimark(const NaimarkDilation& d1, const NaimarkDilation& d2,
                            const Tolerance& tol) {
    if (d1.projections.size() != d2.projections.size())
        throw DimensionError("match_naimark: different outcome counts");
    return frame_match_unitary(generating_frame(d1), generating_frame(d2), tol);
}

}  // namespace dilkit

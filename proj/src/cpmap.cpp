#include "dilkit/cpmap.hpp"

#include "dilkit/rng.hpp"

#include <cmath>
#include <numeric>

namespace dilkit {

namespace {

std::size_t unit_index(std::size_t p, std::size_t q, std::size_t d) { return p * d + q; }

}  // namespace

MatrixMap::MatrixMap(std::size_t d, std::size_t n, std::vector<ComplexMatrix> images)
    : d_(d), n_(n), images_(std::move(images)) {
    if (images_.size() != d_ * d_)
        throw DimensionError("MatrixMap expects d^2 = " + std::to_string(d_ * d_) +
                             " images, got " + std::to_string(images_.size()));
    for (const auto& img : images_)
        if (img.rows() != n_ || img.cols() != n_)
            throw DimensionError("MatrixMap image has shape " + shape_string(img) +
                                 ", expected " + std::to_string(n_) + "x" + std::to_string(n_));
    choi_ = choi_of(images_, d_, n_);
}

MatrixMap MatrixMap::from_choi(const ComplexMatrix& choi, std::size_t d, std::size_t n) {
    return map_of_choi(choi, d, n);
}

MatrixMap MatrixMap::from_kraus(std::size_t d, std::size_t n,
                                const std::vector<ComplexMatrix>& kraus) {
    std::vector<ComplexMatrix> images;
    images.reserve(d * d);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            ComplexMatrix img(n, n);
            for (const auto& v : kraus) {
                if (v.rows() != d || v.cols() != n)
                    throw DimensionError("Kraus operator has shape " + shape_string(v) +
                                         ", expected " + std::to_string(d) + "x" +
                                         std::to_string(n));
                // adjoint(V) e_pq V = conj(row p of V)^T (row q of V)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        img(i, j) += std::conj(v(p, i)) * v(q, j);
            }
            images.push_back(img);
        }
    return MatrixMap(d, n, std::move(images));
}

const ComplexMatrix& MatrixMap::image(std::size_t p, std::size_t q) const {
    if (p >= d_ || q >= d_) throw DimensionError("matrix-unit index out of range");
    return images_[unit_index(p, q, d_)];
}

ComplexMatrix MatrixMap::apply(const ComplexMatrix& a) const {
    if (a.rows() != d_ || a.cols() != d_)
        throw DimensionError("MatrixMap::apply expects a " + std::to_string(d_) + "x" +
                             std::to_string(d_) + " argument, got " + shape_string(a));
    ComplexMatrix out(n_, n_);
    for (std::size_t p = 0; p < d_; ++p)
        for (std::size_t q = 0; q < d_; ++q) {
            const Complex c = a(p, q);
            if (c == Complex(0.0, 0.0)) continue;
            out = out + images_[unit_index(p, q, d_)] * c;
        }
    return out;
}

ComplexMatrix MatrixMap::unit_image() const { return apply(ComplexMatrix::identity(d_)); }

bool MatrixMap::hermiticity_preserving(const Tolerance& tol) const {
    double residual = 0.0;
    for (std::size_t i = 0; i < choi_.rows(); ++i)
        for (std::size_t j = 0; j < choi_.cols(); ++j)
            residual = std::max(residual, std::abs(choi_(i, j) - std::conj(choi_(j, i))));
    return residual <= tol.eq_tol * (1.0 + max_abs(choi_));
}

ComplexMatrix choi_of(const std::vector<ComplexMatrix>& images, std::size_t d, std::size_t n) {
    if (images.size() != d * d)
        throw DimensionError("choi_of expects d^2 images, got " + std::to_string(images.size()));
    ComplexMatrix choi(d * n, d * n);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            const ComplexMatrix& img = images[unit_index(p, q, d)];
            if (img.rows() != n || img.cols() != n)
                throw DimensionError("choi_of image has shape " + shape_string(img));
            set_block(choi, p * n, q * n, img);
        }
    return choi;
}

MatrixMap map_of_choi(const ComplexMatrix& choi, std::size_t d, std::size_t n) {
    if (choi.rows() != d * n || choi.cols() != d * n)
        throw DimensionError("map_of_choi expects a " + std::to_string(d * n) + "x" +
                             std::to_string(d * n) + " Choi matrix, got " + shape_string(choi));
    std::vector<ComplexMatrix> images;
    images.reserve(d * d);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) images.push_back(get_block(choi, p * n, q * n, n, n));
    return MatrixMap(d, n, std::move(images));
}

CpVerdict cp_level_check(const MatrixMap& phi, const std::vector<ComplexMatrix>& elements,
                         const Tolerance& tol) {
    const std::size_t m = elements.size();
    const std::size_t n = phi.n();
    for (const auto& a : elements)
        if (a.rows() != phi.d() || a.cols() != phi.d())
            throw DimensionError("cp_level_check element has shape " + shape_string(a));
    ComplexMatrix block(m * n, m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            set_block(block, i * n, j * n, phi.apply(adjoint(elements[i]) * elements[j]));
    PsdVerdict psd = is_psd(block, tol);
    CpVerdict out;
    out.cp = psd.psd;
    out.min_eigenvalue = psd.min_eigenvalue;
    if (!psd.psd) out.witness = psd.witness;
    return out;
}

CpVerdict is_completely_positive(const MatrixMap& phi, const Tolerance& tol) {
    PsdVerdict psd = is_psd(phi.choi(), tol);
    CpVerdict out;
    out.cp = psd.psd;
    out.min_eigenvalue = psd.min_eigenvalue;
    if (!psd.psd) out.witness = psd.witness;
    return out;
}

const ComplexMatrix& DilationPair::rep(std::size_t p, std::size_t q) const {
    if (p >= d || q >= d) throw DimensionError("matrix-unit index out of range");
    return rep_images[unit_index(p, q, d)];
}

ComplexMatrix DilationPair::rep_apply(const ComplexMatrix& a) const {
    if (a.rows() != d || a.cols() != d)
        throw DimensionError("rep_apply expects a " + std::to_string(d) + "x" +
                             std::to_string(d) + " argument");
    ComplexMatrix out(K_dim, K_dim);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            const Complex c = a(p, q);
            if (c == Complex(0.0, 0.0)) continue;
            out = out + rep(p, q) * c;
        }
    return out;
}

MatrixMap DilationPair::compression() const {
    std::vector<ComplexMatrix> images;
    images.reserve(d * d);
    ComplexMatrix vs = adjoint(V);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) images.push_back(vs * rep(p, q) * V);
    return MatrixMap(d, n, std::move(images));
}

double PairResiduals::max() const {
    return std::max(std::max(star, multiplicativity), std::max(unit, norm_identity));
}

PairResiduals pair_residuals(const DilationPair& pair) {
    PairResiduals r;
    const std::size_t d = pair.d;
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q)
            r.star = std::max(r.star, max_abs_diff(adjoint(pair.rep(p, q)), pair.rep(q, p)));

    ComplexMatrix unit_sum(pair.K_dim, pair.K_dim);
    for (std::size_t p = 0; p < d; ++p) unit_sum = unit_sum + pair.rep(p, p);
    r.unit = max_abs_diff(unit_sum, ComplexMatrix::identity(pair.K_dim));

    // Multiplicativity over all unit pairs; exact when affordable, otherwise
    // probed with fixed pseudorandom vectors so the check stays O(d^4 K^2).
    const double exact_cost = std::pow(static_cast<double>(d), 4.0) *
                              std::pow(static_cast<double>(pair.K_dim), 3.0);
    if (exact_cost <= 2e8) {
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = 0; q < d; ++q)
                for (std::size_t s = 0; s < d; ++s)
                    for (std::size_t t = 0; t < d; ++t) {
                        ComplexMatrix prod = pair.rep(p, q) * pair.rep(s, t);
                        if (q == s)
                            prod = prod - pair.rep(p, t);
                        r.multiplicativity = std::max(r.multiplicativity, max_abs(prod));
                    }
    } else {
        Rng rng(0x9127348);
        for (int probe = 0; probe < 3; ++probe) {
            ComplexMatrix x = random_matrix(rng, pair.K_dim, 1);
            x = x * Complex(1.0 / frobenius_norm(x), 0.0);
            for (std::size_t p = 0; p < d; ++p)
                for (std::size_t q = 0; q < d; ++q)
                    for (std::size_t s = 0; s < d; ++s)
                        for (std::size_t t = 0; t < d; ++t) {
                            ComplexMatrix y = pair.rep(p, q) * (pair.rep(s, t) * x);
                            if (q == s) y = y - pair.rep(p, t) * x;
                            r.multiplicativity = std::max(r.multiplicativity, max_abs(y));
                        }
        }
    }

    const double v_norm_sq = std::pow(operator_norm(pair.V), 2.0);
    const double unit_norm = operator_norm(adjoint(pair.V) * unit_sum * pair.V);
    r.norm_identity = std::abs(v_norm_sq - unit_norm);
    return r;
}

void validate_pair(const DilationPair& pair, const Tolerance& tol) {
    if (pair.rep_images.size() != pair.d * pair.d)
        throw DimensionError("dilation pair stores " + std::to_string(pair.rep_images.size()) +
                             " representation images, expected d^2");
    if (pair.V.rows() != pair.K_dim || pair.V.cols() != pair.n)
        throw DimensionError("dilation pair V has shape " + shape_string(pair.V) +
                             ", expected " + std::to_string(pair.K_dim) + "x" +
                             std::to_string(pair.n));
    for (const auto& img : pair.rep_images)
        if (img.rows() != pair.K_dim || img.cols() != pair.K_dim)
            throw DimensionError("representation image has shape " + shape_string(img));
    PairResiduals r = pair_residuals(pair);
    const double allowed =
        tol.eq_tol * (1.0 + std::pow(operator_norm(pair.V), 2.0)) * 10.0;
    if (r.max() > allowed)
        throw PreconditionError("dilation pair laws violated (residual " +
                                std::to_string(r.max()) + ")");
}

namespace {

// Pre-quotient Gram of the basis {e_pq (x) e_k} under
// <a (x) xi, b (x) eta> = <phi(b* a) xi, eta>:
//   G[(p,q,k)][(r,s,l)] = delta_{rp} phi(e_sq)[l, k].
ComplexMatrix stinespring_gram(const MatrixMap& phi) {
    const std::size_t d = phi.d();
    const std::size_t n = phi.n();
    const std::size_t D = d * d * n;
    ComplexMatrix g(D, D);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q)
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t alpha = (p * d + q) * n + k;
                for (std::size_t s = 0; s < d; ++s) {
                    const ComplexMatrix& img = phi.image(s, q);
                    const std::size_t r = p;  // delta_{rp}
                    for (std::size_t l = 0; l < n; ++l) {
                        const std::size_t beta = (r * d + s) * n + l;
                        g(alpha, beta) = img(l, k);
                    }
                }
            }
    return g;
}

}  // namespace

DilationPair stinespring(const MatrixMap& phi, const Tolerance& tol) {
    std::vector<std::size_t> order(phi.d() * phi.d() * phi.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return stinespring(phi, tol, order);
}

DilationPair stinespring(const MatrixMap& phi, const Tolerance& tol,
                         const std::vector<std::size_t>& basis_order) {
    const std::size_t d = phi.d();
    const std::size_t n = phi.n();
    const std::size_t D = d * d * n;
    if (basis_order.size() != D)
        throw DimensionError("basis_order must enumerate all " + std::to_string(D) +
                             " pre-space basis vectors");

    const ComplexMatrix g = stinespring_gram(phi);
    PsdVerdict psd = is_psd(g, tol);
    if (!psd.psd)
        throw PreconditionError(
            "stinespring: map is not completely positive; pre-space Gram has eigenvalue " +
            std::to_string(psd.min_eigenvalue));

    // Quotient by the null space in the caller-chosen enumeration order,
    // then undo the permutation so index math below stays canonical.
    ComplexMatrix permuted(D, D);
    for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b) permuted(a, b) = g(basis_order[a], basis_order[b]);
    GramEmbedding emb = embedding_of_gram(permuted, tol);
    const std::size_t K = emb.rank;
    ComplexMatrix classes(K, D);  // column alpha = class of basis vector alpha in C^K
    for (std::size_t a = 0; a < D; ++a)
        set_column(classes, basis_order[a], get_column(emb.columns, a));

    // classes * adjoint(classes) is diagonal with the kept Gram eigenvalues.
    ComplexMatrix row_gram = classes * adjoint(classes);
    ComplexMatrix pseudo(D, K);  // adjoint(classes) * diag(1/lambda)
    for (std::size_t b = 0; b < D; ++b)
        for (std::size_t j = 0; j < K; ++j)
            pseudo(b, j) = std::conj(classes(j, b)) / row_gram(j, j).real();

    auto index = [d, n](std::size_t p, std::size_t q, std::size_t k) {
        return (p * d + q) * n + k;
    };

    DilationPair pair;
    pair.d = d;
    pair.n = n;
    pair.K_dim = K;
    pair.rep_images.reserve(d * d);
    // pi(e_uv): left multiplication e_uv (e_pq (x) xi) = delta_{vp} e_uq (x) xi,
    // pushed to the quotient through the pseudoinverse of the class map.
    for (std::size_t u = 0; u < d; ++u)
        for (std::size_t v = 0; v < d; ++v) {
            ComplexMatrix moved(K, D);
            for (std::size_t q = 0; q < d; ++q)
                for (std::size_t k = 0; k < n; ++k)
                    set_column(moved, index(v, q, k), get_column(classes, index(u, q, k)));
            pair.rep_images.push_back(moved * pseudo);
        }

    pair.V = ComplexMatrix(K, n);
    for (std::size_t k = 0; k < n; ++k) {
        ComplexMatrix col(K, 1);
        for (std::size_t p = 0; p < d; ++p) col = col + get_column(classes, index(p, p, k));
        set_column(pair.V, k, col);
    }
    return pair;
}

namespace {

// Columns pi(e_pq) V e_k for all (p, q, k): the generating set of a pair.
ComplexMatrix generating_frame(const DilationPair& pair) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(pair.d * pair.d);
    for (std::size_t p = 0; p < pair.d; ++p)
        for (std::size_t q = 0; q < pair.d; ++q) blocks.push_back(pair.rep(p, q) * pair.V);
    return hstack(blocks);
}

}  // namespace

DilationPair minimal_reduce(const DilationPair& pair, const Tolerance& tol) {
    ComplexMatrix frame = generating_frame(pair);
    ComplexMatrix basis = orthonormal_range(frame, tol);  // K x r
    ComplexMatrix basis_adj = adjoint(basis);
    DilationPair out;
    out.d = pair.d;
    out.n = pair.n;
    out.K_dim = basis.cols();
    out.rep_images.reserve(pair.d * pair.d);
    for (const auto& img : pair.rep_images) out.rep_images.push_back(basis_adj * img * basis);
    out.V = basis_adj * pair.V;
    return out;
}

DilationPair rotate_pair(const DilationPair& pair, const ComplexMatrix& w) {
    if (w.rows() != pair.K_dim || w.cols() != pair.K_dim)
        throw DimensionError("rotate_pair: unitary has shape " + shape_string(w));
    ComplexMatrix w_adj = adjoint(w);
    DilationPair out = pair;
    for (auto& img : out.rep_images) img = w * img * w_adj;
    out.V = w * pair.V;
    return out;
}

ComplexMatrix match_minimal(const DilationPair& p1, const DilationPair& p2,
                            const Tolerance& tol) {
    if (p1.d != p2.d || p1.n != p2.n)
        throw DimensionError("match_minimal: pairs have different source/target sizes");
    validate_pair(p1, tol);
    validate_pair(p2, tol);

    MatrixMap c1 = p1.compression();
    MatrixMap c2 = p2.compression();
    double gap = 0.0;
    for (std::size_t i = 0; i < c1.images().size(); ++i)
        gap = std::max(gap, max_abs_diff(c1.images()[i], c2.images()[i]));
    const double scale = 1.0 + max_abs(c1.choi());
    if (gap > 1e4 * tol.eq_tol * scale)
        throw PreconditionError("match_minimal: pairs dilate different maps (compression gap " +
                                std::to_string(gap) + ")");

    ComplexMatrix s1 = generating_frame(p1);
    ComplexMatrix s2 = generating_frame(p2);
    if (numerical_rank(s1, tol) != p1.K_dim)
        throw PreconditionError("match_minimal: first pair is not minimal");
    if (numerical_rank(s2, tol) != p2.K_dim)
        throw PreconditionError("match_minimal: second pair is not minimal");
    return frame_match_unitary(s1, s2, tol);
}

PaulsenLift::PaulsenLift(OperatorSpaceSpan span, std::vector<ComplexMatrix> values, Tolerance tol)
    : span_(std::move(span)), values_(std::move(values)), tol_(tol) {
    tol_.validate();
    if (span_.basis.empty()) throw PreconditionError("PaulsenLift: empty span");
    if (values_.size() != span_.basis.size())
        throw DimensionError("PaulsenLift: " + std::to_string(values_.size()) + " values for " +
                             std::to_string(span_.basis.size()) + " basis elements");
    const std::size_t n = span_.n;
    for (const auto& b : span_.basis)
        if (b.rows() != n || b.cols() != n)
            throw DimensionError("span basis element has shape " + shape_string(b));
    m_ = values_.front().rows();
    for (const auto& v : values_)
        if (v.rows() != m_ || v.cols() != m_)
            throw DimensionError("lifted value has shape " + shape_string(v));

    basis_mat_ = ComplexMatrix(n * n, span_.basis.size());
    for (std::size_t j = 0; j < span_.basis.size(); ++j)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                basis_mat_(r * n + c, j) = span_.basis[j](r, c);
    if (numerical_rank(basis_mat_, tol_) != span_.basis.size())
        throw PreconditionError("PaulsenLift: span basis is linearly dependent at rank_tol");
}

ComplexMatrix PaulsenLift::phi(const ComplexMatrix& a) const {
    const std::size_t n = span_.n;
    if (a.rows() != n || a.cols() != n)
        throw DimensionError("phi expects an " + std::to_string(n) + "x" + std::to_string(n) +
                             " argument");
    ComplexMatrix vec(n * n, 1);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) vec(r * n + c, 0) = a(r, c);
    // Least squares through the normal equations; the basis is independent.
    ComplexMatrix gram = adjoint(basis_mat_) * basis_mat_;
    ComplexMatrix coeffs = inverse(gram) * (adjoint(basis_mat_) * vec);
    const double residual = max_abs(basis_mat_ * coeffs - vec);
    if (residual > tol_.eq_tol * (1.0 + max_abs(a)))
        throw PreconditionError("element lies outside the operator space span (residual " +
                                std::to_string(residual) + ")");
    ComplexMatrix out(m_, m_);
    for (std::size_t j = 0; j < values_.size(); ++j) out = out + values_[j] * coeffs(j, 0);
    return out;
}

PaulsenElement PaulsenLift::decompose(const ComplexMatrix& x) const {
    const std::size_t n = span_.n;
    if (x.rows() != 2 * n || x.cols() != 2 * n)
        throw DimensionError("Paulsen system element must be " + std::to_string(2 * n) + "x" +
                             std::to_string(2 * n) + ", got " + shape_string(x));
    ComplexMatrix tl = get_block(x, 0, 0, n, n);
    ComplexMatrix br = get_block(x, n, n, n, n);
    Complex lambda = tl.trace() * (1.0 / static_cast<double>(n));
    ComplexMatrix scalar_block = ComplexMatrix::identity(n) * lambda;
    const double scale = 1.0 + std::abs(lambda);
    if (max_abs_diff(tl, scalar_block) > tol_.eq_tol * scale ||
        max_abs_diff(br, scalar_block) > tol_.eq_tol * scale)
        throw PreconditionError("matrix is not in the Paulsen system: diagonal corners are not "
                                "a common scalar multiple of the identity");
    PaulsenElement el;
    el.scalar = lambda;
    el.upper = get_block(x, 0, n, n, n);
    el.lower = adjoint(get_block(x, n, 0, n, n));
    phi(el.upper);  // membership check, throws when outside the span
    phi(el.lower);
    return el;
}

ComplexMatrix PaulsenLift::assemble(const PaulsenElement& el) const {
    const std::size_t n = span_.n;
    ComplexMatrix x(2 * n, 2 * n);
    set_block(x, 0, 0, ComplexMatrix::identity(n) * el.scalar);
    set_block(x, n, n, ComplexMatrix::identity(n) * el.scalar);
    set_block(x, 0, n, el.upper);
    set_block(x, n, 0, adjoint(el.lower));
    return x;
}

ComplexMatrix PaulsenLift::apply(const PaulsenElement& el) const {
    ComplexMatrix y(2 * m_, 2 * m_);
    set_block(y, 0, 0, ComplexMatrix::identity(m_) * el.scalar);
    set_block(y, m_, m_, ComplexMatrix::identity(m_) * el.scalar);
    set_block(y, 0, m_, phi(el.upper));
    set_block(y, m_, 0, adjoint(phi(el.lower)));
    return y;
}

ComplexMatrix PaulsenLift::apply(const ComplexMatrix& x) const { return apply(decompose(x)); }

PaulsenLevelCheck PaulsenLift::level_check(
    const std::vector<std::vector<ComplexMatrix>>& cells) const {
    const std::size_t k = cells.size();
    if (k == 0) throw DimensionError("level_check: empty cell matrix");
    for (const auto& row : cells)
        if (row.size() != k) throw DimensionError("level_check: cell matrix is not square");
    const std::size_t n2 = 2 * span_.n;
    const std::size_t m2 = 2 * m_;
    ComplexMatrix input(k * n2, k * n2);
    ComplexMatrix output(k * m2, k * m2);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            PaulsenElement el = decompose(cells[i][j]);
            set_block(input, i * n2, j * n2, assemble(el));
            set_block(output, i * m2, j * m2, apply(el));
        }
    PaulsenLevelCheck check;
    check.input = is_psd(input, tol_);
    check.output = is_psd(output, tol_);
    return check;
}

PaulsenLift paulsen_lift(const OperatorSpaceSpan& span, const std::vector<ComplexMatrix>& values,
                         const Tolerance& tol) {
    return PaulsenLift(span, values, tol);
}

}  // namespace dilkit

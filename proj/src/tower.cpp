#include "dilkit/tower.hpp"

#include <cmath>

namespace dilkit {

std::vector<ComplexMatrix> kraus_of(const MatrixMap& phi, const Tolerance& tol) {
    CpVerdict cp = is_completely_positive(phi, tol);
    if (!cp.cp)
        throw PreconditionError("kraus_of: map is not completely positive (min Choi eigenvalue " +
                                std::to_string(cp.min_eigenvalue) + ")");
    const std::size_t d = phi.d();
    const std::size_t n = phi.n();
    HermitianEigen eig = hermitian_eigensystem(phi.choi());
    const double top = std::max(0.0, eig.eigenvalues.back());
    const double cutoff = tol.rank_tol * top;
    std::vector<ComplexMatrix> kraus;
    for (std::size_t k = eig.eigenvalues.size(); k-- > 0;) {
        const double lambda = eig.eigenvalues[k];
        if (lambda <= cutoff || lambda <= 0.0) break;
        // Choi = sum_i w_i w_i* with w_i = vec(conj V_i), row index p*n + j.
        const double s = std::sqrt(lambda);
        ComplexMatrix v(d, n);
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t j = 0; j < n; ++j)
                v(p, j) = std::conj(s * eig.vectors(p * n + j, k));
        kraus.push_back(v);
    }
    return kraus;
}

UcpMap make_ucp(const MatrixMap& phi, const Tolerance& tol) {
    if (phi.d() != phi.n())
        throw DimensionError("UCP map must be an endomap (d = n), got d = " +
                             std::to_string(phi.d()) + ", n = " + std::to_string(phi.n()));
    UcpMap u{phi, kraus_of(phi, tol)};
    const std::size_t n = phi.n();
    const double unital = max_abs_diff(phi.unit_image(), ComplexMatrix::identity(n));
    if (unital > tol.eq_tol)
        throw PreconditionError("map is not unital: |phi(1) - 1| = " + std::to_string(unital));
    ComplexMatrix kraus_sum(n, n);
    for (const auto& v : u.kraus) kraus_sum = kraus_sum + adjoint(v) * v;
    const double kraus_unital = max_abs_diff(kraus_sum, ComplexMatrix::identity(n));
    if (kraus_unital > 1e3 * tol.eq_tol)
        throw PreconditionError("Kraus family fails sum V_i* V_i = 1 (residual " +
                                std::to_string(kraus_unital) + ")");
    return u;
}

ComplexMatrix stinespring_isometry(const UcpMap& u) {
    const std::size_t n = u.dim();
    const std::size_t e = u.multiplicity();
    ComplexMatrix v(n * e, n);
    for (std::size_t i = 0; i < e; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) v(k * e + i, l) = u.kraus[i](k, l);
    return v;
}

const ComplexMatrix& DilationTower::iota(std::size_t k) const {
    if (k < 1 || k > iotas.size())
        throw DimensionError("iota index " + std::to_string(k) + " outside 1.." +
                             std::to_string(iotas.size()));
    return iotas[k - 1];
}

ComplexMatrix apply_slow_factor(const ComplexMatrix& a, const ComplexMatrix& iota,
                                std::size_t fast_dim) {
    const std::size_t n = a.rows();
    if (!a.is_square() || iota.rows() != n * fast_dim)
        throw DimensionError("apply_slow_factor: shape mismatch");
    ComplexMatrix out(iota.rows(), iota.cols());
    for (std::size_t c = 0; c < iota.cols(); ++c)
        for (std::size_t h = 0; h < n; ++h)
            for (std::size_t e = 0; e < fast_dim; ++e) {
                Complex acc = 0.0;
                for (std::size_t g = 0; g < n; ++g)
                    if (a(h, g) != Complex(0.0, 0.0)) acc += a(h, g) * iota(g * fast_dim + e, c);
                out(h * fast_dim + e, c) = acc;
            }
    return out;
}

namespace {

// (iota (x) 1_E) applied to the columns of w (each of length n*E).
ComplexMatrix extend_by_identity(const ComplexMatrix& iota, const ComplexMatrix& w,
                                 std::size_t e_dim) {
    const std::size_t n = iota.cols();
    if (w.rows() != n * e_dim) throw DimensionError("extend_by_identity: shape mismatch");
    ComplexMatrix out(iota.rows() * e_dim, w.cols());
    for (std::size_t c = 0; c < w.cols(); ++c)
        for (std::size_t g = 0; g < iota.rows(); ++g)
            for (std::size_t e = 0; e < e_dim; ++e) {
                Complex acc = 0.0;
                for (std::size_t h = 0; h < n; ++h) acc += iota(g, h) * w(h * e_dim + e, c);
                out(g * e_dim + e, c) = acc;
            }
    return out;
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
    std::size_t result = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (result > cap / std::max<std::size_t>(base, 1) + 1) return cap + 1;
        result *= base;
    }
    return result;
}

}  // namespace

ComplexMatrix tower_moment(const DilationTower& t, std::size_t k, const ComplexMatrix& a) {
    if (k == 0) return a;
    const ComplexMatrix& io = t.iota(k);
    std::size_t fast = io.rows() / t.n;
    return adjoint(io) * apply_slow_factor(a, io, fast);
}

ComplexMatrix iterate_map(const MatrixMap& phi, std::size_t k, const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < k; ++i) out = phi.apply(out);
    return out;
}

DilationTower build_tower(const UcpMap& u, std::size_t horizon, const Tolerance& tol,
                          std::size_t dim_cap) {
    return tower_from_isometry(u, stinespring_isometry(u), horizon, tol, dim_cap);
}

DilationTower tower_from_isometry(const UcpMap& u, const ComplexMatrix& v, std::size_t horizon,
                                  const Tolerance& tol, std::size_t dim_cap) {
    if (horizon < 1) throw PreconditionError("build_tower requires horizon >= 1");
    const std::size_t n = u.dim();
    if (v.cols() != n || v.rows() == 0 || v.rows() % n != 0)
        throw DimensionError("per-step isometry has shape " + shape_string(v) +
                             ", expected (n*E) x n with n = " + std::to_string(n));
    const std::size_t e = v.rows() / n;
    const std::size_t top = checked_power(e, horizon, dim_cap / std::max<std::size_t>(n, 1));
    if (n * top > dim_cap || top > dim_cap) {
        const double required =
            static_cast<double>(n) * std::pow(static_cast<double>(e), static_cast<double>(horizon));
        throw PreconditionError("tower requires dimension " + std::to_string(required) +
                                " (n * E^horizon), above the cap " + std::to_string(dim_cap));
    }

    DilationTower t;
    t.horizon = horizon;
    t.n = n;
    t.E_dim = e;
    t.map = u;
    t.V = v;
    t.iotas.push_back(t.V);
    for (std::size_t k = 1; k < horizon; ++k)
        t.iotas.push_back(extend_by_identity(t.iotas.back(), t.V, e));

    // Construction-time verification: isometries and the moment identity on
    // the full matrix-unit basis against direct iteration of the map.
    const double scale = tol.eq_tol * 100.0;
    for (std::size_t k = 1; k <= horizon; ++k) {
        const ComplexMatrix& io = t.iota(k);
        if (max_abs_diff(adjoint(io) * io, ComplexMatrix::identity(n)) > scale)
            throw Error("build_tower: iota_" + std::to_string(k) + " is not an isometry");
    }
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            ComplexMatrix unit(n, n);
            unit(p, q) = 1.0;
            for (std::size_t k = 1; k <= horizon; ++k) {
                const double gap =
                    max_abs_diff(tower_moment(t, k, unit), iterate_map(u.phi, k, unit));
                if (gap > scale)
                    throw Error("build_tower: moment identity fails at level " +
                                std::to_string(k) + " (residual " + std::to_string(gap) + ")");
            }
        }
    return t;
}

ComplexMatrix ProjectionLadder::q(std::size_t k, std::size_t dense_cap) const {
    if (k > horizon) throw DimensionError("ladder index out of range");
    std::size_t epow = 1;
    for (std::size_t i = 0; i < horizon; ++i) epow *= E_dim;
    const std::size_t top = n * epow;
    if (top > dense_cap)
        throw PreconditionError("dense ladder projection would be " + std::to_string(top) +
                                "-dimensional, above the cap " + std::to_string(dense_cap));
    std::size_t fast = 1;
    for (std::size_t i = 0; i < k; ++i) fast *= E_dim;
    ComplexMatrix range = k == horizon ? ComplexMatrix::identity(n) : iotas[horizon - k - 1];
    return kron(range * adjoint(range), ComplexMatrix::identity(fast));
}

ProjectionLadder projection_ladder(const DilationTower& t, const Tolerance& tol) {
    ProjectionLadder ladder;
    ladder.n = t.n;
    ladder.E_dim = t.E_dim;
    ladder.horizon = t.horizon;
    ladder.iotas = t.iotas;

    std::size_t epow = 1;
    for (std::size_t k = 0; k <= t.horizon; ++k) {
        const std::size_t j = t.horizon - k;
        const std::size_t range_rank =
            j == 0 ? t.n : numerical_rank(t.iota(j), tol);
        ladder.ranks.push_back(range_rank * epow);
        epow *= t.E_dim;
    }

    // min eig(Q_{k+1} - Q_k): the trailing Kronecker identity factor
    // preserves spectra, so the gap reduces to X = W1 W1* - W2 W2* with
    // W1 = iota_{j-1} (x) 1_E and W2 = iota_j. X vanishes off the joint
    // range of W1 and W2; compressing to an orthonormal basis of that range
    // turns the gap into a small Hermitian eigenproblem.
    for (std::size_t k = 0; k + 1 <= t.horizon; ++k) {
        const std::size_t j = t.horizon - k;  // difference lives on H (x) E^j
        const ComplexMatrix& w2 = t.iota(j);  // n E^j x n
        ComplexMatrix w1(w2.rows(), t.n * t.E_dim);
        if (j == 1) {
            w1 = ComplexMatrix::identity(t.n * t.E_dim);
        } else {
            const ComplexMatrix& prev = t.iota(j - 1);
            for (std::size_t g = 0; g < prev.rows(); ++g)
                for (std::size_t h = 0; h < t.n; ++h) {
                    const Complex value = prev(g, h);
                    if (value == Complex(0.0, 0.0)) continue;
                    for (std::size_t e = 0; e < t.E_dim; ++e)
                        w1(g * t.E_dim + e, h * t.E_dim + e) = value;
                }
        }
        ComplexMatrix basis = orthonormal_range(hstack({w1, w2}), tol);
        ComplexMatrix b1 = adjoint(basis) * w1;
        ComplexMatrix b2 = adjoint(basis) * w2;
        ComplexMatrix gap = b1 * adjoint(b1) - b2 * adjoint(b2);
        HermitianEigen eig = hermitian_eigensystem(gap);
        const double min_eig = std::min(0.0, eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front());
        ladder.gap_min_eigenvalues.push_back(min_eig);
        if (min_eig < -tol.psd_tol)
            throw PreconditionError("projection ladder is not increasing at step " +
                                    std::to_string(k) + " (eigenvalue " +
                                    std::to_string(min_eig) + ")");
    }
    return ladder;
}

}  // namespace dilkit

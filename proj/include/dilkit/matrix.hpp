#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dilkit {

using Complex = std::complex<double>;

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shapes do not line up (rows/cols/index out of range).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A mathematical precondition failed (not PSD, not a contraction, ...).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Tolerance policy shared by every numerical decision in the toolkit.
///
/// eq_tol   -- absolute entrywise equality threshold
/// psd_tol  -- relative eigenvalue floor: min eig >= -psd_tol * ||M||
/// rank_tol -- relative singular/eigenvalue cutoff for numerical rank
struct Tolerance {
    double eq_tol = 1e-9;
    double psd_tol = 1e-9;
    double rank_tol = 1e-10;

    void validate() const {
        auto bad = [](double t) { return !(t > 0.0) || !(t < 1.0); };
        if (bad(eq_tol) || bad(psd_tol) || bad(rank_tol))
            throw PreconditionError("tolerances must lie strictly between 0 and 1");
    }
};

/// Dense complex matrix with value semantics. Entries are stored row-major.
/// All operations return fresh matrices; nothing mutates its arguments.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    /// Zero matrix of the given shape.
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

    /// Matrix from row-major entries; rejects NaN/Inf and shape mismatch.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    /// Convenience: build from nested initializer lists of rows.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<Complex>& d);
    static ComplexMatrix column(const std::vector<Complex>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    bool is_square() const { return rows_ == cols_; }

    const Complex& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }
    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const Complex& at(std::size_t i, std::size_t j) const;

    const std::vector<Complex>& entries() const { return data_; }

    ComplexMatrix operator+(const ComplexMatrix& other) const;
    ComplexMatrix operator-(const ComplexMatrix& other) const;
    ComplexMatrix operator-() const;
    ComplexMatrix operator*(const ComplexMatrix& other) const;
    ComplexMatrix operator*(Complex scalar) const;

    Complex trace() const;

    /// Throws if any entry is NaN or Inf.
    void check_finite(const std::string& context) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline ComplexMatrix operator*(Complex scalar, const ComplexMatrix& m) { return m * scalar; }
inline ComplexMatrix operator*(double scalar, const ComplexMatrix& m) {
    return m * Complex(scalar, 0.0);
}

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix transpose(const ComplexMatrix& m);
ComplexMatrix conj(const ComplexMatrix& m);

/// Kronecker product, left factor on the slow index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// a^m for m >= 0 (a square).
ComplexMatrix matrix_power(const ComplexMatrix& a, std::size_t m);

ComplexMatrix hstack(const std::vector<ComplexMatrix>& blocks);
ComplexMatrix vstack(const std::vector<ComplexMatrix>& blocks);

ComplexMatrix get_block(const ComplexMatrix& m, std::size_t i0, std::size_t j0,
                        std::size_t rows, std::size_t cols);
void set_block(ComplexMatrix& m, std::size_t i0, std::size_t j0, const ComplexMatrix& block);

ComplexMatrix get_column(const ComplexMatrix& m, std::size_t j);
void set_column(ComplexMatrix& m, std::size_t j, const ComplexMatrix& col);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

/// <x, y> = sum_i x_i conj(y_i), linear in the FIRST argument. Every inner
/// product in the toolkit uses this convention; x and y are column vectors.
Complex inner(const ComplexMatrix& x, const ComplexMatrix& y);

std::string shape_string(const ComplexMatrix& m);

}  // namespace dilkit

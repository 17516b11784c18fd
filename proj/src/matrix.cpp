#include "dilkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dilkit {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw DimensionError(message);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(data_.size() == rows_ * cols_,
            "entry count " + std::to_string(data_.size()) + " does not match " +
                std::to_string(rows_) + "x" + std::to_string(cols_));
    check_finite("ComplexMatrix constructor");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        require(row.size() == cols_, "ragged initializer list");
        data_.insert(data_.end(), row.begin(), row.end());
    }
    check_finite("ComplexMatrix initializer");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::column(const std::vector<Complex>& v) {
    return ComplexMatrix(v.size(), 1, v);
}

const Complex& ComplexMatrix::at(std::size_t i, std::size_t j) const {
    require(i < rows_ && j < cols_, "index (" + std::to_string(i) + "," + std::to_string(j) +
                                        ") out of range for " + shape_string(*this));
    return data_[i * cols_ + j];
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_,
            "shape mismatch in +: " + shape_string(*this) + " vs " + shape_string(other));
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + other.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_,
            "shape mismatch in -: " + shape_string(*this) + " vs " + shape_string(other));
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - other.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& other) const {
    require(cols_ == other.rows_,
            "shape mismatch in *: " + shape_string(*this) + " vs " + shape_string(other));
    ComplexMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex aik = data_[i * cols_ + k];
            if (aik == Complex(0.0, 0.0)) continue;
            const Complex* brow = &other.data_[k * other.cols_];
            Complex* orow = &out.data_[i * other.cols_];
            for (std::size_t j = 0; j < other.cols_; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator*(Complex scalar) const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * scalar;
    return out;
}

Complex ComplexMatrix::trace() const {
    require(is_square(), "trace of non-square " + shape_string(*this));
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

void ComplexMatrix::check_finite(const std::string& context) const {
    for (const Complex& z : data_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw PreconditionError("non-finite entry in " + context);
    }
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    return out;
}

ComplexMatrix conj(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = std::conj(m(i, j));
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

ComplexMatrix matrix_power(const ComplexMatrix& a, std::size_t m) {
    if (!a.is_square()) throw DimensionError("matrix_power of non-square " + shape_string(a));
    ComplexMatrix result = ComplexMatrix::identity(a.rows());
    ComplexMatrix base = a;
    std::size_t e = m;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

ComplexMatrix hstack(const std::vector<ComplexMatrix>& blocks) {
    if (blocks.empty()) return {};
    std::size_t rows = blocks.front().rows();
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        if (b.rows() != rows) throw DimensionError("hstack: inconsistent row counts");
        cols += b.cols();
    }
    ComplexMatrix out(rows, cols);
    std::size_t j0 = 0;
    for (const auto& b : blocks) {
        set_block(out, 0, j0, b);
        j0 += b.cols();
    }
    return out;
}

ComplexMatrix vstack(const std::vector<ComplexMatrix>& blocks) {
    if (blocks.empty()) return {};
    std::size_t cols = blocks.front().cols();
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) throw DimensionError("vstack: inconsistent column counts");
        rows += b.rows();
    }
    ComplexMatrix out(rows, cols);
    std::size_t i0 = 0;
    for (const auto& b : blocks) {
        set_block(out, i0, 0, b);
        i0 += b.rows();
    }
    return out;
}

ComplexMatrix get_block(const ComplexMatrix& m, std::size_t i0, std::size_t j0,
                        std::size_t rows, std::size_t cols) {
    if (i0 + rows > m.rows() || j0 + cols > m.cols())
        throw DimensionError("get_block out of range for " + shape_string(m));
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(i0 + i, j0 + j);
    return out;
}

void set_block(ComplexMatrix& m, std::size_t i0, std::size_t j0, const ComplexMatrix& block) {
    if (i0 + block.rows() > m.rows() || j0 + block.cols() > m.cols())
        throw DimensionError("set_block out of range for " + shape_string(m));
    for (std::size_t i = 0; i < block.rows(); ++i)
        for (std::size_t j = 0; j < block.cols(); ++j) m(i0 + i, j0 + j) = block(i, j);
}

ComplexMatrix get_column(const ComplexMatrix& m, std::size_t j) {
    return get_block(m, 0, j, m.rows(), 1);
}

void set_column(ComplexMatrix& m, std::size_t j, const ComplexMatrix& col) {
    if (col.cols() != 1) throw DimensionError("set_column expects a column vector");
    set_block(m, 0, j, col);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("max_abs_diff shape mismatch: " + shape_string(a) + " vs " +
                             shape_string(b));
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

double max_abs(const ComplexMatrix& m) {
    double v = 0.0;
    for (const Complex& z : m.entries()) v = std::max(v, std::abs(z));
    return v;
}

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const Complex& z : m.entries()) s += std::norm(z);
    return std::sqrt(s);
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

Complex inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.cols() != 1 || y.cols() != 1 || x.rows() != y.rows())
        throw DimensionError("inner expects two column vectors of equal length");
    Complex s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, 0) * std::conj(y(i, 0));
    return s;
}

std::string shape_string(const ComplexMatrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

}  // namespace dilkit

#include "core/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "core/eigen_bridge.hpp"

namespace dephase {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {
    if (rows == 0 || cols == 0) {
        throw Error(ErrorCode::invalid_argument, "matrix dimensions must be >= 1");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw Error(ErrorCode::invalid_argument, "matrix dimensions must be >= 1");
    }
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::invalid_argument, "entry count does not match rows*cols");
    }
    check_finite();
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw Error(ErrorCode::not_square, "trace of non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw Error(ErrorCode::dimension_mismatch, "matrix addition: shape mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw Error(ErrorCode::dimension_mismatch, "matrix subtraction: shape mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
    for (auto& z : data_) z *= scalar;
    return *this;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.data_.size(); ++i) {
        m = std::max(m, std::abs(a.data_[i] - b.data_[i]));
    }
    return m;
}

void ComplexMatrix::check_finite() const {
    for (const auto& z : data_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorCode::invalid_argument, "matrix contains non-finite entries");
        }
    }
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::dimension_mismatch, "matrix product: inner dimensions differ");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex(0.0, 0.0)) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

ComplexMatrix operator*(Complex scalar, const ComplexMatrix& a) {
    ComplexMatrix out = a;
    out *= scalar;
    return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    a -= b;
    return a;
}

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw Error(ErrorCode::invalid_argument, "pure state must have dim >= 1");
    }
    double norm2 = 0.0;
    for (const auto& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw Error(ErrorCode::invalid_argument, "pure state contains non-finite amplitudes");
        }
        norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "pure state not normalized: |psi|^2 = " << norm2;
        throw Error(ErrorCode::invalid_argument, msg.str());
    }
}

ComplexMatrix PureState::projector() const {
    const std::size_t n = dim();
    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
    return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (!matrix_.is_square()) {
        throw Error(ErrorCode::not_square, "density matrix must be square");
    }
    matrix_.check_finite();
    const std::size_t n = matrix_.rows();
    double herm_dev = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            herm_dev = std::max(herm_dev, std::abs(matrix_(r, c) - std::conj(matrix_(c, r))));
    if (herm_dev > 1e-12) {
        std::ostringstream msg;
        msg << "density matrix not Hermitian: max |A - A^dag| = " << herm_dev;
        throw Error(ErrorCode::invalid_argument, msg.str());
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > 1e-12) {
        std::ostringstream msg;
        msg << "density matrix trace != 1: tr = (" << tr.real() << ", " << tr.imag() << ")";
        throw Error(ErrorCode::invalid_argument, msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(matrix_),
                                                           Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        std::ostringstream msg;
        msg << "density matrix has negative eigenvalue " << solver.eigenvalues().minCoeff();
        throw Error(ErrorCode::invalid_argument, msg.str());
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= Complex(1.0 / static_cast<double>(dim), 0.0);
    return DensityMatrix(std::move(m));
}

}  // namespace dephase

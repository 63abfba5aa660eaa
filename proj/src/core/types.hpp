#ifndef DEPHASE_CORE_TYPES_HPP
#define DEPHASE_CORE_TYPES_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "core/errors.hpp"

namespace dephase {

using Complex = std::complex<double>;

// Dense complex matrix, row-major storage. Every channel, Kraus operator,
// coefficient matrix and state in this project is small (dim <= a few
// hundred), so there is no sparse path.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<Complex>& diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Complex>& entries() const noexcept { return data_; }
    std::vector<Complex>& entries() noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    Complex trace() const;
    double max_abs() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

    // max |a - b| over entries; throws DimensionMismatch on shape mismatch.
    static double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

    // Throws on NaN/Inf entries.
    void check_finite() const;

private:
    std::size_t rows_, cols_;
    std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, const ComplexMatrix& a);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);

// Normalized pure state. Squared amplitudes must sum to 1 within 1e-12.
class PureState {
public:
    explicit PureState(std::vector<Complex> amplitudes);

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    ComplexMatrix projector() const;

private:
    std::vector<Complex> amplitudes_;
};

// Density matrix with its physicality invariants enforced on construction:
// Hermitian within 1e-12 (max entry of A - A^dag), unit trace within 1e-12,
// eigenvalues >= -1e-10.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix matrix);

    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const noexcept { return matrix_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

private:
    ComplexMatrix matrix_;
};

}  // namespace dephase

#endif

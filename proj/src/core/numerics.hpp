#ifndef DEPHASE_CORE_NUMERICS_HPP
#define DEPHASE_CORE_NUMERICS_HPP

#include <vector>

#include "core/types.hpp"

namespace dephase {

// Kronecker product; output dims are the products of the input dims.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Entry-wise (Schur/Hadamard) product; shapes must match.
ComplexMatrix schur(const ComplexMatrix& a, const ComplexMatrix& b);

// Sum of singular values, tr sqrt(A^dag A). Requires a square matrix.
double trace_norm(const ComplexMatrix& a);

// Number of singular values above tol. tol <= 0 selects the default
// 1e-10 * sigma_max.
std::size_t numeric_rank(const ComplexMatrix& a, double tol = 0.0);

struct LeastSquaresSolution {
    std::vector<Complex> x;
    double residual;  // Euclidean norm of coeffs*x - rhs
};

// Minimum-Euclidean-norm solution of coeffs*x = rhs (pseudo-inverse
// semantics). Throws RankDeficientInconsistent when the residual exceeds
// 1e-10 * |rhs| (or 1e-10 for zero rhs).
LeastSquaresSolution min_norm_solve(const ComplexMatrix& coeffs, const std::vector<Complex>& rhs);

// Overlap <psi|rho|psi>, clamped reporting range [0, 1 + 1e-12] checked by
// callers; dims must agree.
double fidelity(const PureState& target, const DensityMatrix& state);

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2 for mixed targets.
double fidelity_mixed(const DensityMatrix& target, const DensityMatrix& state);

}  // namespace dephase

#endif

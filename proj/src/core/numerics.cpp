#include "core/numerics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "core/eigen_bridge.hpp"
#include "core/errors.hpp"

namespace dephase {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex w = a(ar, ac);
            if (w == Complex(0.0, 0.0)) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = w * b(br, bc);
        }
    return out;
}

ComplexMatrix schur(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "schur product: shape mismatch");
    }
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c) * b(r, c);
    return out;
}

double trace_norm(const ComplexMatrix& a) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "trace_norm requires a square matrix");
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
    return svd.singularValues().sum();
}

std::size_t numeric_rank(const ComplexMatrix& a, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = tol > 0.0 ? tol : 1e-10 * sv(0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

LeastSquaresSolution min_norm_solve(const ComplexMatrix& coeffs,
                                    const std::vector<Complex>& rhs) {
    if (coeffs.rows() != rhs.size()) {
        throw Error(ErrorCode::dimension_mismatch, "min_norm_solve: rhs length != rows");
    }
    const Eigen::MatrixXcd A = to_eigen(coeffs);
    Eigen::VectorXcd b(static_cast<Eigen::Index>(rhs.size()));
    for (std::size_t i = 0; i < rhs.size(); ++i) b(static_cast<Eigen::Index>(i)) = rhs[i];

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-12 * sv(0) : 0.0;
    Eigen::VectorXcd y = svd.matrixU().adjoint() * b;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        y(i) = sv(i) > cutoff ? y(i) / sv(i) : Complex(0.0, 0.0);
    }
    Eigen::VectorXcd x = svd.matrixV() * y;

    const double residual = (A * x - b).norm();
    const double scale = std::max(b.norm(), 1.0);
    if (residual > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "min_norm_solve: system inconsistent, residual " << residual;
        throw Error(ErrorCode::rank_deficient_inconsistent, msg.str());
    }

    LeastSquaresSolution sol;
    sol.x.resize(rhs.size() == 0 ? 0 : static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) sol.x[static_cast<std::size_t>(i)] = x(i);
    sol.residual = residual;
    return sol;
}

double fidelity(const PureState& target, const DensityMatrix& state) {
    if (target.dim() != state.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "fidelity: dimension mismatch");
    }
    Complex acc = 0.0;
    for (std::size_t r = 0; r < target.dim(); ++r) {
        Complex row = 0.0;
        for (std::size_t c = 0; c < target.dim(); ++c) row += state(r, c) * target[c];
        acc += std::conj(target[r]) * row;
    }
    return acc.real();
}

double fidelity_mixed(const DensityMatrix& target, const DensityMatrix& state) {
    if (target.dim() != state.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "fidelity_mixed: dimension mismatch");
    }
    const Eigen::MatrixXcd a = to_eigen(target.matrix());
    const Eigen::MatrixXcd b = to_eigen(state.matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a);
    Eigen::VectorXd ev = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sqrt_a =
        ea.eigenvectors() * ev.asDiagonal() * ea.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(sqrt_a * b * sqrt_a);
    const double root_sum = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return root_sum * root_sum;
}

}  // namespace dephase

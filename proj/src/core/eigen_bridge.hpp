#ifndef DEPHASE_CORE_EIGEN_BRIDGE_HPP
#define DEPHASE_CORE_EIGEN_BRIDGE_HPP

#include <Eigen/Dense>

#include "core/types.hpp"

namespace dephase {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    return Eigen::Map<const RowMajor>(m.entries().data(), static_cast<Eigen::Index>(m.rows()),
                                      static_cast<Eigen::Index>(m.cols()));
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
    ComplexMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    return out;
}

}  // namespace dephase

#endif

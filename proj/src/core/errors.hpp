#ifndef DEPHASE_CORE_ERRORS_HPP
#define DEPHASE_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace dephase {

// Error codes shared with the C API (see include/dephase/dephase.h).
enum class ErrorCode : int {
    invalid_argument = 1,
    dimension_mismatch = 2,
    not_square = 3,
    rank_deficient_inconsistent = 4,
    quadrature_not_converged = 5,
    infeasible_weights = 6,
    basis_search_failed = 7,
    singular_system = 8,
    search_failed = 9,
    cutoff_too_small = 10,
    scheme_unavailable = 11,
    bad_config = 12,
    io_error = 13,
    internal = 14,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised when a solved Kraus-weight vector contains a negative entry; keeps
// the full solution so callers can report it instead of clipping.
class InfeasibleWeights : public Error {
public:
    InfeasibleWeights(std::vector<double> weights, const std::string& what)
        : Error(ErrorCode::infeasible_weights, what), weights_(std::move(weights)) {}

    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

// Raised when the phase-diagonal RU search cannot reach the requested
// residual; carries the best residual found.
class SearchFailed : public Error {
public:
    SearchFailed(double best_residual, const std::string& what)
        : Error(ErrorCode::search_failed, what), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

}  // namespace dephase

#endif

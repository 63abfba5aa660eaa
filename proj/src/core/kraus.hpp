#ifndef DEPHASE_CORE_KRAUS_HPP
#define DEPHASE_CORE_KRAUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/bath.hpp"
#include "core/types.hpp"

namespace dephase::kraus {

struct KrausOp {
    std::string label;
    ComplexMatrix matrix;
};

// Ordered list of labeled Kraus operators with optional probability weights.
// Construction enforces completeness sum K^dag K = I to 1e-10 and, when
// weights are present, that the set is a random-unitary (RU) mixture: weights
// nonnegative, summing to 1, each op equal to sqrt(weight) times a unitary.
class KrausSet {
public:
    KrausSet(std::vector<KrausOp> ops, std::optional<std::vector<double>> weights = std::nullopt);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ops_.size(); }
    const std::vector<KrausOp>& ops() const noexcept { return ops_; }
    const KrausOp& op(std::size_t i) const { return ops_.at(i); }
    bool has_weights() const noexcept { return weights_.has_value(); }
    const std::vector<double>& weights() const { return *weights_; }

    // max entry of |sum K^dag K - I|
    double completeness_residual() const;

private:
    std::size_t dim_;
    std::vector<KrausOp> ops_;
    std::optional<std::vector<double>> weights_;
};

// Entry-wise coefficient matrix C(N) of the N-qubit dephasing channel:
// entry (i, j) = gamma^{(w(i)-w(j))^2} with w the Hamming weight of the basis
// index, basis ordered in binary counting order.
struct SchurMatrix {
    int n_qubits;
    double gamma;
    ComplexMatrix matrix;
};

SchurMatrix build_schur_matrix(int n_qubits, double gamma);

// Sign assignments over Hamming-weight classes {0..n}; each vector expands to
// a 2^n diagonal +-1 matrix by broadcasting over the classes.
class SignBasis {
public:
    SignBasis(int n_qubits, std::vector<std::vector<int>> class_signs);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t size() const noexcept { return class_signs_.size(); }
    const std::vector<std::vector<int>>& class_signs() const noexcept { return class_signs_; }

    ComplexMatrix expand(std::size_t i) const;
    std::string label(std::size_t i) const;

private:
    int n_qubits_;
    std::vector<std::vector<int>> class_signs_;
};

// N_K = 1 + n(n+1)/2 class-sign vectors whose pair-product system is
// invertible. n = 1, 2, 3 use the worked bases (identity/sigma_z pair, the
// four two-qubit sign patterns, the seven three-qubit operators); larger n
// fall back to a greedy search over subset flips.
SignBasis ru_sign_basis(int n_qubits);

// Weight-class pairs (w, w') with w < w', sorted by (w' - w, w). This is the
// row order of the weight system after the leading trace row.
std::vector<std::pair<int, int>> weight_class_pairs(int n_qubits);

// The N_K x N_K real system whose first row is all ones (trace) and whose
// remaining rows are the pair products s_i(w) s_i(w').
ComplexMatrix pair_product_system(const SignBasis& basis);

// Right-hand side [1, gamma^{(w'-w)^2}, ...] matching pair_product_system.
std::vector<Complex> weight_system_rhs(int n_qubits, double gamma);

// Solves the weight system and returns K_i = sqrt(c_i) B_i. Throws
// InfeasibleWeights (carrying the full solution) when any c_i < -1e-12 and
// SingularSystem when the basis invariant is violated.
KrausSet solve_ru_weights(const SignBasis& basis, const SchurMatrix& schur_matrix);

// Two-qubit common-bath non-RU triple: diag{l1,1,1,l1}, l2 diag{1,0,0,-1},
// l3 diag{1,0,0,1}, labeled vacuum/odd/even.
KrausSet build_common_nonru(const bath::DephasingCoefficients& coeffs);

// Diagonal unitary with P(i,i) = u^{s_i^2 - min s^2}, s_i = n/2 - w(i);
// the exponents are integers, so the power is branch-free. Composing this
// prefactor with the real-weight RU mixture reproduces the physical channel
// of the complex l1.
ComplexMatrix phase_prefactor(int n_qubits, Complex l1_phase);

struct CommonRuDecomposition {
    KrausSet set;          // sign-pattern ops sqrt(x_j) B_j with weights x
    ComplexMatrix phase;   // deterministic diagonal prefactor P
};

// Two-qubit RU ansatz of the four +-1 sign patterns; weights solved with
// gamma = |l1|. Throws InfeasibleWeights for gamma above the root of
// g^3 + g^2 + g = 1 (~0.5437).
CommonRuDecomposition build_common_ru(const bath::DephasingCoefficients& coeffs);

// Paper closed forms for the two-qubit RU weights, kept as a recorded
// cross-check; they fail the identity-channel check at t = 0.
std::vector<double> common_ru_closed_form_weights(const bath::DephasingCoefficients& coeffs);

// Single-qubit parity pair sqrt(odd) sigma_z, sqrt(even) I.
KrausSet build_single_qubit_parity(const bath::BathSpec& spec, double t);

// All tensor products of per-qubit Kraus operators, labels joined with
// commas, weights multiplied. Every factor set must have dim 2.
KrausSet build_individual_tensor(const std::vector<KrausSet>& per_qubit);

// sum_i K_i X K_i^dag as a raw linear map (X need not be a state).
ComplexMatrix apply_channel_map(const KrausSet& set, const ComplexMatrix& x);

// Channel application to a density matrix; trace preserved to 1e-10.
DensityMatrix apply_channel(const KrausSet& set, const DensityMatrix& rho);

// Left-composes a diagonal unitary with every op of the set.
KrausSet compose_phase(const ComplexMatrix& phase, const KrausSet& set);

struct EquivalenceResult {
    bool equal;
    double max_deviation;
};

// Compares induced process maps on the full matrix-unit basis.
EquivalenceResult decomposition_equivalence(const KrausSet& a, const KrausSet& b, double tol);

struct PhaseSearchOptions {
    double tol = 1e-10;
    std::uint64_t seed = 0x5eed5eedULL;
    int restarts = 32;
    int max_iterations = 300;
};

// Nonlinear least-squares search for an RU decomposition with diagonal-
// unitary phases theta_{i,w} and simplex-constrained weights, minimizing the
// weight-class residual against the Schur entries. Multi-start, seeded,
// deterministic. Throws SearchFailed (with the best residual) when tol is
// not reached.
KrausSet search_phase_ru(const SchurMatrix& schur_matrix, std::size_t n_ops,
                         const PhaseSearchOptions& options = {});

int hamming_weight(std::size_t index);

}  // namespace dephase::kraus

#endif

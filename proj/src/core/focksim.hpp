#ifndef DEPHASE_CORE_FOCKSIM_HPP
#define DEPHASE_CORE_FOCKSIM_HPP

#include <string>
#include <vector>

#include "core/bath.hpp"
#include "core/kraus.hpp"
#include "core/types.hpp"

namespace dephase::focksim {

// Exact evolution of (N-qubit system) x (one truncated bosonic mode). A
// multi-mode bath is validated through the g_total reduction: the channel
// coefficients depend only on sum_k |G_k|^2, so a single mode with matched
// |G|^2 is a faithful oracle.
struct FockConfig {
    int cutoff = 64;
    bath::Mode mode{1.0, 1.0};
    std::vector<double> times;
};

void validate(const FockConfig& cfg);

// Diagonal of the coupled system operator in the computational basis.
struct CouplingSpec {
    int n_qubits;
    std::vector<double> levels;

    // S_z = half the sum of sigma_z over qubits: level = n/2 - w(index).
    static CouplingSpec common_bath(int n_qubits);
    // Single qubit coupled through sigma_z itself: levels {1, -1}.
    static CouplingSpec single_qubit();

    std::size_t system_dim() const { return levels.size(); }
    double max_abs_level() const;
};

void validate(const CouplingSpec& coup);

// Total evolution operator at time t, block-diagonal over system levels;
// block_s = e^{-i phi(t) s^2} exp(-i s G b^dag) exp(-i s G* b) on the
// truncated mode (phi complex; its imaginary part normalizes the columns).
// Throws CutoffTooSmall when |s G|^2 > cutoff / 4 for the largest level.
ComplexMatrix total_unitary(const FockConfig& cfg, const CouplingSpec& coup, double t);

// The (m, 0) Fock block of total_unitary: a diagonal system operator.
ComplexMatrix kraus_from_projection(const FockConfig& cfg, const CouplingSpec& coup, double t,
                                    int m);

// All blocks m = 0 .. m_count-1 from a single unitary build.
std::vector<ComplexMatrix> fock_kraus_family(const FockConfig& cfg, const CouplingSpec& coup,
                                             double t, int m_count);

// Closed form diag_s e^{-i phi s^2} (-i s G)^m / sqrt(m!); the independent
// expectation for the extracted blocks.
ComplexMatrix analytic_fock_kraus(const FockConfig& cfg, const CouplingSpec& coup, double t,
                                  int m);

struct TraceNormRow {
    double t;
    int m;
    double norm;
};

// ||L'_m(t)|| over the time grid of cfg, m = 0 .. cutoff-1.
std::vector<TraceNormRow> trace_norm_table(const FockConfig& cfg, const CouplingSpec& coup);

// U (rho_S (x) |0><0|) U^dag.
ComplexMatrix evolve(const FockConfig& cfg, const CouplingSpec& coup, double t,
                     const ComplexMatrix& rho_sys);

ComplexMatrix partial_trace_env(const ComplexMatrix& rho_tot, std::size_t sys_dim,
                                std::size_t env_dim);
ComplexMatrix partial_trace_sys(const ComplexMatrix& rho_tot, std::size_t sys_dim,
                                std::size_t env_dim);

// Reduced system state after evolution: the oracle channel.
DensityMatrix channel_output(const FockConfig& cfg, const CouplingSpec& coup, double t,
                             const DensityMatrix& rho_sys);

// Reduced environment state after evolution.
ComplexMatrix environment_state(const FockConfig& cfg, const CouplingSpec& coup, double t,
                                const DensityMatrix& rho_sys);

struct LabeledProjector {
    std::string label;
    ComplexMatrix matrix;
};

// Fock-space parity projectors: {odd, even} or, in the three-outcome
// common-bath variant, {vacuum, odd, even} with the vacuum split out.
std::vector<LabeledProjector> parity_measurement_operators(int cutoff, bool split_vacuum);

// tr_E[U rho U^dag (I (x) M)]: the unnormalized branch of one environment
// measurement outcome.
ComplexMatrix measured_branch(const FockConfig& cfg, const CouplingSpec& coup, double t,
                              const DensityMatrix& rho_sys, const ComplexMatrix& projector);

struct MeasurementBasis {
    ComplexMatrix v;             // n_target x cutoff_m rows of the basis change
    double residual;             // max |V F - E| over entries (Eq. 26 satisfaction)
    double min_norm_residual;    // max per-row min-norm solve residual
    double row_gram_deviation;   // max |V V^dag - I|
    std::vector<PureState> basis_states;
};

// Solves the diagonal-entry linear system relating the target operators to
// the Fock family (per-row minimum-norm probe), then assembles the rows of V
// as a Gram-aligned partial isometry so that V extends to a unitary basis
// change. Throws RankDeficientInconsistent when the cutoff is too
// aggressive for the target.
MeasurementBasis solve_measurement_basis(const kraus::KrausSet& target,
                                         const std::vector<ComplexMatrix>& family,
                                         int cutoff_m);

// <psi_n| rho_env |psi_n> for every row of V.
std::vector<double> outcome_probabilities(const MeasurementBasis& basis,
                                          const ComplexMatrix& rho_env);

}  // namespace dephase::focksim

#endif

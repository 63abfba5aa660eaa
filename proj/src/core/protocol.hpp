#ifndef DEPHASE_CORE_PROTOCOL_HPP
#define DEPHASE_CORE_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/bath.hpp"
#include "core/kraus.hpp"
#include "core/types.hpp"

namespace dephase::protocol {

enum class Model { common_bath, individual_baths };
enum class Scheme { nonru_parity, ru_basis, tensor_parity };

// One end-to-end restoration run: which channel, which measurement scheme,
// which initial state, at what time.
struct Scenario {
    Model model = Model::common_bath;
    int n_qubits = 2;
    Scheme scheme = Scheme::nonru_parity;
    std::variant<PureState, DensityMatrix> initial_state =
        PureState(std::vector<Complex>{Complex(1.0, 0.0)});
    std::vector<bath::BathSpec> baths;  // one shared spec, or one per qubit
    double t = 0.0;
};

void validate(const Scenario& scenario);

// Outcome-conditioned restoration unitaries. Normalization prefactors live
// in branch probabilities; every stored operator is genuinely unitary.
struct RestorationPlan {
    struct Entry {
        std::string label;
        ComplexMatrix unitary;
    };
    std::vector<Entry> outcomes;
};

// The physical channel decomposition for the scenario plus its plan.
struct SchemeRealization {
    kraus::KrausSet channel;
    RestorationPlan plan;
};

// Throws SchemeUnavailable when ru_basis weights are infeasible and the
// phase search also fails.
SchemeRealization realize_scheme(const Scenario& scenario);

RestorationPlan restoration_plan(const Scenario& scenario);

struct BranchReport {
    std::string label;
    double probability = 0.0;
    bool negligible = false;  // probability below 1e-14; excluded from aggregation
    std::optional<DensityMatrix> post_state;
    std::optional<DensityMatrix> restored_state;
    double fidelity = 0.0;
};

std::vector<BranchReport> enumerate_branches(const Scenario& scenario);

struct ProtocolSummary {
    std::vector<BranchReport> branches;
    double average_fidelity = 0.0;  // probability-weighted over live branches
    double min_fidelity = 0.0;      // over live branches
    bool success = false;           // min fidelity >= 1 - 1e-9
};

ProtocolSummary run_protocol(const Scenario& scenario);

struct SampleReport {
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;
    std::vector<double> frequencies;
    std::vector<double> standard_errors;
    std::vector<double> exact_probabilities;
    double mean_fidelity = 0.0;  // empirical-frequency-weighted branch fidelity
};

// Draws shots from the exact branch distribution with a deterministic seeded
// generator; identical seed means identical output.
SampleReport sample_run(const Scenario& scenario, std::uint64_t seed, std::uint64_t shots);

}  // namespace dephase::protocol

#endif

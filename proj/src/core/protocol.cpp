#include "core/protocol.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace dephase::protocol {

namespace {

constexpr double kNegligibleProbability = 1e-14;

std::size_t state_dim(const Scenario& scenario) {
    if (std::holds_alternative<PureState>(scenario.initial_state)) {
        return std::get<PureState>(scenario.initial_state).dim();
    }
    return std::get<DensityMatrix>(scenario.initial_state).dim();
}

DensityMatrix initial_density(const Scenario& scenario) {
    if (std::holds_alternative<PureState>(scenario.initial_state)) {
        return DensityMatrix::from_pure(std::get<PureState>(scenario.initial_state));
    }
    return std::get<DensityMatrix>(scenario.initial_state);
}

const bath::BathSpec& bath_for_qubit(const Scenario& scenario, std::size_t q) {
    if (scenario.baths.size() == 1) return scenario.baths.front();
    return scenario.baths[q];
}

ComplexMatrix pauli_z() {
    return ComplexMatrix::diagonal({1.0, -1.0});
}

void check_unitary(const ComplexMatrix& u, const std::string& label) {
    const double dev =
        ComplexMatrix::max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
    if (dev > 1e-10) {
        throw Error(ErrorCode::internal,
                    "restoration operator '" + label + "' is not unitary, dev " +
                        std::to_string(dev));
    }
}

SchemeRealization realize_nonru_parity(const Scenario& scenario) {
    const auto coeffs = bath::coefficients(scenario.baths.front(), scenario.t);
    kraus::KrausSet channel = kraus::build_common_nonru(coeffs);
    RestorationPlan plan;
    plan.outcomes.push_back({"vacuum", ComplexMatrix::identity(4)});
    plan.outcomes.push_back({"odd", ComplexMatrix::diagonal({1.0, 1.0, 1.0, -1.0})});
    plan.outcomes.push_back({"even", ComplexMatrix::identity(4)});
    return {std::move(channel), std::move(plan)};
}

SchemeRealization realize_ru_basis(const Scenario& scenario) {
    const auto coeffs = bath::coefficients(scenario.baths.front(), scenario.t);
    const auto schur_matrix = kraus::build_schur_matrix(scenario.n_qubits, coeffs.gamma);

    std::optional<kraus::KrausSet> mixture;
    try {
        mixture = kraus::solve_ru_weights(kraus::ru_sign_basis(scenario.n_qubits), schur_matrix);
    } catch (const InfeasibleWeights&) {
        const auto pairs = kraus::weight_class_pairs(scenario.n_qubits);
        try {
            mixture = kraus::search_phase_ru(schur_matrix, pairs.size() + 1);
        } catch (const SearchFailed& err) {
            std::ostringstream msg;
            msg << "RU basis scheme unavailable: sign weights infeasible at gamma = "
                << coeffs.gamma << " and phase search stalled at residual "
                << err.best_residual();
            throw Error(ErrorCode::scheme_unavailable, msg.str());
        }
    }

    const ComplexMatrix prefactor = kraus::phase_prefactor(scenario.n_qubits, coeffs.l1);
    kraus::KrausSet channel = kraus::compose_phase(prefactor, *mixture);

    RestorationPlan plan;
    for (std::size_t i = 0; i < channel.size(); ++i) {
        const double w = channel.weights()[i];
        ComplexMatrix unitary = ComplexMatrix::identity(channel.dim());
        if (w >= kNegligibleProbability) {
            // exact inverse of the physical unitary part
            unitary = channel.op(i).matrix.adjoint();
            unitary *= Complex(1.0 / std::sqrt(w), 0.0);
        }
        plan.outcomes.push_back({channel.op(i).label, std::move(unitary)});
    }
    return {std::move(channel), std::move(plan)};
}

SchemeRealization realize_tensor_parity(const Scenario& scenario) {
    std::vector<kraus::KrausSet> factors;
    factors.reserve(static_cast<std::size_t>(scenario.n_qubits));
    for (int q = 0; q < scenario.n_qubits; ++q) {
        factors.push_back(kraus::build_single_qubit_parity(
            bath_for_qubit(scenario, static_cast<std::size_t>(q)), scenario.t));
    }
    kraus::KrausSet channel = kraus::build_individual_tensor(factors);

    RestorationPlan plan;
    for (std::size_t i = 0; i < channel.size(); ++i) {
        const std::string& label = channel.op(i).label;
        ComplexMatrix unitary(1, 1);
        unitary(0, 0) = 1.0;
        std::size_t pos = 0;
        for (int q = 0; q < scenario.n_qubits; ++q) {
            const std::size_t comma = label.find(',', pos);
            const std::string part = label.substr(pos, comma == std::string::npos
                                                           ? std::string::npos
                                                           : comma - pos);
            unitary = kron(unitary, part == "odd" ? pauli_z() : ComplexMatrix::identity(2));
            pos = comma == std::string::npos ? label.size() : comma + 1;
        }
        plan.outcomes.push_back({label, std::move(unitary)});
    }
    return {std::move(channel), std::move(plan)};
}

}  // namespace

void validate(const Scenario& scenario) {
    if (scenario.n_qubits < 1 || scenario.n_qubits > 10) {
        throw Error(ErrorCode::invalid_argument, "n_qubits must be in [1, 10]");
    }
    if (!(scenario.t >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "time must be >= 0");
    }
    const std::size_t dim = std::size_t{1} << scenario.n_qubits;
    if (state_dim(scenario) != dim) {
        throw Error(ErrorCode::dimension_mismatch, "initial state dim != 2^n_qubits");
    }
    switch (scenario.scheme) {
        case Scheme::nonru_parity:
            if (scenario.model != Model::common_bath || scenario.n_qubits != 2) {
                throw Error(ErrorCode::invalid_argument,
                            "nonRU_parity requires the two-qubit common-bath model");
            }
            break;
        case Scheme::ru_basis:
            if (scenario.model != Model::common_bath) {
                throw Error(ErrorCode::invalid_argument, "RU_basis requires the common bath");
            }
            break;
        case Scheme::tensor_parity:
            if (scenario.model != Model::individual_baths) {
                throw Error(ErrorCode::invalid_argument,
                            "tensor_parity requires individual baths");
            }
            break;
    }
    if (scenario.model == Model::common_bath) {
        if (scenario.baths.size() != 1) {
            throw Error(ErrorCode::invalid_argument, "common bath takes exactly one spec");
        }
    } else if (scenario.baths.size() != 1 &&
               scenario.baths.size() != static_cast<std::size_t>(scenario.n_qubits)) {
        throw Error(ErrorCode::invalid_argument,
                    "individual baths take one shared spec or one per qubit");
    }
}

SchemeRealization realize_scheme(const Scenario& scenario) {
    validate(scenario);
    SchemeRealization real = [&] {
        switch (scenario.scheme) {
            case Scheme::nonru_parity:
                return realize_nonru_parity(scenario);
            case Scheme::ru_basis:
                return realize_ru_basis(scenario);
            case Scheme::tensor_parity:
                return realize_tensor_parity(scenario);
        }
        throw Error(ErrorCode::internal, "unknown scheme");
    }();
    if (real.plan.outcomes.size() != real.channel.size()) {
        throw Error(ErrorCode::internal, "restoration plan does not cover all outcomes");
    }
    for (const auto& entry : real.plan.outcomes) check_unitary(entry.unitary, entry.label);
    return real;
}

RestorationPlan restoration_plan(const Scenario& scenario) {
    return realize_scheme(scenario).plan;
}

std::vector<BranchReport> enumerate_branches(const Scenario& scenario) {
    const SchemeRealization real = realize_scheme(scenario);
    const DensityMatrix rho0 = initial_density(scenario);
    const bool pure = std::holds_alternative<PureState>(scenario.initial_state);

    std::vector<BranchReport> branches;
    branches.reserve(real.channel.size());
    for (std::size_t i = 0; i < real.channel.size(); ++i) {
        const ComplexMatrix& k = real.channel.op(i).matrix;
        ComplexMatrix unnormalized = k * rho0.matrix() * k.adjoint();
        const double p = unnormalized.trace().real();

        BranchReport report;
        report.label = real.channel.op(i).label;
        report.probability = p;
        if (p < kNegligibleProbability) {
            report.negligible = true;
            branches.push_back(std::move(report));
            continue;
        }
        unnormalized *= Complex(1.0 / p, 0.0);
        DensityMatrix post(std::move(unnormalized));
        const ComplexMatrix& r = real.plan.outcomes[i].unitary;
        DensityMatrix restored(r * post.matrix() * r.adjoint());
        report.fidelity = pure
                              ? fidelity(std::get<PureState>(scenario.initial_state), restored)
                              : fidelity_mixed(rho0, restored);
        report.post_state = std::move(post);
        report.restored_state = std::move(restored);
        branches.push_back(std::move(report));
    }

    double total = 0.0;
    for (const auto& b : branches) total += b.probability;
    if (std::abs(total - 1.0) > 1e-10) {
        throw Error(ErrorCode::internal, "branch probabilities do not sum to 1");
    }
    return branches;
}

ProtocolSummary run_protocol(const Scenario& scenario) {
    ProtocolSummary summary;
    summary.branches = enumerate_branches(scenario);
    double weighted = 0.0;
    double live_probability = 0.0;
    double min_fid = 1.0;
    bool any_live = false;
    for (const auto& b : summary.branches) {
        if (b.negligible) continue;
        any_live = true;
        weighted += b.probability * b.fidelity;
        live_probability += b.probability;
        min_fid = std::min(min_fid, b.fidelity);
    }
    summary.average_fidelity = any_live ? weighted / live_probability : 0.0;
    summary.min_fidelity = any_live ? min_fid : 0.0;
    summary.success = any_live && summary.min_fidelity >= 1.0 - 1e-9;
    return summary;
}

SampleReport sample_run(const Scenario& scenario, std::uint64_t seed, std::uint64_t shots) {
    if (shots < 1) {
        throw Error(ErrorCode::invalid_argument, "shots must be >= 1");
    }
    const auto branches = enumerate_branches(scenario);

    SampleReport report;
    report.seed = seed;
    report.shots = shots;
    for (const auto& b : branches) {
        report.labels.push_back(b.label);
        report.exact_probabilities.push_back(b.probability);
    }
    report.counts.assign(branches.size(), 0);

    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = uniform01();
        double cumulative = 0.0;
        std::size_t pick = branches.size() - 1;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            cumulative += branches[i].probability;
            if (u < cumulative) {
                pick = i;
                break;
            }
        }
        ++report.counts[pick];
    }

    double mean_fid = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const double freq =
            static_cast<double>(report.counts[i]) / static_cast<double>(shots);
        report.frequencies.push_back(freq);
        report.standard_errors.push_back(
            std::sqrt(std::max(freq * (1.0 - freq), 0.0) / static_cast<double>(shots)));
        if (!branches[i].negligible) mean_fid += freq * branches[i].fidelity;
    }
    report.mean_fidelity = mean_fid;
    return report;
}

}  // namespace dephase::protocol

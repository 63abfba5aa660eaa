#include "dephase/dephase.h"

#include <cstring>
#include <string>

#include "core/bath.hpp"
#include "core/errors.hpp"
#include "core/kraus.hpp"
#include "core/numerics.hpp"
#include "core/run.hpp"
#include "core/types.hpp"

struct dephase_bath {
    dephase::bath::BathSpec spec;
};

struct dephase_kraus_set {
    dephase::kraus::KrausSet set;
};

struct dephase_report {
    dephase::run::RunResult result;
};

namespace {

thread_local std::string g_last_error;

dephase_status set_error(dephase_status status, const char* what) {
    g_last_error = what != nullptr ? what : "";
    return status;
}

dephase_status from_code(dephase::ErrorCode code) {
    return static_cast<dephase_status>(static_cast<int>(code));
}

template <typename F>
dephase_status guarded(F&& fn) {
    try {
        fn();
        return DEPHASE_OK;
    } catch (const dephase::Error& err) {
        return set_error(from_code(err.code()), err.what());
    } catch (const std::exception& err) {
        return set_error(DEPHASE_ERR_INTERNAL, err.what());
    } catch (...) {
        return set_error(DEPHASE_ERR_INTERNAL, "unknown failure");
    }
}

dephase_status require(bool ok, const char* what) {
    return ok ? DEPHASE_OK : set_error(DEPHASE_ERR_INVALID_ARGUMENT, what);
}

void copy_matrix(const dephase::ComplexMatrix& m, double* out) {
    for (std::size_t i = 0; i < m.entries().size(); ++i) {
        out[2 * i] = m.entries()[i].real();
        out[2 * i + 1] = m.entries()[i].imag();
    }
}

dephase::ComplexMatrix read_matrix(const double* in, std::size_t rows, std::size_t cols) {
    dephase::ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        m.entries()[i] = dephase::Complex(in[2 * i], in[2 * i + 1]);
    }
    m.check_finite();
    return m;
}

}  // namespace

extern "C" {

const char* dephase_version(void) {
    return "1.0.0";
}

const char* dephase_last_error_message(void) {
    return g_last_error.c_str();
}

int dephase_status_exit_code(dephase_status status) {
    return dephase::run::exit_code(static_cast<int>(status));
}

dephase_status dephase_bath_create(const double* omegas, const double* couplings,
                                   size_t n_modes, dephase_bath** out) {
    if (auto st = require(omegas && couplings && out && n_modes > 0, "null argument"); st) return st;
    *out = nullptr;
    return guarded([&] {
        std::vector<dephase::bath::Mode> modes;
        modes.reserve(n_modes);
        for (size_t i = 0; i < n_modes; ++i) modes.push_back({omegas[i], couplings[i]});
        *out = new dephase_bath{dephase::bath::BathSpec(std::move(modes))};
    });
}

void dephase_bath_free(dephase_bath* bath) {
    delete bath;
}

dephase_status dephase_bath_coefficients(const dephase_bath* bath, double t,
                                         dephase_coefficients* out) {
    if (auto st = require(bath && out, "null argument"); st) return st;
    return guarded([&] {
        const auto c = dephase::bath::coefficients(bath->spec, t);
        out->t = c.t;
        out->l1_re = c.l1.real();
        out->l1_im = c.l1.imag();
        out->l2 = c.l2;
        out->l3 = c.l3;
        out->gamma = c.gamma;
        out->phi_re = c.phi_total.real();
        out->phi_im = c.phi_total.imag();
        out->g_total = c.g_total;
    });
}

dephase_status dephase_bath_coherence_factor(const dephase_bath* bath, double t,
                                             double coupling_scale, double* out) {
    if (auto st = require(bath && out, "null argument"); st) return st;
    return guarded([&] { *out = dephase::bath::coherence_factor(bath->spec, t, coupling_scale); });
}

dephase_status dephase_kraus_common_nonru(const dephase_bath* bath, double t,
                                          dephase_kraus_set** out) {
    if (auto st = require(bath && out, "null argument"); st) return st;
    *out = nullptr;
    return guarded([&] {
        const auto coeffs = dephase::bath::coefficients(bath->spec, t);
        *out = new dephase_kraus_set{dephase::kraus::build_common_nonru(coeffs)};
    });
}

dephase_status dephase_kraus_common_ru(const dephase_bath* bath, double t, int include_phase,
                                       dephase_kraus_set** out) {
    if (auto st = require(bath && out, "null argument"); st) return st;
    *out = nullptr;
    return guarded([&] {
        const auto coeffs = dephase::bath::coefficients(bath->spec, t);
        auto decomposition = dephase::kraus::build_common_ru(coeffs);
        if (include_phase != 0) {
            *out = new dephase_kraus_set{
                dephase::kraus::compose_phase(decomposition.phase, decomposition.set)};
        } else {
            *out = new dephase_kraus_set{std::move(decomposition.set)};
        }
    });
}

dephase_status dephase_kraus_single_qubit_parity(const dephase_bath* bath, double t,
                                                 dephase_kraus_set** out) {
    if (auto st = require(bath && out, "null argument"); st) return st;
    *out = nullptr;
    return guarded([&] {
        *out = new dephase_kraus_set{dephase::kraus::build_single_qubit_parity(bath->spec, t)};
    });
}

dephase_status dephase_kraus_tensor(const dephase_kraus_set* const* factors, size_t n_factors,
                                    dephase_kraus_set** out) {
    if (auto st = require(factors && out && n_factors > 0, "null argument"); st) return st;
    *out = nullptr;
    return guarded([&] {
        std::vector<dephase::kraus::KrausSet> sets;
        sets.reserve(n_factors);
        for (size_t i = 0; i < n_factors; ++i) {
            if (factors[i] == nullptr) {
                throw dephase::Error(dephase::ErrorCode::invalid_argument, "null factor");
            }
            sets.push_back(factors[i]->set);
        }
        *out = new dephase_kraus_set{dephase::kraus::build_individual_tensor(sets)};
    });
}

dephase_status dephase_kraus_ru_weights(int n_qubits, double gamma, dephase_kraus_set** out) {
    if (auto st = require(out != nullptr, "null argument"); st) return st;
    *out = nullptr;
    return guarded([&] {
        const auto basis = dephase::kraus::ru_sign_basis(n_qubits);
        const auto schur_matrix = dephase::kraus::build_schur_matrix(n_qubits, gamma);
        *out = new dephase_kraus_set{dephase::kraus::solve_ru_weights(basis, schur_matrix)};
    });
}

dephase_status dephase_kraus_search_phase_ru(int n_qubits, double gamma, size_t n_ops,
                                             double tol, uint64_t seed,
                                             dephase_kraus_set** out) {
    if (auto st = require(out != nullptr, "null argument"); st) return st;
    *out = nullptr;
    return guarded([&] {
        const auto schur_matrix = dephase::kraus::build_schur_matrix(n_qubits, gamma);
        dephase::kraus::PhaseSearchOptions options;
        if (tol > 0.0) options.tol = tol;
        options.seed = seed;
        *out = new dephase_kraus_set{
            dephase::kraus::search_phase_ru(schur_matrix, n_ops, options)};
    });
}

void dephase_kraus_set_free(dephase_kraus_set* set) {
    delete set;
}

size_t dephase_kraus_set_size(const dephase_kraus_set* set) {
    return set ? set->set.size() : 0;
}

size_t dephase_kraus_set_dim(const dephase_kraus_set* set) {
    return set ? set->set.dim() : 0;
}

int dephase_kraus_set_has_weights(const dephase_kraus_set* set) {
    return set && set->set.has_weights() ? 1 : 0;
}

const char* dephase_kraus_set_label(const dephase_kraus_set* set, size_t index) {
    if (!set || index >= set->set.size()) return nullptr;
    return set->set.op(index).label.c_str();
}

dephase_status dephase_kraus_set_weight(const dephase_kraus_set* set, size_t index,
                                        double* out) {
    if (auto st = require(set && out, "null argument"); st) return st;
    if (auto st = require(index < set->set.size(), "index out of range"); st) return st;
    if (auto st = require(set->set.has_weights(), "set has no weights"); st) return st;
    *out = set->set.weights()[index];
    return DEPHASE_OK;
}

dephase_status dephase_kraus_set_matrix(const dephase_kraus_set* set, size_t index,
                                        double* out) {
    if (auto st = require(set && out, "null argument"); st) return st;
    if (auto st = require(index < set->set.size(), "index out of range"); st) return st;
    copy_matrix(set->set.op(index).matrix, out);
    return DEPHASE_OK;
}

dephase_status dephase_kraus_set_completeness_residual(const dephase_kraus_set* set,
                                                       double* out) {
    if (auto st = require(set && out, "null argument"); st) return st;
    return guarded([&] { *out = set->set.completeness_residual(); });
}

dephase_status dephase_kraus_apply(const dephase_kraus_set* set, const double* rho_in,
                                   double* rho_out) {
    if (auto st = require(set && rho_in && rho_out, "null argument"); st) return st;
    return guarded([&] {
        const std::size_t dim = set->set.dim();
        const auto rho = read_matrix(rho_in, dim, dim);
        copy_matrix(dephase::kraus::apply_channel_map(set->set, rho), rho_out);
    });
}

dephase_status dephase_kraus_equivalence(const dephase_kraus_set* a,
                                         const dephase_kraus_set* b, double tol,
                                         int* equal, double* max_deviation) {
    if (auto st = require(a && b && equal && max_deviation, "null argument"); st) return st;
    return guarded([&] {
        const auto result = dephase::kraus::decomposition_equivalence(a->set, b->set, tol);
        *equal = result.equal ? 1 : 0;
        *max_deviation = result.max_deviation;
    });
}

dephase_status dephase_schur_matrix(int n_qubits, double gamma, double* out) {
    if (auto st = require(out != nullptr, "null argument"); st) return st;
    return guarded([&] {
        const auto schur_matrix = dephase::kraus::build_schur_matrix(n_qubits, gamma);
        const auto& m = schur_matrix.matrix;
        for (std::size_t i = 0; i < m.entries().size(); ++i) out[i] = m.entries()[i].real();
    });
}

dephase_status dephase_schur_rank(int n_qubits, double gamma, double rel_tol, int* out) {
    if (auto st = require(out != nullptr, "null argument"); st) return st;
    return guarded([&] {
        const auto schur_matrix = dephase::kraus::build_schur_matrix(n_qubits, gamma);
        *out = static_cast<int>(
            dephase::numeric_rank(schur_matrix.matrix, rel_tol > 0.0 ? rel_tol : 0.0));
    });
}

dephase_status dephase_run(const char* command, const char* config_json,
                           const uint64_t* seed_override, dephase_report** out) {
    if (auto st = require(command && config_json && out, "null argument"); st) return st;
    *out = nullptr;
    std::optional<std::uint64_t> seed;
    if (seed_override != nullptr) seed = *seed_override;
    dephase::run::RunResult result = dephase::run::execute(command, config_json, seed);
    *out = new dephase_report{std::move(result)};
    if ((*out)->result.status != 0) {
        return set_error(static_cast<dephase_status>((*out)->result.status),
                         (*out)->result.message.c_str());
    }
    return DEPHASE_OK;
}

void dephase_report_free(dephase_report* report) {
    delete report;
}

dephase_status dephase_report_status(const dephase_report* report) {
    return report ? static_cast<dephase_status>(report->result.status)
                  : DEPHASE_ERR_INVALID_ARGUMENT;
}

const char* dephase_report_message(const dephase_report* report) {
    return report ? report->result.message.c_str() : nullptr;
}

size_t dephase_report_artifact_count(const dephase_report* report) {
    return report ? report->result.artifacts.size() : 0;
}

const char* dephase_report_artifact_name(const dephase_report* report, size_t index) {
    if (!report || index >= report->result.artifacts.size()) return nullptr;
    return report->result.artifacts[index].name.c_str();
}

const char* dephase_report_artifact_text(const dephase_report* report, size_t index) {
    if (!report || index >= report->result.artifacts.size()) return nullptr;
    return report->result.artifacts[index].text.c_str();
}

size_t dephase_report_summary_count(const dephase_report* report) {
    return report ? report->result.summary.size() : 0;
}

const char* dephase_report_summary_line(const dephase_report* report, size_t index) {
    if (!report || index >= report->result.summary.size()) return nullptr;
    return report->result.summary[index].c_str();
}

}  // extern "C"

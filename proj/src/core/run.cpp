#include "core/run.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "core/bath.hpp"
#include "core/errors.hpp"
#include "core/focksim.hpp"
#include "core/kraus.hpp"
#include "core/numerics.hpp"
#include "core/protocol.hpp"
#include "core/textio.hpp"

namespace dephase::run {

using nlohmann::json;
using textio::format_double;

namespace {

struct Config {
    std::string model = "common_bath";
    int n_qubits = 2;
    std::optional<std::string> scheme;
    std::vector<bath::Mode> modes;
    std::vector<double> times;
    std::optional<json> state;
    int cutoff = 64;
    int cutoff_m = 30;
    double tol_algebraic = 1e-10;
    double tol_oracle = 1e-6;
    std::uint64_t shots = 0;
    std::uint64_t seed = 1;
};

[[noreturn]] void bad_config(const std::string& what) {
    throw Error(ErrorCode::bad_config, what);
}

void reject_unknown_keys(const json& object, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            bad_config("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double number_field(const json& v, const std::string& name) {
    if (!v.is_number()) bad_config("'" + name + "' must be a number");
    return v.get<double>();
}

Config parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& err) {
        bad_config(std::string("config is not valid JSON: ") + err.what());
    }
    if (!doc.is_object()) bad_config("config must be a JSON object");
    reject_unknown_keys(doc,
                        {"model", "n_qubits", "scheme", "bath", "times", "state", "cutoff",
                         "cutoff_m", "tolerances", "shots", "seed"},
                        "config");

    Config cfg;
    if (doc.contains("model")) {
        if (!doc["model"].is_string()) bad_config("'model' must be a string");
        cfg.model = doc["model"].get<std::string>();
        if (cfg.model != "common_bath" && cfg.model != "individual_baths") {
            bad_config("'model' must be common_bath or individual_baths");
        }
    }
    if (doc.contains("n_qubits")) {
        if (!doc["n_qubits"].is_number_integer()) bad_config("'n_qubits' must be an integer");
        cfg.n_qubits = doc["n_qubits"].get<int>();
        if (cfg.n_qubits < 1 || cfg.n_qubits > 10) bad_config("'n_qubits' must be in [1, 10]");
    }
    if (doc.contains("scheme")) {
        if (!doc["scheme"].is_string()) bad_config("'scheme' must be a string");
        cfg.scheme = doc["scheme"].get<std::string>();
        if (*cfg.scheme != "nonRU_parity" && *cfg.scheme != "RU_basis" &&
            *cfg.scheme != "tensor_parity") {
            bad_config("'scheme' must be nonRU_parity, RU_basis or tensor_parity");
        }
    }
    if (doc.contains("bath")) {
        const json& b = doc["bath"];
        if (!b.is_object()) bad_config("'bath' must be an object");
        reject_unknown_keys(b, {"modes"}, "bath");
        if (!b.contains("modes") || !b["modes"].is_array() || b["modes"].empty()) {
            bad_config("'bath.modes' must be a non-empty array");
        }
        for (const json& m : b["modes"]) {
            if (!m.is_object()) bad_config("bath modes must be objects");
            reject_unknown_keys(m, {"omega", "g"}, "bath mode");
            if (!m.contains("omega") || !m.contains("g")) {
                bad_config("bath modes need 'omega' and 'g'");
            }
            bath::Mode mode{number_field(m["omega"], "omega"), number_field(m["g"], "g")};
            if (mode.g < 0.0) bad_config("bath coupling g must be >= 0");
            cfg.modes.push_back(mode);
        }
    }
    if (doc.contains("times")) {
        if (!doc["times"].is_array() || doc["times"].empty()) {
            bad_config("'times' must be a non-empty array");
        }
        double prev = -1.0;
        for (const json& t : doc["times"]) {
            const double value = number_field(t, "times[]");
            if (value < 0.0 || value < prev) bad_config("'times' must be ascending and >= 0");
            cfg.times.push_back(value);
            prev = value;
        }
    }
    if (doc.contains("state")) {
        const json& s = doc["state"];
        if (!s.is_object()) bad_config("'state' must be an object");
        reject_unknown_keys(s, {"family", "amplitudes"}, "state");
        if (s.contains("family") == s.contains("amplitudes")) {
            bad_config("'state' needs exactly one of 'family' or 'amplitudes'");
        }
        cfg.state = s;
    }
    if (doc.contains("cutoff")) {
        if (!doc["cutoff"].is_number_integer()) bad_config("'cutoff' must be an integer");
        cfg.cutoff = doc["cutoff"].get<int>();
        if (cfg.cutoff < 2 || cfg.cutoff > 512) bad_config("'cutoff' must be in [2, 512]");
    }
    if (doc.contains("cutoff_m")) {
        if (!doc["cutoff_m"].is_number_integer()) bad_config("'cutoff_m' must be an integer");
        cfg.cutoff_m = doc["cutoff_m"].get<int>();
        if (cfg.cutoff_m < 1) bad_config("'cutoff_m' must be >= 1");
    }
    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (!t.is_object()) bad_config("'tolerances' must be an object");
        reject_unknown_keys(t, {"algebraic", "oracle"}, "tolerances");
        if (t.contains("algebraic")) {
            cfg.tol_algebraic = number_field(t["algebraic"], "tolerances.algebraic");
            if (cfg.tol_algebraic <= 0.0) bad_config("'tolerances.algebraic' must be > 0");
        }
        if (t.contains("oracle")) {
            cfg.tol_oracle = number_field(t["oracle"], "tolerances.oracle");
            if (cfg.tol_oracle <= 0.0) bad_config("'tolerances.oracle' must be > 0");
        }
    }
    if (doc.contains("shots")) {
        if (!doc["shots"].is_number_unsigned() && !doc["shots"].is_number_integer()) {
            bad_config("'shots' must be a nonnegative integer");
        }
        const auto shots = doc["shots"].get<std::int64_t>();
        if (shots < 0) bad_config("'shots' must be >= 0");
        cfg.shots = static_cast<std::uint64_t>(shots);
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
            bad_config("'seed' must be a nonnegative integer");
        }
        const auto seed = doc["seed"].get<std::int64_t>();
        if (seed < 0) bad_config("'seed' must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (seed_override) cfg.seed = *seed_override;
    return cfg;
}

bath::BathSpec require_bath(const Config& cfg) {
    if (cfg.modes.empty()) bad_config("this command requires 'bath.modes'");
    return bath::BathSpec(cfg.modes);
}

void require_times(const Config& cfg) {
    if (cfg.times.empty()) bad_config("this command requires 'times'");
}

PureState haar_state(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    std::vector<Complex> amps(dim);
    double norm2 = 0.0;
    for (auto& a : amps) {
        // Box-Muller, deterministic across platforms
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amps) a *= inv;
    return PureState(std::move(amps));
}

PureState parse_family(const std::string& family, std::size_t dim) {
    const auto open = family.find('(');
    const auto close = family.rfind(')');
    if (open == std::string::npos || close != family.size() - 1 || close <= open + 1) {
        bad_config("state family must look like phi(a), psi(a) or haar(seed)");
    }
    const std::string name = family.substr(0, open);
    const std::string arg = family.substr(open + 1, close - open - 1);
    if (name == "phi" || name == "psi") {
        double alpha = 0.0;
        try {
            alpha = std::stod(arg);
        } catch (...) {
            bad_config("state family argument must be a number");
        }
        if (alpha < 0.0 || alpha > 1.0) bad_config("state family amplitude must be in [0, 1]");
        const double beta = std::sqrt(std::max(1.0 - alpha * alpha, 0.0));
        std::vector<Complex> amps(dim, Complex(0.0, 0.0));
        if (name == "phi") {
            amps.front() = alpha;
            amps.back() = beta;
        } else {
            if (dim != 4) bad_config("psi(a) is a two-qubit family");
            amps[1] = alpha;
            amps[2] = beta;
        }
        return PureState(std::move(amps));
    }
    if (name == "haar") {
        std::uint64_t seed = 0;
        try {
            seed = static_cast<std::uint64_t>(std::stoull(arg));
        } catch (...) {
            bad_config("haar(seed) needs an unsigned integer seed");
        }
        return haar_state(dim, seed);
    }
    bad_config("unknown state family '" + name + "'");
}

PureState parse_state(const Config& cfg, std::size_t dim) {
    if (!cfg.state) bad_config("this command requires 'state'");
    const json& s = *cfg.state;
    if (s.contains("family")) {
        if (!s["family"].is_string()) bad_config("'state.family' must be a string");
        return parse_family(s["family"].get<std::string>(), dim);
    }
    const json& amps = s["amplitudes"];
    if (!amps.is_array() || amps.size() != dim) {
        bad_config("'state.amplitudes' must list 2^n_qubits [re, im] pairs");
    }
    std::vector<Complex> values;
    values.reserve(dim);
    for (const json& a : amps) {
        if (!a.is_array() || a.size() != 2) bad_config("amplitudes must be [re, im] pairs");
        values.emplace_back(number_field(a[0], "amplitude"), number_field(a[1], "amplitude"));
    }
    try {
        return PureState(std::move(values));
    } catch (const Error& err) {
        bad_config(std::string("invalid state amplitudes: ") + err.what());
    }
}

json complex_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

const char* status_name(int status) {
    switch (status) {
        case 0: return "ok";
        case static_cast<int>(ErrorCode::infeasible_weights): return "infeasible_weights";
        case static_cast<int>(ErrorCode::cutoff_too_small): return "cutoff_too_small";
        case static_cast<int>(ErrorCode::rank_deficient_inconsistent): return "residual_exceeded";
        case static_cast<int>(ErrorCode::scheme_unavailable): return "scheme_unavailable";
        case static_cast<int>(ErrorCode::bad_config): return "bad_config";
        default: return "error";
    }
}

void add_check(json& checks, RunResult& result, const std::string& name, double value,
               double tolerance) {
    const bool pass = value <= tolerance;
    checks[name] = {{"value", value}, {"tolerance", tolerance}, {"pass", pass}};
    std::ostringstream line;
    line << (pass ? "PASS " : "FAIL ") << name << ": " << format_double(value)
         << " (tolerance " << format_double(tolerance) << ")";
    result.summary.push_back(line.str());
    if (!pass && result.status == 0) result.status = 1;
}

json report_envelope(const std::string& command, const Config& cfg) {
    json report;
    report["format_version"] = 1;
    report["command"] = command;
    report["seed"] = cfg.seed;
    return report;
}

// --- coefficients ---------------------------------------------------------

void cmd_coefficients(const Config& cfg, RunResult& result) {
    const bath::BathSpec spec = require_bath(cfg);
    require_times(cfg);

    textio::CsvWriter csv({"t", "re_l1", "im_l1", "l2", "l3", "gamma", "completeness"});
    double max_dev = 0.0;
    for (double t : cfg.times) {
        const auto c = bath::coefficients(spec, t);
        const double completeness = std::norm(c.l1) + c.l2 * c.l2 + c.l3 * c.l3;
        max_dev = std::max(max_dev, std::abs(completeness - 1.0));
        csv.add_row({format_double(t), format_double(c.l1.real()), format_double(c.l1.imag()),
                     format_double(c.l2), format_double(c.l3), format_double(c.gamma),
                     format_double(completeness)});
    }

    json report = report_envelope("coefficients", cfg);
    report["n_times"] = cfg.times.size();
    json checks;
    add_check(checks, result, "completeness_deviation", max_dev, cfg.tol_algebraic);
    report["checks"] = std::move(checks);
    report["status"] = status_name(result.status);

    result.artifacts.push_back({"coefficients.csv", csv.text()});
    result.artifacts.push_back({"report.json", report.dump(2) + "\n"});
}

// --- decompose -------------------------------------------------------------

void cmd_decompose(const Config& cfg, RunResult& result) {
    const bath::BathSpec spec = require_bath(cfg);
    require_times(cfg);
    const kraus::SignBasis basis = kraus::ru_sign_basis(cfg.n_qubits);

    json report = report_envelope("decompose", cfg);
    report["n_qubits"] = cfg.n_qubits;
    report["system_matrix"] = matrix_json(kraus::pair_product_system(basis));

    bool any_infeasible = false;
    json entries = json::array();
    for (double t : cfg.times) {
        const auto coeffs = bath::coefficients(spec, t);
        const auto schur_matrix = kraus::build_schur_matrix(cfg.n_qubits, coeffs.gamma);

        json entry;
        entry["t"] = t;
        entry["gamma"] = coeffs.gamma;

        std::vector<double> weights;
        std::optional<kraus::KrausSet> set;
        try {
            set = kraus::solve_ru_weights(basis, schur_matrix);
            weights = set->weights();
            entry["feasible"] = true;
        } catch (const InfeasibleWeights& err) {
            weights = err.weights();
            entry["feasible"] = false;
            any_infeasible = true;
        }
        entry["weights"] = weights;

        json ops = json::array();
        for (std::size_t i = 0; i < basis.size(); ++i) {
            ComplexMatrix op = basis.expand(i);
            op *= Complex(std::sqrt(std::max(weights[i], 0.0)), 0.0);
            ops.push_back({{"label", basis.label(i)},
                           {"weight", weights[i]},
                           {"matrix", matrix_json(op)}});
        }
        entry["ops"] = std::move(ops);

        if (set) {
            double residual = 0.0;
            if (cfg.n_qubits == 2) {
                // physical channel against the non-RU reference
                const kraus::KrausSet physical = kraus::compose_phase(
                    kraus::phase_prefactor(cfg.n_qubits, coeffs.l1), *set);
                const auto reference = kraus::build_common_nonru(coeffs);
                residual =
                    kraus::decomposition_equivalence(physical, reference, cfg.tol_algebraic)
                        .max_deviation;
            } else {
                // class-pair residual against the Schur entries (the phase
                // prefactor cancels entry-wise)
                const auto pairs = kraus::weight_class_pairs(cfg.n_qubits);
                const auto rhs = kraus::weight_system_rhs(cfg.n_qubits, coeffs.gamma);
                double diag = -1.0;
                for (double c : weights) diag += c;
                residual = std::abs(diag);
                for (std::size_t row = 0; row < pairs.size(); ++row) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < basis.size(); ++i) {
                        const auto& signs = basis.class_signs()[i];
                        acc += weights[i] *
                               signs[static_cast<std::size_t>(pairs[row].first)] *
                               signs[static_cast<std::size_t>(pairs[row].second)];
                    }
                    residual = std::max(residual, std::abs(acc - rhs[row + 1].real()));
                }
            }
            entry["equivalence_residual"] = residual;
        } else {
            entry["equivalence_residual"] = nullptr;
        }
        entries.push_back(std::move(entry));
    }
    report["decompositions"] = std::move(entries);

    if (any_infeasible) {
        result.status = static_cast<int>(ErrorCode::infeasible_weights);
        result.message = "negative RU weights at one or more times";
        result.summary.push_back("FAIL feasibility: negative weights reported");
    } else {
        result.summary.push_back("PASS feasibility: all weight solutions nonnegative");
    }
    report["status"] = status_name(result.status);
    result.artifacts.push_back({"report.json", report.dump(2) + "\n"});
}

// --- fock -------------------------------------------------------------------

focksim::CouplingSpec coupling_for(const Config& cfg) {
    if (cfg.model == "individual_baths") {
        if (cfg.n_qubits != 1) {
            bad_config("the Fock oracle treats individual baths one qubit at a time");
        }
        return focksim::CouplingSpec::single_qubit();
    }
    if (cfg.n_qubits > 4) bad_config("Fock oracle supports n_qubits <= 4");
    return focksim::CouplingSpec::common_bath(cfg.n_qubits);
}

// Channel multipliers predicted from bath scalars alone: entry (i, j) =
// exp(-i phi_r (s_i^2 - s_j^2)) exp(-g (s_i - s_j)^2 / 2).
ComplexMatrix expected_multipliers(const focksim::CouplingSpec& coup,
                                   const bath::DephasingCoefficients& coeffs) {
    const std::size_t dim = coup.system_dim();
    const double phi_r = coeffs.phi_total.real();
    ComplexMatrix out(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double si = coup.levels[i];
            const double sj = coup.levels[j];
            out(i, j) = std::exp(Complex(-coeffs.g_total * 0.5 * (si - sj) * (si - sj),
                                         -phi_r * (si * si - sj * sj)));
        }
    }
    return out;
}

void cmd_fock(const Config& cfg, RunResult& result) {
    if (cfg.modes.size() != 1) bad_config("the fock command requires a single-mode bath");
    require_times(cfg);
    const focksim::CouplingSpec coup = coupling_for(cfg);
    const focksim::FockConfig fock_cfg{cfg.cutoff, cfg.modes.front(), cfg.times};
    const bath::BathSpec spec({cfg.modes.front()});

    const auto table = focksim::trace_norm_table(fock_cfg, coup);
    textio::CsvWriter csv({"t", "m", "norm"});
    double tail_max = 0.0;
    for (const auto& row : table) {
        csv.add_row({format_double(row.t), std::to_string(row.m), format_double(row.norm)});
        if (row.m > cfg.cutoff_m) tail_max = std::max(tail_max, row.norm);
    }

    const std::size_t dim = coup.system_dim();
    std::vector<DensityMatrix> probes;
    probes.push_back(DensityMatrix::maximally_mixed(dim));
    {
        std::vector<Complex> amps(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
        probes.push_back(DensityMatrix::from_pure(PureState(std::move(amps))));
    }
    double residual = 0.0;
    for (double t : cfg.times) {
        const auto coeffs = bath::coefficients(spec, t);
        const ComplexMatrix mult = expected_multipliers(coup, coeffs);
        for (const auto& probe : probes) {
            const DensityMatrix out = focksim::channel_output(fock_cfg, coup, t, probe);
            const ComplexMatrix expected = schur(mult, probe.matrix());
            residual = std::max(residual,
                                ComplexMatrix::max_abs_diff(out.matrix(), expected));
        }
    }

    json report = report_envelope("fock", cfg);
    report["cutoff"] = cfg.cutoff;
    report["cutoff_m"] = cfg.cutoff_m;
    report["tail_norm_max"] = tail_max;
    json checks;
    add_check(checks, result, "channel_equivalence_residual", residual, cfg.tol_oracle);
    report["checks"] = std::move(checks);
    report["status"] = status_name(result.status);

    result.artifacts.push_back({"fock_norms.csv", csv.text()});
    result.artifacts.push_back({"report.json", report.dump(2) + "\n"});
}

// --- basis ------------------------------------------------------------------

void cmd_basis(const Config& cfg, RunResult& result) {
    if (cfg.modes.size() != 1) bad_config("the basis command requires a single-mode bath");
    if (cfg.model != "common_bath" || cfg.n_qubits != 2) {
        bad_config("the basis command solves the two-qubit common-bath case");
    }
    require_times(cfg);
    if (cfg.cutoff_m > cfg.cutoff) bad_config("'cutoff_m' cannot exceed 'cutoff'");

    const focksim::CouplingSpec coup = focksim::CouplingSpec::common_bath(2);
    const focksim::FockConfig fock_cfg{cfg.cutoff, cfg.modes.front(), cfg.times};
    const bath::BathSpec spec({cfg.modes.front()});

    const DensityMatrix rho =
        cfg.state ? DensityMatrix::from_pure(parse_state(cfg, 4)) : DensityMatrix::maximally_mixed(4);

    json report = report_envelope("basis", cfg);
    report["cutoff_m"] = cfg.cutoff_m;
    json entries = json::array();
    double worst_residual = 0.0, worst_gram = 0.0, worst_tail = 0.0;
    for (double t : cfg.times) {
        const auto coeffs = bath::coefficients(spec, t);
        std::optional<kraus::KrausSet> mixture;
        try {
            mixture = kraus::solve_ru_weights(kraus::ru_sign_basis(2),
                                              kraus::build_schur_matrix(2, coeffs.gamma));
        } catch (const InfeasibleWeights&) {
            try {
                mixture = kraus::search_phase_ru(kraus::build_schur_matrix(2, coeffs.gamma), 4);
            } catch (const SearchFailed& err) {
                throw Error(ErrorCode::scheme_unavailable,
                            std::string("no RU target available: ") + err.what());
            }
        }
        const kraus::KrausSet target =
            kraus::compose_phase(kraus::phase_prefactor(2, coeffs.l1), *mixture);

        const auto family = focksim::fock_kraus_family(fock_cfg, coup, t, cfg.cutoff_m);
        const auto basis = focksim::solve_measurement_basis(target, family, cfg.cutoff_m);

        const ComplexMatrix env = focksim::environment_state(fock_cfg, coup, t, rho);
        const auto probs = focksim::outcome_probabilities(basis, env);
        double covered = 0.0;
        for (double p : probs) covered += p;
        const double tail = std::max(1.0 - covered, 0.0);

        worst_residual = std::max(worst_residual, basis.residual);
        worst_gram = std::max(worst_gram, basis.row_gram_deviation);
        worst_tail = std::max(worst_tail, tail);

        json entry;
        entry["t"] = t;
        entry["gamma"] = coeffs.gamma;
        entry["residual"] = basis.residual;
        entry["row_gram_deviation"] = basis.row_gram_deviation;
        entry["outcome_probabilities"] = probs;
        entry["tail_probability"] = tail;
        entry["v"] = matrix_json(basis.v);
        entries.push_back(std::move(entry));
    }
    report["bases"] = std::move(entries);

    json checks;
    add_check(checks, result, "basis_residual", worst_residual, 1e-8);
    add_check(checks, result, "row_gram_deviation", worst_gram, 1e-8);
    add_check(checks, result, "tail_probability", worst_tail, 1e-8);
    if (result.status == 1) result.status = static_cast<int>(ErrorCode::rank_deficient_inconsistent);
    report["checks"] = std::move(checks);
    report["status"] = status_name(result.status);
    result.artifacts.push_back({"report.json", report.dump(2) + "\n"});
}

// --- restore ----------------------------------------------------------------

void cmd_restore(const Config& cfg, RunResult& result) {
    const bath::BathSpec spec = require_bath(cfg);
    require_times(cfg);
    if (!cfg.scheme) bad_config("the restore command requires 'scheme'");

    protocol::Scenario scenario;
    scenario.n_qubits = cfg.n_qubits;
    scenario.model = cfg.model == "common_bath" ? protocol::Model::common_bath
                                                : protocol::Model::individual_baths;
    if (*cfg.scheme == "nonRU_parity") scenario.scheme = protocol::Scheme::nonru_parity;
    else if (*cfg.scheme == "RU_basis") scenario.scheme = protocol::Scheme::ru_basis;
    else scenario.scheme = protocol::Scheme::tensor_parity;
    scenario.initial_state = parse_state(cfg, std::size_t{1} << cfg.n_qubits);
    scenario.baths = {spec};

    json report = report_envelope("restore", cfg);
    report["model"] = cfg.model;
    report["scheme"] = *cfg.scheme;
    json entries = json::array();
    for (std::size_t idx = 0; idx < cfg.times.size(); ++idx) {
        scenario.t = cfg.times[idx];
        const auto summary = protocol::run_protocol(scenario);

        json entry;
        entry["t"] = scenario.t;
        json branches = json::array();
        for (const auto& b : summary.branches) {
            json jb;
            jb["label"] = b.label;
            jb["probability"] = b.probability;
            jb["negligible"] = b.negligible;
            if (!b.negligible) jb["fidelity"] = b.fidelity;
            branches.push_back(std::move(jb));
        }
        entry["branches"] = std::move(branches);
        entry["average_fidelity"] = summary.average_fidelity;
        entry["min_fidelity"] = summary.min_fidelity;
        entry["success"] = summary.success;

        if (cfg.shots > 0) {
            const auto sample =
                protocol::sample_run(scenario, cfg.seed + idx, cfg.shots);
            json js;
            js["seed"] = sample.seed;
            js["shots"] = sample.shots;
            js["labels"] = sample.labels;
            js["counts"] = sample.counts;
            js["frequencies"] = sample.frequencies;
            js["standard_errors"] = sample.standard_errors;
            js["exact_probabilities"] = sample.exact_probabilities;
            js["mean_fidelity"] = sample.mean_fidelity;
            entry["sampling"] = std::move(js);
        }
        std::ostringstream line;
        line << "t=" << format_double(scenario.t) << " average_fidelity="
             << format_double(summary.average_fidelity)
             << (summary.success ? " success" : " partial");
        result.summary.push_back(line.str());
        entries.push_back(std::move(entry));
    }
    report["restorations"] = std::move(entries);
    report["status"] = status_name(result.status);
    result.artifacts.push_back({"report.json", report.dump(2) + "\n"});
}

}  // namespace

RunResult execute(const std::string& command, const std::string& config_json,
                  std::optional<std::uint64_t> seed_override) {
    RunResult result;
    try {
        const Config cfg = parse_config(config_json, seed_override);
        if (command == "coefficients") cmd_coefficients(cfg, result);
        else if (command == "decompose") cmd_decompose(cfg, result);
        else if (command == "fock") cmd_fock(cfg, result);
        else if (command == "basis") cmd_basis(cfg, result);
        else if (command == "restore") cmd_restore(cfg, result);
        else bad_config("unknown command '" + command + "'");
    } catch (const Error& err) {
        result.status = static_cast<int>(err.code());
        result.message = err.what();
    } catch (const std::exception& err) {
        result.status = static_cast<int>(ErrorCode::internal);
        result.message = err.what();
    }
    return result;
}

int exit_code(int status) {
    if (status == 0) return 0;
    switch (static_cast<ErrorCode>(status)) {
        case ErrorCode::bad_config: return 2;
        case ErrorCode::infeasible_weights: return 3;
        case ErrorCode::cutoff_too_small: return 4;
        case ErrorCode::rank_deficient_inconsistent: return 5;
        case ErrorCode::scheme_unavailable: return 6;
        default: return 1;
    }
}

}  // namespace dephase::run

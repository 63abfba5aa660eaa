#include "core/focksim.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "core/eigen_bridge.hpp"
#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace dephase::focksim {

namespace {

constexpr Complex kI{0.0, 1.0};

bath::BathSpec single_mode_spec(const FockConfig& cfg) {
    return bath::BathSpec({cfg.mode});
}

void check_truncation(const FockConfig& cfg, const CouplingSpec& coup, Complex displacement) {
    const double s_max = coup.max_abs_level();
    const double excitation = std::norm(displacement) * s_max * s_max;
    if (excitation > cfg.cutoff / 4.0) {
        std::ostringstream msg;
        msg << "Fock cutoff " << cfg.cutoff << " too small for |s G|^2 = " << excitation;
        throw Error(ErrorCode::cutoff_too_small, msg.str());
    }
}

// exp(x b^dag) on the truncated mode: entry (m, n) = x^{m-n}/(m-n)! sqrt(m!/n!)
// for m >= n, built by the stable column recurrence.
ComplexMatrix exp_creation(Complex x, int cutoff) {
    ComplexMatrix out(static_cast<std::size_t>(cutoff), static_cast<std::size_t>(cutoff));
    for (int n = 0; n < cutoff; ++n) {
        Complex entry = 1.0;
        out(static_cast<std::size_t>(n), static_cast<std::size_t>(n)) = entry;
        for (int m = n + 1; m < cutoff; ++m) {
            entry *= x * std::sqrt(static_cast<double>(m)) / static_cast<double>(m - n);
            out(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) = entry;
        }
    }
    return out;
}

// exp(y b): entry (m, n) = y^{n-m}/(n-m)! sqrt(n!/m!) for n >= m.
ComplexMatrix exp_annihilation(Complex y, int cutoff) {
    ComplexMatrix out(static_cast<std::size_t>(cutoff), static_cast<std::size_t>(cutoff));
    for (int m = 0; m < cutoff; ++m) {
        Complex entry = 1.0;
        out(static_cast<std::size_t>(m), static_cast<std::size_t>(m)) = entry;
        for (int n = m + 1; n < cutoff; ++n) {
            entry *= y * std::sqrt(static_cast<double>(n)) / static_cast<double>(n - m);
            out(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) = entry;
        }
    }
    return out;
}

}  // namespace

void validate(const FockConfig& cfg) {
    if (cfg.cutoff < 2) {
        throw Error(ErrorCode::invalid_argument, "Fock cutoff must be >= 2");
    }
    if (cfg.mode.g < 0.0) {
        throw Error(ErrorCode::invalid_argument, "mode coupling must be >= 0");
    }
    double prev = -1.0;
    for (double t : cfg.times) {
        if (!(t >= 0.0) || t < prev) {
            throw Error(ErrorCode::invalid_argument, "times must be ascending and >= 0");
        }
        prev = t;
    }
}

CouplingSpec CouplingSpec::common_bath(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 10) {
        throw Error(ErrorCode::invalid_argument, "n_qubits must be in [1, 10]");
    }
    CouplingSpec coup;
    coup.n_qubits = n_qubits;
    const std::size_t dim = std::size_t{1} << n_qubits;
    coup.levels.resize(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        coup.levels[b] = 0.5 * n_qubits - kraus::hamming_weight(b);
    }
    return coup;
}

CouplingSpec CouplingSpec::single_qubit() {
    return CouplingSpec{1, {1.0, -1.0}};
}

double CouplingSpec::max_abs_level() const {
    double m = 0.0;
    for (double s : levels) m = std::max(m, std::abs(s));
    return m;
}

void validate(const CouplingSpec& coup) {
    if (coup.n_qubits < 0) {
        throw Error(ErrorCode::invalid_argument, "negative qubit count");
    }
    if (coup.levels.size() != (std::size_t{1} << coup.n_qubits)) {
        throw Error(ErrorCode::invalid_argument, "coupling needs 2^n diagonal entries");
    }
    if (coup.n_qubits >= 1) {
        const std::set<double> distinct(coup.levels.begin(), coup.levels.end());
        if (distinct.size() < 2) {
            throw Error(ErrorCode::invalid_argument,
                        "coupling must have at least two distinct levels");
        }
    }
}

ComplexMatrix total_unitary(const FockConfig& cfg, const CouplingSpec& coup, double t) {
    validate(cfg);
    validate(coup);
    const bath::BathSpec spec = single_mode_spec(cfg);
    const Complex g_t = bath::displacement_amplitude(spec, 0, t);
    const Complex phi = bath::mode_phase(spec, 0, t);
    check_truncation(cfg, coup, g_t);

    const std::size_t sys_dim = coup.system_dim();
    const std::size_t mode_dim = static_cast<std::size_t>(cfg.cutoff);
    ComplexMatrix u(sys_dim * mode_dim, sys_dim * mode_dim);
    for (std::size_t i = 0; i < sys_dim; ++i) {
        const double s = coup.levels[i];
        const Complex scale = std::exp(-kI * phi * (s * s));
        const ComplexMatrix block =
            exp_creation(-kI * s * g_t, cfg.cutoff) *
            exp_annihilation(-kI * s * std::conj(g_t), cfg.cutoff);
        for (std::size_t m = 0; m < mode_dim; ++m) {
            for (std::size_t n = 0; n < mode_dim; ++n) {
                u(i * mode_dim + m, i * mode_dim + n) = scale * block(m, n);
            }
        }
    }
    return u;
}

ComplexMatrix kraus_from_projection(const FockConfig& cfg, const CouplingSpec& coup, double t,
                                    int m) {
    if (m < 0 || m >= cfg.cutoff) {
        throw Error(ErrorCode::invalid_argument, "photon number outside the cutoff");
    }
    const ComplexMatrix u = total_unitary(cfg, coup, t);
    const std::size_t sys_dim = coup.system_dim();
    const std::size_t mode_dim = static_cast<std::size_t>(cfg.cutoff);
    ComplexMatrix out(sys_dim, sys_dim);
    for (std::size_t i = 0; i < sys_dim; ++i) {
        out(i, i) = u(i * mode_dim + static_cast<std::size_t>(m), i * mode_dim);
    }
    return out;
}

std::vector<ComplexMatrix> fock_kraus_family(const FockConfig& cfg, const CouplingSpec& coup,
                                             double t, int m_count) {
    if (m_count < 1 || m_count > cfg.cutoff) {
        throw Error(ErrorCode::invalid_argument, "family size must be in [1, cutoff]");
    }
    const ComplexMatrix u = total_unitary(cfg, coup, t);
    const std::size_t sys_dim = coup.system_dim();
    const std::size_t mode_dim = static_cast<std::size_t>(cfg.cutoff);
    std::vector<ComplexMatrix> family;
    family.reserve(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m) {
        ComplexMatrix op(sys_dim, sys_dim);
        for (std::size_t i = 0; i < sys_dim; ++i) {
            op(i, i) = u(i * mode_dim + static_cast<std::size_t>(m), i * mode_dim);
        }
        family.push_back(std::move(op));
    }
    return family;
}

ComplexMatrix analytic_fock_kraus(const FockConfig& cfg, const CouplingSpec& coup, double t,
                                  int m) {
    validate(cfg);
    validate(coup);
    if (m < 0) throw Error(ErrorCode::invalid_argument, "photon number must be >= 0");
    const bath::BathSpec spec = single_mode_spec(cfg);
    const Complex g_t = bath::displacement_amplitude(spec, 0, t);
    const Complex phi = bath::mode_phase(spec, 0, t);

    const std::size_t sys_dim = coup.system_dim();
    ComplexMatrix out(sys_dim, sys_dim);
    for (std::size_t i = 0; i < sys_dim; ++i) {
        const double s = coup.levels[i];
        Complex amp = std::exp(-kI * phi * (s * s));
        for (int j = 1; j <= m; ++j) {
            amp *= (-kI * s * g_t) / std::sqrt(static_cast<double>(j));
        }
        out(i, i) = amp;
    }
    return out;
}

std::vector<TraceNormRow> trace_norm_table(const FockConfig& cfg, const CouplingSpec& coup) {
    validate(cfg);
    std::vector<TraceNormRow> rows;
    for (double t : cfg.times) {
        const auto family = fock_kraus_family(cfg, coup, t, cfg.cutoff);
        for (int m = 0; m < cfg.cutoff; ++m) {
            rows.push_back({t, m, trace_norm(family[static_cast<std::size_t>(m)])});
        }
    }
    return rows;
}

ComplexMatrix evolve(const FockConfig& cfg, const CouplingSpec& coup, double t,
                     const ComplexMatrix& rho_sys) {
    const std::size_t sys_dim = coup.system_dim();
    if (rho_sys.rows() != sys_dim || rho_sys.cols() != sys_dim) {
        throw Error(ErrorCode::dimension_mismatch, "system state dim mismatch");
    }
    const ComplexMatrix u = total_unitary(cfg, coup, t);
    const std::size_t mode_dim = static_cast<std::size_t>(cfg.cutoff);
    const std::size_t total = sys_dim * mode_dim;

    // rho_tot = sum_{ij} rho_ij (U e_{i,0})(U e_{j,0})^dag; only the vacuum
    // columns of U enter
    ComplexMatrix out(total, total);
    for (std::size_t i = 0; i < sys_dim; ++i) {
        for (std::size_t j = 0; j < sys_dim; ++j) {
            const Complex w = rho_sys(i, j);
            if (w == Complex(0.0, 0.0)) continue;
            for (std::size_t a = i * mode_dim; a < (i + 1) * mode_dim; ++a) {
                const Complex left = w * u(a, i * mode_dim);
                if (left == Complex(0.0, 0.0)) continue;
                for (std::size_t b = j * mode_dim; b < (j + 1) * mode_dim; ++b) {
                    out(a, b) += left * std::conj(u(b, j * mode_dim));
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace_env(const ComplexMatrix& rho_tot, std::size_t sys_dim,
                                std::size_t env_dim) {
    if (rho_tot.rows() != sys_dim * env_dim || !rho_tot.is_square()) {
        throw Error(ErrorCode::dimension_mismatch, "partial trace dim mismatch");
    }
    ComplexMatrix out(sys_dim, sys_dim);
    for (std::size_t i = 0; i < sys_dim; ++i) {
        for (std::size_t j = 0; j < sys_dim; ++j) {
            Complex acc = 0.0;
            for (std::size_t m = 0; m < env_dim; ++m) {
                acc += rho_tot(i * env_dim + m, j * env_dim + m);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

ComplexMatrix partial_trace_sys(const ComplexMatrix& rho_tot, std::size_t sys_dim,
                                std::size_t env_dim) {
    if (rho_tot.rows() != sys_dim * env_dim || !rho_tot.is_square()) {
        throw Error(ErrorCode::dimension_mismatch, "partial trace dim mismatch");
    }
    ComplexMatrix out(env_dim, env_dim);
    for (std::size_t m = 0; m < env_dim; ++m) {
        for (std::size_t n = 0; n < env_dim; ++n) {
            Complex acc = 0.0;
            for (std::size_t i = 0; i < sys_dim; ++i) {
                acc += rho_tot(i * env_dim + m, i * env_dim + n);
            }
            out(m, n) = acc;
        }
    }
    return out;
}

DensityMatrix channel_output(const FockConfig& cfg, const CouplingSpec& coup, double t,
                             const DensityMatrix& rho_sys) {
    const ComplexMatrix rho_tot = evolve(cfg, coup, t, rho_sys.matrix());
    ComplexMatrix reduced = partial_trace_env(rho_tot, coup.system_dim(),
                                              static_cast<std::size_t>(cfg.cutoff));
    // strip truncation-level asymmetry before the validating constructor
    ComplexMatrix sym = reduced;
    for (std::size_t r = 0; r < sym.rows(); ++r) {
        for (std::size_t c = 0; c < sym.cols(); ++c) {
            sym(r, c) = 0.5 * (reduced(r, c) + std::conj(reduced(c, r)));
        }
    }
    const Complex tr = sym.trace();
    sym *= Complex(1.0, 0.0) / tr;
    return DensityMatrix(std::move(sym));
}

ComplexMatrix environment_state(const FockConfig& cfg, const CouplingSpec& coup, double t,
                                const DensityMatrix& rho_sys) {
    const ComplexMatrix rho_tot = evolve(cfg, coup, t, rho_sys.matrix());
    return partial_trace_sys(rho_tot, coup.system_dim(), static_cast<std::size_t>(cfg.cutoff));
}

std::vector<LabeledProjector> parity_measurement_operators(int cutoff, bool split_vacuum) {
    if (cutoff < 2) {
        throw Error(ErrorCode::invalid_argument, "Fock cutoff must be >= 2");
    }
    const std::size_t dim = static_cast<std::size_t>(cutoff);
    ComplexMatrix vacuum(dim, dim), odd(dim, dim), even(dim, dim);
    for (std::size_t m = 0; m < dim; ++m) {
        if (m == 0 && split_vacuum) {
            vacuum(m, m) = 1.0;
        } else if (m % 2 == 1) {
            odd(m, m) = 1.0;
        } else {
            even(m, m) = 1.0;
        }
    }
    std::vector<LabeledProjector> out;
    if (split_vacuum) out.push_back({"vacuum", std::move(vacuum)});
    out.push_back({"odd", std::move(odd)});
    out.push_back({"even", std::move(even)});
    return out;
}

ComplexMatrix measured_branch(const FockConfig& cfg, const CouplingSpec& coup, double t,
                              const DensityMatrix& rho_sys, const ComplexMatrix& projector) {
    const std::size_t env_dim = static_cast<std::size_t>(cfg.cutoff);
    if (projector.rows() != env_dim || projector.cols() != env_dim) {
        throw Error(ErrorCode::dimension_mismatch, "projector must act on the mode space");
    }
    const ComplexMatrix rho_tot = evolve(cfg, coup, t, rho_sys.matrix());
    const std::size_t sys_dim = coup.system_dim();
    ComplexMatrix out(sys_dim, sys_dim);
    // tr_E[rho_tot (I (x) M)] = sum_{m,n} rho_tot[(i,m),(j,n)] M(n,m)
    for (std::size_t i = 0; i < sys_dim; ++i) {
        for (std::size_t j = 0; j < sys_dim; ++j) {
            Complex acc = 0.0;
            for (std::size_t m = 0; m < env_dim; ++m) {
                for (std::size_t n = 0; n < env_dim; ++n) {
                    const Complex p = projector(n, m);
                    if (p == Complex(0.0, 0.0)) continue;
                    acc += rho_tot(i * env_dim + m, j * env_dim + n) * p;
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

namespace {

void require_diagonal(const ComplexMatrix& m, const char* what) {
    double off = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (r != c) off = std::max(off, std::abs(m(r, c)));
        }
    }
    if (off > 1e-12) {
        throw Error(ErrorCode::invalid_argument,
                    std::string(what) + " must be diagonal for the measurement-basis solve");
    }
}

// Deterministic completion: the Householder-QR orthogonal complement of the
// existing columns supplies the missing orthonormal directions.
void complete_orthonormal(Eigen::MatrixXcd& m, Eigen::Index target_cols) {
    const Eigen::Index dim = m.rows();
    const Eigen::Index have = m.cols();
    if (have >= target_cols) return;
    if (target_cols > dim) {
        throw Error(ErrorCode::internal, "orthonormal completion needs target <= dim");
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    const Eigen::MatrixXcd q = qr.householderQ();
    m.conservativeResize(Eigen::NoChange, target_cols);
    for (Eigen::Index c = have; c < target_cols; ++c) {
        m.col(c) = q.col(c);
    }
}

}  // namespace

MeasurementBasis solve_measurement_basis(const kraus::KrausSet& target,
                                         const std::vector<ComplexMatrix>& family,
                                         int cutoff_m) {
    if (cutoff_m < 1 || static_cast<std::size_t>(cutoff_m) > family.size()) {
        throw Error(ErrorCode::invalid_argument, "cutoff_m outside the available family");
    }
    const std::size_t n_targets = target.size();
    const std::size_t dim = target.dim();
    const std::size_t m_use = static_cast<std::size_t>(cutoff_m);
    if (n_targets > m_use) {
        throw Error(ErrorCode::invalid_argument, "more target operators than family cutoff");
    }
    for (const auto& op : target.ops()) require_diagonal(op.matrix, "target ops");
    for (std::size_t m = 0; m < m_use; ++m) {
        if (family[m].rows() != dim || family[m].cols() != dim) {
            throw Error(ErrorCode::dimension_mismatch, "family dim mismatch");
        }
        require_diagonal(family[m], "family ops");
    }

    // E(n, r): target diagonals; F(m, r): family diagonals
    Eigen::MatrixXcd e_mat(static_cast<Eigen::Index>(n_targets), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n < n_targets; ++n) {
        for (std::size_t r = 0; r < dim; ++r) e_mat(n, r) = target.op(n).matrix(r, r);
    }
    Eigen::MatrixXcd f_mat(static_cast<Eigen::Index>(m_use), static_cast<Eigen::Index>(dim));
    for (std::size_t m = 0; m < m_use; ++m) {
        for (std::size_t r = 0; r < dim; ++r) f_mat(m, r) = family[m](r, r);
    }

    // per-row minimum-norm probe of the Eq. (26) system
    double min_norm_residual = 0.0;
    {
        ComplexMatrix a(dim, m_use);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t m = 0; m < m_use; ++m) a(r, m) = f_mat(m, r);
        }
        for (std::size_t n = 0; n < n_targets; ++n) {
            std::vector<Complex> rhs(dim);
            for (std::size_t r = 0; r < dim; ++r) rhs[r] = e_mat(n, r);
            const LeastSquaresSolution sol = min_norm_solve(a, rhs);
            min_norm_residual = std::max(min_norm_residual, sol.residual);
        }
    }
    if (min_norm_residual > 1e-8) {
        std::ostringstream msg;
        msg << "measurement-basis cutoff too aggressive: residual " << min_norm_residual;
        throw Error(ErrorCode::rank_deficient_inconsistent, msg.str());
    }

    // the two decompositions must share the channel Gram
    const Eigen::MatrixXcd gram_f = f_mat.adjoint() * f_mat;
    const Eigen::MatrixXcd gram_e = e_mat.adjoint() * e_mat;
    if ((gram_e - gram_f).cwiseAbs().maxCoeff() > 1e-8) {
        throw Error(ErrorCode::rank_deficient_inconsistent,
                    "target and family decompose different channels");
    }

    // align both sets through the eigenbasis of the shared Gram
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram_f);
    const Eigen::VectorXd evals = es.eigenvalues();
    const double lam_max = evals.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        if (evals(i) > lam_max * 1e-12) keep.push_back(i);
    }
    const Eigen::Index rank = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXcd u_f(static_cast<Eigen::Index>(m_use), rank);
    Eigen::MatrixXcd u_e(static_cast<Eigen::Index>(n_targets), rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
        const double inv_root = 1.0 / std::sqrt(evals(keep[static_cast<std::size_t>(c)]));
        u_f.col(c) = f_mat * es.eigenvectors().col(keep[static_cast<std::size_t>(c)]) * inv_root;
        u_e.col(c) = e_mat * es.eigenvectors().col(keep[static_cast<std::size_t>(c)]) * inv_root;
    }
    // polish u_e against truncation-level Gram mismatch
    for (Eigen::Index c = 0; c < rank; ++c) {
        for (Eigen::Index p = 0; p < c; ++p) {
            u_e.col(c) -= u_e.col(p).dot(u_e.col(c)) * u_e.col(p);
        }
        u_e.col(c).normalize();
    }
    complete_orthonormal(u_e, static_cast<Eigen::Index>(n_targets));
    complete_orthonormal(u_f, static_cast<Eigen::Index>(n_targets));

    const Eigen::MatrixXcd v = u_e * u_f.adjoint();

    MeasurementBasis out{ComplexMatrix(n_targets, m_use), 0.0, min_norm_residual, 0.0, {}};
    for (std::size_t n = 0; n < n_targets; ++n) {
        for (std::size_t m = 0; m < m_use; ++m) {
            out.v(n, m) = v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
        }
    }
    out.residual = (v * f_mat - e_mat).cwiseAbs().maxCoeff();
    out.row_gram_deviation =
        (v * v.adjoint() - Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n_targets),
                                                      static_cast<Eigen::Index>(n_targets)))
            .cwiseAbs()
            .maxCoeff();
    for (std::size_t n = 0; n < n_targets; ++n) {
        std::vector<Complex> amps(m_use);
        double norm2 = 0.0;
        for (std::size_t m = 0; m < m_use; ++m) {
            amps[m] = std::conj(out.v(n, m));
            norm2 += std::norm(amps[m]);
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& a : amps) a *= inv;
        out.basis_states.emplace_back(std::move(amps));
    }
    return out;
}

std::vector<double> outcome_probabilities(const MeasurementBasis& basis,
                                          const ComplexMatrix& rho_env) {
    if (!rho_env.is_square() || rho_env.rows() < basis.v.cols()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "environment state smaller than the basis support");
    }
    std::vector<double> probs;
    probs.reserve(basis.v.rows());
    for (std::size_t n = 0; n < basis.v.rows(); ++n) {
        Complex acc = 0.0;
        for (std::size_t m = 0; m < basis.v.cols(); ++m) {
            for (std::size_t mp = 0; mp < basis.v.cols(); ++mp) {
                acc += basis.v(n, m) * rho_env(m, mp) * std::conj(basis.v(n, mp));
            }
        }
        probs.push_back(acc.real());
    }
    return probs;
}

}  // namespace dephase::focksim

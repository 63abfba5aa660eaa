#include "core/kraus.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "core/eigen_bridge.hpp"
#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace dephase::kraus {

namespace {

constexpr double kWeightFloor = -1e-12;   // below this a solved weight is infeasible
constexpr double kNegligibleWeight = 1e-14;

void check_qubits(int n) {
    if (n < 1 || n > 10) {
        throw Error(ErrorCode::invalid_argument, "n_qubits must be in [1, 10]");
    }
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0) {
        throw Error(ErrorCode::invalid_argument, "gamma must be in (0, 1]");
    }
}

}  // namespace

int hamming_weight(std::size_t index) {
    int w = 0;
    while (index != 0) {
        w += static_cast<int>(index & 1u);
        index >>= 1u;
    }
    return w;
}

KrausSet::KrausSet(std::vector<KrausOp> ops, std::optional<std::vector<double>> weights)
    : ops_(std::move(ops)), weights_(std::move(weights)) {
    if (ops_.empty()) {
        throw Error(ErrorCode::invalid_argument, "Kraus set must contain at least one operator");
    }
    dim_ = ops_.front().matrix.rows();
    for (const auto& op : ops_) {
        if (op.matrix.rows() != dim_ || op.matrix.cols() != dim_) {
            throw Error(ErrorCode::dimension_mismatch, "Kraus operators must share a square dim");
        }
    }
    const double completeness = completeness_residual();
    if (completeness > 1e-10) {
        std::ostringstream msg;
        msg << "Kraus set violates completeness: |sum K^dag K - I| = " << completeness;
        throw Error(ErrorCode::invalid_argument, msg.str());
    }
    if (weights_) {
        if (weights_->size() != ops_.size()) {
            throw Error(ErrorCode::dimension_mismatch, "weights must align with operators");
        }
        double sum = 0.0;
        for (double w : *weights_) {
            if (w < kWeightFloor) {
                throw Error(ErrorCode::invalid_argument, "negative weight in RU Kraus set");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-10) {
            throw Error(ErrorCode::invalid_argument, "RU weights must sum to 1");
        }
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            const double w = (*weights_)[i];
            if (w < kNegligibleWeight) continue;
            ComplexMatrix u = ops_[i].matrix;
            u *= Complex(1.0 / std::sqrt(w), 0.0);
            const double dev = ComplexMatrix::max_abs_diff(u.adjoint() * u,
                                                           ComplexMatrix::identity(dim_));
            if (dev > 1e-10) {
                std::ostringstream msg;
                msg << "op " << ops_[i].label << " is not sqrt(weight) * unitary, dev = " << dev;
                throw Error(ErrorCode::invalid_argument, msg.str());
            }
        }
    }
}

double KrausSet::completeness_residual() const {
    ComplexMatrix acc(dim_, dim_);
    for (const auto& op : ops_) {
        acc += op.matrix.adjoint() * op.matrix;
    }
    return ComplexMatrix::max_abs_diff(acc, ComplexMatrix::identity(dim_));
}

SchurMatrix build_schur_matrix(int n_qubits, double gamma) {
    check_qubits(n_qubits);
    check_gamma(gamma);
    const std::size_t dim = std::size_t{1} << n_qubits;
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const int d = hamming_weight(i) - hamming_weight(j);
            m(i, j) = std::pow(gamma, static_cast<double>(d * d));
        }
    }
    return {n_qubits, gamma, std::move(m)};
}

SignBasis::SignBasis(int n_qubits, std::vector<std::vector<int>> class_signs)
    : n_qubits_(n_qubits), class_signs_(std::move(class_signs)) {
    check_qubits(n_qubits_);
    for (const auto& s : class_signs_) {
        if (s.size() != static_cast<std::size_t>(n_qubits_) + 1) {
            throw Error(ErrorCode::invalid_argument, "sign vector length must be n_qubits + 1");
        }
        for (int v : s) {
            if (v != 1 && v != -1) {
                throw Error(ErrorCode::invalid_argument, "sign entries must be +1 or -1");
            }
        }
    }
}

ComplexMatrix SignBasis::expand(std::size_t i) const {
    const auto& s = class_signs_.at(i);
    const std::size_t dim = std::size_t{1} << n_qubits_;
    std::vector<Complex> diag(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        diag[b] = static_cast<double>(s[static_cast<std::size_t>(hamming_weight(b))]);
    }
    return ComplexMatrix::diagonal(diag);
}

std::string SignBasis::label(std::size_t i) const {
    std::string out;
    for (int v : class_signs_.at(i)) out.push_back(v > 0 ? '+' : '-');
    return out;
}

std::vector<std::pair<int, int>> weight_class_pairs(int n_qubits) {
    std::vector<std::pair<int, int>> pairs;
    for (int gap = 1; gap <= n_qubits; ++gap) {
        for (int w = 0; w + gap <= n_qubits; ++w) {
            pairs.emplace_back(w, w + gap);
        }
    }
    return pairs;
}

ComplexMatrix pair_product_system(const SignBasis& basis) {
    const auto pairs = weight_class_pairs(basis.n_qubits());
    const std::size_t nk = basis.size();
    if (nk != pairs.size() + 1) {
        throw Error(ErrorCode::invalid_argument, "sign basis size must equal 1 + n(n+1)/2");
    }
    ComplexMatrix system(nk, nk);
    for (std::size_t col = 0; col < nk; ++col) {
        const auto& s = basis.class_signs()[col];
        system(0, col) = 1.0;
        for (std::size_t row = 0; row < pairs.size(); ++row) {
            system(row + 1, col) = static_cast<double>(
                s[static_cast<std::size_t>(pairs[row].first)] *
                s[static_cast<std::size_t>(pairs[row].second)]);
        }
    }
    return system;
}

std::vector<Complex> weight_system_rhs(int n_qubits, double gamma) {
    check_gamma(gamma);
    const auto pairs = weight_class_pairs(n_qubits);
    std::vector<Complex> rhs;
    rhs.reserve(pairs.size() + 1);
    rhs.emplace_back(1.0, 0.0);
    for (const auto& [w, wp] : pairs) {
        const int d = wp - w;
        rhs.emplace_back(std::pow(gamma, static_cast<double>(d * d)), 0.0);
    }
    return rhs;
}

namespace {

std::vector<int> flip_subset_to_signs(int n_qubits, const std::vector<int>& flips) {
    std::vector<int> s(static_cast<std::size_t>(n_qubits) + 1, 1);
    for (int f : flips) s[static_cast<std::size_t>(f)] = -1;
    return s;
}

// Greedy selection of sign vectors whose pair-product columns are linearly
// independent; candidates are subset flips ordered by (size, span, lex).
SignBasis searched_sign_basis(int n_qubits) {
    const auto pairs = weight_class_pairs(n_qubits);
    const std::size_t nk = pairs.size() + 1;
    const int n_classes = n_qubits + 1;

    std::vector<std::vector<int>> subsets;
    for (std::uint32_t mask = 0; mask < (1u << n_classes); ++mask) {
        std::vector<int> flips;
        for (int c = 0; c < n_classes; ++c) {
            if (mask & (1u << c)) flips.push_back(c);
        }
        subsets.push_back(std::move(flips));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        const int span_a = a.empty() ? 0 : a.back() - a.front();
        const int span_b = b.empty() ? 0 : b.back() - b.front();
        if (span_a != span_b) return span_a < span_b;
        return a < b;
    });

    std::vector<std::vector<int>> chosen;
    std::vector<Eigen::VectorXd> ortho;  // orthonormalized accepted columns
    for (const auto& flips : subsets) {
        if (chosen.size() == nk) break;
        const auto signs = flip_subset_to_signs(n_qubits, flips);
        Eigen::VectorXd col(static_cast<Eigen::Index>(nk));
        col(0) = 1.0;
        for (std::size_t row = 0; row < pairs.size(); ++row) {
            col(static_cast<Eigen::Index>(row + 1)) = static_cast<double>(
                signs[static_cast<std::size_t>(pairs[row].first)] *
                signs[static_cast<std::size_t>(pairs[row].second)]);
        }
        Eigen::VectorXd residual = col;
        for (const auto& q : ortho) residual -= q.dot(residual) * q;
        if (residual.norm() > 1e-9 * std::sqrt(static_cast<double>(nk))) {
            ortho.push_back(residual.normalized());
            chosen.push_back(signs);
        }
    }
    if (chosen.size() != nk) {
        throw Error(ErrorCode::basis_search_failed,
                    "no invertible sign-basis selection found for n = " +
                        std::to_string(n_qubits));
    }
    return SignBasis(n_qubits, std::move(chosen));
}

}  // namespace

SignBasis ru_sign_basis(int n_qubits) {
    check_qubits(n_qubits);
    switch (n_qubits) {
        case 1:
            // identity and sigma_z
            return SignBasis(1, {{1, 1}, {1, -1}});
        case 2:
            // the four two-qubit sign patterns
            return SignBasis(2, {{1, 1, 1}, {-1, 1, 1}, {1, 1, -1}, {1, -1, 1}});
        case 3:
            // the seven three-qubit operators: identity, single-class flips,
            // adjacent double flips {0,1} and {1,2}
            return SignBasis(3, {{1, 1, 1, 1},
                                 {-1, 1, 1, 1},
                                 {1, -1, 1, 1},
                                 {1, 1, -1, 1},
                                 {1, 1, 1, -1},
                                 {-1, -1, 1, 1},
                                 {1, -1, -1, 1}});
        default:
            return searched_sign_basis(n_qubits);
    }
}

KrausSet solve_ru_weights(const SignBasis& basis, const SchurMatrix& schur_matrix) {
    if (basis.n_qubits() != schur_matrix.n_qubits) {
        throw Error(ErrorCode::dimension_mismatch, "sign basis and Schur matrix disagree on n");
    }
    const ComplexMatrix system = pair_product_system(basis);
    if (numeric_rank(system) != basis.size()) {
        throw Error(ErrorCode::singular_system, "pair-product system is singular");
    }
    const std::vector<Complex> rhs = weight_system_rhs(basis.n_qubits(), schur_matrix.gamma);
    const LeastSquaresSolution sol = min_norm_solve(system, rhs);

    std::vector<double> c(sol.x.size());
    for (std::size_t i = 0; i < sol.x.size(); ++i) c[i] = sol.x[i].real();

    // verify the class-pair reconstruction before feasibility so that a bad
    // basis is reported as such
    const auto pairs = weight_class_pairs(basis.n_qubits());
    double recon = 0.0;
    {
        double diag = -1.0;
        for (std::size_t i = 0; i < c.size(); ++i) diag += c[i];
        recon = std::abs(diag);
    }
    for (std::size_t row = 0; row < pairs.size(); ++row) {
        double acc = 0.0;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const auto& s = basis.class_signs()[i];
            acc += c[i] * s[static_cast<std::size_t>(pairs[row].first)] *
                   s[static_cast<std::size_t>(pairs[row].second)];
        }
        recon = std::max(recon, std::abs(acc - rhs[row + 1].real()));
    }
    if (recon > 1e-10) {
        std::ostringstream msg;
        msg << "weight solution fails to reproduce Schur entries, deviation " << recon;
        throw Error(ErrorCode::singular_system, msg.str());
    }

    for (double w : c) {
        if (w < kWeightFloor) {
            std::ostringstream msg;
            msg << "solved RU weights contain negative entries at gamma = "
                << schur_matrix.gamma << ":";
            for (double v : c) msg << " " << v;
            throw InfeasibleWeights(c, msg.str());
        }
    }

    std::vector<KrausOp> ops;
    std::vector<double> weights;
    ops.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double w = std::max(c[i], 0.0);
        ComplexMatrix op = basis.expand(i);
        op *= Complex(std::sqrt(w), 0.0);
        ops.push_back({basis.label(i), std::move(op)});
        weights.push_back(w);
    }
    return KrausSet(std::move(ops), std::move(weights));
}

KrausSet build_common_nonru(const bath::DephasingCoefficients& coeffs) {
    const Complex l1 = coeffs.l1;
    std::vector<KrausOp> ops;
    ops.push_back({"vacuum", ComplexMatrix::diagonal({l1, 1.0, 1.0, l1})});
    ops.push_back({"odd", ComplexMatrix::diagonal({coeffs.l2, 0.0, 0.0, -coeffs.l2})});
    ops.push_back({"even", ComplexMatrix::diagonal({coeffs.l3, 0.0, 0.0, coeffs.l3})});
    return KrausSet(std::move(ops));
}

ComplexMatrix phase_prefactor(int n_qubits, Complex l1_phase) {
    check_qubits(n_qubits);
    const double mag = std::abs(l1_phase);
    if (mag < 1e-300) {
        throw Error(ErrorCode::invalid_argument, "phase prefactor needs a nonzero l1");
    }
    const Complex u = l1_phase / mag;
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<Complex> diag(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        const int w = hamming_weight(b);
        // (n - 2w)^2 - (n mod 2) is divisible by 4; the quotient is
        // s^2 - min s^2 for s = n/2 - w
        const int num = (n_qubits - 2 * w) * (n_qubits - 2 * w) - (n_qubits % 2);
        const int exponent = num / 4;
        diag[b] = std::pow(u, exponent);
    }
    return ComplexMatrix::diagonal(diag);
}

CommonRuDecomposition build_common_ru(const bath::DephasingCoefficients& coeffs) {
    const SchurMatrix schur_matrix = build_schur_matrix(2, coeffs.gamma);
    KrausSet set = solve_ru_weights(ru_sign_basis(2), schur_matrix);
    return {std::move(set), phase_prefactor(2, coeffs.l1)};
}

std::vector<double> common_ru_closed_form_weights(const bath::DephasingCoefficients& coeffs) {
    const double l1 = coeffs.gamma;  // reading the published l1 as |l1|
    const double l2_sq = coeffs.l2 * coeffs.l2;
    const double l3_sq = coeffs.l3 * coeffs.l3;
    const double x1 = 0.25 * (1.0 + 2.0 * l1 + l3_sq - l2_sq);
    const double x2 = 0.25 * (1.0 - l3_sq + l2_sq);
    const double x4 = 0.25 * (1.0 - 2.0 * l1 + l3_sq - l2_sq);
    return {x1, x2, x2, x4};
}

KrausSet build_single_qubit_parity(const bath::BathSpec& spec, double t) {
    const double g = bath::total_displacement(spec, t);
    const double odd = 0.5 * (1.0 - std::exp(-2.0 * g));
    const double even = 0.5 * (1.0 + std::exp(-2.0 * g));
    std::vector<KrausOp> ops;
    ops.push_back({"odd", ComplexMatrix::diagonal({std::sqrt(odd), -std::sqrt(odd)})});
    ops.push_back({"even", ComplexMatrix::diagonal({std::sqrt(even), std::sqrt(even)})});
    return KrausSet(std::move(ops), std::vector<double>{odd, even});
}

KrausSet build_individual_tensor(const std::vector<KrausSet>& per_qubit) {
    if (per_qubit.empty()) {
        throw Error(ErrorCode::invalid_argument, "tensor construction needs at least one factor");
    }
    for (const auto& set : per_qubit) {
        if (set.dim() != 2) {
            throw Error(ErrorCode::dimension_mismatch, "per-qubit Kraus sets must have dim 2");
        }
    }
    const bool weighted = std::all_of(per_qubit.begin(), per_qubit.end(),
                                      [](const KrausSet& s) { return s.has_weights(); });

    std::vector<KrausOp> ops;
    std::vector<double> weights;
    std::vector<std::size_t> index(per_qubit.size(), 0);
    while (true) {
        ComplexMatrix product = per_qubit[0].op(index[0]).matrix;
        std::string label = per_qubit[0].op(index[0]).label;
        double weight = weighted ? per_qubit[0].weights()[index[0]] : 0.0;
        for (std::size_t q = 1; q < per_qubit.size(); ++q) {
            product = kron(product, per_qubit[q].op(index[q]).matrix);
            label += "," + per_qubit[q].op(index[q]).label;
            if (weighted) weight *= per_qubit[q].weights()[index[q]];
        }
        ops.push_back({std::move(label), std::move(product)});
        if (weighted) weights.push_back(weight);

        // odometer increment, last qubit fastest
        std::size_t q = per_qubit.size();
        while (q > 0) {
            --q;
            if (++index[q] < per_qubit[q].size()) break;
            index[q] = 0;
            if (q == 0) {
                return weighted ? KrausSet(std::move(ops), std::move(weights))
                                : KrausSet(std::move(ops));
            }
        }
    }
}

ComplexMatrix apply_channel_map(const KrausSet& set, const ComplexMatrix& x) {
    if (x.rows() != set.dim() || x.cols() != set.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "apply_channel: state dim mismatch");
    }
    ComplexMatrix acc(set.dim(), set.dim());
    for (const auto& op : set.ops()) {
        acc += op.matrix * x * op.matrix.adjoint();
    }
    return acc;
}

DensityMatrix apply_channel(const KrausSet& set, const DensityMatrix& rho) {
    ComplexMatrix out = apply_channel_map(set, rho.matrix());
    const double trace_drift = std::abs(out.trace() - Complex(1.0, 0.0));
    if (trace_drift > 1e-10) {
        std::ostringstream msg;
        msg << "channel application drifted the trace by " << trace_drift;
        throw Error(ErrorCode::internal, msg.str());
    }
    return DensityMatrix(std::move(out));
}

KrausSet compose_phase(const ComplexMatrix& phase, const KrausSet& set) {
    if (phase.rows() != set.dim() || phase.cols() != set.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "phase prefactor dim mismatch");
    }
    std::vector<KrausOp> ops;
    ops.reserve(set.size());
    for (const auto& op : set.ops()) {
        ops.push_back({op.label, phase * op.matrix});
    }
    if (set.has_weights()) {
        return KrausSet(std::move(ops), set.weights());
    }
    return KrausSet(std::move(ops));
}

EquivalenceResult decomposition_equivalence(const KrausSet& a, const KrausSet& b, double tol) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "equivalence: dims differ");
    }
    const std::size_t dim = a.dim();
    double max_dev = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            ComplexMatrix unit(dim, dim);
            unit(r, c) = 1.0;
            max_dev = std::max(
                max_dev, ComplexMatrix::max_abs_diff(apply_channel_map(a, unit),
                                                     apply_channel_map(b, unit)));
        }
    }
    return {max_dev <= tol, max_dev};
}

namespace {

// Parameter layout for the phase search: n_ops weight logits followed by
// n_ops * n phases (theta_{i,0} is gauge-fixed to zero).
struct PhaseProblem {
    int n_classes;  // n_qubits + 1
    std::size_t n_ops;
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> targets;

    std::size_t n_params() const { return n_ops * static_cast<std::size_t>(n_classes); }

    void weights(const std::vector<double>& x, std::vector<double>& p) const {
        p.resize(n_ops);
        double max_logit = x[0];
        for (std::size_t i = 1; i < n_ops; ++i) max_logit = std::max(max_logit, x[i]);
        double sum = 0.0;
        for (std::size_t i = 0; i < n_ops; ++i) {
            p[i] = std::exp(x[i] - max_logit);
            sum += p[i];
        }
        for (auto& v : p) v /= sum;
    }

    double theta(const std::vector<double>& x, std::size_t op, int w) const {
        if (w == 0) return 0.0;
        return x[n_ops + op * static_cast<std::size_t>(n_classes - 1) +
                 static_cast<std::size_t>(w - 1)];
    }

    void residuals(const std::vector<double>& x, std::vector<double>& r) const {
        std::vector<double> p;
        weights(x, p);
        r.resize(2 * pairs.size());
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            Complex acc = 0.0;
            for (std::size_t i = 0; i < n_ops; ++i) {
                const double dtheta = theta(x, i, pairs[k].first) - theta(x, i, pairs[k].second);
                acc += p[i] * std::exp(Complex(0.0, dtheta));
            }
            acc -= targets[k];
            r[2 * k] = acc.real();
            r[2 * k + 1] = acc.imag();
        }
    }

    double norm(const std::vector<double>& x) const {
        std::vector<double> r;
        residuals(x, r);
        double acc = 0.0;
        for (double v : r) acc += v * v;
        return std::sqrt(acc);
    }
};

// Levenberg-Marquardt with a central-difference Jacobian.
double levenberg_marquardt(const PhaseProblem& problem, std::vector<double>& x,
                           int max_iterations) {
    const std::size_t np = problem.n_params();
    const std::size_t nr = 2 * problem.pairs.size();
    std::vector<double> r(nr), r_trial(nr);
    problem.residuals(x, r);
    double f = 0.0;
    for (double v : r) f += v * v;

    double lambda = 1e-3;
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(np));
    std::vector<double> x_eps = x;
    std::vector<double> r_plus(nr), r_minus(nr);

    for (int iter = 0; iter < max_iterations; ++iter) {
        if (std::sqrt(f) < 1e-15) break;
        const double step = 1e-6;
        for (std::size_t j = 0; j < np; ++j) {
            x_eps = x;
            x_eps[j] += step;
            problem.residuals(x_eps, r_plus);
            x_eps[j] -= 2.0 * step;
            problem.residuals(x_eps, r_minus);
            for (std::size_t i = 0; i < nr; ++i) {
                jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    (r_plus[i] - r_minus[i]) / (2.0 * step);
            }
        }
        Eigen::VectorXd rv(static_cast<Eigen::Index>(nr));
        for (std::size_t i = 0; i < nr; ++i) rv(static_cast<Eigen::Index>(i)) = r[i];
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * rv;

        bool accepted = false;
        for (int attempt = 0; attempt < 24; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (Eigen::Index d = 0; d < damped.rows(); ++d) damped(d, d) += lambda;
            const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
            std::vector<double> x_trial = x;
            for (std::size_t j = 0; j < np; ++j) {
                x_trial[j] += delta(static_cast<Eigen::Index>(j));
            }
            problem.residuals(x_trial, r_trial);
            double f_trial = 0.0;
            for (double v : r_trial) f_trial += v * v;
            if (f_trial < f) {
                x = std::move(x_trial);
                r = r_trial;
                f = f_trial;
                lambda = std::max(lambda * 0.3, 1e-14);
                accepted = true;
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e14) break;
        }
        if (!accepted) break;
    }
    return std::sqrt(f);
}

// Moment-matched linear-phase starts: theta_{i,w} = w * phi_i with
// Gauss-Hermite nodes of N(0, -2 ln gamma), exact in the continuum limit.
bool gauss_start(const PhaseProblem& problem, double gamma, std::vector<double>& x) {
    struct NodeSet {
        std::vector<double> nodes;
        std::vector<double> weights;
    };
    NodeSet ns;
    switch (problem.n_ops) {
        case 2:
            ns = {{-1.0, 1.0}, {0.5, 0.5}};
            break;
        case 3:
            ns = {{-std::sqrt(3.0), 0.0, std::sqrt(3.0)}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};
            break;
        case 4: {
            const double a = std::sqrt(3.0 - std::sqrt(6.0));
            const double b = std::sqrt(3.0 + std::sqrt(6.0));
            const double wa = 1.0 / (4.0 * (3.0 - std::sqrt(6.0)));
            const double wb = 1.0 / (4.0 * (3.0 + std::sqrt(6.0)));
            ns = {{-b, -a, a, b}, {wb, wa, wa, wb}};
            break;
        }
        default:
            return false;
    }
    const double sigma = std::sqrt(std::max(-2.0 * std::log(gamma), 0.0));
    for (std::size_t i = 0; i < problem.n_ops; ++i) {
        x[i] = std::log(std::max(ns.weights[i], 1e-12));
        for (int w = 1; w < problem.n_classes; ++w) {
            x[problem.n_ops + i * static_cast<std::size_t>(problem.n_classes - 1) +
              static_cast<std::size_t>(w - 1)] = w * sigma * ns.nodes[i];
        }
    }
    return true;
}

}  // namespace

KrausSet search_phase_ru(const SchurMatrix& schur_matrix, std::size_t n_ops,
                         const PhaseSearchOptions& options) {
    const int n = schur_matrix.n_qubits;
    const auto pairs = weight_class_pairs(n);
    if (n_ops < 1) {
        throw Error(ErrorCode::invalid_argument, "phase search needs n_ops >= 1");
    }

    PhaseProblem problem;
    problem.n_classes = n + 1;
    problem.n_ops = n_ops;
    problem.pairs = pairs;
    for (const auto& [w, wp] : pairs) {
        const int d = wp - w;
        problem.targets.push_back(std::pow(schur_matrix.gamma, static_cast<double>(d * d)));
    }

    std::vector<double> best_x;
    double best_norm = std::numeric_limits<double>::infinity();

    for (int start = 0; start < options.restarts; ++start) {
        std::vector<double> x(problem.n_params(), 0.0);
        if (start == 0) {
            if (!gauss_start(problem, schur_matrix.gamma, x)) continue;
        } else {
            std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(start) * 0x9e3779b9ULL);
            auto uniform = [&rng]() {
                return static_cast<double>(rng() >> 11) * 0x1.0p-53;
            };
            for (std::size_t i = 0; i < n_ops; ++i) x[i] = uniform() * 2.0 - 1.0;
            for (std::size_t j = n_ops; j < problem.n_params(); ++j) {
                x[j] = (uniform() * 2.0 - 1.0) * M_PI;
            }
        }
        const double norm = levenberg_marquardt(problem, x, options.max_iterations);
        if (norm < best_norm) {
            best_norm = norm;
            best_x = std::move(x);
        }
        if (best_norm <= options.tol * 1e-2) break;
    }

    if (best_norm > options.tol) {
        std::ostringstream msg;
        msg << "phase RU search failed: best residual " << best_norm << " > tol " << options.tol;
        throw SearchFailed(best_norm, msg.str());
    }

    std::vector<double> p;
    problem.weights(best_x, p);
    const std::size_t dim = std::size_t{1} << n;
    std::vector<KrausOp> ops;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n_ops; ++i) {
        std::vector<Complex> diag(dim);
        for (std::size_t b = 0; b < dim; ++b) {
            const double theta = problem.theta(best_x, i, hamming_weight(b));
            diag[b] = std::sqrt(p[i]) * std::exp(Complex(0.0, theta));
        }
        ops.push_back({"phase" + std::to_string(i + 1), ComplexMatrix::diagonal(diag)});
        weights.push_back(p[i]);
    }
    return KrausSet(std::move(ops), std::move(weights));
}

}  // namespace dephase::kraus

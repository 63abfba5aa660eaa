#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/bath.hpp"
#include "core/errors.hpp"
#include "core/kraus.hpp"
#include "core/numerics.hpp"
#include "support/oracles.hpp"

using namespace dephase;
using bath::BathSpec;

namespace {

// zero-frequency single-mode bath: gamma(t) = e^{-t^2/2}, real l1
BathSpec flat_bath() {
    return BathSpec({{0.0, 1.0}});
}

double time_for_gamma(double gamma) {
    return std::sqrt(-2.0 * std::log(gamma));
}

bath::DephasingCoefficients coeffs_at_gamma(double gamma) {
    return bath::coefficients(flat_bath(), time_for_gamma(gamma));
}

// channel multiplier of rho_{ab} under a raw Kraus map
Complex unit_multiplier(const kraus::KrausSet& set, std::size_t a, std::size_t b) {
    ComplexMatrix unit(set.dim(), set.dim());
    unit(a, b) = 1.0;
    return kraus::apply_channel_map(set, unit)(a, b);
}

}  // namespace

TEST_CASE("KrausSet validation") {
    // incomplete set rejected
    std::vector<kraus::KrausOp> bad;
    bad.push_back({"half", ComplexMatrix::diagonal({0.5, 0.5})});
    CHECK_THROWS_AS(kraus::KrausSet(std::move(bad)), Error);

    // weighted set whose op is not sqrt(weight) * unitary rejected
    std::vector<kraus::KrausOp> skew;
    skew.push_back({"a", ComplexMatrix::diagonal({1.0, 0.5})});
    skew.push_back({"b", ComplexMatrix::diagonal({0.0, std::sqrt(0.75)})});
    CHECK_THROWS_AS(kraus::KrausSet(std::move(skew), std::vector<double>{0.5, 0.5}), Error);
}

TEST_CASE("build_common_nonru: identity at t=0, completeness, channel multipliers") {
    const auto at_zero = kraus::build_common_nonru(bath::coefficients(flat_bath(), 0.0));
    CHECK(ComplexMatrix::max_abs_diff(at_zero.op(0).matrix, ComplexMatrix::identity(4)) == 0.0);
    CHECK(at_zero.op(1).matrix.max_abs() == 0.0);
    CHECK(at_zero.op(2).matrix.max_abs() == 0.0);
    CHECK(at_zero.op(0).label == "vacuum");
    CHECK(at_zero.op(1).label == "odd");
    CHECK(at_zero.op(2).label == "even");

    std::mt19937_64 rng(31);
    const std::vector<BathSpec> specs = {flat_bath(), BathSpec({{1.0, 1.0}}),
                                         BathSpec({{0.4, 0.7}, {2.2, 0.3}})};
    for (const auto& spec : specs) {
        for (int trial = 0; trial < 6; ++trial) {
            const double t = 3.0 * testing::uniform01(rng);
            const auto coeffs = bath::coefficients(spec, t);
            const auto set = kraus::build_common_nonru(coeffs);
            CHECK(set.completeness_residual() < 1e-10);

            // coherence map on matrix units: rho_12 -> l1, rho_23 -> 1,
            // rho_14 -> |l1|^2 + l3^2 - l2^2
            CHECK(std::abs(unit_multiplier(set, 0, 1) - coeffs.l1) < 1e-12);
            CHECK(std::abs(unit_multiplier(set, 1, 2) - Complex(1.0, 0.0)) < 1e-12);
            const double corner =
                std::norm(coeffs.l1) + coeffs.l3 * coeffs.l3 - coeffs.l2 * coeffs.l2;
            CHECK(std::abs(unit_multiplier(set, 0, 3) - Complex(corner, 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("build_common_ru: sign patterns, solved weights, feasibility edge") {
    // identity channel: x = (1, 0, 0, 0), no exception
    const auto at_one = kraus::build_common_ru(coeffs_at_gamma(1.0));
    CHECK(at_one.set.weights()[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i < 4; ++i) CHECK(std::abs(at_one.set.weights()[i]) < 1e-12);

    const auto decomposition = kraus::build_common_ru(coeffs_at_gamma(0.3));
    const auto& w = decomposition.set.weights();
    // oracle: minimum-norm solve of the four stated constraints
    ComplexMatrix constraints(4, 4);
    const double gamma = 0.3;
    // x1 + x2 + x3 + x4 = 1
    for (int c = 0; c < 4; ++c) constraints(0, c) = 1.0;
    // x2 - x3 = 0
    constraints(1, 1) = 1.0;
    constraints(1, 2) = -1.0;
    // x1 - x4 = gamma
    constraints(2, 0) = 1.0;
    constraints(2, 3) = -1.0;
    // x1 - 2 x2 + x4 = gamma^4
    constraints(3, 0) = 1.0;
    constraints(3, 1) = -2.0;
    constraints(3, 3) = 1.0;
    const auto oracle = min_norm_solve(
        constraints, {1.0, 0.0, gamma, std::pow(gamma, 4.0)});
    for (int i = 0; i < 4; ++i) {
        CHECK(w[static_cast<std::size_t>(i)] ==
              doctest::Approx(oracle.x[static_cast<std::size_t>(i)].real()).epsilon(1e-10));
    }
    CHECK(w[0] == doctest::Approx(0.4020250).epsilon(1e-5));
    CHECK(w[1] == doctest::Approx(0.2479750).epsilon(1e-5));
    CHECK(w[2] == doctest::Approx(0.2479750).epsilon(1e-5));
    CHECK(w[3] == doctest::Approx(0.1020250).epsilon(1e-5));

    // the four sign patterns, in order
    const std::vector<std::vector<double>> patterns = {
        {1, 1, 1, 1}, {-1, 1, 1, 1}, {1, 1, 1, -1}, {1, -1, -1, 1}};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t d = 0; d < 4; ++d) {
            CHECK(std::abs(decomposition.set.op(i).matrix(d, d) -
                           Complex(std::sqrt(w[i]) * patterns[i][d], 0.0)) < 1e-12);
        }
    }

    // equivalence against the non-RU triple through the phase prefactor
    const auto coeffs = coeffs_at_gamma(0.3);
    const auto reference = kraus::build_common_nonru(coeffs);
    const auto physical = kraus::compose_phase(decomposition.phase, decomposition.set);
    const auto equiv = kraus::decomposition_equivalence(reference, physical, 1e-10);
    CHECK(equiv.equal);

    // gamma = 0.9: x4 < 0, reported with the full solution vector
    try {
        kraus::build_common_ru(coeffs_at_gamma(0.9));
        FAIL("expected InfeasibleWeights");
    } catch (const InfeasibleWeights& err) {
        REQUIRE(err.weights().size() == 4);
        CHECK(err.weights()[3] ==
              doctest::Approx((1.0 + std::pow(0.9, 4.0) - 1.8) / 4.0).epsilon(1e-9));
        double sum = 0.0;
        for (double v : err.weights()) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("paper closed-form weights are pinned as a discrepancy") {
    // at t = 0 they evaluate to (3/4, 1/4, 1/4, -1/4) instead of (1, 0, 0, 0)
    const auto at_zero = kraus::common_ru_closed_form_weights(coeffs_at_gamma(1.0));
    CHECK(at_zero[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(at_zero[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(at_zero[2] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(at_zero[3] == doctest::Approx(-0.25).epsilon(1e-12));

    // at gamma = 0.9 the induced map disagrees with the non-RU channel
    const auto coeffs = coeffs_at_gamma(0.9);
    const auto paper = kraus::common_ru_closed_form_weights(coeffs);
    const std::vector<std::vector<double>> patterns = {
        {1, 1, 1, 1}, {-1, 1, 1, 1}, {1, 1, 1, -1}, {1, -1, -1, 1}};
    const auto reference = kraus::build_common_nonru(coeffs);
    double max_dev = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            Complex mixture = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                mixture += paper[i] * patterns[i][a] * patterns[i][b];
            }
            max_dev = std::max(max_dev,
                               std::abs(mixture - unit_multiplier(reference, a, b)));
        }
    }
    CHECK(max_dev >= 0.01);
}

TEST_CASE("build_schur_matrix: Eq. (36) layout, all-ones limit, n=2 form") {
    const double g = 0.61;
    const auto c3 = kraus::build_schur_matrix(3, g);
    // exponent table copied entry-for-entry from the three-qubit matrix
    const int expected[8][8] = {
        {0, 1, 1, 4, 1, 4, 4, 9},
        {1, 0, 0, 1, 0, 1, 1, 4},
        {1, 0, 0, 1, 0, 1, 1, 4},
        {4, 1, 1, 0, 1, 0, 0, 1},
        {1, 0, 0, 1, 0, 1, 1, 4},
        {4, 1, 1, 0, 1, 0, 0, 1},
        {4, 1, 1, 0, 1, 0, 0, 1},
        {9, 4, 4, 1, 4, 1, 1, 0},
    };
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
            CHECK(c3.matrix(r, c) == Complex(std::pow(g, expected[r][c]), 0.0));
        }
    }

    const auto ones = kraus::build_schur_matrix(3, 1.0);
    for (const auto& z : ones.matrix.entries()) CHECK(z == Complex(1.0, 0.0));

    const auto c2 = kraus::build_schur_matrix(2, g);
    const double g4 = std::pow(g, 4.0);
    const ComplexMatrix expected2(4, 4,
                                  {1.0, g, g, g4,
                                   g, 1.0, 1.0, g,
                                   g, 1.0, 1.0, g,
                                   g4, g, g, 1.0});
    CHECK(ComplexMatrix::max_abs_diff(c2.matrix, expected2) < 1e-15);

    CHECK_THROWS_AS(kraus::build_schur_matrix(2, 0.0), Error);
    CHECK_THROWS_AS(kraus::build_schur_matrix(2, 1.5), Error);
}

TEST_CASE("Schur matrix rank is N + 1") {
    for (int n = 1; n <= 6; ++n) {
        for (double g : {0.1, 0.5, 0.9}) {
            CHECK(numeric_rank(kraus::build_schur_matrix(n, g).matrix) ==
                  static_cast<std::size_t>(n) + 1);
        }
    }
}

TEST_CASE("ru_sign_basis: worked bases and searched bases") {
    const auto one = kraus::ru_sign_basis(1);
    REQUIRE(one.size() == 2);
    CHECK(one.class_signs()[0] == std::vector<int>{1, 1});
    CHECK(one.class_signs()[1] == std::vector<int>{1, -1});

    CHECK(kraus::ru_sign_basis(2).size() == 4);

    // the seven three-qubit diagonals, copied from the worked example
    const auto three = kraus::ru_sign_basis(3);
    REQUIRE(three.size() == 7);
    const std::vector<std::vector<double>> expanded = {
        {1, 1, 1, 1, 1, 1, 1, 1},
        {-1, 1, 1, 1, 1, 1, 1, 1},
        {1, -1, -1, 1, -1, 1, 1, 1},
        {1, 1, 1, -1, 1, -1, -1, 1},
        {1, 1, 1, 1, 1, 1, 1, -1},
        {-1, -1, -1, 1, -1, 1, 1, 1},
        {1, -1, -1, -1, -1, -1, -1, 1},
    };
    for (std::size_t i = 0; i < 7; ++i) {
        const auto diag = three.expand(i);
        for (std::size_t d = 0; d < 8; ++d) {
            CHECK(diag(d, d) == Complex(expanded[i][d], 0.0));
        }
    }

    for (int n = 4; n <= 8; ++n) {
        const auto basis = kraus::ru_sign_basis(n);
        CHECK(basis.size() == 1 + static_cast<std::size_t>(n) * (n + 1) / 2);
        CHECK(numeric_rank(kraus::pair_product_system(basis)) == basis.size());
    }
}

TEST_CASE("solve_ru_weights: Eq. (45) system, identity limit, single-qubit reduction") {
    const auto basis = kraus::ru_sign_basis(3);
    const auto system = kraus::pair_product_system(basis);
    const int eq45[7][7] = {
        {1, 1, 1, 1, 1, 1, 1},
        {1, -1, -1, 1, 1, 1, -1},
        {1, 1, -1, -1, 1, -1, 1},
        {1, 1, 1, -1, -1, 1, -1},
        {1, -1, 1, -1, 1, -1, -1},
        {1, 1, -1, 1, -1, -1, -1},
        {1, -1, 1, 1, -1, -1, 1},
    };
    for (std::size_t r = 0; r < 7; ++r) {
        for (std::size_t c = 0; c < 7; ++c) {
            CHECK(system(r, c) == Complex(eq45[r][c], 0.0));
        }
    }
    // right side ordering [1, g, g, g, g^4, g^4, g^9]
    const auto rhs = kraus::weight_system_rhs(3, 0.5);
    const std::vector<double> powers = {1.0, 0.5, 0.5, 0.5, std::pow(0.5, 4.0),
                                        std::pow(0.5, 4.0), std::pow(0.5, 9.0)};
    for (std::size_t i = 0; i < 7; ++i) CHECK(rhs[i] == Complex(powers[i], 0.0));

    const auto at_one = kraus::solve_ru_weights(basis, kraus::build_schur_matrix(3, 1.0));
    CHECK(at_one.weights()[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < 7; ++i) CHECK(std::abs(at_one.weights()[i]) < 1e-12);

    // single-qubit reduction: weights ((1+g)/2, (1-g)/2) equal the parity
    // sums of the sigma_z model with g = e^{-2 g_total}
    const BathSpec spec({{0.8, 0.9}});
    for (double t : {0.4, 1.1, 2.0}) {
        const double gamma = bath::coherence_factor(spec, t, 1.0);
        const auto set =
            kraus::solve_ru_weights(kraus::ru_sign_basis(1), kraus::build_schur_matrix(1, gamma));
        const auto parity = kraus::build_single_qubit_parity(spec, t);
        // solve order: identity then sigma_z; parity order: odd then even
        CHECK(set.weights()[0] == doctest::Approx(parity.weights()[1]).epsilon(1e-12));
        CHECK(set.weights()[1] == doctest::Approx(parity.weights()[0]).epsilon(1e-12));
        CHECK(set.weights()[0] == doctest::Approx(0.5 * (1.0 + gamma)).epsilon(1e-12));
    }

    // two-qubit solve reproduces the common-RU weights
    const auto pair_solution =
        kraus::solve_ru_weights(kraus::ru_sign_basis(2), kraus::build_schur_matrix(2, 0.3));
    const auto common = kraus::build_common_ru(coeffs_at_gamma(0.3));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(pair_solution.weights()[i] ==
              doctest::Approx(common.set.weights()[i]).epsilon(1e-10));
    }
}

TEST_CASE("solve_ru_weights: a dependent sign basis is rejected") {
    // duplicated vectors make the pair-product system singular
    const kraus::SignBasis degenerate(2, {{1, 1, 1}, {1, 1, 1}, {-1, 1, 1}, {1, -1, 1}});
    try {
        kraus::solve_ru_weights(degenerate, kraus::build_schur_matrix(2, 0.4));
        FAIL("expected SingularSystem");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::singular_system);
    }
}

TEST_CASE("phase_prefactor: integer-exponent diagonal") {
    const Complex u = std::exp(Complex(0.0, 0.77));
    const auto p2 = kraus::phase_prefactor(2, u);
    CHECK(std::abs(p2(0, 0) - u) < 1e-14);
    CHECK(std::abs(p2(1, 1) - Complex(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(p2(2, 2) - Complex(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(p2(3, 3) - u) < 1e-14);

    // n = 3: exponents s^2 - 1/4 = 2 on the outer weight classes
    const auto p3 = kraus::phase_prefactor(3, u);
    CHECK(std::abs(p3(0, 0) - u * u) < 1e-14);
    CHECK(std::abs(p3(1, 1) - Complex(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(p3(7, 7) - u * u) < 1e-14);

    // pair phases match e^{-i phi_r (s_i^2 - s_j^2)} for a physical bath
    const BathSpec spec({{1.3, 0.8}});
    const auto coeffs = bath::coefficients(spec, 1.7);
    const auto p = kraus::phase_prefactor(2, coeffs.l1);
    const double phi_r = coeffs.phi_total.real();
    const double levels_sq[4] = {1.0, 0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const Complex expected =
                std::exp(Complex(0.0, -phi_r * (levels_sq[i] - levels_sq[j])));
            CHECK(std::abs(p(i, i) * std::conj(p(j, j)) - expected) < 1e-12);
        }
    }
}

TEST_CASE("build_single_qubit_parity: identity limit and coherence multiplier") {
    const BathSpec spec({{1.0, 1.0}});
    const auto at_zero = kraus::build_single_qubit_parity(spec, 0.0);
    CHECK(at_zero.weights()[0] == 0.0);
    CHECK(at_zero.weights()[1] == 1.0);
    CHECK(at_zero.op(0).matrix.max_abs() == 0.0);

    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const double t = 3.0 * testing::uniform01(rng);
        const auto set = kraus::build_single_qubit_parity(spec, t);
        CHECK(set.completeness_residual() < 1e-12);
        const double gamma = bath::coherence_factor(spec, t, 1.0);
        CHECK(std::abs(unit_multiplier(set, 0, 1) - Complex(gamma, 0.0)) < 1e-12);
    }
}

TEST_CASE("build_individual_tensor: section IV.B order, identity limit, completeness") {
    const BathSpec spec_a({{1.0, 1.0}});
    const BathSpec spec_b({{0.5, 0.8}});
    const auto qa = kraus::build_single_qubit_parity(spec_a, 1.2);
    const auto qb = kraus::build_single_qubit_parity(spec_b, 1.2);
    const auto pair = kraus::build_individual_tensor({qa, qb});
    REQUIRE(pair.size() == 4);
    CHECK(pair.op(0).label == "odd,odd");
    CHECK(pair.op(1).label == "odd,even");
    CHECK(pair.op(2).label == "even,odd");
    CHECK(pair.op(3).label == "even,even");
    CHECK(ComplexMatrix::max_abs_diff(pair.op(0).matrix,
                                      kron(qa.op(0).matrix, qb.op(0).matrix)) == 0.0);
    CHECK(ComplexMatrix::max_abs_diff(pair.op(1).matrix,
                                      kron(qa.op(0).matrix, qb.op(1).matrix)) == 0.0);
    CHECK(pair.weights()[2] ==
          doctest::Approx(qa.weights()[1] * qb.weights()[0]).epsilon(1e-14));

    // all factors at t = 0: one op of weight 1 (the all-even identity)
    const auto frozen = kraus::build_individual_tensor(
        {kraus::build_single_qubit_parity(spec_a, 0.0),
         kraus::build_single_qubit_parity(spec_b, 0.0)});
    double live_weight = 0.0;
    for (std::size_t i = 0; i < frozen.size(); ++i) {
        if (frozen.op(i).label == "even,even") {
            live_weight = frozen.weights()[i];
            CHECK(ComplexMatrix::max_abs_diff(frozen.op(i).matrix,
                                              ComplexMatrix::identity(4)) == 0.0);
        } else {
            CHECK(frozen.weights()[i] == 0.0);
        }
    }
    CHECK(live_weight == 1.0);

    const auto triple = kraus::build_individual_tensor({qa, qb, qa});
    CHECK(triple.size() == 8);
    CHECK(triple.completeness_residual() < 1e-10);
}

TEST_CASE("apply_channel: identity set, decoherence-free state, Schur equivalence") {
    std::vector<kraus::KrausOp> id_ops;
    id_ops.push_back({"id", ComplexMatrix::identity(4)});
    const kraus::KrausSet identity_set(std::move(id_ops));

    std::mt19937_64 rng(34);
    const DensityMatrix rho = testing::random_density(rng, 4);
    CHECK(ComplexMatrix::max_abs_diff(kraus::apply_channel(identity_set, rho).matrix(),
                                      rho.matrix()) < 1e-14);

    // |Psi> = (|01> + |10>)/sqrt(2) passes the common-bath channel untouched
    const double root_half = 1.0 / std::sqrt(2.0);
    const PureState psi({0.0, root_half, root_half, 0.0});
    const BathSpec spec({{1.1, 0.9}});
    const auto coeffs = bath::coefficients(spec, 1.6);
    const auto triple = kraus::build_common_nonru(coeffs);
    const DensityMatrix evolved = kraus::apply_channel(triple, DensityMatrix::from_pure(psi));
    CHECK(ComplexMatrix::max_abs_diff(evolved.matrix(), psi.projector()) < 1e-12);

    // channel equals phase-composed Schur product for matched gamma
    const auto schur_m = kraus::build_schur_matrix(2, coeffs.gamma);
    const auto prefactor = kraus::phase_prefactor(2, coeffs.l1);
    for (int trial = 0; trial < 50; ++trial) {
        const DensityMatrix state = testing::random_density(rng, 4);
        const ComplexMatrix via_kraus = kraus::apply_channel(triple, state).matrix();
        const ComplexMatrix via_schur =
            prefactor * schur(schur_m.matrix, state.matrix()) * prefactor.adjoint();
        CHECK(ComplexMatrix::max_abs_diff(via_kraus, via_schur) < 1e-10);
    }
}

TEST_CASE("three-qubit Schur product reproduces the solved mixture channel") {
    const auto schur_m = kraus::build_schur_matrix(3, 0.5);
    const auto set = kraus::solve_ru_weights(kraus::ru_sign_basis(3), schur_m);
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = testing::random_density(rng, 8);
        const ComplexMatrix via_kraus = kraus::apply_channel(set, rho).matrix();
        const ComplexMatrix via_schur = schur(schur_m.matrix, rho.matrix());
        CHECK(ComplexMatrix::max_abs_diff(via_kraus, via_schur) < 1e-10);
    }
}

TEST_CASE("decomposition_equivalence basics") {
    const auto coeffs = coeffs_at_gamma(0.4);
    const auto triple = kraus::build_common_nonru(coeffs);
    const auto self = kraus::decomposition_equivalence(triple, triple, 1e-12);
    CHECK(self.equal);
    CHECK(self.max_deviation == 0.0);

    const auto single = kraus::build_single_qubit_parity(flat_bath(), 1.0);
    CHECK_THROWS_AS(kraus::decomposition_equivalence(triple, single, 1e-10), Error);
}

TEST_CASE("search_phase_ru: identity, infeasible regime rescue, single qubit") {
    // gamma = 1: one op, the identity channel
    const auto trivial = kraus::search_phase_ru(kraus::build_schur_matrix(2, 1.0), 1);
    REQUIRE(trivial.size() == 1);
    CHECK(ComplexMatrix::max_abs_diff(trivial.op(0).matrix, ComplexMatrix::identity(4)) <
          1e-8);

    // gamma = 0.9 on two qubits: the +-1 ansatz fails but phases succeed
    const auto schur_m = kraus::build_schur_matrix(2, 0.9);
    const auto found = kraus::search_phase_ru(schur_m, 4);
    CHECK(found.size() == 4);
    CHECK(found.completeness_residual() < 1e-10);
    // physical-channel equivalence against the non-RU triple
    const auto coeffs = coeffs_at_gamma(0.9);
    const auto physical =
        kraus::compose_phase(kraus::phase_prefactor(2, coeffs.l1), found);
    const auto reference = kraus::build_common_nonru(coeffs);
    const auto equiv = kraus::decomposition_equivalence(physical, reference, 1e-8);
    CHECK(equiv.equal);

    // single qubit: any gamma recovers the (1 +- gamma)/2 channel up to gauge
    for (double gamma : {0.2, 0.7, 0.95}) {
        const auto set = kraus::search_phase_ru(kraus::build_schur_matrix(1, gamma), 2);
        const auto direct = kraus::solve_ru_weights(kraus::ru_sign_basis(1),
                                                    kraus::build_schur_matrix(1, gamma));
        const auto same = kraus::decomposition_equivalence(set, direct, 1e-8);
        CHECK(same.equal);
    }

    // an impossible request reports its best residual
    try {
        kraus::search_phase_ru(kraus::build_schur_matrix(2, 0.5), 1,
                               {1e-10, 42, 4, 60});
        FAIL("expected SearchFailed");
    } catch (const SearchFailed& err) {
        CHECK(err.best_residual() > 1e-10);
    }
}

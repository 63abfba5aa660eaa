#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "core/eigen_bridge.hpp"
#include "core/errors.hpp"
#include "core/kraus.hpp"
#include "core/numerics.hpp"
#include "support/oracles.hpp"

using namespace dephase;

namespace {

ComplexMatrix sigma_z() {
    return ComplexMatrix::diagonal({1.0, -1.0});
}

}  // namespace

TEST_CASE("kron: identity and diagonal cases") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK(ComplexMatrix::max_abs_diff(kron(i2, i2), ComplexMatrix::identity(4)) == 0.0);

    const ComplexMatrix d = kron(sigma_z(), i2);
    CHECK(ComplexMatrix::max_abs_diff(d, ComplexMatrix::diagonal({1.0, 1.0, -1.0, -1.0})) == 0.0);

    // sigma_z (x) sigma_z: the two-qubit parity pattern
    const ComplexMatrix zz = kron(sigma_z(), sigma_z());
    CHECK(ComplexMatrix::max_abs_diff(zz, ComplexMatrix::diagonal({1.0, -1.0, -1.0, 1.0})) ==
          0.0);
}

TEST_CASE("kron: mixed-product and associativity on random matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = testing::random_matrix(rng, 2, 2);
        const auto b = testing::random_matrix(rng, 2, 2);
        const auto c = testing::random_matrix(rng, 2, 2);
        const auto d = testing::random_matrix(rng, 2, 2);
        CHECK(ComplexMatrix::max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) <
              1e-12);
        CHECK(ComplexMatrix::max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
    }
}

TEST_CASE("schur: identity masks") {
    std::mt19937_64 rng(12);
    const auto rho = testing::random_matrix(rng, 4, 4);
    ComplexMatrix ones(4, 4);
    for (auto& z : ones.entries()) z = 1.0;
    CHECK(ComplexMatrix::max_abs_diff(schur(ones, rho), rho) == 0.0);

    const ComplexMatrix mask = ComplexMatrix::identity(4);
    const ComplexMatrix diag_only = schur(mask, rho);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            if (r == c) {
                CHECK(diag_only(r, c) == rho(r, c));
            } else {
                CHECK(diag_only(r, c) == Complex(0.0, 0.0));
            }
        }
    }
    CHECK_THROWS_AS(schur(ones, ComplexMatrix::identity(3)), Error);
}

TEST_CASE("trace_norm: pinned values and scaling") {
    CHECK(trace_norm(ComplexMatrix::identity(4)) == doctest::Approx(4.0).epsilon(1e-12));
    const ComplexMatrix d = ComplexMatrix::diagonal({1.0, 0.0, 0.0, -1.0});
    CHECK(trace_norm(d) == doctest::Approx(2.0).epsilon(1e-12));
    ComplexMatrix scaled = d;
    scaled *= Complex(0.3, 0.0);
    CHECK(trace_norm(scaled) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(trace_norm(ComplexMatrix(2, 3)), Error);
}

TEST_CASE("trace_norm: triangle inequality and unitary invariance") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testing::random_matrix(rng, 4, 4);
        const auto b = testing::random_matrix(rng, 4, 4);
        CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10);
        const auto u = testing::random_unitary(rng, 4);
        const auto v = testing::random_unitary(rng, 4);
        CHECK(std::abs(trace_norm(u * a * v) - trace_norm(a)) < 1e-10);
    }
}

TEST_CASE("numeric_rank: Schur matrices and rank-deficient products") {
    CHECK(numeric_rank(kraus::build_schur_matrix(3, 0.5).matrix) == 4);
    CHECK(numeric_rank(kraus::build_schur_matrix(2, 0.7).matrix) == 3);

    ComplexMatrix ones(8, 8);
    for (auto& z : ones.entries()) z = 1.0;
    CHECK(numeric_rank(ones) == 1);

    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t r = 1 + static_cast<std::size_t>(rng() % 4);
        const auto low = testing::random_matrix(rng, 6, r) * testing::random_matrix(rng, r, 5);
        const std::size_t rank = numeric_rank(low);
        CHECK(rank == r);
        // nullity via an SVD oracle; the singular-value count equals cols here
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(low));
        std::size_t nullity = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) <= 1e-10 * svd.singularValues()(0)) ++nullity;
        }
        CHECK(rank + nullity == low.cols());
    }
}

TEST_CASE("min_norm_solve: identity, the 7x7 weight system at gamma=1, errors") {
    const ComplexMatrix eye = ComplexMatrix::identity(3);
    const auto sol = min_norm_solve(eye, {1.0, 0.0, 0.0});
    CHECK(std::abs(sol.x[0] - Complex(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(sol.x[1]) < 1e-14);
    CHECK(sol.residual < 1e-14);

    // the three-qubit weight system with an all-ones right side must select
    // the all-plus operator alone
    const auto basis = kraus::ru_sign_basis(3);
    const auto system = kraus::pair_product_system(basis);
    const std::vector<Complex> rhs(7, Complex(1.0, 0.0));
    const auto weights = min_norm_solve(system, rhs);
    CHECK(std::abs(weights.x[0] - Complex(1.0, 0.0)) < 1e-12);
    for (std::size_t i = 1; i < 7; ++i) CHECK(std::abs(weights.x[i]) < 1e-12);

    // inconsistent overdetermined system
    ComplexMatrix tall(3, 1);
    tall(0, 0) = 1.0;
    tall(1, 0) = 1.0;
    tall(2, 0) = 1.0;
    CHECK_THROWS_AS(min_norm_solve(tall, {1.0, 0.0, 2.0}), Error);
}

TEST_CASE("min_norm_solve: returns the smallest-norm solution") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testing::random_matrix(rng, 2, 5);
        std::vector<Complex> rhs{testing::random_complex(rng), testing::random_complex(rng)};
        const auto sol = min_norm_solve(a, rhs);

        // null-space vectors from an SVD oracle
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a), Eigen::ComputeFullV);
        Eigen::VectorXcd x(5);
        for (int i = 0; i < 5; ++i) x(i) = sol.x[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 2; k < 5; ++k) {
            const Eigen::VectorXcd null_vec = svd.matrixV().col(k);
            CHECK(std::abs(x.dot(null_vec)) < 1e-10);
            CHECK((x + null_vec).norm() > x.norm());
        }
    }
}

TEST_CASE("fidelity: projector overlap, orthogonality, dephased Bell state") {
    std::mt19937_64 rng(16);
    const PureState psi = testing::haar_state(rng, 4);
    CHECK(fidelity(psi, DensityMatrix::from_pure(psi)) == doctest::Approx(1.0).epsilon(1e-12));

    const PureState e00({1.0, 0.0, 0.0, 0.0});
    const PureState e11({0.0, 0.0, 0.0, 1.0});
    CHECK(fidelity(e00, DensityMatrix::from_pure(e11)) == doctest::Approx(0.0).epsilon(1e-12));

    // |Phi> with alpha = beta = 1/sqrt(2) through a dephasing of the corner
    // coherence: <Phi|rho|Phi> = 1/2 + gamma^4 / 2
    const double root_half = 1.0 / std::sqrt(2.0);
    const PureState bell({root_half, 0.0, 0.0, root_half});
    for (double gamma : {0.2, 0.5, 0.9}) {
        const double g4 = std::pow(gamma, 4.0);
        ComplexMatrix rho(4, 4);
        rho(0, 0) = 0.5;
        rho(3, 3) = 0.5;
        rho(0, 3) = 0.5 * g4;
        rho(3, 0) = 0.5 * g4;
        CHECK(fidelity(bell, DensityMatrix(rho)) ==
              doctest::Approx(0.5 + 0.5 * g4).epsilon(1e-12));
    }
    CHECK_THROWS_AS(fidelity(PureState({1.0, 0.0}), DensityMatrix::maximally_mixed(4)), Error);
}

TEST_CASE("fidelity: linear in rho, equals 1 only on the target projector") {
    std::mt19937_64 rng(17);
    const PureState psi = testing::haar_state(rng, 4);
    const DensityMatrix a = testing::random_density(rng, 4);
    const DensityMatrix b = testing::random_density(rng, 4);
    for (double p : {0.25, 0.5, 0.75}) {
        ComplexMatrix mix = a.matrix();
        mix *= Complex(p, 0.0);
        ComplexMatrix rest = b.matrix();
        rest *= Complex(1.0 - p, 0.0);
        mix += rest;
        const double lhs = fidelity(psi, DensityMatrix(mix));
        const double rhs = p * fidelity(psi, a) + (1.0 - p) * fidelity(psi, b);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    for (int trial = 0; trial < 10; ++trial) {
        const PureState other = testing::haar_state(rng, 4);
        const double f = fidelity(psi, DensityMatrix::from_pure(other));
        CHECK(f < 1.0 - 1e-6);  // Haar pairs are never aligned
        CHECK(f >= 0.0);
    }
}

TEST_CASE("fidelity_mixed agrees with pure overlap on projectors") {
    std::mt19937_64 rng(18);
    for (int trial = 0; trial < 5; ++trial) {
        const PureState psi = testing::haar_state(rng, 4);
        const DensityMatrix rho = testing::random_density(rng, 4);
        // square roots of near-zero eigenvalues limit the Uhlmann route to
        // about sqrt(machine epsilon)
        CHECK(fidelity_mixed(DensityMatrix::from_pure(psi), rho) ==
              doctest::Approx(fidelity(psi, rho)).epsilon(1e-7));
    }
}

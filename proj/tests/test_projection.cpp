#include <catch2/catch_amalgamated.hpp>

#include "su4/dynamics.hpp"
#include "su4/oracle.hpp"
#include "su4/projection.hpp"
#include "test_util.hpp"

using namespace su4;
using Catch::Approx;

namespace {

Complex coeff_qn(const CoefficientState& st, int two_q, int two_q3, int two_s3, int m, int n) {
    const BasisLabel b = label_from_quantum_numbers(st.atoms(), two_q, two_q3, two_s3);
    return st.coeff(b, m, n);
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("multiplicities match the tabulated small cases") {
    auto t1 = multiplicities(1);
    CHECK(t1.n_s(1) == 1);
    auto t3 = multiplicities(3);
    CHECK(t3.n_s(3) == 1);
    CHECK(t3.n_s(1) == 2);
    auto t4 = multiplicities(4);
    CHECK(t4.n_s(4) == 1);
    CHECK(t4.n_s(2) == 3);
    CHECK(t4.n_s(0) == 2);
}

TEST_CASE("multiplicities satisfy the dimension identity exactly") {
    for (int n = 1; n <= 30; ++n) {
        auto t = multiplicities(n);
        std::int64_t total = 0;
        for (int two_s : t.two_s_values()) total += (two_s + 1) * t.n_s(two_s);
        REQUIRE(total == (std::int64_t{1} << n));
        // closed form: n_S = C(N, N/2-S) - C(N, N/2-S-1)
        for (int two_s : t.two_s_values()) {
            const int k = (n - two_s) / 2;
            REQUIRE(t.n_s(two_s) == binomial(n, k) - binomial(n, k - 1));
        }
    }
}

TEST_CASE("two-atom blocks reproduce the printed closed forms") {
    auto basis = BasisTable::make(2);
    ProjectionTable table(basis);
    const int n_max = 2;
    const int ph = n_max + 1;
    for (unsigned seed = 0; seed < 50; ++seed) {
        auto st = testing::random_hermitian_state(basis, n_max, 2000 + seed);
        auto bd = project_blocks(st, table);
        const auto& triplet = bd.block_of(2).matrix;   // S = 1
        const auto& singlet = bd.block_of(0).matrix;   // S = 0
        for (int m = 0; m < ph; ++m)
            for (int n = 0; n < ph; ++n) {
                auto el = [&](int r, int c) { return triplet(r * ph + m, c * ph + n); };
                const double s2 = std::sqrt(2.0);
                REQUIRE(std::abs(el(0, 0) - coeff_qn(st, 2, 2, 0, m, n)) < 1e-12);
                REQUIRE(std::abs(el(0, 1) - coeff_qn(st, 1, 1, 1, m, n) / s2) < 1e-12);
                REQUIRE(std::abs(el(0, 2) - coeff_qn(st, 0, 0, 2, m, n)) < 1e-12);
                REQUIRE(std::abs(el(1, 0) - coeff_qn(st, 1, 1, -1, m, n) / s2) < 1e-12);
                REQUIRE(std::abs(el(1, 1) - 0.5 * (coeff_qn(st, 2, 0, 0, m, n) +
                                                   coeff_qn(st, 0, 0, 0, m, n))) < 1e-12);
                REQUIRE(std::abs(el(1, 2) - coeff_qn(st, 1, -1, 1, m, n) / s2) < 1e-12);
                REQUIRE(std::abs(el(2, 0) - coeff_qn(st, 0, 0, -2, m, n)) < 1e-12);
                REQUIRE(std::abs(el(2, 1) - coeff_qn(st, 1, -1, -1, m, n) / s2) < 1e-12);
                REQUIRE(std::abs(el(2, 2) - coeff_qn(st, 2, -2, 0, m, n)) < 1e-12);
                REQUIRE(std::abs(singlet(m, n) - 0.5 * (coeff_qn(st, 2, 0, 0, m, n) -
                                                        coeff_qn(st, 0, 0, 0, m, n))) < 1e-12);
            }
    }
}

TEST_CASE("three-atom blocks reproduce the printed closed forms") {
    auto basis = BasisTable::make(3);
    ProjectionTable table(basis);
    const int n_max = 1;
    const int ph = n_max + 1;
    const double s3 = std::sqrt(3.0);
    for (unsigned seed = 0; seed < 50; ++seed) {
        auto st = testing::random_hermitian_state(basis, n_max, 3000 + seed);
        auto bd = project_blocks(st, table);
        const auto& base = bd.block_of(3).matrix;  // S = 3/2
        const auto& half = bd.block_of(1).matrix;  // S = 1/2
        for (int m = 0; m < ph; ++m)
            for (int n = 0; n < ph; ++n) {
                auto el = [&](int r, int c) { return base(r * ph + m, c * ph + n); };
                auto C = [&](int tq, int tq3, int ts3) { return coeff_qn(st, tq, tq3, ts3, m, n); };
                REQUIRE(std::abs(el(0, 0) - C(3, 3, 0)) < 1e-12);
                REQUIRE(std::abs(el(0, 1) - C(2, 2, 1) / s3) < 1e-12);
                REQUIRE(std::abs(el(0, 2) - C(1, 1, 2) / s3) < 1e-12);
                REQUIRE(std::abs(el(0, 3) - C(0, 0, 3)) < 1e-12);
                REQUIRE(std::abs(el(1, 0) - C(2, 2, -1) / s3) < 1e-12);
                REQUIRE(std::abs(el(1, 1) - (C(3, 1, 0) + C(1, 1, 0)) / 3.0) < 1e-12);
                REQUIRE(std::abs(el(1, 2) - (C(2, 0, 1) + C(0, 0, 1)) / 3.0) < 1e-12);
                REQUIRE(std::abs(el(1, 3) - C(1, -1, 2) / s3) < 1e-12);
                REQUIRE(std::abs(el(2, 0) - C(1, 1, -2) / s3) < 1e-12);
                REQUIRE(std::abs(el(2, 1) - (C(2, 0, -1) + C(0, 0, -1)) / 3.0) < 1e-12);
                REQUIRE(std::abs(el(2, 2) - (C(3, -1, 0) + C(1, -1, 0)) / 3.0) < 1e-12);
                REQUIRE(std::abs(el(2, 3) - C(2, -2, 1) / s3) < 1e-12);
                REQUIRE(std::abs(el(3, 0) - C(0, 0, -3)) < 1e-12);
                REQUIRE(std::abs(el(3, 1) - C(1, -1, -2) / s3) < 1e-12);
                REQUIRE(std::abs(el(3, 2) - C(2, -2, -1) / s3) < 1e-12);
                REQUIRE(std::abs(el(3, 3) - C(3, -3, 0)) < 1e-12);

                auto hl = [&](int r, int c) { return half(r * ph + m, c * ph + n); };
                REQUIRE(std::abs(hl(0, 0) - (2.0 * C(3, 1, 0) - C(1, 1, 0)) / 6.0) < 1e-12);
                REQUIRE(std::abs(hl(0, 1) - (C(2, 0, 1) - 2.0 * C(0, 0, 1)) / 6.0) < 1e-12);
                REQUIRE(std::abs(hl(1, 0) - (C(2, 0, -1) - 2.0 * C(0, 0, -1)) / 6.0) < 1e-12);
                REQUIRE(std::abs(hl(1, 1) - (2.0 * C(3, -1, 0) - C(1, -1, 0)) / 6.0) < 1e-12);
            }
    }
}

TEST_CASE("projection rejects non-Hermitian input") {
    auto basis = BasisTable::make(2);
    auto st = testing::random_state(basis, 1, 17);
    CHECK_THROWS_AS(project_blocks(st), PreconditionError);
}

TEST_CASE("blocks of Hermitian states are Hermitian") {
    auto basis = BasisTable::make(4);
    ProjectionTable table(basis);
    auto st = testing::random_hermitian_state(basis, 2, 55);
    auto bd = project_blocks(st, table);
    for (const auto& blk : bd.blocks)
        CHECK((blk.matrix - blk.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("purity of simple states") {
    auto pure = initial_state(InitialStateKind::AllGroundVacuum, BasisTable::make(2), 1);
    CHECK(purity(project_blocks(pure)) == Approx(1.0));

    // two-atom maximally mixed spin state (x) vacuum: Tr rho^2 = 1/4
    auto basis = BasisTable::make(2);
    auto mixed = initial_state(InitialStateKind::CustomDiagonal, basis, 1,
                               {{0, 0.25}, {1, 0.5}, {2, 0.25}});
    CHECK(purity(project_blocks(mixed)) == Approx(0.25));
}

TEST_CASE("entropy of simple states") {
    auto pure = initial_state(InitialStateKind::AllExcitedVacuum, BasisTable::make(3), 1);
    CHECK(entropy(project_blocks(pure)) == Approx(0.0).margin(1e-10));

    auto basis = BasisTable::make(1);
    auto mixed = initial_state(InitialStateKind::CustomDiagonal, basis, 1,
                               {{0, 0.5}, {1, 0.5}});
    CHECK(entropy(project_blocks(mixed)) == Approx(std::log(2.0)).margin(1e-12));
}

TEST_CASE("sm populations of product and singlet states") {
    auto basis = BasisTable::make(2);
    auto ground = initial_state(InitialStateKind::AllGroundVacuum, basis, 1);
    for (const auto& pop : sm_populations(project_blocks(ground))) {
        const double expect = (pop.two_s == 2 && pop.two_m == -2) ? 1.0 : 0.0;
        CHECK(pop.p == Approx(expect).margin(1e-12));
    }

    // singlet = P_{1,0,0} - P_{0,0,0} in the photon vacuum
    CoefficientState singlet(basis, 1);
    singlet.at(basis->index_of(BasisLabel{1, 1, 0, 0}), 0, 0) = 1.0;
    singlet.at(basis->index_of(BasisLabel{0, 0, 1, 1}), 0, 0) = -1.0;
    for (const auto& pop : sm_populations(project_blocks(singlet))) {
        const double expect = (pop.two_s == 0 && pop.two_m == 0) ? 1.0 : 0.0;
        CHECK(pop.p == Approx(expect).margin(1e-12));
    }
}

TEST_CASE("sm populations sum to one for evolved states") {
    ModelParams p;
    p.atoms = 3;
    p.n_max = 10;
    p.omega = 1.0;
    p.kappa = 1.0;
    p.gamma_decay = 5.0;
    p.pump = 8.0;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    cfg.t_final = 1.0;
    auto st = evolve(initial_state(InitialStateKind::AllGroundVacuum, gen.basis, p.n_max), gen,
                     cfg);
    double total = 0.0;
    for (const auto& pop : sm_populations(project_blocks(st))) total += pop.p;
    CHECK(total == Approx(1.0).margin(1e-9));
}

TEST_CASE("block spectrum matches the oracle eigenvalues") {
    ModelParams p;
    p.atoms = 3;
    p.n_max = 4;
    p.omega = 0.9;
    p.kappa = 1.0;
    p.gamma_decay = 1.1;
    p.pump = 2.2;
    p.delta = 0.2;
    p.dephasing = 0.1;
    auto full = oracle::make_full_model(p);
    oracle::Matrix rho0 = oracle::Matrix::Zero(full.dim, full.dim);
    rho0(0, 0) = 1.0;
    auto rho = oracle::evolve(full, rho0, 1.2, 1e-11);

    auto st = oracle::from_full(rho, BasisTable::make(p.atoms), p.n_max);
    auto ours = block_spectrum(project_blocks(st));
    auto ref = oracle::rho_spectrum(rho);
    REQUIRE(ours.size() == ref.size());
    for (size_t i = 0; i < ours.size(); ++i)
        REQUIRE(ours[i] == Approx(ref[i]).margin(1e-8));

    // functional identities against the oracle
    auto bd = project_blocks(st);
    auto obs = oracle::observables(full, rho);
    CHECK(purity(bd) == Approx(obs.purity).margin(1e-8));
    CHECK(entropy(bd) == Approx(obs.entropy).margin(1e-7));
}

TEST_CASE("row fill and Hermiticity fill agree") {
    // For Hermitian input, the lower triangle produced by the row recursion
    // must equal the conjugate transpose of the upper triangle.
    auto basis = BasisTable::make(5);
    ProjectionTable table(basis);
    auto st = testing::random_hermitian_state(basis, 1, 321);
    auto bd = project_blocks(st, table);
    for (const auto& blk : bd.blocks) {
        const auto diff = (blk.matrix - blk.matrix.adjoint()).cwiseAbs().maxCoeff();
        REQUIRE(diff <= 1e-10);
    }
}

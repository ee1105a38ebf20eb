#include <catch2/catch_amalgamated.hpp>

#include "su4/dynamics.hpp"
#include "su4/observables.hpp"
#include "test_util.hpp"

using namespace su4;
using Catch::Approx;

TEST_CASE("initial states put unit weight on the right label") {
    auto basis = BasisTable::make(3);
    auto ground = initial_state(InitialStateKind::AllGroundVacuum, basis, 2);
    CHECK(ground.coeff(BasisLabel{0, 3, 0, 0}, 0, 0).real() == 1.0);
    CHECK(ground.trace().real() == 1.0);

    auto excited = initial_state(InitialStateKind::AllExcitedVacuum, BasisTable::make(1), 2);
    CHECK(excited.coeff(BasisLabel{1, 0, 0, 0}, 0, 0).real() == 1.0);

    auto mixed = initial_state(InitialStateKind::CustomDiagonal, basis, 2,
                               {{0, 0.25}, {1, 0.5}, {3, 0.25}});
    CHECK(mixed.trace().real() == Approx(1.0));
    CHECK_THROWS_AS(
        initial_state(InitialStateKind::CustomDiagonal, basis, 2, {{0, 0.3}, {1, 0.3}}),
        InvalidParameterError);
    CHECK_THROWS_AS(initial_state(InitialStateKind::CustomDiagonal, basis, 2, {{7, 1.0}}),
                    InvalidParameterError);
}

TEST_CASE("vacuum Rabi oscillation of one excited atom") {
    ModelParams p;
    p.atoms = 1;
    p.n_max = 2;
    p.omega = 1.0;
    auto gen = build_generator(p);
    auto st0 = initial_state(InitialStateKind::AllExcitedVacuum, gen.basis, p.n_max);
    EvolveConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    for (double t : {std::numbers::pi / 4, std::numbers::pi / 2}) {
        cfg.t_final = t;
        auto st = evolve(st0, gen, cfg);
        const double excited = 0.5 * (1.0 + expectations(st).inversion);
        CHECK(excited == Approx(std::cos(t) * std::cos(t)).margin(1e-8));
        CHECK(st.trace().real() == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("pumped atom relaxes to the rate-equation inversion") {
    ModelParams p;
    p.atoms = 1;
    p.n_max = 0;
    p.gamma_decay = 5.0;
    p.pump = 4.0;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    cfg.t_final = 10.0;
    auto st = evolve(initial_state(InitialStateKind::AllGroundVacuum, gen.basis, 0), gen, cfg);
    CHECK(expectations(st).inversion == Approx((4.0 - 5.0) / (4.0 + 5.0)).margin(1e-7));

    auto ss = steady_state(gen, SteadyMethod::LinearSolve, cfg);
    CHECK(expectations(ss).inversion == Approx(-1.0 / 9.0).margin(1e-10));
}

TEST_CASE("trace and Hermiticity are conserved along evolution") {
    ModelParams p;
    p.atoms = 3;
    p.n_max = 24;
    p.omega = 1.0;
    p.gamma_decay = 5.0;
    p.kappa = 1.0;
    p.pump = 8.0;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    cfg.t_final = 3.0;
    EvolveStats stats;
    auto st = evolve(initial_state(InitialStateKind::AllGroundVacuum, gen.basis, p.n_max), gen,
                     cfg, {}, &stats);
    CHECK(stats.trace_drift <= 1e-9 * cfg.t_final);
    CHECK(st.hermiticity_residual() <= 1e-10);
}

TEST_CASE("kappa-only cavity relaxes any photon state to vacuum") {
    ModelParams p;
    p.atoms = 1;
    p.n_max = 4;
    p.kappa = 2.0;
    auto gen = build_generator(p);
    CoefficientState st(gen.basis, p.n_max);
    st.at(gen.basis->index_of(BasisLabel{0, 1, 0, 0}), 3, 3) = 1.0;  // |3><3|
    EvolveConfig cfg;
    cfg.t_final = 12.0;
    auto out = evolve(st, gen, cfg);
    CHECK(expectations(out).mean_photon == Approx(0.0).margin(1e-8));
    CHECK(out.trace().real() == Approx(1.0).margin(1e-9));
}

TEST_CASE("steady-state methods agree on observables") {
    ModelParams p;
    p.atoms = 4;
    p.n_max = 14;
    p.omega = 1.0;
    p.gamma_decay = 1.0;
    p.kappa = 1.0;
    p.pump = 3.0;
    p.delta = 0.2;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    auto a = steady_state(gen, SteadyMethod::LinearSolve, cfg);
    auto b = steady_state(gen, SteadyMethod::LongTime, cfg);
    auto ra = expectations(a);
    auto rb = expectations(b);
    CHECK(ra.mean_photon == Approx(rb.mean_photon).margin(1e-7));
    CHECK(ra.inversion == Approx(rb.inversion).margin(1e-7));
    CHECK(*ra.spin_zz == Approx(*rb.spin_zz).margin(1e-7));
    CHECK(std::abs(*ra.spin_corr - *rb.spin_corr) <= 1e-7);
    CHECK(std::abs(ra.field_amp - rb.field_amp) <= 1e-7);
}

TEST_CASE("sector-restricted steady state matches the full solve") {
    ModelParams p;
    p.atoms = 3;
    p.n_max = 5;
    p.omega = 1.0;
    p.gamma_decay = 2.0;
    p.kappa = 1.0;
    p.pump = 4.0;
    auto full = build_generator(p);
    auto sec = build_generator(p, full.basis, 0);
    EvolveConfig cfg;
    auto a = steady_state(full, SteadyMethod::LinearSolve, cfg);
    auto b = steady_state(sec, SteadyMethod::LinearSolve, cfg);
    REQUIRE((a.data() - b.data()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("sector evolution agrees with full evolution") {
    ModelParams p;
    p.atoms = 2;
    p.n_max = 9;
    p.omega = 1.1;
    p.kappa = 0.8;
    p.gamma_decay = 0.7;
    p.pump = 1.2;
    auto full = build_generator(p);
    auto sec = build_generator(p, full.basis, 0);
    auto st0 = initial_state(InitialStateKind::AllGroundVacuum, full.basis, p.n_max);
    EvolveConfig cfg;
    cfg.t_final = 1.5;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    auto a = evolve(st0, full, cfg);
    auto b = evolve(st0, sec, cfg);
    CHECK((a.data() - b.data()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("degenerate generators are rejected") {
    ModelParams p;
    p.atoms = 2;
    p.n_max = 1;
    EvolveConfig cfg;
    // no dissipation at all
    p.omega = 1.0;
    CHECK_THROWS_AS(steady_state(build_generator(p), SteadyMethod::LinearSolve, cfg),
                    DegenerateSteadyStateError);
    // kappa only: atomic populations are frozen, the null space is large
    p.omega = 0.0;
    p.kappa = 1.0;
    CHECK_THROWS_AS(steady_state(build_generator(p), SteadyMethod::LinearSolve, cfg),
                    DegenerateSteadyStateError);
}

TEST_CASE("truncation monitor aborts with a helpful error") {
    ModelParams p;
    p.atoms = 1;
    p.n_max = 2;       // far too small
    p.omega = 2.0;     // strong coupling pushes photons up
    p.pump = 6.0;
    p.kappa = 0.05;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    cfg.t_final = 20.0;
    cfg.trunc_tol = 1e-6;
    CHECK_THROWS_AS(
        evolve(initial_state(InitialStateKind::AllExcitedVacuum, gen.basis, p.n_max), gen, cfg),
        TruncationError);
}

TEST_CASE("evolve reports states to the observer") {
    ModelParams p;
    p.atoms = 1;
    p.n_max = 1;
    p.gamma_decay = 1.0;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    cfg.t_final = 0.5;
    int calls = 0;
    double last_t = 0.0;
    evolve(initial_state(InitialStateKind::AllExcitedVacuum, gen.basis, p.n_max), gen, cfg,
           [&](double t, const CoefficientState& st) {
               ++calls;
               last_t = t;
               REQUIRE(st.trace().real() == Approx(1.0).margin(1e-8));
           });
    CHECK(calls > 0);
    CHECK(last_t == Approx(0.5));
}

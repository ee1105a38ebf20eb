#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "su4/observables.hpp"
#include "test_util.hpp"

using namespace su4;
using Catch::Approx;

namespace {

/// N = 1 ground atom with a diagonal photon distribution.
CoefficientState photon_diagonal_state(const std::vector<double>& p) {
    auto basis = BasisTable::make(1);
    CoefficientState st(basis, static_cast<int>(p.size()) - 1);
    const int ground = basis->index_of(BasisLabel{0, 1, 0, 0});
    for (size_t n = 0; n < p.size(); ++n)
        st.at(ground, static_cast<int>(n), static_cast<int>(n)) = p[n];
    return st;
}

std::vector<double> uniform_grid(double max, size_t points) {
    std::vector<double> g(points);
    for (size_t i = 0; i < points; ++i)
        g[i] = max * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

}  // namespace

TEST_CASE("trace examples") {
    auto basis = BasisTable::make(2);
    CHECK(trace_of(initial_state(InitialStateKind::AllGroundVacuum, basis, 2)) == 1.0);
    CHECK(trace_of(CoefficientState(basis, 2)) == 0.0);
}

TEST_CASE("expectations of product states") {
    auto ground3 = initial_state(InitialStateKind::AllGroundVacuum, BasisTable::make(3), 2);
    auto r = expectations(ground3);
    CHECK(r.inversion == Approx(-1.0));
    CHECK(r.mean_photon == 0.0);
    CHECK(std::abs(*r.spin_corr) == 0.0);
    CHECK(std::abs(r.field_amp) == 0.0);
    CHECK_FALSE(r.g2_zero.has_value());

    auto excited2 = initial_state(InitialStateKind::AllExcitedVacuum, BasisTable::make(2), 2);
    auto e = expectations(excited2);
    CHECK(e.inversion == Approx(1.0));
    CHECK(*e.spin_zz == Approx(1.0));

    auto single = expectations(initial_state(InitialStateKind::AllExcitedVacuum,
                                             BasisTable::make(1), 1));
    CHECK_FALSE(single.spin_zz.has_value());
    CHECK_FALSE(single.spin_corr.has_value());
}

TEST_CASE("spin correlation of the symmetric one-excitation state") {
    // (|eg> + |ge>)/sqrt(2): <s_j^+ s_k^-> = 1/2 for j != k
    auto basis = BasisTable::make(2);
    CoefficientState st(basis, 0);
    st.at(basis->index_of(BasisLabel{1, 1, 0, 0}), 0, 0) = 1.0;
    st.at(basis->index_of(BasisLabel{0, 0, 1, 1}), 0, 0) = 1.0;
    auto r = expectations(st);
    CHECK(r.spin_corr->real() == Approx(0.5));
    CHECK(r.spin_corr->imag() == Approx(0.0).margin(1e-15));
    CHECK(*r.spin_zz == Approx(-1.0));
}

TEST_CASE("photon distribution of simple states") {
    auto vac = initial_state(InitialStateKind::AllGroundVacuum, BasisTable::make(1), 3);
    auto p = photon_distribution(vac);
    CHECK(p[0] == Approx(1.0));
    CHECK(p[1] == 0.0);

    // kappa decay from |1><1|: p(1) = exp(-kappa t)
    ModelParams mp;
    mp.atoms = 1;
    mp.n_max = 3;
    mp.kappa = 1.3;
    auto gen = build_generator(mp);
    CoefficientState one(gen.basis, mp.n_max);
    one.at(gen.basis->index_of(BasisLabel{0, 1, 0, 0}), 1, 1) = 1.0;
    EvolveConfig cfg;
    cfg.t_final = 0.8;
    cfg.rel_tol = 1e-10;
    auto evolved = evolve(one, gen, cfg);
    auto pd = photon_distribution(evolved);
    CHECK(pd[1] == Approx(std::exp(-mp.kappa * 0.8)).margin(1e-8));
    double total = 0.0;
    for (double v : pd) {
        CHECK(v >= -1e-10);
        total += v;
    }
    CHECK(total == Approx(trace_of(evolved)).margin(1e-10));
}

TEST_CASE("g2 of thermal and Fock photon states") {
    // thermal: p(n) ~ x^n with x = nbar/(1+nbar)
    const double nbar = 0.5, x = nbar / (1.0 + nbar);
    std::vector<double> p(26);
    double norm = 0.0;
    for (size_t n = 0; n < p.size(); ++n) norm += std::pow(x, double(n));
    for (size_t n = 0; n < p.size(); ++n) p[n] = std::pow(x, double(n)) / norm;
    CHECK(g2_zero(photon_diagonal_state(p)) == Approx(2.0).margin(1e-9));

    std::vector<double> fock{0.0, 1.0};
    CHECK(g2_zero(photon_diagonal_state(fock)) == Approx(0.0));

    std::vector<double> vac{1.0, 0.0};
    CHECK_THROWS_AS(g2_zero(photon_diagonal_state(vac)), UndefinedG2Error);
}

TEST_CASE("first-order correlation of the empty cavity is zero") {
    ModelParams p;
    p.atoms = 1;
    p.n_max = 3;
    p.kappa = 1.0;
    p.gamma_decay = 0.5;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    auto ss = steady_state(gen, SteadyMethod::LinearSolve, cfg);
    auto g1 = correlation(ss, gen, CorrelationKind::FirstOrder, uniform_grid(3.0, 16));
    for (Complex v : g1.values) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("second-order correlation at zero delay matches expectations") {
    ModelParams p;
    p.atoms = 2;
    p.n_max = 8;
    p.omega = 1.0;
    p.kappa = 1.0;
    p.gamma_decay = 0.5;
    p.pump = 2.0;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    auto ss = steady_state(gen, SteadyMethod::LinearSolve, cfg);
    auto g2 = correlation(ss, gen, CorrelationKind::SecondOrder, uniform_grid(2.0, 9));
    CHECK(g2.values[0].imag() == Approx(0.0).margin(1e-10));
    CHECK(g2.values[0].real() == Approx(expectations(ss).photon_second_moment).margin(1e-10));
}

TEST_CASE("correlation rejects non-stationary states") {
    ModelParams p;
    p.atoms = 1;
    p.n_max = 2;
    p.kappa = 1.0;
    p.pump = 1.0;
    auto gen = build_generator(p);
    auto moving = initial_state(InitialStateKind::AllGroundVacuum, gen.basis, p.n_max);
    CHECK_THROWS_AS(correlation(moving, gen, CorrelationKind::FirstOrder, uniform_grid(1.0, 5)),
                    PreconditionError);
}

TEST_CASE("synthetic exponential decay transforms to a Lorentzian") {
    CorrelationSeries s;
    s.kind = CorrelationKind::FirstOrder;
    s.tau = uniform_grid(22.0, 881);
    s.values.resize(s.tau.size());
    SECTION("centered at zero, half-width 1/2") {
        for (size_t i = 0; i < s.tau.size(); ++i) s.values[i] = std::exp(-0.5 * s.tau[i]);
        auto sp = spectrum(s);
        CHECK(spectrum_fwhm(sp) == Approx(1.0).epsilon(0.02));
        CHECK(*std::max_element(sp.power.begin(), sp.power.end()) == Approx(1.0));
        // peak at zero frequency
        const auto peak = std::max_element(sp.power.begin(), sp.power.end());
        CHECK(sp.omega[size_t(peak - sp.power.begin())] == Approx(0.0).margin(1e-12));
    }
    SECTION("oscillating series is centered at omega0") {
        const double omega0 = 2.0;
        for (size_t i = 0; i < s.tau.size(); ++i)
            s.values[i] = std::exp(Complex{-0.5 * s.tau[i], omega0 * s.tau[i]});
        auto sp = spectrum(s);
        const auto peak = std::max_element(sp.power.begin(), sp.power.end());
        CHECK(sp.omega[size_t(peak - sp.power.begin())] == Approx(omega0).margin(0.2));
        CHECK(spectrum_fwhm(sp) == Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("spectrum demands a decayed window") {
    CorrelationSeries s;
    s.kind = CorrelationKind::FirstOrder;
    s.tau = uniform_grid(2.0, 41);
    s.values.resize(s.tau.size());
    for (size_t i = 0; i < s.tau.size(); ++i) s.values[i] = std::exp(-0.1 * s.tau[i]);
    CHECK_THROWS_AS(spectrum(s), WindowTooShortError);
}

TEST_CASE("spectrum is even for real series and satisfies Parseval") {
    CorrelationSeries s;
    s.kind = CorrelationKind::FirstOrder;
    s.tau = uniform_grid(25.0, 501);
    s.values.resize(s.tau.size());
    for (size_t i = 0; i < s.tau.size(); ++i)
        s.values[i] = std::exp(-0.4 * s.tau[i]) * std::cos(1.1 * s.tau[i]);
    auto sp = spectrum(s);
    const size_t len = sp.power.size();
    for (size_t i = 0; i < len / 2; ++i)
        CHECK(sp.power[i] == Approx(sp.power[len - 1 - i]).margin(1e-10));
    // total power recovers the series value at tau = 0
    const double dw = sp.omega[1] - sp.omega[0];
    double total = 0.0;
    for (double v : sp.power) total += v * sp.peak_value * dw / (2.0 * std::numbers::pi);
    CHECK(total == Approx(s.values[0].real()).margin(1e-8));
}

TEST_CASE("spin correlations close the regression identities at zero delay") {
    ModelParams p;
    p.atoms = 3;
    p.n_max = 6;
    p.omega = 0.8;
    p.kappa = 1.0;
    p.gamma_decay = 0.7;
    p.pump = 1.5;
    auto gen = build_generator(p);
    EvolveConfig cfg;
    auto ss = steady_state(gen, SteadyMethod::LinearSolve, cfg);
    auto r = expectations(ss);

    auto s1 = correlation(ss, gen, CorrelationKind::SpinFirst, uniform_grid(1.0, 5));
    // sum_{jk} <s_j^+ s_k^-> = N(N-1) <s_j^+ s_k^->_{j!=k} + N <s^+ s^->_{j=k}
    const double same_site = 0.5 * (1.0 + r.inversion);  // excited population
    const Complex expected = static_cast<double>(p.atoms) * (p.atoms - 1.0) * *r.spin_corr +
                             static_cast<double>(p.atoms) * same_site;
    CHECK(std::abs(s1.values[0] - expected) <= 1e-9);

    auto s2 = correlation(ss, gen, CorrelationKind::SpinSecond, uniform_grid(1.0, 5));
    CHECK(s2.values[0].imag() == Approx(0.0).margin(1e-9));
}

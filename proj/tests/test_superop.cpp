#include <catch2/catch_amalgamated.hpp>

#include "su4/superop.hpp"
#include "test_util.hpp"

using namespace su4;
using Catch::Approx;

namespace {

CoefficientState unit_on(std::shared_ptr<const BasisTable> basis, const BasisLabel& b, int n_max,
                         int m = 0, int n = 0) {
    CoefficientState st(basis, n_max);
    st.at(st.basis().index_of(b), m, n) = 1.0;
    return st;
}

double max_diff(const CoefficientState& a, const CoefficientState& b) {
    return (a.data() - b.data()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("Q+ raises q3 with factor q - q3") {
    auto basis = BasisTable::make(1);
    // Q+ on P_{1/2,-1/2,0} -> 1 * P_{1/2,1/2,0}
    auto st = apply_superop({Family::Q, Part::Plus}, unit_on(basis, BasisLabel{0, 1, 0, 0}, 0));
    CHECK(st.coeff(BasisLabel{1, 0, 0, 0}, 0, 0).real() == Approx(1.0));
    CHECK(st.data().cwiseAbs().sum() == Approx(1.0));
}

TEST_CASE("Q+ on the N=2 bottom rung gives factor 2") {
    auto basis = BasisTable::make(2);
    // Q+ P_{1,-1,0} = 2 P_{1,0,0}
    auto st = apply_superop({Family::Q, Part::Plus}, unit_on(basis, BasisLabel{0, 2, 0, 0}, 0));
    CHECK(st.coeff(BasisLabel{1, 1, 0, 0}, 0, 0).real() == Approx(2.0));
}

TEST_CASE("M+ annihilates the stretched state") {
    for (int n : {1, 2, 4}) {
        auto basis = BasisTable::make(n);
        auto st =
            apply_superop({Family::M, Part::Plus}, unit_on(basis, BasisLabel{n, 0, 0, 0}, 0));
        CHECK(st.data().norm() == 0.0);
    }
}

TEST_CASE("diagonal parts multiply by the half-integer eigenvalue") {
    auto basis = BasisTable::make(3);
    const BasisLabel b{2, 0, 1, 0};  // q3 = 1, sigma3 = 1/2, m3 = 1, u3 = 1/2
    auto in = unit_on(basis, b, 1, 1, 0);
    CHECK(apply_superop({Family::Q, Part::Three}, in).coeff(b, 1, 0).real() == Approx(1.0));
    CHECK(apply_superop({Family::Sigma, Part::Three}, in).coeff(b, 1, 0).real() == Approx(0.5));
    CHECK(apply_superop({Family::M, Part::Three}, in).coeff(b, 1, 0).real() == Approx(1.0));
    CHECK(apply_superop({Family::U, Part::Three}, in).coeff(b, 1, 0).real() == Approx(0.5));
}

TEST_CASE("SU(2) subalgebra commutators hold on random states") {
    for (int n = 1; n <= 6; ++n) {
        auto basis = BasisTable::make(n);
        auto v = testing::random_state(basis, 1, 1234u + n);
        const double scale = v.data().cwiseAbs().maxCoeff();
        for (Family f : kAllFamilies) {
            const SuperOpId plus{f, Part::Plus}, minus{f, Part::Minus}, three{f, Part::Three};
            // [O+, O-] = 2 O3
            auto lhs = apply_superop(plus, apply_superop(minus, v));
            lhs.data() -= apply_superop(minus, apply_superop(plus, v)).data();
            auto rhs = apply_superop(three, v);
            rhs.data() *= 2.0;
            REQUIRE(max_diff(lhs, rhs) <= 1e-12 * scale * n * n);
            // [O3, O+-] = +- O+-
            for (auto [ladder, sign] : {std::pair{plus, 1.0}, std::pair{minus, -1.0}}) {
                auto l = apply_superop(three, apply_superop(ladder, v));
                l.data() -= apply_superop(ladder, apply_superop(three, v)).data();
                auto r = apply_superop(ladder, v);
                r.data() *= sign;
                REQUIRE(max_diff(l, r) <= 1e-12 * scale * n * n);
            }
        }
    }
}

TEST_CASE("Casimir eigenvalue is 3N(N+4)/8 on every basis vector") {
    CHECK(casimir_eigenvalue(2) == Approx(4.5));
    CHECK(casimir_eigenvalue(4) == Approx(12.0));
    for (int n = 1; n <= 6; ++n) {
        auto basis = BasisTable::make(n);
        const double expected = casimir_eigenvalue(n);
        for (int i = 0; i < basis->size(); ++i) {
            auto v = unit_on(basis, basis->label(i), 0);
            auto cv = casimir_apply(v);
            cv.data() -= expected * v.data();
            REQUIRE(cv.data().cwiseAbs().maxCoeff() <= 1e-12 * expected);
        }
    }
}

TEST_CASE("Casimir of the zero state is zero") {
    CoefficientState z(BasisTable::make(3), 2);
    CHECK(casimir_apply(z).data().norm() == 0.0);
}

TEST_CASE("photon maps shift Fock indices with sqrt factors") {
    auto basis = BasisTable::make(1);
    const BasisLabel b{1, 0, 0, 0};

    auto in = unit_on(basis, b, 2, 1, 1);
    CHECK(apply_photon(PhotonOp::LeftA, in).coeff(b, 0, 1).real() == Approx(1.0));  // sqrt(1)

    auto vac = unit_on(basis, b, 2, 0, 0);
    CHECK(apply_photon(PhotonOp::LeftADag, vac).coeff(b, 1, 0).real() == Approx(1.0));

    auto two = unit_on(basis, b, 3, 2, 2);
    CHECK(apply_photon(PhotonOp::LeftA, two).coeff(b, 1, 2).real() == Approx(std::sqrt(2.0)));
    CHECK(apply_photon(PhotonOp::RightADag, two).coeff(b, 2, 1).real() == Approx(std::sqrt(2.0)));
    CHECK(apply_photon(PhotonOp::RightA, two).coeff(b, 2, 3).real() == Approx(std::sqrt(3.0)));
}

TEST_CASE("raising past n_max drops amplitude into the loss diagnostic") {
    auto basis = BasisTable::make(1);
    const BasisLabel b{1, 0, 0, 0};
    auto boundary = unit_on(basis, b, 2, 2, 2);  // n_max = 2
    auto raised = apply_photon(PhotonOp::LeftADag, boundary);
    CHECK(raised.data().norm() == 0.0);
    CHECK(raised.truncation_loss == Approx(std::sqrt(3.0)));
    // lowering never loses amplitude
    CHECK(apply_photon(PhotonOp::LeftA, boundary).truncation_loss == 0.0);
}

TEST_CASE("superoperators require matching shapes") {
    auto basis2 = BasisTable::make(2);
    auto basis3 = BasisTable::make(3);
    CoefficientState a(basis2, 2), b(basis3, 2), c(basis2, 3);
    CHECK_THROWS_AS(check_same_shape(a, b), ShapeError);
    CHECK_THROWS_AS(check_same_shape(a, c), ShapeError);
}

// Copyright 2026 The su4sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "su4/state.hpp"

namespace su4 {

/// The six SU(2) families of superoperators acting on density-operator
/// coefficients. Q and Sigma act within a (q, sigma) multiplet; M, N, U, V
/// transfer weight between population and coherence factors.
enum class Family { Q, Sigma, M, N, U, V };

enum class Part { Plus, Minus, Three };

/// One of the 18 superoperators O_{+,-,3}, O in {Q, Sigma, M, N, U, V}.
struct SuperOpId {
    Family family;
    Part part;

    std::string str() const {
        static constexpr std::array<const char*, 6> fam{"Q", "Sigma", "M", "N", "U", "V"};
        static constexpr std::array<const char*, 3> part_s{"+", "-", "3"};
        return std::string(fam[static_cast<int>(family)]) + part_s[static_cast<int>(part)];
    }
};

inline constexpr std::array<Family, 6> kAllFamilies{Family::Q, Family::Sigma, Family::M,
                                                    Family::N, Family::U,     Family::V};

namespace detail {

/// Every raising/lowering superoperator moves exactly one occupation between
/// two of the four factor kinds, weighted by the source occupation. This
/// reproduces the ladder action factors (o -+ o3) on the symmetric basis.
struct LadderMove {
    int BasisLabel::*from;
    int BasisLabel::*to;
};

inline LadderMove ladder_move(Family f, bool plus) {
    switch (f) {
        case Family::Q:
            return plus ? LadderMove{&BasisLabel::n_gg, &BasisLabel::n_ee}
                        : LadderMove{&BasisLabel::n_ee, &BasisLabel::n_gg};
        case Family::Sigma:
            return plus ? LadderMove{&BasisLabel::n_ge, &BasisLabel::n_eg}
                        : LadderMove{&BasisLabel::n_eg, &BasisLabel::n_ge};
        case Family::M:
            return plus ? LadderMove{&BasisLabel::n_ge, &BasisLabel::n_ee}
                        : LadderMove{&BasisLabel::n_ee, &BasisLabel::n_ge};
        case Family::N:
            return plus ? LadderMove{&BasisLabel::n_gg, &BasisLabel::n_eg}
                        : LadderMove{&BasisLabel::n_eg, &BasisLabel::n_gg};
        case Family::U:
            return plus ? LadderMove{&BasisLabel::n_eg, &BasisLabel::n_ee}
                        : LadderMove{&BasisLabel::n_ee, &BasisLabel::n_eg};
        case Family::V:
            return plus ? LadderMove{&BasisLabel::n_gg, &BasisLabel::n_ge}
                        : LadderMove{&BasisLabel::n_ge, &BasisLabel::n_gg};
    }
    return {};
}

inline int two_o3(Family f, const BasisLabel& b) {
    switch (f) {
        case Family::Q: return b.two_q3();
        case Family::Sigma: return b.two_sigma3();
        case Family::M: return b.two_m3();
        case Family::N: return b.two_n3();
        case Family::U: return b.two_u3();
        case Family::V: return b.two_v3();
    }
    return 0;
}

}  // namespace detail

/// Apply one superoperator to a coefficient state. Ladder targets that fall
/// outside the label ranges contribute zero (their action factor vanishes
/// at the boundary anyway).
inline CoefficientState apply_superop(SuperOpId op, const CoefficientState& state) {
    CoefficientState out(state.basis_ptr(), state.n_max());
    out.truncation_loss = state.truncation_loss;
    const BasisTable& basis = state.basis();
    const Eigen::Index block = static_cast<Eigen::Index>(state.photons()) * state.photons();

    if (op.part == Part::Three) {
        for (int i = 0; i < basis.size(); ++i) {
            const double o3 = 0.5 * detail::two_o3(op.family, basis.label(i));
            if (o3 != 0.0)
                out.data().segment(i * block, block) = o3 * state.data().segment(i * block, block);
        }
        return out;
    }

    const auto move = detail::ladder_move(op.family, op.part == Part::Plus);
    for (int i = 0; i < basis.size(); ++i) {
        BasisLabel b = basis.label(i);
        const int factor = b.*(move.from);
        if (factor == 0) continue;
        b.*(move.from) -= 1;
        b.*(move.to) += 1;
        const int j = basis.index_of(b);
        out.data().segment(j * block, block) +=
            static_cast<double>(factor) * state.data().segment(i * block, block);
    }
    return out;
}

/// Which side of the density operator a photon operator multiplies.
enum class PhotonOp { LeftA, LeftADag, RightA, RightADag };

/// Apply a photon creation/annihilation map. Amplitudes raised above n_max
/// are dropped; their |amplitude| total is accumulated into the returned
/// state's truncation_loss diagnostic.
inline CoefficientState apply_photon(PhotonOp side, const CoefficientState& state) {
    CoefficientState out(state.basis_ptr(), state.n_max());
    const int nm = state.n_max();
    double dropped = 0.0;
    for (int i = 0; i < state.basis().size(); ++i) {
        for (int m = 0; m <= nm; ++m) {
            for (int n = 0; n <= nm; ++n) {
                switch (side) {
                    case PhotonOp::LeftA:  // a rho: C'{m,n} = sqrt(m+1) C{m+1,n}
                        if (m < nm) out.at(i, m, n) = std::sqrt(m + 1.0) * state.at(i, m + 1, n);
                        break;
                    case PhotonOp::LeftADag:  // adag rho: C'{m,n} = sqrt(m) C{m-1,n}
                        if (m > 0) out.at(i, m, n) = std::sqrt(double(m)) * state.at(i, m - 1, n);
                        if (m == nm) dropped += std::sqrt(m + 1.0) * std::abs(state.at(i, m, n));
                        break;
                    case PhotonOp::RightA:  // rho a: C'{m,n} = sqrt(n) C{m,n-1}
                        if (n > 0) out.at(i, m, n) = std::sqrt(double(n)) * state.at(i, m, n - 1);
                        if (n == nm) dropped += std::sqrt(n + 1.0) * std::abs(state.at(i, m, n));
                        break;
                    case PhotonOp::RightADag:  // rho adag: C'{m,n} = sqrt(n+1) C{m,n+1}
                        if (n < nm) out.at(i, m, n) = std::sqrt(n + 1.0) * state.at(i, m, n + 1);
                        break;
                }
            }
        }
    }
    out.truncation_loss = state.truncation_loss + dropped;
    return out;
}

/// Eigenvalue of the quadratic Casimir operator on the fully symmetric
/// basis: 3N(N+4)/8.
inline double casimir_eigenvalue(int atoms) {
    return 3.0 * atoms * (atoms + 4.0) / 8.0;
}

/// Apply the quadratic Casimir operator
///   C1 = sum_O (O- O+ + O3) + U3^2 + (U3 + 2 Sigma3)^2 / 3
///        + (3 Q3 - 2 U3 - Sigma3)^2 / 6
/// built from the superoperator maps. On any symmetric basis element this
/// is casimir_eigenvalue(N) times the identity.
inline CoefficientState casimir_apply(const CoefficientState& state) {
    CoefficientState out(state.basis_ptr(), state.n_max());
    out.truncation_loss = state.truncation_loss;
    const BasisTable& basis = state.basis();
    const Eigen::Index block = static_cast<Eigen::Index>(state.photons()) * state.photons();

    for (Family f : kAllFamilies) {
        CoefficientState tmp = apply_superop({f, Part::Plus}, state);
        tmp = apply_superop({f, Part::Minus}, tmp);
        out.data() += tmp.data();
    }
    for (int i = 0; i < basis.size(); ++i) {
        const BasisLabel& b = basis.label(i);
        double diag = 0.0;
        for (Family f : kAllFamilies) diag += 0.5 * detail::two_o3(f, b);
        const double u3 = 0.5 * b.two_u3();
        const double s3 = 0.5 * b.two_sigma3();
        const double q3 = 0.5 * b.two_q3();
        diag += u3 * u3 + (u3 + 2.0 * s3) * (u3 + 2.0 * s3) / 3.0 +
                (3.0 * q3 - 2.0 * u3 - s3) * (3.0 * q3 - 2.0 * u3 - s3) / 6.0;
        out.data().segment(i * block, block) += diag * state.data().segment(i * block, block);
    }
    return out;
}

}  // namespace su4

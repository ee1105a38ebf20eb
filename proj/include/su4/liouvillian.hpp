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

#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "su4/params.hpp"
#include "su4/state.hpp"
#include "su4/superop.hpp"

namespace su4 {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<Complex>;

/// Default memory budget for generator assembly, in nonzero entries.
inline constexpr std::int64_t kDefaultEntryBudget = 400'000'000;

/// The generator commutes with the phase rotation
/// rho -> exp(i theta (a^dag a + J3)) rho exp(-i theta (a^dag a + J3)),
/// so Liouville space splits into invariant sectors labelled by the integer
/// m - n + 2*sigma3. Physical states live in sector 0; the initial objects
/// of first-order correlations live in sector -1. Restricting the generator
/// to one sector is exact and shrinks the laser-regime problems by roughly
/// a factor n_max.
struct Sector {
    int charge = 0;
    std::vector<Eigen::Index> members;   ///< flat full-space indices, ascending
    std::vector<Eigen::Index> position;  ///< full index -> sector slot, or -1

    Eigen::Index size() const { return static_cast<Eigen::Index>(members.size()); }

    Vector extract(const Vector& full) const {
        Vector out(size());
        for (Eigen::Index k = 0; k < size(); ++k) out[k] = full[members[k]];
        return out;
    }

    void embed_into(const Vector& part, Vector& full) const {
        for (Eigen::Index k = 0; k < size(); ++k) full[members[k]] = part[k];
    }
};

inline int sector_charge(const BasisLabel& b, int m, int n) {
    return m - n + b.two_sigma3();
}

inline Sector make_sector(const BasisTable& basis, int n_max, int charge) {
    Sector s;
    s.charge = charge;
    const Eigen::Index photons = n_max + 1;
    const Eigen::Index full_dim = static_cast<Eigen::Index>(basis.size()) * photons * photons;
    s.position.assign(full_dim, -1);
    for (int i = 0; i < basis.size(); ++i) {
        const int two_s3 = basis.label(i).two_sigma3();
        for (int m = 0; m <= n_max; ++m) {
            const int n = m + two_s3 - charge;
            if (n < 0 || n > n_max) continue;
            const Eigen::Index flat = (static_cast<Eigen::Index>(i) * photons + m) * photons + n;
            s.position[flat] = static_cast<Eigen::Index>(s.members.size());
            s.members.push_back(flat);
        }
    }
    return s;
}

/// Sparse linear map L with d rho/dt = L rho on flattened coefficients.
/// When a sector is attached the matrix acts on sector coordinates;
/// apply() still consumes and produces full CoefficientStates.
struct SparseGenerator {
    std::shared_ptr<const BasisTable> basis;
    int n_max = 0;
    ModelParams params;
    std::optional<Sector> sector;
    SparseMatrix mat;

    Eigen::Index dim() const { return mat.rows(); }
    int atoms() const { return basis->atoms(); }

    Eigen::Index full_dim() const {
        const Eigen::Index p = n_max + 1;
        return static_cast<Eigen::Index>(basis->size()) * p * p;
    }

    /// Pull the working vector out of a full state. For sector generators
    /// the state must be supported on the sector.
    Vector restrict(const CoefficientState& st) const {
        if (st.atoms() != basis->atoms() || st.n_max() != n_max)
            throw ShapeError("state does not match generator dimensions");
        if (!sector) return st.data();
        Vector part = sector->extract(st.data());
        const double total = st.data().norm();
        Vector back = Vector::Zero(full_dim());
        sector->embed_into(part, back);
        if ((st.data() - back).norm() > 1e-10 * std::max(1.0, total))
            throw ShapeError("state has support outside the generator's symmetry sector");
        return part;
    }

    CoefficientState embed(const Vector& v) const {
        CoefficientState st(basis, n_max);
        if (!sector) {
            st.data() = v;
        } else {
            sector->embed_into(v, st.data());
        }
        return st;
    }

    CoefficientState apply(const CoefficientState& st) const {
        return embed(mat * restrict(st));
    }
};

namespace detail {

/// Emits (row, col, value) triplets through either the identity layout or a
/// sector-restricted layout.
class GeneratorAssembler {
  public:
    GeneratorAssembler(const BasisTable& basis, int n_max, const Sector* sector,
                       std::int64_t entry_budget)
        : basis_(basis), photons_(n_max + 1), sector_(sector), budget_(entry_budget) {}

    void add(Eigen::Index row_full, Eigen::Index col_full, Complex value) {
        if (value == Complex{0.0, 0.0}) return;
        Eigen::Index r = row_full, c = col_full;
        if (sector_) {
            r = sector_->position[row_full];
            c = sector_->position[col_full];
            if (c < 0) return;
            if (r < 0) return;  // cannot happen for charge-conserving terms
        }
        if (static_cast<std::int64_t>(triplets_.size()) >= budget_)
            throw CapacityError("generator entry budget exceeded");
        triplets_.emplace_back(r, c, value);
    }

    Eigen::Index flat(int label_index, int m, int n) const {
        return (static_cast<Eigen::Index>(label_index) * photons_ + m) * photons_ + n;
    }

    std::vector<Triplet>& triplets() { return triplets_; }

  private:
    const BasisTable& basis_;
    Eigen::Index photons_;
    const Sector* sector_;
    std::int64_t budget_;
    std::vector<Triplet> triplets_;
};

}  // namespace detail

/// Assemble the full generator
///   L = -2 i Delta Sigma3
///       - i Omega [a (M+ + N+) + a^dag (M- + N-)]
///       + i Omega [(U+ + V+) . a^dag_right + (U- + V-) . a_right]
///       + kappa D[a] + gamma (-N/2 - Q3 + Q-) + w (-N/2 + Q3 + Q+)
///       + (1/2T2) (4 M3 - 2 Q3 - 2 Sigma3 - N)
/// as a sparse matrix on the flattened coefficients. Photon amplitudes
/// raised above n_max are dropped at assembly.
inline SparseGenerator build_generator(const ModelParams& p,
                                       std::shared_ptr<const BasisTable> basis,
                                       std::optional<int> sector_charge_opt = std::nullopt,
                                       std::int64_t entry_budget = kDefaultEntryBudget) {
    p.validate();
    if (basis->atoms() != p.atoms)
        throw ShapeError("basis table atom count does not match params");

    SparseGenerator gen;
    gen.basis = std::move(basis);
    gen.n_max = p.n_max;
    gen.params = p;
    if (sector_charge_opt) gen.sector = make_sector(*gen.basis, p.n_max, *sector_charge_opt);

    const BasisTable& table = *gen.basis;
    const int nm = p.n_max;
    const double atom_count = p.atoms;
    const Complex I{0.0, 1.0};

    detail::GeneratorAssembler asmb(table, nm, gen.sector ? &*gen.sector : nullptr, entry_budget);

    struct SpinHop {
        int target;     // label index
        double factor;  // ladder action factor
    };
    auto hop = [&](int i, Family f, bool plus) -> std::optional<SpinHop> {
        BasisLabel b = table.label(i);
        const auto move = detail::ladder_move(f, plus);
        const int factor = b.*(move.from);
        if (factor == 0) return std::nullopt;
        b.*(move.from) -= 1;
        b.*(move.to) += 1;
        return SpinHop{table.index_of(b), static_cast<double>(factor)};
    };

    for (int i = 0; i < table.size(); ++i) {
        const BasisLabel& b = table.label(i);
        const double q3 = 0.5 * b.two_q3();
        const double s3 = 0.5 * b.two_sigma3();
        const double m3 = 0.5 * b.two_m3();

        // Rates that multiply the identity in photon space.
        const Complex spin_diag = -2.0 * I * p.delta * s3                       // -2i Delta Sigma3
                                  - p.gamma_decay * (0.5 * atom_count + q3)     // gamma dissipator
                                  - p.pump * (0.5 * atom_count - q3)            // pump dissipator
                                  + p.dephasing * (4.0 * m3 - 2.0 * q3 - 2.0 * s3 - atom_count);

        const auto q_minus = hop(i, Family::Q, false);
        const auto q_plus = hop(i, Family::Q, true);
        const auto mn_plus_m = hop(i, Family::M, true);
        const auto mn_plus_n = hop(i, Family::N, true);
        const auto mn_minus_m = hop(i, Family::M, false);
        const auto mn_minus_n = hop(i, Family::N, false);
        const auto uv_plus_u = hop(i, Family::U, true);
        const auto uv_plus_v = hop(i, Family::V, true);
        const auto uv_minus_u = hop(i, Family::U, false);
        const auto uv_minus_v = hop(i, Family::V, false);

        for (int m = 0; m <= nm; ++m) {
            for (int n = 0; n <= nm; ++n) {
                const Eigen::Index col = asmb.flat(i, m, n);
                if (gen.sector && gen.sector->position[col] < 0) continue;

                const Complex diag = spin_diag - 0.5 * p.kappa * static_cast<double>(m + n);
                asmb.add(col, col, diag);

                // kappa a rho a^dag
                if (p.kappa > 0 && m < nm && n < nm)
                    asmb.add(col, asmb.flat(i, m + 1, n + 1),
                             p.kappa * std::sqrt((m + 1.0) * (n + 1.0)));

                // gamma Q- and w Q+
                if (p.gamma_decay > 0 && q_minus)
                    asmb.add(asmb.flat(q_minus->target, m, n), col, p.gamma_decay * q_minus->factor);
                if (p.pump > 0 && q_plus)
                    asmb.add(asmb.flat(q_plus->target, m, n), col, p.pump * q_plus->factor);

                if (p.omega == 0.0) continue;

                // -i Omega a (M+ + N+) rho : photon bra lowered
                if (m > 0) {
                    const double ph = std::sqrt(static_cast<double>(m));
                    if (mn_plus_m)
                        asmb.add(asmb.flat(mn_plus_m->target, m - 1, n), col,
                                 -I * p.omega * mn_plus_m->factor * ph);
                    if (mn_plus_n)
                        asmb.add(asmb.flat(mn_plus_n->target, m - 1, n), col,
                                 -I * p.omega * mn_plus_n->factor * ph);
                }
                // -i Omega a^dag (M- + N-) rho : photon bra raised (dropped above n_max)
                if (m < nm) {
                    const double ph = std::sqrt(m + 1.0);
                    if (mn_minus_m)
                        asmb.add(asmb.flat(mn_minus_m->target, m + 1, n), col,
                                 -I * p.omega * mn_minus_m->factor * ph);
                    if (mn_minus_n)
                        asmb.add(asmb.flat(mn_minus_n->target, m + 1, n), col,
                                 -I * p.omega * mn_minus_n->factor * ph);
                }
                // +i Omega (U+ + V+) rho a^dag : photon ket lowered
                if (n > 0) {
                    const double ph = std::sqrt(static_cast<double>(n));
                    if (uv_plus_u)
                        asmb.add(asmb.flat(uv_plus_u->target, m, n - 1), col,
                                 I * p.omega * uv_plus_u->factor * ph);
                    if (uv_plus_v)
                        asmb.add(asmb.flat(uv_plus_v->target, m, n - 1), col,
                                 I * p.omega * uv_plus_v->factor * ph);
                }
                // +i Omega (U- + V-) rho a : photon ket raised (dropped above n_max)
                if (n < nm) {
                    const double ph = std::sqrt(n + 1.0);
                    if (uv_minus_u)
                        asmb.add(asmb.flat(uv_minus_u->target, m, n + 1), col,
                                 I * p.omega * uv_minus_u->factor * ph);
                    if (uv_minus_v)
                        asmb.add(asmb.flat(uv_minus_v->target, m, n + 1), col,
                                 I * p.omega * uv_minus_v->factor * ph);
                }
            }
        }
    }

    const Eigen::Index dim = gen.sector ? gen.sector->size() : gen.full_dim();
    gen.mat = SparseMatrix(dim, dim);
    gen.mat.setFromTriplets(asmb.triplets().begin(), asmb.triplets().end());
    gen.mat.makeCompressed();
    return gen;
}

inline SparseGenerator build_generator(const ModelParams& p) {
    return build_generator(p, BasisTable::make(p.atoms));
}

/// Flat indices carrying the trace functional (sigma3 = 0, q = N/2, m = n),
/// in generator coordinates.
inline std::vector<Eigen::Index> trace_functional_indices(const SparseGenerator& gen) {
    std::vector<Eigen::Index> out;
    const Eigen::Index photons = gen.n_max + 1;
    for (int i = 0; i < gen.basis->trace_label_count(); ++i) {
        for (int m = 0; m <= gen.n_max; ++m) {
            Eigen::Index flat = (static_cast<Eigen::Index>(i) * photons + m) * photons + m;
            if (gen.sector) {
                flat = gen.sector->position[flat];
                if (flat < 0) continue;
            }
            out.push_back(flat);
        }
    }
    return out;
}

}  // namespace su4

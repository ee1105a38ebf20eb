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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "su4/state.hpp"

namespace su4 {

/// Number of equivalent spin-S irreducible blocks for N spins, indexed by
/// 2S. Satisfies sum_S (2S+1) n_S = 2^N.
struct MultiplicityTable {
    int atoms = 0;
    std::vector<std::int64_t> n_of_two_s;  ///< index 2S, zero where undefined

    std::int64_t n_s(int two_s) const {
        return (two_s >= 0 && two_s < static_cast<int>(n_of_two_s.size()))
                   ? n_of_two_s[static_cast<size_t>(two_s)]
                   : 0;
    }

    /// 2S values in descending order, N, N-2, ..., 1 or 0.
    std::vector<int> two_s_values() const {
        std::vector<int> out;
        for (int two_s = atoms; two_s >= 0; two_s -= 2) out.push_back(two_s);
        return out;
    }
};

/// Half-Pascal iteration: each row N is built from row N-1 by
/// n_S(N) = n_{S-1/2}(N-1) + n_{S+1/2}(N-1).
inline MultiplicityTable multiplicities(int atoms) {
    if (atoms < 1) throw InvalidParameterError("multiplicities need at least one atom");
    std::vector<std::int64_t> row(2, 0);
    row[1] = 1;  // N = 1: a single spin-1/2
    for (int n = 2; n <= atoms; ++n) {
        std::vector<std::int64_t> next(static_cast<size_t>(n) + 1, 0);
        for (int two_s = n % 2; two_s <= n; two_s += 2) {
            std::int64_t v = 0;
            if (two_s - 1 >= 0 && two_s - 1 < static_cast<int>(row.size())) v += row[two_s - 1];
            if (two_s + 1 < static_cast<int>(row.size())) v += row[two_s + 1];
            next[static_cast<size_t>(two_s)] = v;
        }
        row = std::move(next);
    }
    MultiplicityTable t;
    t.atoms = atoms;
    t.n_of_two_s = std::move(row);
    return t;
}

/// Per-S block of the density matrix over the combined (M x photon) index.
/// Row (M, m) and column (M', n) hold D^{m,n}_{S,M,M'}, with M descending
/// from S so the paper-style corner (M = M' = S) sits at the top left of
/// each photon block.
struct SpinBlock {
    int two_s = 0;
    std::int64_t multiplicity = 0;
    Eigen::MatrixXcd matrix;  ///< dimension (2S+1)(n_max+1)
};

struct BlockDensity {
    int atoms = 0;
    int n_max = 0;
    std::vector<SpinBlock> blocks;  ///< descending 2S

    const SpinBlock& block_of(int two_s) const {
        for (const auto& b : blocks)
            if (b.two_s == two_s) return b;
        throw InvalidParameterError("no block with 2S = " + std::to_string(two_s));
    }
};

namespace detail {

/// Sparse real functional over basis labels: D_{S,M,M'} = sum_b w(b) C_b.
/// Support is confined to the q-chain with q3 = (M+M')/2, sigma3 = (M-M')/2.
using LabelFunctional = std::map<int, double>;

inline LabelFunctional transpose_uv_plus(const LabelFunctional& w, const BasisTable& basis) {
    // (U+ + V+)^T: functional of (U+ + V+) x expressed as a functional of x.
    LabelFunctional out;
    for (const auto& [ti, wt] : w) {
        const BasisLabel& t = basis.label(ti);
        if (t.n_ee > 0) {  // source of U+ (moves eg -> ee)
            BasisLabel b = t;
            b.n_ee -= 1;
            b.n_eg += 1;
            out[basis.index_of(b)] += wt * b.n_eg;
        }
        if (t.n_ge > 0) {  // source of V+ (moves gg -> ge)
            BasisLabel b = t;
            b.n_ge -= 1;
            b.n_gg += 1;
            out[basis.index_of(b)] += wt * b.n_gg;
        }
    }
    return out;
}

inline LabelFunctional flip_sigma3(const LabelFunctional& w, const BasisTable& basis) {
    LabelFunctional out;
    for (const auto& [i, wt] : w) out[basis.index_of(basis.label(i).adjoint())] += wt;
    return out;
}

}  // namespace detail

/// Precomputed linear functionals mapping SU(4) coefficients to |S,M><S,M'|
/// matrix elements. Built once per atom count; photon indices ride along
/// untouched.
///
/// Construction follows the pyramid fill: the bottom-layer corner is
/// D_{N/2,N/2,N/2} = C_{N/2,N/2,0}; rows extend by the lowering-operator
/// recursion D_{S,M,M'-1} = [(U+ + V+) .]_{S,M,M'} / sqrt((S+M')(S-M'+1));
/// each next row is seeded through Hermiticity (a sigma3 flip of the
/// mirrored first-row functional); higher-layer corners come from the trace
/// constraint sum_{S'} n_{S'} D_{S',S,S} = C_{N/2,S,0}.
class ProjectionTable {
  public:
    explicit ProjectionTable(std::shared_ptr<const BasisTable> basis)
        : basis_(std::move(basis)), mult_(multiplicities(basis_->atoms())) {
        const int n = basis_->atoms();
        for (int two_s = n; two_s >= 0; two_s -= 2) {
            Layer layer;
            layer.two_s = two_s;
            const int dim = two_s + 1;
            layer.w.resize(static_cast<size_t>(dim) * dim);

            detail::LabelFunctional corner;
            if (two_s == n) {
                corner[basis_->index_of(label_from_quantum_numbers(n, n, two_s, 0))] = 1.0;
            } else {
                corner[basis_->index_of(label_from_quantum_numbers(n, n, two_s, 0))] = 1.0;
                for (const Layer& upper : layers_) {
                    const auto& w_up = upper.at(two_s, two_s, upper.two_s);
                    const double c = static_cast<double>(mult_.n_s(upper.two_s));
                    for (const auto& [i, wt] : w_up) corner[i] -= c * wt;
                }
                for (auto& [i, wt] : corner) wt /= static_cast<double>(mult_.n_s(two_s));
            }
            layer.set(two_s, two_s, corner, two_s);

            fill_row(layer, two_s);
            for (int two_m = two_s - 2; two_m >= -two_s; two_m -= 2) {
                // row seed via Hermiticity: D_{S,M,S} = conj(D_{S,S,M}) with
                // the conjugation realized as a sigma3 flip of real weights
                layer.set(two_m, two_s,
                          detail::flip_sigma3(layer.at(two_s, two_m, two_s), *basis_), two_s);
                fill_row(layer, two_m);
            }
            layers_.push_back(std::move(layer));
        }
    }

    const BasisTable& basis() const { return *basis_; }
    const MultiplicityTable& mult() const { return mult_; }

    /// Functional for D_{S,M,M'}; keys are label indices.
    const detail::LabelFunctional& functional(int two_s, int two_m, int two_mp) const {
        for (const Layer& l : layers_)
            if (l.two_s == two_s) return l.at(two_m, two_mp, two_s);
        throw InvalidParameterError("no layer with 2S = " + std::to_string(two_s));
    }

  private:
    struct Layer {
        int two_s = 0;
        std::vector<detail::LabelFunctional> w;
        detail::LabelFunctional& ref(int two_m, int two_mp, int two_s_) {
            const int r = (two_s_ - two_m) / 2, c = (two_s_ - two_mp) / 2;
            return w[static_cast<size_t>(r) * (two_s_ + 1) + static_cast<size_t>(c)];
        }
        const detail::LabelFunctional& at(int two_m, int two_mp, int two_s_) const {
            const int r = (two_s_ - two_m) / 2, c = (two_s_ - two_mp) / 2;
            return w[static_cast<size_t>(r) * (two_s_ + 1) + static_cast<size_t>(c)];
        }
        void set(int two_m, int two_mp, detail::LabelFunctional f, int two_s_) {
            ref(two_m, two_mp, two_s_) = std::move(f);
        }
    };

    void fill_row(Layer& layer, int two_m) {
        const int two_s = layer.two_s;
        for (int two_mp = two_s; two_mp > -two_s; two_mp -= 2) {
            // sqrt((S+M')(S-M'+1)), nonzero for M' > -S
            const double denom =
                std::sqrt(0.25 * (two_s + two_mp) * (two_s - two_mp + 2.0));
            auto next = detail::transpose_uv_plus(layer.at(two_m, two_mp, two_s), *basis_);
            for (auto& [i, wt] : next) wt /= denom;
            layer.set(two_m, two_mp - 2, std::move(next), two_s);
        }
    }

    std::shared_ptr<const BasisTable> basis_;
    MultiplicityTable mult_;
    std::vector<Layer> layers_;  ///< descending 2S
};

inline constexpr double kHermiticityTol = 1e-8;

/// Project a Hermitian coefficient state onto the |S,M> block representation.
/// Each block is assembled over the combined (M x photon) index so one
/// eigendecomposition per S covers the joint atom-field state.
inline BlockDensity project_blocks(const CoefficientState& st, const ProjectionTable& table) {
    const double scale = std::max(1.0, st.data().template lpNorm<Eigen::Infinity>());
    if (st.hermiticity_residual() > kHermiticityTol * scale)
        throw PreconditionError("state is not Hermitian within tolerance " +
                                std::to_string(kHermiticityTol));

    BlockDensity bd;
    bd.atoms = st.atoms();
    bd.n_max = st.n_max();
    const int photons = st.photons();

    for (int two_s : table.mult().two_s_values()) {
        SpinBlock blk;
        blk.two_s = two_s;
        blk.multiplicity = table.mult().n_s(two_s);
        const int sdim = two_s + 1;
        blk.matrix = Eigen::MatrixXcd::Zero(sdim * photons, sdim * photons);
        for (int r = 0; r < sdim; ++r) {
            const int two_m = two_s - 2 * r;
            for (int c = 0; c < sdim; ++c) {
                const int two_mp = two_s - 2 * c;
                const auto& w = table.functional(two_s, two_m, two_mp);
                for (int m = 0; m < photons; ++m)
                    for (int n = 0; n < photons; ++n) {
                        Complex v{0.0, 0.0};
                        for (const auto& [i, wt] : w) v += wt * st.at(i, m, n);
                        blk.matrix(r * photons + m, c * photons + n) = v;
                    }
            }
        }
        bd.blocks.push_back(std::move(blk));
    }
    return bd;
}

inline BlockDensity project_blocks(const CoefficientState& st) {
    return project_blocks(st, ProjectionTable(st.basis_ptr()));
}

/// Tr[rho^2] = sum_S n_S Tr[B_S^2].
inline double purity(const BlockDensity& bd) {
    double p = 0.0;
    for (const auto& blk : bd.blocks) {
        double t = 0.0;
        const auto& b = blk.matrix;
        for (Eigen::Index i = 0; i < b.rows(); ++i)
            for (Eigen::Index j = 0; j < b.cols(); ++j) t += (b(i, j) * b(j, i)).real();
        p += static_cast<double>(blk.multiplicity) * t;
    }
    return p;
}

/// Eigenvalues of every block, each repeated n_S times; ascending. For a
/// physical state this is the spectrum of the full density matrix.
inline std::vector<double> block_spectrum(const BlockDensity& bd) {
    std::vector<double> ev;
    for (const auto& blk : bd.blocks) {
        Eigen::MatrixXcd h = 0.5 * (blk.matrix + blk.matrix.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            for (std::int64_t c = 0; c < blk.multiplicity; ++c)
                ev.push_back(es.eigenvalues()[i]);
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline constexpr double kEigenvalueClamp = -1e-8;
inline constexpr double kEigenvalueAbort = -1e-6;

/// Von Neumann entropy -sum_j lambda_j ln lambda_j over the block spectrum,
/// with eigenvalues in [-1e-8, 0) clamped to zero.
inline double entropy(const BlockDensity& bd) {
    double s = 0.0;
    for (const double raw : block_spectrum(bd)) {
        double lam = raw;
        if (lam < kEigenvalueAbort)
            throw UnphysicalStateError("density matrix eigenvalue " + std::to_string(lam) +
                                       " below " + std::to_string(kEigenvalueAbort));
        if (lam < 0.0) lam = 0.0;
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

struct SmPopulation {
    int two_s = 0;
    int two_m = 0;
    double p = 0.0;
};

/// p(S, M) = n_S sum_m D^{m,m}_{S,M,M}; sums to the trace.
inline std::vector<SmPopulation> sm_populations(const BlockDensity& bd) {
    std::vector<SmPopulation> out;
    const int photons = bd.n_max + 1;
    for (const auto& blk : bd.blocks) {
        const int sdim = blk.two_s + 1;
        for (int r = 0; r < sdim; ++r) {
            SmPopulation pop;
            pop.two_s = blk.two_s;
            pop.two_m = blk.two_s - 2 * r;
            for (int m = 0; m < photons; ++m)
                pop.p += blk.matrix(r * photons + m, r * photons + m).real();
            pop.p *= static_cast<double>(blk.multiplicity);
            out.push_back(pop);
        }
    }
    return out;
}

}  // namespace su4

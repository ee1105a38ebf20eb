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

// Brute-force reference implementation in the unreduced 2^N (n_max+1)
// Hilbert space. Deliberately shares no evolution or generator code with
// the symmetric-basis path: dense matrices, per-atom Pauli operators, and a
// fixed-step RK4 with step halving. Everything here is ground truth for the
// rest of the library and is only practical for a handful of atoms.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <vector>

#include "su4/params.hpp"
#include "su4/state.hpp"

namespace su4::oracle {

using Matrix = Eigen::MatrixXcd;

inline constexpr int kDefaultDimensionCap = 4096;

/// Dense density matrix over (spin bitmask) x (Fock index), bit j set when
/// atom j is excited; index = mask * (n_max+1) + fock.
struct FullModel {
    ModelParams params;
    int spin_dim = 0;
    int photons = 0;
    int dim = 0;

    Matrix hamiltonian;
    Matrix photon_a;                  ///< a on the full space
    std::vector<Matrix> sigma_minus;  ///< per atom
    std::vector<Eigen::VectorXd> sigma_z_diag;
};

inline FullModel make_full_model(const ModelParams& p, int dimension_cap = kDefaultDimensionCap) {
    p.validate();
    FullModel m;
    m.params = p;
    m.spin_dim = 1 << p.atoms;
    m.photons = p.n_max + 1;
    m.dim = m.spin_dim * m.photons;
    if (m.dim > dimension_cap)
        throw CapacityError("full-space dimension " + std::to_string(m.dim) + " exceeds cap " +
                            std::to_string(dimension_cap));

    m.photon_a = Matrix::Zero(m.dim, m.dim);
    for (int mask = 0; mask < m.spin_dim; ++mask)
        for (int n = 1; n < m.photons; ++n)
            m.photon_a(mask * m.photons + n - 1, mask * m.photons + n) = std::sqrt(double(n));

    for (int j = 0; j < p.atoms; ++j) {
        Matrix sm = Matrix::Zero(m.dim, m.dim);
        Eigen::VectorXd sz(m.dim);
        for (int mask = 0; mask < m.spin_dim; ++mask) {
            const bool excited = (mask >> j) & 1;
            for (int n = 0; n < m.photons; ++n) {
                const int idx = mask * m.photons + n;
                sz[idx] = excited ? 1.0 : -1.0;
                if (excited) sm((mask ^ (1 << j)) * m.photons + n, idx) = 1.0;
            }
        }
        m.sigma_minus.push_back(std::move(sm));
        m.sigma_z_diag.push_back(std::move(sz));
    }

    m.hamiltonian = Matrix::Zero(m.dim, m.dim);
    for (int j = 0; j < p.atoms; ++j) {
        for (int idx = 0; idx < m.dim; ++idx)
            m.hamiltonian(idx, idx) += 0.5 * p.delta * m.sigma_z_diag[j][idx];
        m.hamiltonian += p.omega * (m.photon_a.adjoint() * m.sigma_minus[j] +
                                    m.photon_a * m.sigma_minus[j].adjoint());
    }
    return m;
}

inline Matrix dissipator(const Matrix& op, const Matrix& rho) {
    const Matrix opd = op.adjoint();
    const Matrix opdop = opd * op;
    return op * rho * opd - 0.5 * (opdop * rho + rho * opdop);
}

/// d rho / dt of Eq.-of-motion form, built directly from per-atom operators.
inline Matrix liouvillian_apply(const FullModel& m, const Matrix& rho) {
    const Complex I{0.0, 1.0};
    Matrix out = -I * (m.hamiltonian * rho - rho * m.hamiltonian);
    if (m.params.kappa > 0) out += m.params.kappa * dissipator(m.photon_a, rho);
    for (int j = 0; j < m.params.atoms; ++j) {
        if (m.params.gamma_decay > 0)
            out += m.params.gamma_decay * dissipator(m.sigma_minus[j], rho);
        if (m.params.pump > 0)
            out += m.params.pump * dissipator(m.sigma_minus[j].adjoint(), rho);
        if (m.params.dephasing > 0) {
            // D[sigma^3] rho = sigma^3 rho sigma^3 - rho
            const auto& sz = m.sigma_z_diag[j];
            for (int r = 0; r < m.dim; ++r)
                for (int c = 0; c < m.dim; ++c)
                    out(r, c) += m.params.dephasing * (sz[r] * sz[c] - 1.0) * rho(r, c);
        }
    }
    return out;
}

inline Matrix rk4_step(const FullModel& m, const Matrix& rho, double dt) {
    const Matrix k1 = liouvillian_apply(m, rho);
    const Matrix k2 = liouvillian_apply(m, rho + 0.5 * dt * k1);
    const Matrix k3 = liouvillian_apply(m, rho + 0.5 * dt * k2);
    const Matrix k4 = liouvillian_apply(m, rho + dt * k3);
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline Matrix rk4_run(const FullModel& m, Matrix rho, double t, int steps) {
    const double dt = t / steps;
    for (int i = 0; i < steps; ++i) rho = rk4_step(m, rho, dt);
    return rho;
}

/// Fixed-step RK4 with step halving until the result changes by less than
/// tol in the max norm.
inline Matrix evolve(const FullModel& m, const Matrix& rho0, double t, double tol = 1e-9,
                     int max_doublings = 22) {
    if (t == 0.0) return rho0;
    const double rate =
        std::max({m.params.kappa, m.params.gamma_decay, m.params.pump, m.params.dephasing,
                  std::abs(m.params.delta), m.params.omega * std::sqrt(double(m.params.atoms)),
                  1.0});
    int steps = std::max(8, static_cast<int>(std::ceil(4.0 * rate * t)));
    Matrix prev = rk4_run(m, rho0, t, steps);
    for (int i = 0; i < max_doublings; ++i) {
        steps *= 2;
        Matrix next = rk4_run(m, rho0, t, steps);
        const double diff = (next - prev).cwiseAbs().maxCoeff();
        if (diff < tol) return next;
        prev = std::move(next);
    }
    throw ConvergenceError("oracle RK4 did not converge while halving the step");
}

inline Matrix steady(const FullModel& m, double tol = 1e-10, double horizon = 1e6) {
    if (!m.params.dissipative())
        throw DegenerateSteadyStateError("oracle steady state needs a dissipative rate");
    Matrix rho = Matrix::Zero(m.dim, m.dim);
    rho(0, 0) = 1.0;  // all atoms ground, photon vacuum
    const double rate = std::max(
        {m.params.kappa, m.params.gamma_decay, m.params.pump, m.params.dephasing, 1e-6});
    double chunk = 2.0 / rate, elapsed = 0.0;
    while (elapsed < horizon / rate) {
        rho = evolve(m, rho, chunk, tol * 1e-2);
        elapsed += chunk;
        chunk *= 1.5;
        const double res = liouvillian_apply(m, rho).norm() / rho.norm();
        if (res <= tol) return rho;
    }
    throw ConvergenceError("oracle steady state did not converge");
}

struct OracleObservables {
    double trace = 0.0;
    double mean_photon = 0.0;
    Complex field_amp{0.0, 0.0};
    double inversion = 0.0;
    Complex spin_plus{0.0, 0.0};
    double spin_zz = 0.0;
    Complex spin_corr{0.0, 0.0};
    double photon_second_moment = 0.0;
    double purity = 0.0;
    double entropy = 0.0;
};

inline std::vector<double> photon_distribution(const FullModel& m, const Matrix& rho) {
    std::vector<double> p(static_cast<size_t>(m.photons), 0.0);
    for (int mask = 0; mask < m.spin_dim; ++mask)
        for (int n = 0; n < m.photons; ++n)
            p[static_cast<size_t>(n)] += rho(mask * m.photons + n, mask * m.photons + n).real();
    return p;
}

inline std::vector<double> rho_spectrum(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + rho.rows());
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline OracleObservables observables(const FullModel& m, const Matrix& rho) {
    OracleObservables o;
    const int n_atoms = m.params.atoms;
    o.trace = rho.trace().real();
    o.field_amp = (m.photon_a * rho).trace();

    for (int mask = 0; mask < m.spin_dim; ++mask)
        for (int n = 0; n < m.photons; ++n) {
            const double pop = rho(mask * m.photons + n, mask * m.photons + n).real();
            o.mean_photon += n * pop;
            o.photon_second_moment += n * (n - 1.0) * pop;
        }

    for (int j = 0; j < n_atoms; ++j) {
        for (int idx = 0; idx < m.dim; ++idx)
            o.inversion += m.sigma_z_diag[j][idx] * rho(idx, idx).real() / n_atoms;
        o.spin_plus += (m.sigma_minus[j].adjoint() * rho).trace() / double(n_atoms);
    }
    if (n_atoms >= 2) {
        const double pairs = double(n_atoms) * (n_atoms - 1);
        for (int j = 0; j < n_atoms; ++j)
            for (int k = 0; k < n_atoms; ++k) {
                if (j == k) continue;
                for (int idx = 0; idx < m.dim; ++idx)
                    o.spin_zz +=
                        m.sigma_z_diag[j][idx] * m.sigma_z_diag[k][idx] * rho(idx, idx).real() /
                        pairs;
                o.spin_corr +=
                    (m.sigma_minus[j].adjoint() * m.sigma_minus[k] * rho).trace() / pairs;
            }
    }
    o.purity = (rho * rho).trace().real();
    for (double lam : rho_spectrum(rho))
        if (lam > 0.0) o.entropy -= lam * std::log(lam);
    return o;
}

inline double g2_zero(const FullModel& m, const Matrix& rho) {
    const OracleObservables o = observables(m, rho);
    return o.photon_second_moment / (o.mean_photon * o.mean_photon);
}

/// <O1(t+tau) O2(t)> style regression series with dense evolution. The
/// closing map receives the evolved object.
inline std::vector<Complex> regression_series(const FullModel& m, const Matrix& initial_object,
                                              const std::vector<double>& tau_grid,
                                              const std::function<Complex(const Matrix&)>& close,
                                              double tol = 1e-10) {
    std::vector<Complex> out;
    out.reserve(tau_grid.size());
    Matrix obj = initial_object;
    double t_prev = 0.0;
    for (size_t i = 0; i < tau_grid.size(); ++i) {
        const double dt = tau_grid[i] - t_prev;
        if (dt > 0) obj = evolve(m, obj, dt, tol);
        t_prev = tau_grid[i];
        out.push_back(close(obj));
    }
    return out;
}

inline std::vector<Complex> g1_series(const FullModel& m, const Matrix& rho,
                                      const std::vector<double>& tau_grid, double tol = 1e-10) {
    return regression_series(m, m.photon_a * rho, tau_grid,
                             [&](const Matrix& o) { return (m.photon_a.adjoint() * o).trace(); },
                             tol);
}

inline std::vector<Complex> g2_series(const FullModel& m, const Matrix& rho,
                                      const std::vector<double>& tau_grid, double tol = 1e-10) {
    return regression_series(
        m, m.photon_a * rho * m.photon_a.adjoint(), tau_grid,
        [&](const Matrix& o) { return (m.photon_a.adjoint() * m.photon_a * o).trace(); }, tol);
}

/// Conjugate rho by an atom permutation; perm[j] is where atom j goes.
inline Matrix permute_atoms(const FullModel& m, const Matrix& rho, const std::vector<int>& perm) {
    auto map_mask = [&](int mask) {
        int out = 0;
        for (int j = 0; j < m.params.atoms; ++j)
            if ((mask >> j) & 1) out |= 1 << perm[static_cast<size_t>(j)];
        return out;
    };
    Matrix out = Matrix::Zero(m.dim, m.dim);
    for (int mr = 0; mr < m.spin_dim; ++mr)
        for (int nr = 0; nr < m.photons; ++nr)
            for (int mc = 0; mc < m.spin_dim; ++mc)
                for (int nc = 0; nc < m.photons; ++nc)
                    out(map_mask(mr) * m.photons + nr, map_mask(mc) * m.photons + nc) =
                        rho(mr * m.photons + nr, mc * m.photons + nc);
    return out;
}

namespace detail {

/// Visit every word (letter assignment) with the occupation counts of b;
/// letters fix a (ket bit, bra bit) pair per atom.
inline void for_each_word(const BasisLabel& b,
                          const std::function<void(int ket_mask, int bra_mask)>& visit) {
    const int n = b.atoms();
    std::vector<int> counts{b.n_ee, b.n_gg, b.n_eg, b.n_ge};
    std::vector<int> word(static_cast<size_t>(n), 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == n) {
            int ket = 0, bra = 0;
            for (int j = 0; j < n; ++j) {
                const int letter = word[static_cast<size_t>(j)];
                if (letter == 0 || letter == 2) ket |= 1 << j;  // ee, eg have excited ket
                if (letter == 0 || letter == 3) bra |= 1 << j;  // ee, ge have excited bra
            }
            visit(ket, bra);
            return;
        }
        for (int letter = 0; letter < 4; ++letter) {
            if (counts[static_cast<size_t>(letter)] == 0) continue;
            --counts[static_cast<size_t>(letter)];
            word[static_cast<size_t>(pos)] = letter;
            rec(pos + 1);
            ++counts[static_cast<size_t>(letter)];
        }
    };
    rec(0);
}

inline std::int64_t word_count(const BasisLabel& b) {
    auto fact = [](int k) {
        std::int64_t f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    return fact(b.atoms()) / (fact(b.n_ee) * fact(b.n_gg) * fact(b.n_eg) * fact(b.n_ge));
}

}  // namespace detail

/// Expand a coefficient state into the full-space density matrix. Each
/// symmetric basis element is the mean over its distinct letter words.
inline Matrix to_full(const CoefficientState& st) {
    const int n = st.atoms();
    const int photons = st.n_max() + 1;
    const int dim = (1 << n) * photons;
    Matrix rho = Matrix::Zero(dim, dim);
    for (int i = 0; i < st.basis().size(); ++i) {
        const BasisLabel& b = st.basis().label(i);
        const double norm = 1.0 / static_cast<double>(detail::word_count(b));
        detail::for_each_word(b, [&](int ket, int bra) {
            for (int m = 0; m < photons; ++m)
                for (int nn = 0; nn < photons; ++nn) {
                    const Complex c = st.at(i, m, nn);
                    if (c != Complex{0.0, 0.0})
                        rho(ket * photons + m, bra * photons + nn) += norm * c;
                }
        });
    }
    return rho;
}

/// Recover coefficients from a permutation-symmetric full-space density
/// matrix. For symmetric rho each word of b holds the same element
/// C_b / word_count(b), so the plain sum over words is C_b.
inline CoefficientState from_full(const Matrix& rho, std::shared_ptr<const BasisTable> basis,
                                  int n_max) {
    CoefficientState st(std::move(basis), n_max);
    const int photons = n_max + 1;
    for (int i = 0; i < st.basis().size(); ++i) {
        detail::for_each_word(st.basis().label(i), [&](int ket, int bra) {
            for (int m = 0; m < photons; ++m)
                for (int nn = 0; nn < photons; ++nn)
                    st.at(i, m, nn) += rho(ket * photons + m, bra * photons + nn);
        });
    }
    return st;
}

}  // namespace su4::oracle

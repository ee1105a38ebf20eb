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

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "su4/liouvillian.hpp"
#include "su4/state.hpp"

namespace su4 {

struct EvolveConfig {
    double t_final = 0.0;
    double dt_init = 0.0;     ///< 0 selects the step automatically
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double trunc_tol = 1e-6;  ///< max allowed boundary population
    long max_steps = 200'000'000;

    // steady_state knobs
    double steady_residual_tol = 1e-10;  ///< accept when |L v| <= tol |v|
    double steady_t_max = 2e4;           ///< long-time horizon (units of 1/rate scale)
    long linear_max_iterations = 20000;  ///< iterative solver budget

    void validate() const {
        if (t_final < 0) throw InvalidParameterError("t_final must be >= 0");
        if (rel_tol <= 0 || abs_tol <= 0 || trunc_tol <= 0)
            throw InvalidParameterError("tolerances must be positive");
    }
};

struct EvolveStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    double trace_drift = 0.0;
    double max_boundary_population = 0.0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - bhat, for the embedded error estimate
    static constexpr double d1 = 71.0 / 57600, d3 = -71.0 / 16695, d4 = 71.0 / 1920,
                            d5 = -17253.0 / 339200, d6 = 22.0 / 525, d7 = -1.0 / 40;
};

inline double error_norm(const Vector& err, const Vector& y0, const Vector& y1, double abs_tol,
                         double rel_tol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale =
            abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = std::abs(err[i]) / scale;
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

/// Crude spectral-radius estimate by power iteration, used to keep the
/// explicit stepper inside its stability region. Deterministic start vector.
inline double spectral_radius_estimate(const SparseMatrix& A) {
    Vector v(A.rows());
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        v[i] = Complex{1.0 + double(s % 997) / 997.0, double(s % 991) / 991.0};
    }
    v /= v.norm();
    double rho = 0.0;
    for (int it = 0; it < 12; ++it) {
        Vector w = A * v;
        rho = w.norm();
        if (rho < 1e-300) return 0.0;
        v = w / rho;
    }
    return rho;
}

/// Adaptive Dormand-Prince integration of dy/dt = A y from t0 to t1.
/// `on_accept(t, y)` runs after every accepted step; `on_sample(t, y)` runs
/// exactly at the requested sample times (steps are clamped to land there).
/// Steps are capped below the stability bound so that rounding noise in
/// stiff modes is never amplified once the solution is stationary.
template <typename OnAccept, typename OnSample>
inline void integrate_adaptive(const SparseMatrix& A, Vector& y, double t0, double t1,
                               const EvolveConfig& cfg, EvolveStats& stats, OnAccept&& on_accept,
                               OnSample&& on_sample, std::span<const double> sample_times = {}) {
    using T = DormandPrince;
    if (t1 <= t0) return;

    Vector k1 = A * y;
    Vector k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()), k6(y.size()), k7(y.size());
    Vector ytmp(y.size()), ynew(y.size()), err(y.size());

    double t = t0;
    size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t0 + 1e-30)
        ++next_sample;

    const double rho = spectral_radius_estimate(A);
    const double dt_stable = rho > 0.0 ? 2.5 / rho : std::numeric_limits<double>::infinity();

    double dt = cfg.dt_init;
    if (dt <= 0.0) {
        // start from the explicit-Euler scale and let the controller adapt
        const double ynorm = y.norm();
        const double fnorm = k1.norm();
        dt = (fnorm > 1e-300) ? 0.01 * std::max(ynorm, cfg.abs_tol) / fnorm : (t1 - t0) * 1e-3;
        dt = std::min(dt, t1 - t0);
    }
    dt = std::min(dt, dt_stable);

    double prev_err = 1.0;
    while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
        if (stats.steps_accepted + stats.steps_rejected >= cfg.max_steps)
            throw ConvergenceError("integration exceeded max_steps = " +
                                   std::to_string(cfg.max_steps));
        bool clipped = false;
        double target = t1;
        if (next_sample < sample_times.size()) target = std::min(target, sample_times[next_sample]);
        if (t + dt >= target) {
            dt = target - t;
            clipped = true;
        }
        if (dt <= std::abs(t) * 1e-15 + 1e-300)
            throw StiffnessError("step size underflow at t = " + std::to_string(t) +
                                 "; the generator is too stiff for the explicit integrator");

        ytmp.noalias() = y + dt * (T::a21 * k1);
        k2.noalias() = A * ytmp;
        ytmp.noalias() = y + dt * (T::a31 * k1 + T::a32 * k2);
        k3.noalias() = A * ytmp;
        ytmp.noalias() = y + dt * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
        k4.noalias() = A * ytmp;
        ytmp.noalias() = y + dt * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
        k5.noalias() = A * ytmp;
        ytmp.noalias() = y + dt * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 +
                                   T::a65 * k5);
        k6.noalias() = A * ytmp;
        ynew.noalias() =
            y + dt * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
        k7.noalias() = A * ynew;
        err.noalias() = dt * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 + T::d6 * k6 +
                              T::d7 * k7);

        const double e = error_norm(err, y, ynew, cfg.abs_tol, cfg.rel_tol);
        if (e <= 1.0) {
            t += dt;
            y.swap(ynew);
            k1.swap(k7);  // first-same-as-last
            ++stats.steps_accepted;
            on_accept(t, y);
            if (next_sample < sample_times.size() &&
                std::abs(t - sample_times[next_sample]) <=
                    1e-12 * std::max(1.0, std::abs(sample_times[next_sample]))) {
                on_sample(t, y);
                ++next_sample;
            }
            // PI controller
            const double fac =
                0.9 * std::pow(std::max(e, 1e-10), -0.7 / 5.0) * std::pow(prev_err, 0.4 / 5.0);
            prev_err = std::max(e, 1e-10);
            dt = std::min(dt * std::clamp(fac, 0.2, clipped ? 10.0 : 5.0), dt_stable);
        } else {
            ++stats.steps_rejected;
            dt *= std::clamp(0.9 * std::pow(e, -1.0 / 5.0), 0.1, 1.0);
        }
    }
}

inline Complex sector_trace(const Vector& y, const std::vector<Eigen::Index>& trace_idx) {
    Complex t{0.0, 0.0};
    for (Eigen::Index i : trace_idx) t += y[i];
    return t;
}

}  // namespace detail

using Observer = std::function<void(double, const CoefficientState&)>;

/// Integrate d rho/dt = L rho for cfg.t_final. Physical (trace-one) inputs
/// are watched by the truncation monitor: if the diagonal population at the
/// photon boundary m = n_max exceeds cfg.trunc_tol the run aborts with a
/// TruncationError naming the offending n_max.
inline CoefficientState evolve(const CoefficientState& state, const SparseGenerator& gen,
                               const EvolveConfig& cfg, const Observer& observer = {},
                               EvolveStats* stats_out = nullptr) {
    cfg.validate();
    Vector y = gen.restrict(state);
    EvolveStats stats;

    const auto trace_idx = trace_functional_indices(gen);
    const Complex trace0 = detail::sector_trace(y, trace_idx);
    const bool physical = std::abs(trace0 - 1.0) < 1e-3;

    // boundary (m = n_max, diagonal, trace labels) in generator coordinates
    std::vector<Eigen::Index> boundary_idx;
    {
        const Eigen::Index photons = gen.n_max + 1;
        for (int i = 0; i < gen.basis->trace_label_count(); ++i) {
            Eigen::Index flat =
                (static_cast<Eigen::Index>(i) * photons + gen.n_max) * photons + gen.n_max;
            if (gen.sector) {
                flat = gen.sector->position[flat];
                if (flat < 0) continue;
            }
            boundary_idx.push_back(flat);
        }
    }

    // With n_max = 0 the boundary is the whole photon space and the monitor
    // is meaningless; photon-free runs are exact in that respect.
    const bool monitor_boundary = physical && gen.n_max >= 1;
    auto on_accept = [&](double t, const Vector& v) {
        if (monitor_boundary) {
            double boundary = 0.0;
            for (Eigen::Index i : boundary_idx) boundary += std::abs(v[i]);
            stats.max_boundary_population = std::max(stats.max_boundary_population, boundary);
            if (boundary > cfg.trunc_tol)
                throw TruncationError("photon boundary population " + std::to_string(boundary) +
                                      " exceeds trunc_tol at t = " + std::to_string(t) +
                                      "; increase n_max beyond " + std::to_string(gen.n_max));
            stats.trace_drift = std::max(
                stats.trace_drift, std::abs(detail::sector_trace(v, trace_idx) - trace0));
        }
        if (observer) observer(t, gen.embed(v));
    };

    detail::integrate_adaptive(gen.mat, y, 0.0, cfg.t_final, cfg, stats, on_accept,
                               [](double, const Vector&) {});

    if (stats_out) *stats_out = stats;
    CoefficientState out = gen.embed(y);
    out.truncation_loss = state.truncation_loss;
    return out;
}

enum class SteadyMethod { LongTime, LinearSolve };

/// Residual |L v|_2 / |v|_2 of a candidate steady state.
inline double steady_residual(const SparseGenerator& gen, const CoefficientState& st) {
    const Vector v = gen.restrict(st);
    const double n = v.norm();
    return n > 0 ? (gen.mat * v).norm() / n : 0.0;
}

namespace detail {

inline std::vector<Triplet> trace_replaced_triplets(const SparseGenerator& gen,
                                                    Eigen::Index replaced_row) {
    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(gen.mat.nonZeros()) + 64);
    for (Eigen::Index r = 0; r < gen.mat.outerSize(); ++r) {
        if (r == replaced_row) continue;
        for (SparseMatrix::InnerIterator it(gen.mat, r); it; ++it)
            trip.emplace_back(r, it.col(), it.value());
    }
    for (Eigen::Index c : trace_functional_indices(gen))
        trip.emplace_back(replaced_row, c, Complex{1.0, 0.0});
    return trip;
}

}  // namespace detail

/// Compute the steady state of a dissipative generator.
///
/// LinearSolve replaces one row of L by the trace functional = 1 and solves
/// the sparse system (direct LU below ~4e5 unknowns, ILUT-preconditioned
/// BiCGSTAB with restarts above). LongTime integrates from the all-ground
/// vacuum until |L v| stagnates below tolerance.
inline CoefficientState steady_state(const SparseGenerator& gen, SteadyMethod method,
                                     const EvolveConfig& cfg) {
    if (!gen.params.dissipative())
        throw DegenerateSteadyStateError(
            "all dissipative rates are zero: every mixture of Hamiltonian eigenstates is "
            "stationary");
    if (gen.sector && gen.sector->charge != 0)
        throw InvalidParameterError("steady states live in the charge-0 sector");

    const auto trace_idx = trace_functional_indices(gen);

    auto finalize = [&](Vector v) {
        const Complex tr = detail::sector_trace(v, trace_idx);
        if (std::abs(tr) < 1e-12)
            throw ConvergenceError("steady-state candidate has vanishing trace");
        v /= tr;
        CoefficientState out = gen.embed(v).hermitized();
        out.data() /= out.trace().real();
        const double res = steady_residual(gen, out);
        if (res > std::max(cfg.steady_residual_tol * 100, 1e-8))
            throw ConvergenceError("steady-state residual |Lv|/|v| = " + std::to_string(res) +
                                   " above tolerance");
        return out;
    };

    if (method == SteadyMethod::LongTime) {
        CoefficientState st =
            initial_state(InitialStateKind::AllGroundVacuum, gen.basis, gen.n_max);
        Vector y = gen.restrict(st);
        EvolveStats stats;
        const double rate_scale =
            std::max({gen.params.kappa, gen.params.gamma_decay, gen.params.pump,
                      gen.params.dephasing, 1e-6});
        // The residual floor tracks the integrator tolerance, so tighten it
        // below the requested residual.
        EvolveConfig ecfg = cfg;
        ecfg.rel_tol = std::min(cfg.rel_tol, 0.1 * cfg.steady_residual_tol);
        ecfg.abs_tol = std::min(cfg.abs_tol, 0.01 * cfg.steady_residual_tol);
        double chunk = 1.0 / rate_scale;
        const double chunk_cap = 50.0 / rate_scale;
        double elapsed = 0.0;
        while (elapsed < cfg.steady_t_max / rate_scale) {
            ecfg.t_final = chunk;
            detail::integrate_adaptive(gen.mat, y, 0.0, chunk, ecfg, stats,
                                       [](double, const Vector&) {},
                                       [](double, const Vector&) {});
            elapsed += chunk;
            chunk = std::min(chunk * 1.5, chunk_cap);
            const double res = (gen.mat * y).norm() / y.norm();
            if (res <= cfg.steady_residual_tol) return finalize(std::move(y));
        }
        throw ConvergenceError("long-time steady state did not converge within the horizon");
    }

    // LinearSolve
    const Eigen::Index dim = gen.dim();
    if (trace_idx.empty())
        throw InvalidParameterError("generator has no trace-carrying entries");
    const Eigen::Index row = trace_idx.front();
    const auto trip = detail::trace_replaced_triplets(gen, row);
    Vector rhs = Vector::Zero(dim);
    rhs[row] = 1.0;

    // Direct LU fill-in grows steeply with dimension; beyond this an
    // ILUT-preconditioned BiCGSTAB is far lighter on memory.
    constexpr Eigen::Index kDirectSolveMaxDim = 30'000;
    Vector x;
    if (dim <= kDirectSolveMaxDim) {
        Eigen::SparseMatrix<Complex> A(dim, dim);  // column-major for SparseLU
        A.setFromTriplets(trip.begin(), trip.end());
        A.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
        lu.analyzePattern(A);
        lu.factorize(A);
        if (lu.info() != Eigen::Success)
            throw DegenerateSteadyStateError(
                "trace-constrained generator is singular: multi-dimensional null space "
                "suspected (" + lu.lastErrorMessage() + ")");
        x = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw ConvergenceError("sparse LU solve failed");
    } else {
        SparseMatrix A(dim, dim);
        A.setFromTriplets(trip.begin(), trip.end());
        A.makeCompressed();
        Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<Complex>> solver;
        solver.preconditioner().setDroptol(1e-5);
        solver.preconditioner().setFillfactor(20);
        solver.setMaxIterations(std::max<long>(cfg.linear_max_iterations / 10, 50));
        solver.setTolerance(cfg.steady_residual_tol);
        solver.compute(A);
        if (solver.info() != Eigen::Success)
            throw ConvergenceError("ILUT preconditioner failed");
        x = solver.solve(rhs);
        long used = solver.iterations();
        while (solver.info() != Eigen::Success && used < cfg.linear_max_iterations) {
            x = solver.solveWithGuess(rhs, x);  // restart from the best iterate
            used += solver.iterations();
        }
        if (solver.info() != Eigen::Success)
            throw ConvergenceError("BiCGSTAB did not reach tolerance within " +
                                   std::to_string(cfg.linear_max_iterations) + " iterations");
    }
    return finalize(std::move(x));
}

}  // namespace su4

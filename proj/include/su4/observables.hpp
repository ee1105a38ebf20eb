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

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "su4/dynamics.hpp"
#include "su4/state.hpp"
#include "su4/superop.hpp"

namespace su4 {

inline double trace_of(const CoefficientState& st) { return st.trace().real(); }

/// Single-time expectation values. Pair quantities (spin_zz, spin_corr) are
/// averages over ordered pairs j != k and absent for a single atom.
struct ObservableReport {
    double trace = 0.0;
    double mean_photon = 0.0;              ///< <adag a>
    Complex field_amp{0.0, 0.0};           ///< <a>
    double inversion = 0.0;                ///< <sigma_j^3>
    Complex spin_plus{0.0, 0.0};           ///< <sigma_j^+>
    std::optional<double> spin_zz;         ///< <sigma_j^3 sigma_k^3>, j != k
    std::optional<Complex> spin_corr;      ///< <sigma_j^+ sigma_k^->, j != k
    std::optional<double> g2_zero;         ///< absent when <adag a> is below the floor
    double photon_second_moment = 0.0;     ///< <adag adag a a>
};

namespace detail {

inline Complex weighted_trace(const CoefficientState& st,
                              const std::function<double(int q3_index, int m)>& weight) {
    // q3_index runs 0..N over the trace labels, q3 = N/2 - q3_index.
    Complex t{0.0, 0.0};
    for (int i = 0; i < st.basis().trace_label_count(); ++i)
        for (int m = 0; m <= st.n_max(); ++m) t += weight(i, m) * st.at(i, m, m);
    return t;
}

}  // namespace detail

/// p(n) = sum_{q3} C^{n,n}_{N/2,q3,0}.
inline std::vector<double> photon_distribution(const CoefficientState& st) {
    std::vector<double> p(static_cast<size_t>(st.n_max()) + 1, 0.0);
    for (int m = 0; m <= st.n_max(); ++m) {
        Complex v{0.0, 0.0};
        for (int i = 0; i < st.basis().trace_label_count(); ++i) v += st.at(i, m, m);
        p[static_cast<size_t>(m)] = v.real();
    }
    return p;
}

inline constexpr double kG2PhotonFloor = 1e-8;

/// g2(0) = <adag adag a a> / <adag a>^2.
inline double g2_zero(const CoefficientState& st) {
    double n1 = 0.0, n2 = 0.0;
    for (int m = 0; m <= st.n_max(); ++m) {
        Complex v{0.0, 0.0};
        for (int i = 0; i < st.basis().trace_label_count(); ++i) v += st.at(i, m, m);
        n1 += m * v.real();
        n2 += m * (m - 1.0) * v.real();
    }
    if (n1 <= kG2PhotonFloor)
        throw UndefinedG2Error("mean photon number " + std::to_string(n1) +
                               " below the g2 floor " + std::to_string(kG2PhotonFloor));
    return n2 / (n1 * n1);
}

/// All Eq.-style expectation values computed by applying superoperator and
/// photon maps followed by the trace functional.
inline ObservableReport expectations(const CoefficientState& st) {
    ObservableReport r;
    const int n_atoms = st.atoms();
    r.trace = trace_of(st);

    for (int m = 0; m <= st.n_max(); ++m) {
        Complex v{0.0, 0.0};
        for (int i = 0; i < st.basis().trace_label_count(); ++i) v += st.at(i, m, m);
        r.mean_photon += m * v.real();
        r.photon_second_moment += m * (m - 1.0) * v.real();
    }
    r.field_amp = apply_photon(PhotonOp::LeftA, st).trace();

    // <sigma^3> = 2 Tr[Q3 rho] / N
    r.inversion = 2.0 * apply_superop({Family::Q, Part::Three}, st).trace().real() / n_atoms;

    // <sigma^+> = Tr[(M+ + N+) rho] / N
    {
        CoefficientState t = apply_superop({Family::M, Part::Plus}, st);
        t.data() += apply_superop({Family::N, Part::Plus}, st).data();
        r.spin_plus = t.trace() / static_cast<double>(n_atoms);
    }

    if (n_atoms >= 2) {
        // <sigma_j^3 sigma_k^3> = (4 Tr[(Q3^2 - Sigma3^2) rho] - N) / (N(N-1))
        CoefficientState q3q3 =
            apply_superop({Family::Q, Part::Three}, apply_superop({Family::Q, Part::Three}, st));
        CoefficientState s3s3 = apply_superop({Family::Sigma, Part::Three},
                                              apply_superop({Family::Sigma, Part::Three}, st));
        q3q3.data() -= s3s3.data();
        r.spin_zz = (4.0 * q3q3.trace().real() - n_atoms) /
                    (static_cast<double>(n_atoms) * (n_atoms - 1));

        // <sigma_j^+ sigma_k^-> = Tr[V-(M- + N-) rho - Q- rho] / (N(N-1))
        CoefficientState mn = apply_superop({Family::M, Part::Minus}, st);
        mn.data() += apply_superop({Family::N, Part::Minus}, st).data();
        CoefficientState v = apply_superop({Family::V, Part::Minus}, mn);
        v.data() -= apply_superop({Family::Q, Part::Minus}, st).data();
        r.spin_corr = v.trace() / (static_cast<double>(n_atoms) * (n_atoms - 1));
    }

    if (r.mean_photon > kG2PhotonFloor)
        r.g2_zero = r.photon_second_moment / (r.mean_photon * r.mean_photon);
    return r;
}

enum class CorrelationKind { FirstOrder, SecondOrder, SpinFirst, SpinSecond };

struct CorrelationSeries {
    CorrelationKind kind;
    std::vector<double> tau;      ///< uniform delay grid starting at 0
    std::vector<Complex> values;
};

struct CorrelationOptions {
    double stationarity_tol = 1e-6;
    /// Residual |L rho|/|rho| measured by the caller. Required when the
    /// evolution generator is restricted to a sector that cannot act on rho
    /// itself (e.g. first-order correlations use the charge -1 sector).
    std::optional<double> precomputed_residual;
    EvolveConfig evolve;
};

namespace detail {

inline CoefficientState mn_minus(const CoefficientState& st) {
    CoefficientState t = apply_superop({Family::M, Part::Minus}, st);
    t.data() += apply_superop({Family::N, Part::Minus}, st).data();
    return t;
}

inline CoefficientState mn_plus(const CoefficientState& st) {
    CoefficientState t = apply_superop({Family::M, Part::Plus}, st);
    t.data() += apply_superop({Family::N, Part::Plus}, st).data();
    return t;
}

}  // namespace detail

/// Two-time correlations by the regression rule: form the operator-valued
/// initial condition, propagate it for tau under the same generator, apply
/// the closing operator, and take the trace. The evolved object is not
/// trace-one and is never renormalized.
///
///   FirstOrder  : <adag(t+tau) a(t)>                    from a rho
///   SecondOrder : <adag(t) adag(t+tau) a(t+tau) a(t)>   from a rho adag
///   SpinFirst   : sum_{jk} <s_j^+(t+tau) s_k^-(t)>      from (M- + N-) rho
///   SpinSecond  : quadruple spin sum                    from V-(M- + N-) rho
inline CorrelationSeries correlation(const CoefficientState& rho, const SparseGenerator& gen,
                                     CorrelationKind kind, const std::vector<double>& tau_grid,
                                     const CorrelationOptions& opts = {}) {
    if (tau_grid.empty() || tau_grid.front() != 0.0)
        throw InvalidParameterError("tau grid must start at 0");
    for (size_t i = 1; i < tau_grid.size(); ++i)
        if (tau_grid[i] <= tau_grid[i - 1])
            throw InvalidParameterError("tau grid must be strictly increasing");

    double residual;
    if (opts.precomputed_residual) {
        residual = *opts.precomputed_residual;
    } else if (!gen.sector || gen.sector->charge == 0) {
        residual = steady_residual(gen, rho);
    } else {
        throw PreconditionError(
            "cannot verify stationarity against a sector-restricted generator; pass "
            "precomputed_residual");
    }
    if (residual > opts.stationarity_tol)
        throw PreconditionError("state is not stationary: |L rho|/|rho| = " +
                                std::to_string(residual) + " > " +
                                std::to_string(opts.stationarity_tol));

    CoefficientState object(rho.basis_ptr(), rho.n_max());
    switch (kind) {
        case CorrelationKind::FirstOrder:
            object = apply_photon(PhotonOp::LeftA, rho);
            break;
        case CorrelationKind::SecondOrder:
            object = apply_photon(PhotonOp::RightADag, apply_photon(PhotonOp::LeftA, rho));
            break;
        case CorrelationKind::SpinFirst:
            object = detail::mn_minus(rho);
            break;
        case CorrelationKind::SpinSecond:
            object = apply_superop({Family::V, Part::Minus}, detail::mn_minus(rho));
            break;
    }

    auto close = [&](const CoefficientState& st) -> Complex {
        switch (kind) {
            case CorrelationKind::FirstOrder:
                return apply_photon(PhotonOp::LeftADag, st).trace();
            case CorrelationKind::SecondOrder: {
                Complex v{0.0, 0.0};
                for (int m = 0; m <= st.n_max(); ++m)
                    for (int i = 0; i < st.basis().trace_label_count(); ++i)
                        v += static_cast<double>(m) * st.at(i, m, m);
                return v;
            }
            case CorrelationKind::SpinFirst:
                return detail::mn_plus(st).trace();
            case CorrelationKind::SpinSecond:
                return apply_superop({Family::V, Part::Minus}, detail::mn_minus(st)).trace();
        }
        return {};
    };

    CorrelationSeries series;
    series.kind = kind;
    series.tau = tau_grid;
    series.values.resize(tau_grid.size());
    series.values[0] = close(object);

    Vector y = gen.restrict(object);
    EvolveStats stats;
    size_t sample = 1;
    EvolveConfig cfg = opts.evolve;
    cfg.t_final = tau_grid.back();
    detail::integrate_adaptive(
        gen.mat, y, 0.0, tau_grid.back(), cfg, stats, [](double, const Vector&) {},
        [&](double, const Vector& v) { series.values[sample++] = close(gen.embed(v)); },
        std::span<const double>(tau_grid.data() + 1, tau_grid.size() - 1));
    if (sample != tau_grid.size())
        throw ConvergenceError("correlation sampling missed grid points");
    return series;
}

struct Spectrum {
    std::vector<double> omega;  ///< angular frequencies, symmetric about 0
    std::vector<double> power;  ///< normalized to unit peak
    double peak_value = 0.0;    ///< raw power at the peak, before normalization
};

/// Wiener-Khinchin power spectrum of a first-order correlation series via
/// the two-sided Hermitian extension g(-tau) = conj(g(tau)). The input must
/// have decayed to |g(tau_max)| <= 1e-3 |g(0)|. The extension is
/// zero-padded (at least fourfold) before the transform so that lineshapes
/// are resolved well below the natural bin spacing; evenness for real input
/// and the Parseval identity hold exactly on the padded grid.
inline Spectrum spectrum(const CorrelationSeries& series) {
    if (series.kind != CorrelationKind::FirstOrder && series.kind != CorrelationKind::SpinFirst)
        throw InvalidParameterError("spectrum expects a first-order correlation series");
    const size_t k = series.values.size();
    if (k < 4) throw InvalidParameterError("correlation series too short");
    const double g0 = std::abs(series.values.front());
    const double gend = std::abs(series.values.back());
    if (g0 > 0 && gend > 1e-3 * g0)
        throw WindowTooShortError("correlation decayed only to " + std::to_string(gend / g0) +
                                  " of its initial value; extend tau_max");
    const double dtau = series.tau[1] - series.tau[0];
    for (size_t i = 1; i + 1 < series.tau.size(); ++i)
        if (std::abs(series.tau[i + 1] - series.tau[i] - dtau) > 1e-9 * dtau)
            throw InvalidParameterError("tau grid must be uniform");

    // nonzero samples sit at tau = j dtau, j in [-(k-1), k-1]; the padded
    // length sets the frequency resolution 2 pi / (len dtau)
    const long nonzero = static_cast<long>(2 * k - 1);
    long len = std::max(4 * nonzero, long{2048});
    Spectrum sp;
    sp.omega.resize(static_cast<size_t>(len));
    sp.power.resize(static_cast<size_t>(len));
    const double dw = 2.0 * std::numbers::pi / (static_cast<double>(len) * dtau);
    const long half = len / 2;
    for (long jf = 0; jf < len; ++jf) {
        const long f = jf - half;
        Complex acc = series.values[0];
        for (long j = 1; j < static_cast<long>(k); ++j) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(f * j) /
                                 static_cast<double>(len);
            const Complex w{std::cos(phase), std::sin(phase)};
            // g(j) e^{-i w tau_j} + conj(g(j)) e^{+i w tau_j}
            acc += series.values[static_cast<size_t>(j)] * w +
                   std::conj(series.values[static_cast<size_t>(j)] * w);
        }
        sp.omega[static_cast<size_t>(jf)] = static_cast<double>(f) * dw;
        sp.power[static_cast<size_t>(jf)] = dtau * acc.real();
    }
    sp.peak_value = *std::max_element(sp.power.begin(), sp.power.end());
    if (sp.peak_value > 0)
        for (double& v : sp.power) v /= sp.peak_value;
    return sp;
}

/// Full width at half maximum of a spectrum by linear interpolation around
/// the global peak.
inline double spectrum_fwhm(const Spectrum& sp) {
    const auto it = std::max_element(sp.power.begin(), sp.power.end());
    const size_t peak = static_cast<size_t>(it - sp.power.begin());
    const double half = 0.5 * sp.power[peak];
    double left = sp.omega.front(), right = sp.omega.back();
    for (size_t i = peak; i-- > 0;) {
        if (sp.power[i] <= half) {
            const double f = (half - sp.power[i]) / (sp.power[i + 1] - sp.power[i]);
            left = sp.omega[i] + f * (sp.omega[i + 1] - sp.omega[i]);
            break;
        }
    }
    for (size_t i = peak + 1; i < sp.power.size(); ++i) {
        if (sp.power[i] <= half) {
            const double f = (sp.power[i - 1] - half) / (sp.power[i - 1] - sp.power[i]);
            right = sp.omega[i - 1] + f * (sp.omega[i] - sp.omega[i - 1]);
            break;
        }
    }
    return right - left;
}

}  // namespace su4

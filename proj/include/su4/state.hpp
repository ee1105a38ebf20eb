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
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <utility>

#include "su4/basis.hpp"
#include "su4/errors.hpp"

namespace su4 {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;

/// Density-operator coefficients C^{m,n}_b over (basis label b, photon bra m,
/// photon ket n). Layout: label index outermost, then m, then n, so the
/// (n_max+1)^2 photon entries of one label form a contiguous block.
class CoefficientState {
  public:
    CoefficientState(std::shared_ptr<const BasisTable> basis, int n_max)
        : basis_(std::move(basis)), n_max_(n_max) {
        if (n_max < 0) throw InvalidParameterError("n_max must be >= 0");
        data_ = Vector::Zero(static_cast<Eigen::Index>(basis_->size()) * photons() * photons());
    }

    const BasisTable& basis() const { return *basis_; }
    std::shared_ptr<const BasisTable> basis_ptr() const { return basis_; }
    int atoms() const { return basis_->atoms(); }
    int n_max() const { return n_max_; }
    int photons() const { return n_max_ + 1; }

    Eigen::Index dim() const { return data_.size(); }
    Vector& data() { return data_; }
    const Vector& data() const { return data_; }

    Eigen::Index flat(int label_index, int m, int n) const {
        return (static_cast<Eigen::Index>(label_index) * photons() + m) * photons() + n;
    }

    Complex& at(int label_index, int m, int n) { return data_[flat(label_index, m, n)]; }
    Complex at(int label_index, int m, int n) const { return data_[flat(label_index, m, n)]; }

    Complex coeff(const BasisLabel& b, int m, int n) const {
        const int i = basis_->index_of(b);
        return i < 0 ? Complex{0.0, 0.0} : at(i, m, n);
    }

    /// Tr[rho] = sum over q3 and m of C^{m,m}_{N/2,q3,0}. Only the first
    /// N+1 labels carry trace.
    Complex trace() const {
        Complex t{0.0, 0.0};
        for (int i = 0; i < basis_->trace_label_count(); ++i)
            for (int m = 0; m <= n_max_; ++m) t += at(i, m, m);
        return t;
    }

    /// Max deviation from the Hermiticity relation
    /// C^{m,n}_{q,q3,s3} = conj(C^{n,m}_{q,q3,-s3}).
    double hermiticity_residual() const {
        double r = 0.0;
        for (int i = 0; i < basis_->size(); ++i) {
            const int j = basis_->index_of(basis_->label(i).adjoint());
            for (int m = 0; m <= n_max_; ++m)
                for (int n = 0; n <= n_max_; ++n)
                    r = std::max(r, std::abs(at(i, m, n) - std::conj(at(j, n, m))));
        }
        return r;
    }

    /// rho -> (rho + rho^dag)/2 in coefficient space.
    CoefficientState hermitized() const {
        CoefficientState out(basis_, n_max_);
        for (int i = 0; i < basis_->size(); ++i) {
            const int j = basis_->index_of(basis_->label(i).adjoint());
            for (int m = 0; m <= n_max_; ++m)
                for (int n = 0; n <= n_max_; ++n)
                    out.at(i, m, n) = 0.5 * (at(i, m, n) + std::conj(at(j, n, m)));
        }
        out.truncation_loss = truncation_loss;
        return out;
    }

    /// Sum of |diagonal coefficients| at the photon truncation boundary,
    /// the quantity watched by the evolution truncation monitor.
    double boundary_population() const {
        double s = 0.0;
        for (int i = 0; i < basis_->trace_label_count(); ++i) s += std::abs(at(i, n_max_, n_max_));
        return s;
    }

    /// Accumulated |amplitude| dropped above n_max by photon raising maps.
    double truncation_loss = 0.0;

  private:
    std::shared_ptr<const BasisTable> basis_;
    int n_max_;
    Vector data_;
};

inline void check_same_shape(const CoefficientState& a, const CoefficientState& b) {
    if (a.atoms() != b.atoms() || a.n_max() != b.n_max())
        throw ShapeError("state shapes differ: N=" + std::to_string(a.atoms()) + ",n_max=" +
                         std::to_string(a.n_max()) + " vs N=" + std::to_string(b.atoms()) +
                         ",n_max=" + std::to_string(b.n_max()));
}

enum class InitialStateKind { AllGroundVacuum, AllExcitedVacuum, CustomDiagonal };

/// Prepare a product initial state in the photon vacuum.
///
/// CustomDiagonal takes weights p_k over the number k of excited atoms and
/// builds the symmetric mixture sum_k p_k P_{N/2, k-N/2, 0} |0><0|.
inline CoefficientState initial_state(InitialStateKind kind,
                                      std::shared_ptr<const BasisTable> basis, int n_max,
                                      const std::map<int, double>& diagonal_weights = {}) {
    CoefficientState st(std::move(basis), n_max);
    const int n = st.atoms();
    switch (kind) {
        case InitialStateKind::AllGroundVacuum:
            st.at(st.basis().index_of(BasisLabel{0, n, 0, 0}), 0, 0) = 1.0;
            break;
        case InitialStateKind::AllExcitedVacuum:
            st.at(st.basis().index_of(BasisLabel{n, 0, 0, 0}), 0, 0) = 1.0;
            break;
        case InitialStateKind::CustomDiagonal: {
            double total = 0.0;
            for (const auto& [k, p] : diagonal_weights) {
                if (k < 0 || k > n)
                    throw InvalidParameterError("diagonal weight index " + std::to_string(k) +
                                                " outside [0, N]");
                st.at(st.basis().index_of(BasisLabel{k, n - k, 0, 0}), 0, 0) = p;
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw InvalidParameterError("custom-diagonal weights sum to " +
                                            std::to_string(total) + ", expected 1");
            break;
        }
    }
    return st;
}

}  // namespace su4

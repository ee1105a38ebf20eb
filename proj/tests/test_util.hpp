#pragma once

#include <complex>
#include <random>

#include "su4/state.hpp"

namespace su4::testing {

inline CoefficientState random_state(std::shared_ptr<const BasisTable> basis, int n_max,
                                     unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    CoefficientState st(std::move(basis), n_max);
    for (Eigen::Index i = 0; i < st.dim(); ++i) st.data()[i] = Complex{dist(gen), dist(gen)};
    return st;
}

/// Random state obeying C^{m,n}_{q,q3,s3} = conj(C^{n,m}_{q,q3,-s3}).
inline CoefficientState random_hermitian_state(std::shared_ptr<const BasisTable> basis, int n_max,
                                               unsigned seed) {
    CoefficientState st = random_state(std::move(basis), n_max, seed);
    return st.hermitized();
}

/// Random physical state: Hermitian, trace one, positive semidefinite
/// (built as a mixture of products of random pure-ish diagonals would be
/// costly; instead evolve-free tests use hermitized + trace-normalized
/// states and tolerate small negativity).
inline CoefficientState random_trace_one_state(std::shared_ptr<const BasisTable> basis, int n_max,
                                               unsigned seed) {
    CoefficientState st = random_hermitian_state(std::move(basis), n_max, seed);
    const double tr = st.trace().real();
    if (std::abs(tr) > 1e-9) st.data() /= tr;
    return st;
}

}  // namespace su4::testing

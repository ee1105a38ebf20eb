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

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "su4/errors.hpp"

namespace su4 {

/// Largest supported atom count. The label lookup table is (N+1)^3 ints,
/// so this bound keeps a BasisTable under ~10 MB.
inline constexpr int kMaxAtoms = 128;

/// One symmetric basis element, stored by how many single-atom factors of
/// each kind enter the symmetrized product. The four kinds are the
/// single-atom density-matrix units |e><e|, |g><g|, |e><g|, |g><e|.
///
/// All derived quantum numbers are half-integers; they are exposed doubled
/// (two_q = 2q, ...) so that labels stay exact integers.
struct BasisLabel {
    int n_ee = 0;  ///< population-excited factors |e><e|
    int n_gg = 0;  ///< population-ground factors |g><g|
    int n_eg = 0;  ///< raising-coherence factors |e><g|
    int n_ge = 0;  ///< lowering-coherence factors |g><e|

    int atoms() const { return n_ee + n_gg + n_eg + n_ge; }

    int two_q() const { return n_ee + n_gg; }
    int two_q3() const { return n_ee - n_gg; }
    int two_sigma() const { return n_eg + n_ge; }
    int two_sigma3() const { return n_eg - n_ge; }
    int two_m() const { return n_ee + n_ge; }
    int two_m3() const { return n_ee - n_ge; }
    int two_n() const { return n_eg + n_gg; }
    int two_n3() const { return n_eg - n_gg; }
    int two_u() const { return n_ee + n_eg; }
    int two_u3() const { return n_ee - n_eg; }
    int two_v() const { return n_ge + n_gg; }
    int two_v3() const { return n_ge - n_gg; }

    /// Adjoint label: |e><g| and |g><e| factors swap (sigma3 -> -sigma3).
    BasisLabel adjoint() const { return {n_ee, n_gg, n_ge, n_eg}; }

    /// True when the symmetrized product has nonzero trace (no coherences).
    bool carries_trace() const { return n_eg == 0 && n_ge == 0; }

    bool valid() const {
        return n_ee >= 0 && n_gg >= 0 && n_eg >= 0 && n_ge >= 0 && atoms() >= 1;
    }

    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;

    std::string str() const {
        return "P(2q=" + std::to_string(two_q()) + ",2q3=" + std::to_string(two_q3()) +
               ",2s3=" + std::to_string(two_sigma3()) + ")";
    }
};

/// The twelve quantum numbers of a basis element, doubled to keep them
/// integral. Six SU(2) pairs (o, o3) with o in {q, sigma, m, n, u, v}.
struct QuantumNumbers {
    int two_q, two_q3;
    int two_sigma, two_sigma3;
    int two_m, two_m3;
    int two_n, two_n3;
    int two_u, two_u3;
    int two_v, two_v3;
};

inline QuantumNumbers labels_of(const BasisLabel& b) {
    return QuantumNumbers{
        b.two_q(),  b.two_q3(),  b.two_sigma(), b.two_sigma3(),
        b.two_m(),  b.two_m3(),  b.two_n(),     b.two_n3(),
        b.two_u(),  b.two_u3(),  b.two_v(),     b.two_v3(),
    };
}

/// Build a label from the doubled quantum numbers (2q, 2q3, 2sigma3) and the
/// atom count. Returns an invalid label (negative occupation) when the
/// triple is outside the allowed ranges for N atoms.
inline BasisLabel label_from_quantum_numbers(int atoms, int two_q, int two_q3, int two_sigma3) {
    BasisLabel b;
    b.n_ee = (two_q + two_q3) / 2;
    b.n_gg = (two_q - two_q3) / 2;
    const int rest = atoms - two_q;  // n_eg + n_ge
    b.n_eg = (rest + two_sigma3) / 2;
    b.n_ge = (rest - two_sigma3) / 2;
    if ((two_q + two_q3) % 2 != 0 || (rest + two_sigma3) % 2 != 0) {
        b.n_ee = -1;  // parity mismatch, mark invalid
    }
    return b;
}

/// Enumerated symmetric basis for N atoms with a dense index.
///
/// Ordering is lexicographic on (2q, 2q3, 2sigma3), each descending, which
/// places the N+1 trace-carrying labels (q = N/2, sigma3 = 0) at indices
/// 0..N with q3 = N/2, N/2-1, ..., -N/2.
class BasisTable {
  public:
    explicit BasisTable(int atoms) : atoms_(atoms) {
        if (atoms < 1 || atoms > kMaxAtoms) {
            throw InvalidParameterError("atom count must be in [1, " +
                                        std::to_string(kMaxAtoms) + "], got " +
                                        std::to_string(atoms));
        }
        const int n = atoms;
        labels_.reserve(static_cast<size_t>(n + 1) * (n + 2) * (n + 3) / 6);
        for (int ee = 0; ee <= n; ++ee)
            for (int gg = 0; gg + ee <= n; ++gg)
                for (int eg = 0; eg + gg + ee <= n; ++eg)
                    labels_.push_back(BasisLabel{ee, gg, eg, n - ee - gg - eg});
        std::sort(labels_.begin(), labels_.end(), [](const BasisLabel& a, const BasisLabel& b) {
            if (a.two_q() != b.two_q()) return a.two_q() > b.two_q();
            if (a.two_q3() != b.two_q3()) return a.two_q3() > b.two_q3();
            return a.two_sigma3() > b.two_sigma3();
        });
        lookup_.assign(static_cast<size_t>(n + 1) * (n + 1) * (n + 1), -1);
        for (size_t i = 0; i < labels_.size(); ++i) lookup_[key(labels_[i])] = static_cast<int>(i);
    }

    int atoms() const { return atoms_; }
    int size() const { return static_cast<int>(labels_.size()); }
    const BasisLabel& label(int i) const { return labels_[static_cast<size_t>(i)]; }
    const std::vector<BasisLabel>& labels() const { return labels_; }

    /// Dense index of a label, or -1 when the label does not belong to this
    /// table (wrong atom count or negative occupation).
    int index_of(const BasisLabel& b) const {
        if (b.n_ee < 0 || b.n_gg < 0 || b.n_eg < 0 || b.n_ge < 0 || b.atoms() != atoms_)
            return -1;
        return lookup_[key(b)];
    }

    /// Number of trace-carrying labels; they occupy indices 0..atoms().
    int trace_label_count() const { return atoms_ + 1; }

    static std::shared_ptr<const BasisTable> make(int atoms) {
        return std::make_shared<const BasisTable>(atoms);
    }

  private:
    size_t key(const BasisLabel& b) const {
        const size_t n1 = static_cast<size_t>(atoms_) + 1;
        return (static_cast<size_t>(b.n_ee) * n1 + static_cast<size_t>(b.n_gg)) * n1 +
               static_cast<size_t>(b.n_eg);
    }

    int atoms_;
    std::vector<BasisLabel> labels_;
    std::vector<int> lookup_;
};

/// Dimension of the symmetric basis, (N+1)(N+2)(N+3)/6.
inline std::int64_t basis_dimension(std::int64_t atoms) {
    return atoms >= 0 ? (atoms + 1) * (atoms + 2) * (atoms + 3) / 6 : 0;
}

}  // namespace su4

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

#include <cstdint>
#include <string>

#include "su4/basis.hpp"
#include "su4/errors.hpp"

namespace su4 {

/// Physical rates of the atoms-plus-cavity model, all in the same angular
/// frequency unit. delta is the light-atom detuning, omega the atom-cavity
/// coupling, kappa the cavity decay, gamma_decay / pump the individual
/// atomic decay and incoherent repump rates, and dephasing the 1/(2 T2)
/// elastic dephasing rate.
struct ModelParams {
    int atoms = 1;          ///< N
    double delta = 0.0;     ///< detuning
    double omega = 0.0;     ///< coupling strength
    double kappa = 0.0;     ///< cavity decay rate
    double gamma_decay = 0.0;  ///< atomic decay rate
    double pump = 0.0;      ///< incoherent repump rate w
    double dephasing = 0.0; ///< 1/(2 T2)
    int n_max = 0;          ///< photon truncation (highest retained Fock level)

    void validate() const {
        if (atoms < 1 || atoms > kMaxAtoms)
            throw InvalidParameterError("atoms must be in [1, " + std::to_string(kMaxAtoms) + "]");
        if (n_max < 0) throw InvalidParameterError("n_max must be >= 0");
        if (kappa < 0 || gamma_decay < 0 || pump < 0 || dephasing < 0)
            throw InvalidParameterError("rates kappa, gamma, w, dephasing must be >= 0");
    }

    bool dissipative() const {
        return kappa > 0 || gamma_decay > 0 || pump > 0 || dephasing > 0;
    }

    /// Flattened state dimension (basis size) * (n_max+1)^2.
    std::int64_t state_dimension() const {
        const std::int64_t p = n_max + 1;
        return basis_dimension(atoms) * p * p;
    }
};

}  // namespace su4

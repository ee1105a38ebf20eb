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

#include <stdexcept>
#include <string>

namespace su4 {

/// Base class for all su4sim errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A physical or configuration parameter is out of its valid range.
struct InvalidParameterError : Error {
    using Error::Error;
};

/// Two objects that must share dimensions (N, n_max, vector length) do not.
struct ShapeError : Error {
    using Error::Error;
};

/// The requested problem exceeds the configured memory budget.
struct CapacityError : Error {
    using Error::Error;
};

/// Photon population reached the truncation boundary beyond tolerance.
struct TruncationError : Error {
    using Error::Error;
};

/// The adaptive integrator underflowed its step size.
struct StiffnessError : Error {
    using Error::Error;
};

/// An iterative method exhausted its budget without reaching tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

/// The generator admits more than one steady state.
struct DegenerateSteadyStateError : Error {
    using Error::Error;
};

/// A density matrix failed a positivity or Hermiticity requirement.
struct UnphysicalStateError : Error {
    using Error::Error;
};

/// A correlation series did not decay enough for a meaningful transform.
struct WindowTooShortError : Error {
    using Error::Error;
};

/// g2(0) requested for a state with photon number below the guard floor.
struct UndefinedG2Error : Error {
    using Error::Error;
};

/// A run configuration file failed schema validation.
struct ConfigError : Error {
    using Error::Error;
};

/// An operation precondition (e.g. stationarity) was not met.
struct PreconditionError : Error {
    using Error::Error;
};

}  // namespace su4

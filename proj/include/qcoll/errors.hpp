// Copyright 2026 The qcoll Authors
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

namespace qcoll {

/// Operand sizes disagree (qubit counts, vector lengths, orbital counts).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition was violated by the caller.
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain where a numerical routine is defined.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Overlap matrix lost positive definiteness.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive integrator could not make progress.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive ansatz could not bring the McLachlan distance under threshold.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Too few quadrature nodes for the requested integral.
struct QuadratureResolutionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Internal invariant broken; indicates a bug rather than bad input.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace qcoll

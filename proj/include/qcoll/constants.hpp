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

namespace qcoll::constants {

// CODATA 2018 Hartree energy in eV.
inline constexpr double kHartreeEv = 27.211386;
// Proton mass in electron masses (CODATA 2018, rounded).
inline constexpr double kProtonMass = 1836.15267;
// Bohr radius squared in units of 1e-16 cm^2 (a0 = 0.529177211e-8 cm).
inline constexpr double kBohr2In1e16Cm2 = 0.280028561;

}  // namespace qcoll::constants

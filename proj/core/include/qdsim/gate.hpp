// Copyright 2026 The qdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>

#include "qdsim/matrix.hpp"

namespace qdsim {

inline constexpr std::size_t kQubitDim = 4;
inline constexpr double kCompensationTolerance = 1e-8;

// diag(1, 1, 1, -1)
UnitaryMatrix cz_gate();

// 4x4 block of a 16x16 evolution over the (1,1) charge states, in
// computational order |dd>, |du>, |ud>, |uu> (down = logical 0). Generally
// not unitary because of leakage out of the subspace.
UnitaryMatrix project_to_computational(const UnitaryMatrix& u16);

// Removes a global phase and one virtual Z per qubit so that the first three
// diagonal entries become real and positive. Throws CompensationDegenerate if
// |u4(k,k)| < kCompensationTolerance for k in {0, 1, 2}.
UnitaryMatrix phase_compensate(const UnitaryMatrix& u4);

// Same as phase_compensate but returns nullopt instead of throwing on a
// degenerate diagonal.
std::optional<UnitaryMatrix> try_phase_compensate(const UnitaryMatrix& u4);

struct FidelityReport {
  double fidelity = 0.0;
  double unitarity_trace = 0.0;  // Tr(U^dagger U)
  double overlap = 0.0;          // |Tr(U_target^dagger U)|^2
};

// F = [Tr(U^dagger U) + |Tr(U_target^dagger U)|^2] / (d (d + 1)), d = 4.
FidelityReport gate_fidelity(const UnitaryMatrix& u_final, const UnitaryMatrix& u_target);

// Project, compensate (falling back to the raw projection when compensation
// is degenerate) and score against `target`. This is the per-step fidelity
// used by the environment and by replay.
struct CompensatedGate {
  UnitaryMatrix gate;  // 4x4, compensated when possible
  bool compensated = true;
  FidelityReport report;
};
CompensatedGate evaluate_gate(const UnitaryMatrix& u16, const UnitaryMatrix& target);

}  // namespace qdsim

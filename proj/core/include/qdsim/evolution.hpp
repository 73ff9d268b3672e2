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

#include "qdsim/matrix.hpp"

namespace qdsim {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// exp(-i 2 pi H dt) with H in GHz (linear frequency) and dt in ns.
//
// Computed from the spectral decomposition of H. The sparsity pattern of H is
// split into connected components first and each block is diagonalized on
// its own; this is exact for any Hermitian input and keeps the Hubbard
// Hamiltonian (particle-number and spin conserving) down to blocks of size
// at most four. Throws NumericalError if an eigensolve fails to converge and
// ContractViolation if dt is not positive.
UnitaryMatrix evolve_step(const HermitianMatrix& h, double dt_ns);

// u_step * u_acc: the newest factor multiplies from the left.
UnitaryMatrix accumulate(const UnitaryMatrix& u_step, const UnitaryMatrix& u_acc);

}  // namespace qdsim

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

#include <array>
#include <cstddef>
#include <cstdint>

#include "qdsim/matrix.hpp"

namespace qdsim {

// Fock space of two dots with spin: four fermionic modes in the order
// (dot0 up, dot0 down, dot1 up, dot1 down). A basis index is the big-endian
// occupation bitstring, so mode 0 is the most significant bit.
inline constexpr std::size_t kNumModes = 4;
inline constexpr std::size_t kFockDim = std::size_t{1} << kNumModes;

enum class Spin : std::uint8_t { kUp = 0, kDown = 1 };

constexpr std::size_t mode_index(std::size_t dot, Spin spin) {
  return 2 * dot + static_cast<std::size_t>(spin);
}

constexpr bool occupied(std::size_t basis_state, std::size_t mode) {
  return ((basis_state >> (kNumModes - 1 - mode)) & 1U) != 0;
}

// Fock-space indices of the (1,1) charge states |down,down>, |down,up>,
// |up,down>, |up,up>; position in this array is the computational index.
inline constexpr std::array<std::size_t, 4> kComputationalStates = {5, 6, 9, 10};

struct ParamBounds {
  double eps_min = -750.0;
  double eps_max = 750.0;
  double tun_min = 0.0;
  double tun_max = 5.0;
};

// Controls and constants of the double-dot Hubbard model, all in GHz.
struct HamiltonianParams {
  std::array<double, 2> eps{0.0, 0.0};  // on-site energies
  double tun = 0.0;                     // tunnel coupling
  std::array<double, 2> u{0.0, 0.0};    // Hubbard repulsion
  std::array<double, 2> ez{0.0, 0.0};   // Zeeman splittings

  // Throws ContractViolation naming the first offending field.
  void validate(const ParamBounds& bounds = {}) const;
};

// H = H_eps + H_Z + H_U + H_T on the 16-dimensional Fock space. Tunneling is
// -t * sum_sigma (c+_{0 sigma} c_{1 sigma} + h.c.) with Jordan-Wigner signs.
HermitianMatrix build_hamiltonian(const HamiltonianParams& params,
                                  const ParamBounds& bounds = {});

// Applies c_mode (annihilate=true) or c+_mode to `basis_state`. Returns the
// Jordan-Wigner sign (+1/-1) and the new state, or sign 0 if the operator
// annihilates the state.
struct FermionAction {
  int sign = 0;
  std::size_t state = 0;
};
FermionAction apply_fermion(std::size_t basis_state, std::size_t mode, bool annihilate);

}  // namespace qdsim

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

#include "qdsim/hamiltonian.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qdsim/errors.hpp"

namespace qdsim {
namespace {

void require(bool ok, const std::string& field, double value) {
  if (!ok) {
    throw ContractViolation("HamiltonianParams." + field + " out of bounds: " +
                            std::to_string(value));
  }
}

}  // namespace

void HamiltonianParams::validate(const ParamBounds& bounds) const {
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string idx = "[" + std::to_string(i) + "]";
    require(std::isfinite(eps[i]) && eps[i] >= bounds.eps_min && eps[i] <= bounds.eps_max,
            "eps" + idx, eps[i]);
    require(std::isfinite(u[i]) && u[i] >= 0.0, "u" + idx, u[i]);
    require(std::isfinite(ez[i]) && ez[i] >= 0.0, "ez" + idx, ez[i]);
  }
  require(std::isfinite(tun) && tun >= bounds.tun_min && tun <= bounds.tun_max, "tun", tun);
}

FermionAction apply_fermion(std::size_t basis_state, std::size_t mode, bool annihilate) {
  if (occupied(basis_state, mode) != annihilate) {
    return {};
  }
  int parity = 0;
  for (std::size_t k = 0; k < mode; ++k) {
    parity += occupied(basis_state, k) ? 1 : 0;
  }
  const std::size_t bit = std::size_t{1} << (kNumModes - 1 - mode);
  return {parity % 2 == 0 ? 1 : -1, basis_state ^ bit};
}

HermitianMatrix build_hamiltonian(const HamiltonianParams& params, const ParamBounds& bounds) {
  params.validate(bounds);

  ComplexMatrix h = ComplexMatrix::Zero(kFockDim, kFockDim);
  for (std::size_t s = 0; s < kFockDim; ++s) {
    double diag = 0.0;
    for (std::size_t dot = 0; dot < 2; ++dot) {
      const bool up = occupied(s, mode_index(dot, Spin::kUp));
      const bool down = occupied(s, mode_index(dot, Spin::kDown));
      diag += params.eps[dot] * ((up ? 1.0 : 0.0) + (down ? 1.0 : 0.0));
      diag += 0.5 * params.ez[dot] * ((up ? 1.0 : 0.0) - (down ? 1.0 : 0.0));
      if (up && down) {
        diag += params.u[dot];
      }
    }
    h(s, s) = diag;
  }

  if (params.tun != 0.0) {
    for (Spin spin : {Spin::kUp, Spin::kDown}) {
      const std::size_t m0 = mode_index(0, spin);
      const std::size_t m1 = mode_index(1, spin);
      for (std::size_t s = 0; s < kFockDim; ++s) {
        // c+_{0 sigma} c_{1 sigma} and its conjugate c+_{1 sigma} c_{0 sigma}
        for (auto [from, to] : {std::pair{m1, m0}, std::pair{m0, m1}}) {
          const FermionAction a = apply_fermion(s, from, true);
          if (a.sign == 0) continue;
          const FermionAction c = apply_fermion(a.state, to, false);
          if (c.sign == 0) continue;
          h(c.state, s) += -params.tun * static_cast<double>(a.sign * c.sign);
        }
      }
    }
  }
  return HermitianMatrix(std::move(h), 0.0);
}

}  // namespace qdsim

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

#include "qdsim/gate.hpp"

#include <cmath>
#include <string>

#include "qdsim/errors.hpp"
#include "qdsim/hamiltonian.hpp"

namespace qdsim {

UnitaryMatrix cz_gate() {
  ComplexMatrix cz = ComplexMatrix::Identity(kQubitDim, kQubitDim);
  cz(3, 3) = -1.0;
  return UnitaryMatrix(std::move(cz));
}

UnitaryMatrix project_to_computational(const UnitaryMatrix& u16) {
  if (u16.dim() != kFockDim) {
    throw ContractViolation("project_to_computational expects a 16x16 matrix, got dim " +
                            std::to_string(u16.dim()));
  }
  ComplexMatrix p(kQubitDim, kQubitDim);
  for (std::size_t r = 0; r < kQubitDim; ++r) {
    for (std::size_t c = 0; c < kQubitDim; ++c) {
      p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          u16(kComputationalStates[r], kComputationalStates[c]);
    }
  }
  return UnitaryMatrix(std::move(p));
}

std::optional<UnitaryMatrix> try_phase_compensate(const UnitaryMatrix& u4) {
  if (u4.dim() != kQubitDim) {
    throw ContractViolation("phase_compensate expects a 4x4 matrix, got dim " +
                            std::to_string(u4.dim()));
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if (!(std::abs(u4(k, k)) >= kCompensationTolerance)) {
      return std::nullopt;
    }
  }
  const double phi00 = std::arg(u4(0, 0));
  const double phi01 = std::arg(u4(1, 1));
  const double phi10 = std::arg(u4(2, 2));
  // Row index 2a + b carries e^{i lambda_ab}, lambda linear in the qubit bits.
  Eigen::Vector4cd d;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double lambda = -(phi00 + a * (phi10 - phi00) + b * (phi01 - phi00));
      d(2 * a + b) = std::polar(1.0, lambda);
    }
  }
  return UnitaryMatrix(d.asDiagonal() * u4.matrix());
}

UnitaryMatrix phase_compensate(const UnitaryMatrix& u4) {
  auto out = try_phase_compensate(u4);
  if (!out) {
    throw CompensationDegenerate(
        "phase_compensate: a diagonal entry among |00>,|01>,|10> has magnitude below " +
        std::to_string(kCompensationTolerance));
  }
  return *std::move(out);
}

FidelityReport gate_fidelity(const UnitaryMatrix& u_final, const UnitaryMatrix& u_target) {
  if (u_final.dim() != kQubitDim || u_target.dim() != kQubitDim) {
    throw ContractViolation("gate_fidelity expects 4x4 matrices");
  }
  FidelityReport r;
  r.unitarity_trace = u_final.matrix().squaredNorm();
  r.overlap = std::norm((u_target.matrix().adjoint() * u_final.matrix()).trace());
  constexpr double d = static_cast<double>(kQubitDim);
  r.fidelity = (r.unitarity_trace + r.overlap) / (d * (d + 1.0));
  return r;
}

CompensatedGate evaluate_gate(const UnitaryMatrix& u16, const UnitaryMatrix& target) {
  UnitaryMatrix projected = project_to_computational(u16);
  auto compensated = try_phase_compensate(projected);
  CompensatedGate out{compensated ? *std::move(compensated) : std::move(projected),
                      compensated.has_value(), {}};
  out.report = gate_fidelity(out.gate, target);
  return out;
}

}  // namespace qdsim

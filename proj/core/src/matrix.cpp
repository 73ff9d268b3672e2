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

#include "qdsim/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qdsim/errors.hpp"

namespace qdsim {

HermitianMatrix::HermitianMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw ContractViolation("HermitianMatrix must be square and non-empty, got " +
                            std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= tol * scale)) {
    throw ContractViolation("matrix is not Hermitian (max |H - H^dagger| = " +
                            std::to_string(asym) + ")");
  }
}

HermitianMatrix HermitianMatrix::zero(std::size_t dim) {
  return HermitianMatrix(ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                             static_cast<Eigen::Index>(dim)));
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw ContractViolation("UnitaryMatrix must be square and non-empty, got " +
                            std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
  return UnitaryMatrix(ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                               static_cast<Eigen::Index>(dim)));
}

double unitarity_error(const ComplexMatrix& u) {
  const ComplexMatrix gram = u.adjoint() * u;
  return (gram - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace qdsim

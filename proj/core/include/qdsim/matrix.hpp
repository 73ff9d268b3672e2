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

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace qdsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

// Square complex Hermitian matrix, entries in GHz.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  // Throws ContractViolation if `m` is not square or not Hermitian to
  // `tol` (relative to the largest entry).
  explicit HermitianMatrix(ComplexMatrix m, double tol = 1e-12);

  static HermitianMatrix zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

 private:
  ComplexMatrix m_;
};

// Square complex matrix produced by time evolution. Unitary when it comes out
// of evolve_step/accumulate; projection to the computational subspace keeps
// the type but may break unitarity (leakage).
class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;
  // Throws ContractViolation if `m` is not square.
  explicit UnitaryMatrix(ComplexMatrix m);

  static UnitaryMatrix identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

 private:
  ComplexMatrix m_;
};

// max_{jk} |(U^dagger U - I)_{jk}|
double unitarity_error(const ComplexMatrix& u);

}  // namespace qdsim

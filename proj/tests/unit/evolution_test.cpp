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

#include "qdsim/evolution.hpp"

#include <gtest/gtest.h>

#include <random>

#include "qdsim/errors.hpp"
#include "qdsim/hamiltonian.hpp"
#include "test_support.hpp"

namespace qdsim {
namespace {

using testing::max_abs_diff;

const Complex kI{0.0, 1.0};

TEST(Evolution, ZeroHamiltonianGivesIdentity) {
  const UnitaryMatrix u = evolve_step(HermitianMatrix::zero(16), 1.0);
  EXPECT_EQ(max_abs_diff(u.matrix(), ComplexMatrix::Identity(16, 16)), 0.0);
}

TEST(Evolution, DiagonalPhaseByHand) {
  ComplexMatrix h = ComplexMatrix::Zero(16, 16);
  h(6, 6) = 240.65;
  const UnitaryMatrix u = evolve_step(HermitianMatrix(h), 1.0);
  // 240.65 cycles: only the 0.65 remainder matters
  EXPECT_NEAR(u(6, 6).real(), -0.5877852522924731, 1e-9);
  EXPECT_NEAR(u(6, 6).imag(), 0.8090169943749474, 1e-9);
  EXPECT_EQ(u(0, 0), Complex(1.0, 0.0));
}

TEST(Evolution, AgreesWithTaylorSeriesForSmallNorm) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    // 2 pi ||H|| dt < 0.1 in the induced max-row-sum norm
    const ComplexMatrix h = testing::random_hermitian(rng, 16, 0.1 / (kTwoPi * 16.0 * 1.5));
    const double dt = 0.9;
    const ComplexMatrix oracle = testing::taylor_exp(-kI * kTwoPi * dt * h, 20);
    EXPECT_LT(max_abs_diff(evolve_step(HermitianMatrix(h), dt).matrix(), oracle), 1e-10);
  }
}

TEST(Evolution, AgreesWithScaledTaylorOnPhysicalHamiltonians) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> eps(-750.0, 750.0), tun(0.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    HamiltonianParams p;
    p.eps = {eps(rng), eps(rng)};
    p.tun = tun(rng);
    p.u = {845.2, 845.2};
    p.ez = {18.4, 19.7};
    const HermitianMatrix h = build_hamiltonian(p);
    const ComplexMatrix oracle = testing::scaled_taylor_exp(-kI * kTwoPi * h.matrix());
    EXPECT_LT(max_abs_diff(evolve_step(h, 1.0).matrix(), oracle), 1e-8);
  }
}

TEST(EvolutionProperty, UnitaryForLargeRandomHermitian) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix h = testing::random_hermitian(rng, 16, 1000.0);
    EXPECT_LT(unitarity_error(evolve_step(HermitianMatrix(h), 1.0).matrix()), 1e-10);
  }
}

TEST(EvolutionProperty, DenseBlockMatchesSpectralOracle) {
  // A dense matrix is one block; compare against the eigendecomposition
  // reconstructed independently from the Taylor oracle.
  std::mt19937_64 rng(24);
  const ComplexMatrix h = testing::random_hermitian(rng, 8, 3.0);
  const ComplexMatrix oracle = testing::scaled_taylor_exp(-kI * kTwoPi * 0.5 * h);
  EXPECT_LT(max_abs_diff(evolve_step(HermitianMatrix(h), 0.5).matrix(), oracle), 1e-9);
}

TEST(Evolution, RejectsNonPositiveStep) {
  EXPECT_THROW(evolve_step(HermitianMatrix::zero(4), 0.0), ContractViolation);
  EXPECT_THROW(evolve_step(HermitianMatrix::zero(4), -1.0), ContractViolation);
}

TEST(Evolution, HermitianCheckRejectsAsymmetricInput) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianMatrix{m}, ContractViolation);
  EXPECT_THROW(HermitianMatrix{ComplexMatrix::Zero(2, 3)}, ContractViolation);
}

TEST(Accumulate, IdentityFactors) {
  std::mt19937_64 rng(25);
  const UnitaryMatrix u(testing::random_unitary(rng, 16));
  const UnitaryMatrix id = UnitaryMatrix::identity(16);
  EXPECT_EQ(max_abs_diff(accumulate(id, u).matrix(), u.matrix()), 0.0);
  EXPECT_EQ(max_abs_diff(accumulate(u, id).matrix(), u.matrix()), 0.0);
}

TEST(Accumulate, ProductOfRandomUnitariesIsUnitaryAndOrdered) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = testing::random_unitary(rng, 16);
    const ComplexMatrix b = testing::random_unitary(rng, 16);
    const UnitaryMatrix p = accumulate(UnitaryMatrix(a), UnitaryMatrix(b));
    EXPECT_LT(unitarity_error(p.matrix()), 1e-10);
    EXPECT_LT(max_abs_diff(p.matrix(), a * b), 1e-12);
  }
}

TEST(Accumulate, RejectsDimensionMismatch) {
  EXPECT_THROW(accumulate(UnitaryMatrix::identity(4), UnitaryMatrix::identity(16)),
               ContractViolation);
}

}  // namespace
}  // namespace qdsim

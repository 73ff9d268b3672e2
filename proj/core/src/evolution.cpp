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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qdsim/errors.hpp"

namespace qdsim {
namespace {

// Connected components of the graph with an edge j-k whenever H(j,k) != 0.
std::vector<std::vector<Eigen::Index>> coupled_blocks(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      if (h(j, k) != Complex{0.0, 0.0} || h(k, j) != Complex{0.0, 0.0}) {
        const Eigen::Index a = find(j);
        const Eigen::Index b = find(k);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> block_of(static_cast<std::size_t>(n), -1);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index root = find(j);
    auto& slot = block_of[static_cast<std::size_t>(root)];
    if (slot < 0) {
      slot = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot)].push_back(j);
  }
  return blocks;
}

}  // namespace

UnitaryMatrix evolve_step(const HermitianMatrix& h, double dt_ns) {
  if (!(dt_ns > 0.0) || !std::isfinite(dt_ns)) {
    throw ContractViolation("evolve_step: dt must be positive and finite, got " +
                            std::to_string(dt_ns));
  }
  const ComplexMatrix& hm = h.matrix();
  const Eigen::Index n = hm.rows();
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  const double scale = -kTwoPi * dt_ns;

  for (const auto& block : coupled_blocks(hm)) {
    const auto b = static_cast<Eigen::Index>(block.size());
    if (b == 1) {
      const Eigen::Index j = block.front();
      u(j, j) = std::polar(1.0, scale * hm(j, j).real());
      continue;
    }
    ComplexMatrix sub(b, b);
    for (Eigen::Index r = 0; r < b; ++r) {
      for (Eigen::Index c = 0; c < b; ++c) {
        sub(r, c) = hm(block[static_cast<std::size_t>(r)], block[static_cast<std::size_t>(c)]);
      }
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sub);
    if (solver.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "evolve_step: eigensolver failed on a " << b << "x" << b
          << " block (Eigen info " << static_cast<int>(solver.info())
          << ", max |H| = " << sub.cwiseAbs().maxCoeff() << ", QL iteration limit "
          << Eigen::SelfAdjointEigenSolver<ComplexMatrix>::m_maxIterations << " per eigenvalue)";
      throw NumericalError(msg.str());
    }
    const ComplexMatrix& v = solver.eigenvectors();
    Eigen::VectorXcd phases(b);
    for (Eigen::Index k = 0; k < b; ++k) {
      phases(k) = std::polar(1.0, scale * solver.eigenvalues()(k));
    }
    const ComplexMatrix sub_u = v * phases.asDiagonal() * v.adjoint();
    for (Eigen::Index r = 0; r < b; ++r) {
      for (Eigen::Index c = 0; c < b; ++c) {
        u(block[static_cast<std::size_t>(r)], block[static_cast<std::size_t>(c)]) = sub_u(r, c);
      }
    }
  }
  return UnitaryMatrix(std::move(u));
}

UnitaryMatrix accumulate(const UnitaryMatrix& u_step, const UnitaryMatrix& u_acc) {
  if (u_step.dim() != u_acc.dim()) {
    throw ContractViolation("accumulate: dimension mismatch " + std::to_string(u_step.dim()) +
                            " vs " + std::to_string(u_acc.dim()));
  }
  return UnitaryMatrix(u_step.matrix() * u_acc.matrix());
}

}  // namespace qdsim

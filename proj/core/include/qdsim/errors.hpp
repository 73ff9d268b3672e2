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

#include <stdexcept>
#include <string>

namespace qdsim {

// A caller broke an operation's precondition (bad dimension, out-of-range
// parameter, stepping a finished episode, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Floating-point machinery failed (eigensolver did not converge, NaN/Inf
// gradients, non-finite PPO ratio).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The diagonal of a projected gate is too small to read single-qubit phases
// from.
class CompensationDegenerate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid experiment configuration / input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdsim

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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qdsim/mlp.hpp"

namespace qdsim::nn {

// Text checkpoint, format version 1:
//
//   qdsim-checkpoint 1
//   mlp <name> <in> <hidden> <hidden> <out>
//   <values: W1 b1 W2 b2 W3 b3, W row-major, whitespace separated>
//   vector <name> <length>
//   <values>
//
// Any number of mlp/vector sections in any order; names are unique tokens
// without whitespace. Values are written with 17 significant digits.
struct Checkpoint {
  std::map<std::string, MlpParameters> networks;
  std::map<std::string, std::vector<double>> vectors;
};

inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(std::ostream& out, const Checkpoint& ckpt);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
// Throws ConfigError on a bad header, unknown version or truncated data.
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace qdsim::nn

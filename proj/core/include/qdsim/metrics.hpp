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

#include <cstdint>
#include <string>
#include <string_view>

#include "qdsim/ppo.hpp"
#include "qdsim/td.hpp"

namespace qdsim::cli {

// One JSON object per line. Metrics records carry only seed-determined
// values so repeated runs produce identical files; wall-clock time goes into
// the separate timing stream keyed by the same index.
std::string episode_record(std::uint64_t seed, std::string_view algorithm,
                           const rl::EpisodeStats& stats);
std::string iteration_record(std::uint64_t seed, const rl::IterationStats& stats);
std::string timing_record(int index, double wall_ms);

}  // namespace qdsim::cli

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

#include "qdsim/environment.hpp"

#include <gtest/gtest.h>

#include <array>
#include <random>
#include <vector>

#include "qdsim/errors.hpp"
#include "qdsim/evolution.hpp"
#include "qdsim/gate.hpp"
#include "qdsim/replay.hpp"

namespace qdsim::env {
namespace {

// action index of (eps0, eps1, tun) digits
int action_of(int d0, int d1, int d2) { return d0 + 3 * d1 + 9 * d2; }

bool same_result(const StepResult& a, const StepResult& b) {
  return a.observation.features == b.observation.features && a.reward == b.reward &&
         a.terminated == b.terminated && a.truncated == b.truncated &&
         a.info.fidelity == b.info.fidelity && a.info.controls == b.info.controls &&
         a.info.boundary_hit == b.info.boundary_hit && a.info.step_size == b.info.step_size &&
         a.info.gate_duration_ns == b.info.gate_duration_ns;
}

TEST(Reset, DefaultObservation) {
  GateEnv env{EnvConfig{}};
  const EnvObservation obs = env.reset(7);
  ASSERT_EQ(obs.features.size(), 33U);
  EXPECT_NEAR(obs.features.back(), 0.4, 1e-12);
  EXPECT_EQ(env.controls(), (Controls{170.0, 70.0, 2.5}));
  EXPECT_EQ(env.step_size(), 1.0);
  EXPECT_EQ(env.reset(7).features, obs.features);
}

TEST(Reset, FullObservationMode) {
  EnvConfig cfg;
  cfg.obs_mode = ObsMode::kFull16;
  GateEnv env{cfg};
  EXPECT_EQ(env.reset().features.size(), 513U);
  EXPECT_EQ(cfg.observation_size(), 513U);
}

TEST(DecodeAction, Examples) {
  EXPECT_EQ(decode_action(0, 1.0), (ControlDelta{0, 0, 0}));
  EXPECT_EQ(decode_action(5, 0.1), (ControlDelta{-0.1, 0.1, 0}));
  EXPECT_EQ(decode_action(26, 0.01), (ControlDelta{-0.01, -0.01, -0.01}));
  EXPECT_THROW(decode_action(27, 1.0), ContractViolation);
  EXPECT_THROW(decode_action(-1, 1.0), ContractViolation);
}

TEST(DecodeAction, EnumeratesAllSignPermutations) {
  std::vector<ControlDelta> seen;
  for (int a = 0; a < 27; ++a) {
    const ControlDelta d = decode_action(a, 1.0);
    for (const ControlDelta& s : seen) EXPECT_FALSE(s == d);
    seen.push_back(d);
  }
}

TEST(ComputeReward, Examples) {
  const EnvConfig cfg;
  EXPECT_EQ(compute_reward(cfg, 0.5, false, false), -1.0);
  EXPECT_EQ(compute_reward(cfg, 0.7, true, false), -2.0);
  EXPECT_NEAR(compute_reward(cfg, 0.9995, false, true), 498.75, 1e-12);
  EXPECT_NEAR(compute_reward(cfg, 0.995, false, true), -1.0 + 99.5, 1e-12);
}

TEST(StepDiscrete, NoChangeAction) {
  GateEnv env{EnvConfig{}};
  env.reset();
  const StepResult r = env.step_discrete(0);
  EXPECT_EQ(r.info.controls, (Controls{170.0, 70.0, 2.5}));
  EXPECT_EQ(r.reward, -1.0);
  EXPECT_FALSE(r.info.boundary_hit);
  EXPECT_EQ(r.info.gate_duration_ns, 1.0);
  EXPECT_NE(r.info.fidelity, 0.4);  // evolved for 1 ns
  EXPECT_EQ(r.observation.features.back(), r.info.fidelity);
}

TEST(StepDiscrete, TunnelClipsAtZero) {
  EnvConfig cfg;
  cfg.tun_init = 0.5;
  GateEnv env{cfg};
  env.reset();
  const StepResult r = env.step_discrete(action_of(0, 0, 2));
  EXPECT_EQ(r.info.controls.tun, 0.0);
  EXPECT_TRUE(r.info.boundary_hit);
  EXPECT_EQ(r.reward, -2.0);
}

TEST(StepDiscrete, TruncatesAtStepCap) {
  EnvConfig cfg;
  cfg.tun_init = 0.0;  // no exchange: fidelity stays far from CZ
  GateEnv env{cfg};
  env.reset();
  StepResult r;
  for (int k = 0; k < 200; ++k) {
    ASSERT_FALSE(env.finished());
    r = env.step_discrete(0);
  }
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.terminated);
  EXPECT_TRUE(env.finished());
  EXPECT_THROW(env.step_discrete(0), ContractViolation);
}

TEST(StepDiscrete, TerminatesAboveThresholdAndRejectsFurtherSteps) {
  GateEnv env{EnvConfig{}};
  env.reset();
  StepResult r;
  while (!env.finished()) r = env.step_discrete(0);
  // constant default pulse crosses 0.99 well before the cap
  EXPECT_TRUE(r.terminated);
  EXPECT_GT(r.info.fidelity, 0.99);
  EXPECT_NEAR(r.reward, compute_reward(env.config(), r.info.fidelity, false, true), 0.0);
  EXPECT_THROW(env.step_discrete(0), ContractViolation);
}

TEST(StepDiscrete, StepBeforeResetIsRejected) {
  GateEnv env{EnvConfig{}};
  EXPECT_THROW(env.step_discrete(0), ContractViolation);
}

TEST(StepContinuous, MapsToAbsoluteControls) {
  GateEnv env{EnvConfig{}};
  env.reset();
  const std::array<double, 3> mid{0.0, 0.0, 0.0};
  EXPECT_EQ(env.step_continuous(mid).info.controls, (Controls{0.0, 0.0, 2.5}));
  env.reset();
  const std::array<double, 3> ends{1.0, -1.0, 1.0};
  const StepResult r = env.step_continuous(ends);
  EXPECT_EQ(r.info.controls, (Controls{750.0, -750.0, 5.0}));
  EXPECT_FALSE(r.info.boundary_hit);
}

TEST(StepContinuous, ClipsOutOfRangeAction) {
  GateEnv env{EnvConfig{}};
  env.reset();
  const std::array<double, 3> a{0.0, 0.0, 1.7};
  const StepResult r = env.step_continuous(a);
  EXPECT_EQ(r.info.controls.tun, 5.0);
  EXPECT_TRUE(r.info.boundary_hit);
  EXPECT_EQ(r.reward, -2.0);
}

TEST(StepContinuous, RejectsBadActions) {
  GateEnv env{EnvConfig{}};
  env.reset();
  const std::array<double, 2> short_action{0.0, 0.0};
  EXPECT_THROW(env.step_continuous(short_action), ContractViolation);
  const std::array<double, 3> nan_action{0.0, std::nan(""), 0.0};
  EXPECT_THROW(env.step_continuous(nan_action), ContractViolation);
}

TEST(ExportSchedule, RecordsEveryStep) {
  GateEnv env{EnvConfig{}};
  env.reset();
  env.step_discrete(0);
  PulseSchedule s = env.export_schedule();
  ASSERT_EQ(s.size(), 1U);
  EXPECT_EQ(s.records[0], (PulseRecord{0, {170.0, 70.0, 2.5}}));
  env.step_discrete(action_of(1, 2, 0));
  env.step_discrete(action_of(1, 2, 0));
  s = env.export_schedule();
  ASSERT_EQ(s.size(), 3U);
  EXPECT_EQ(s.records[2].step, 2);
  EXPECT_EQ(env.reset().features.size(), 33U);
  EXPECT_TRUE(env.export_schedule().empty());
}

TEST(EnvConfig, ValidationNamesField) {
  EnvConfig cfg;
  cfg.max_steps = 0;
  try {
    cfg.validate();
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("max_steps"), std::string::npos);
  }
  cfg = EnvConfig{};
  cfg.tun_init = 9.0;
  EXPECT_THROW(GateEnv{cfg}, ContractViolation);
}

TEST(EnvProperty, ControlContainmentUnderFuzz) {
  EnvConfig cfg;
  cfg.f_terminal = 0.999999;  // keep episodes long
  cfg.f_bonus = 0.999999;
  GateEnv env{cfg};
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> pick(0, 26);
  std::normal_distribution<double> cont(0.0, 1.5);
  env.reset();
  for (int k = 0; k < 10000; ++k) {
    if (env.finished()) env.reset();
    StepResult r;
    if (k % 2 == 0) {
      r = env.step_discrete(pick(rng));
    } else {
      const std::array<double, 3> a{cont(rng), cont(rng), cont(rng)};
      r = env.step_continuous(a);
    }
    const Controls& c = r.info.controls;
    ASSERT_GE(c.eps0, -750.0);
    ASSERT_LE(c.eps0, 750.0);
    ASSERT_GE(c.eps1, -750.0);
    ASSERT_LE(c.eps1, 750.0);
    ASSERT_GE(c.tun, 0.0);
    ASSERT_LE(c.tun, 5.0);
  }
}

TEST(EnvProperty, DeterministicAcrossInstances) {
  std::mt19937_64 rng(52);
  std::uniform_int_distribution<int> pick(0, 26);
  std::vector<int> actions(200);
  for (int& a : actions) a = pick(rng);
  GateEnv a{EnvConfig{}}, b{EnvConfig{}};
  a.reset(3);
  b.reset(3);
  for (int act : actions) {
    if (a.finished()) break;
    ASSERT_TRUE(same_result(a.step_discrete(act), b.step_discrete(act)));
  }
}

TEST(EnvProperty, DurationRewardAndStepSizeInvariants) {
  EnvConfig cfg;
  cfg.f_terminal = 0.9999;
  cfg.f_bonus = 0.9999;
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> pick(0, 26);
  GateEnv env{cfg};
  bool saw_small_step = false;
  for (int episode = 0; episode < 20; ++episode) {
    env.reset(episode);
    double prev_step = env.step_size();
    int steps = 0;
    while (!env.finished()) {
      // bias toward the no-change action so the exchange phase accumulates
      const int a = (pick(rng) < 20) ? 0 : pick(rng);
      const StepResult r = env.step_discrete(a);
      ++steps;
      EXPECT_EQ(r.info.gate_duration_ns, steps * 1.0);
      EXPECT_EQ(r.reward,
                compute_reward(cfg, r.info.fidelity, r.info.boundary_hit, r.terminated));
      EXPECT_TRUE(r.info.step_size == 1.0 || r.info.step_size == 0.1 || r.info.step_size == 0.01);
      EXPECT_LE(r.info.step_size, prev_step);
      EXPECT_LE(env.step_size(), r.info.step_size);
      prev_step = r.info.step_size;
      if (env.step_size() < 1.0) saw_small_step = true;
    }
  }
  EXPECT_TRUE(saw_small_step);
}

TEST(EnvProperty, ReplayReproducesEpisodeFidelity) {
  std::mt19937_64 rng(54);
  std::uniform_int_distribution<int> pick(0, 26);
  GateEnv env{EnvConfig{}};
  for (int episode = 0; episode < 10; ++episode) {
    env.reset();
    StepResult r;
    while (!env.finished()) r = env.step_discrete(pick(rng));
    const cli::ReplayResult replay = cli::run_replay(env.export_schedule(), env.config());
    EXPECT_NEAR(replay.final.fidelity, r.info.fidelity, 1e-12);
    EXPECT_LT(unitarity_error(env.accumulated().matrix()), 1e-10);
  }
}

}  // namespace
}  // namespace qdsim::env

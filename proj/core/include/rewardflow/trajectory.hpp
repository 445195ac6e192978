#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rewardflow/env.hpp"

namespace rewardflow {

struct Transition {
  EnvState state;
  std::string action;
  EnvState next_state;
  bool valid = false;
  // Natural-log probability of `action` under the sampling policy.
  double log_prob_old = 0.0;
  int step_index = 0;
  // Key the sampling policy conditioned on. After an invalid step the
  // observation is the invalid sentinel, but the agent still knows where it
  // is, so the key is that of the last real observation.
  std::string policy_key;
};

struct Trajectory {
  std::vector<Transition> transitions;
  double terminal_reward = 0.0;
  bool truncated = false;
  int rollout_index = 0;

  bool succeeded() const {
    return terminal_reward > 0.0 && !transitions.empty() && transitions.back().next_state.is_success;
  }
};

struct RolloutGroup {
  std::string task_id;
  std::vector<Trajectory> trajectories;
  std::uint64_t sampling_seed = 0;
};

}  // namespace rewardflow

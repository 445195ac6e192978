#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rewardflow/canonical.hpp"
#include "rewardflow/env.hpp"
#include "rewardflow/policy.hpp"
#include "rewardflow/trajectory.hpp"

namespace rewardflow {

struct RolloutOptions {
  int group_size = 8;
  int max_steps = 15;
  // Argmax instead of sampling. Every rollout of a group is then identical.
  bool greedy = false;
  // Decides the key the policy conditions on (see agent_key).
  CanonicalOptions canonical{};
};

// One episode from a copy of `initial`. `stream_seed` fully determines the
// sampled actions.
Trajectory run_episode(const Environment& initial, const PolicyTable& policy, const RolloutOptions& options,
                       std::uint64_t stream_seed, int rollout_index = 0);

// G episodes from the same s_0; rollout i draws from derive_seed({seed, i}).
// The policy's temperature is the sampling temperature.
RolloutGroup sample_group(const Environment& initial, const PolicyTable& policy, const RolloutOptions& options,
                          std::uint64_t seed, std::string task_id = {});
RolloutGroup sample_group(const EnvSpec& spec, const PolicyTable& policy, const RolloutOptions& options,
                          std::uint64_t seed);

struct UniqueCounts {
  std::size_t total_states = 0;
  std::size_t unique_states = 0;
  std::size_t total_actions = 0;
  // Distinct (canonical pre-state, action) pairs.
  std::size_t unique_actions = 0;
};

// Visit counts versus distinct canonical states/actions over a group.
UniqueCounts count_unique(const RolloutGroup& group, const CanonicalOptions& options = {});

}  // namespace rewardflow

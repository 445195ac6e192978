#include "rewardflow/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rewardflow/errors.hpp"
#include "rewardflow/rng.hpp"

namespace rewardflow {

Trajectory run_episode(const Environment& initial, const PolicyTable& policy, const RolloutOptions& options,
                       std::uint64_t stream_seed, int rollout_index) {
  if (options.max_steps < 1) throw UsageError("max_steps must be >= 1");
  std::unique_ptr<Environment> env = initial.clone();
  Rng rng(stream_seed);
  Trajectory traj;
  traj.rollout_index = rollout_index;

  EnvState state = env->state();
  std::string last_real = state.observation;
  Annotations annotations;
  for (int t = 0; t < options.max_steps && !state.is_terminal; ++t) {
    std::string key = options.canonical.normalize ? annotations.apply(last_real) : last_real;
    const auto choice = options.greedy ? policy.greedy(key, state.admissible_actions)
                                       : policy.act(key, state.admissible_actions, rng);
    std::string action = state.admissible_actions[choice.index];
    StepResult result = env->step(action);
    if (result.valid) {
      annotations.record(action, options.canonical.rules);
      last_real = result.state.observation;
    }
    Transition tr;
    tr.state = std::move(state);
    tr.action = std::move(action);
    tr.next_state = result.state;
    tr.valid = result.valid;
    tr.log_prob_old = choice.log_prob;
    tr.step_index = t;
    tr.policy_key = std::move(key);
    traj.transitions.push_back(std::move(tr));
    state = std::move(result.state);
  }
  traj.terminal_reward = state.is_success ? 1.0 : 0.0;
  traj.truncated = !state.is_terminal;
  return traj;
}

RolloutGroup sample_group(const Environment& initial, const PolicyTable& policy, const RolloutOptions& options,
                          std::uint64_t seed, std::string task_id) {
  if (options.group_size < 1) throw UsageError("group size must be >= 1");
  RolloutGroup group;
  group.task_id = std::move(task_id);
  group.sampling_seed = seed;
  group.trajectories.reserve(static_cast<std::size_t>(options.group_size));
  for (int i = 0; i < options.group_size; ++i) {
    group.trajectories.push_back(
        run_episode(initial, policy, options, derive_seed({seed, static_cast<std::uint64_t>(i)}), i));
  }
  return group;
}

RolloutGroup sample_group(const EnvSpec& spec, const PolicyTable& policy, const RolloutOptions& options,
                          std::uint64_t seed) {
  const auto env = make_environment(spec);
  return sample_group(*env, policy, options, seed, env_name(spec));
}

UniqueCounts count_unique(const RolloutGroup& group, const CanonicalOptions& options) {
  Canonicalizer canon(options);
  UniqueCounts counts;
  std::unordered_set<std::string> states;
  std::unordered_set<std::string> actions;
  for (const Trajectory& traj : group.trajectories) {
    if (traj.transitions.empty()) continue;
    std::vector<std::string> history;
    std::string current = canon.key_of(traj.transitions.front().state.observation, history);
    states.insert(current);
    ++counts.total_states;
    for (const Transition& tr : traj.transitions) {
      actions.insert(current + '\x1f' + tr.action);
      ++counts.total_actions;
      if (tr.valid) history.push_back(tr.action);
      current = canon.key_of(tr.next_state.observation, history);
      states.insert(current);
      ++counts.total_states;
    }
  }
  counts.unique_states = states.size();
  counts.unique_actions = actions.size();
  return counts;
}

}  // namespace rewardflow

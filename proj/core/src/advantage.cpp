#include "rewardflow/advantage.hpp"

#include <cmath>
#include <unordered_map>

#include "rewardflow/errors.hpp"

namespace rewardflow {

void AdvantageOptions::validate() const {
  if (alpha_action < 0.0 || alpha_traj < 0.0) throw ConfigError("advantage weights must be >= 0");
  if (!(epsilon_std > 0.0)) throw ConfigError("epsilon_std must be > 0");
}

std::vector<double> standardize(std::span<const double> values, double epsilon_std, ScaleMode scale) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double denom = 1.0;
  if (scale == ScaleMode::kStd) {
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    denom = std::sqrt(var / n) + epsilon_std;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    // A singleton's value equals its mean, so this is exactly 0 for it.
    out[i] = (values[i] - mean) / denom;
  }
  return out;
}

std::vector<StateGroup> group_by_state(std::span<const ShapedTrajectory> shaped) {
  std::vector<StateGroup> groups;
  std::unordered_map<std::size_t, std::size_t> index;
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    const ShapedTrajectory& s = shaped[i];
    if (s.action_rewards.empty()) continue;
    if (s.nodes != shaped.front().nodes) throw ConsistencyError("trajectories were shaped on different graphs");
    for (std::size_t t = 0; t < s.action_rewards.size(); ++t) {
      auto [it, inserted] = index.emplace(s.state_nodes[t], groups.size());
      if (inserted) groups.push_back(StateGroup{s.state_key(t), {}});
      groups[it->second].members.push_back(StateGroupMember{static_cast<int>(i), static_cast<int>(t),
                                                            s.base->transitions[t].action, s.action_rewards[t]});
    }
  }
  return groups;
}

std::vector<std::vector<double>> action_advantages(std::span<const StateGroup> groups, double epsilon_std,
                                                   ScaleMode scale) {
  std::vector<std::vector<double>> out;
  out.reserve(groups.size());
  std::vector<double> rewards;
  for (const StateGroup& g : groups) {
    rewards.clear();
    for (const StateGroupMember& m : g.members) rewards.push_back(m.reward);
    out.push_back(standardize(rewards, epsilon_std, scale));
  }
  return out;
}

std::vector<double> trajectory_advantages(std::span<const double> outcomes, double epsilon_std, ScaleMode scale) {
  return standardize(outcomes, epsilon_std, scale);
}

std::vector<double> grpo_advantages(std::span<const double> outcomes, double epsilon_std) {
  return standardize(outcomes, epsilon_std, ScaleMode::kStd);
}

std::vector<double> rloo_advantages(std::span<const double> outcomes) {
  if (outcomes.size() < 2) throw UsageError("leave-one-out needs at least 2 rollouts per group");
  double total = 0.0;
  for (double r : outcomes) total += r;
  const double others = static_cast<double>(outcomes.size() - 1);
  std::vector<double> out(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) out[i] = outcomes[i] - (total - outcomes[i]) / others;
  return out;
}

std::vector<double> outcomes_of(const RolloutGroup& group) {
  std::vector<double> out;
  out.reserve(group.trajectories.size());
  for (const Trajectory& t : group.trajectories) out.push_back(t.terminal_reward);
  return out;
}

AdvantageBatch rewardflow_advantages(std::span<const ShapedTrajectory> shaped, const AdvantageOptions& options) {
  options.validate();
  AdvantageBatch batch;
  batch.options = options;
  batch.values.resize(shaped.size());
  std::vector<double> outcomes;
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    batch.values[i].resize(shaped[i].action_rewards.size());
    outcomes.push_back(shaped[i].base->terminal_reward);
  }

  const std::vector<StateGroup> groups = group_by_state(shaped);
  const auto per_group = action_advantages(groups, options.epsilon_std, options.scale);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t m = 0; m < groups[g].members.size(); ++m) {
      const StateGroupMember& member = groups[g].members[m];
      batch.values[member.trajectory][member.step].action = per_group[g][m];
    }
  }

  const std::vector<double> traj = trajectory_advantages(outcomes, options.epsilon_std, options.scale);
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    for (TransitionAdvantage& a : batch.values[i]) {
      a.traj = traj[i];
      a.combined = combine(a.action, a.traj, options.alpha_action, options.alpha_traj);
    }
  }
  return batch;
}

AdvantageBatch broadcast_advantages(const RolloutGroup& group, std::span<const double> per_trajectory) {
  if (per_trajectory.size() != group.trajectories.size()) {
    throw ConsistencyError("one advantage per trajectory expected");
  }
  AdvantageBatch batch;
  batch.options.alpha_action = 0.0;
  batch.values.resize(group.trajectories.size());
  for (std::size_t i = 0; i < group.trajectories.size(); ++i) {
    batch.values[i].assign(group.trajectories[i].transitions.size(),
                           TransitionAdvantage{0.0, per_trajectory[i], per_trajectory[i]});
  }
  return batch;
}

}  // namespace rewardflow

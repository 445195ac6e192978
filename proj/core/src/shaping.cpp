#include "rewardflow/shaping.hpp"

#include "rewardflow/errors.hpp"

namespace rewardflow {

ShapedTrajectory shape(const Trajectory& trajectory, const std::vector<TransitionKeys>& keys,
                       const RewardMap& rewards, const std::shared_ptr<const NodeTable>& nodes,
                       double invalid_penalty) {
  if (invalid_penalty < 0.0) throw ConfigError("invalid_penalty must be >= 0");
  if (keys.size() != trajectory.transitions.size()) {
    throw ConsistencyError("trajectory has " + std::to_string(trajectory.transitions.size()) +
                           " transitions but " + std::to_string(keys.size()) + " canonical keys");
  }
  if (!nodes || &rewards.nodes() != &nodes->keys) {
    throw ConsistencyError("rewards were computed for another graph");
  }
  ShapedTrajectory out;
  out.base = &trajectory;
  out.nodes = nodes;
  const std::size_t T = keys.size();
  out.action_rewards.resize(T);
  out.penalties.resize(T, 0.0);
  if (T == 0) return out;

  out.state_nodes.reserve(T + 1);
  out.state_rewards.reserve(T + 1);
  out.state_nodes.push_back(keys.front().from);
  out.state_rewards.push_back(rewards.reward_at(keys.front().from));
  for (std::size_t t = 0; t < T; ++t) {
    if (t > 0 && keys[t].from != keys[t - 1].to) {
      throw ConsistencyError("graph nodes do not chain at step " + std::to_string(t));
    }
    const double r_from = out.state_rewards.back();
    const double r_to = rewards.reward_at(keys[t].to);
    out.state_nodes.push_back(keys[t].to);
    out.state_rewards.push_back(r_to);
    out.action_rewards[t] = r_to - r_from;
    if (!keys[t].executed) {
      out.penalties[t] = invalid_penalty;
      out.action_rewards[t] -= invalid_penalty;
    }
  }
  return out;
}

std::vector<ShapedTrajectory> shape_group(const RolloutGroup& group, const StateGraph& graph,
                                          const RewardMap& rewards, double invalid_penalty) {
  if (graph.transition_keys().size() != group.trajectories.size()) {
    throw ConsistencyError("graph was built from a different group");
  }
  if (!rewards.belongs_to(graph)) throw ConsistencyError("rewards were computed for another graph");
  std::vector<ShapedTrajectory> out;
  out.reserve(group.trajectories.size());
  for (std::size_t i = 0; i < group.trajectories.size(); ++i) {
    out.push_back(shape(group.trajectories[i], graph.transition_keys()[i], rewards, graph.node_table(),
                        invalid_penalty));
  }
  return out;
}

}  // namespace rewardflow

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rewardflow/propagation.hpp"
#include "rewardflow/state_graph.hpp"
#include "rewardflow/trajectory.hpp"

namespace rewardflow {

inline constexpr double kDefaultInvalidPenalty = 0.1;

// Refers to the trajectory it was shaped from; the trajectory must outlive it.
struct ShapedTrajectory {
  const Trajectory* base = nullptr;
  std::shared_ptr<const NodeTable> nodes;
  std::vector<std::size_t> state_nodes;  // T+1 graph node ids
  std::vector<double> state_rewards;     // T+1 values of R
  std::vector<double> action_rewards;    // T values
  std::vector<double> penalties;         // T values, 0 on executed steps

  const std::string& state_key(std::size_t t) const { return nodes->keys[state_nodes[t]]; }
};

// Potential-difference rewards R(s_{t+1}) - R(s_t) along one trajectory.
// An invalid step earns -invalid_penalty on top of the difference, which is
// zero when pruning keeps the agent on its node. Throws ConsistencyError
// when the ids do not chain or `rewards` belongs to another node table.
ShapedTrajectory shape(const Trajectory& trajectory, const std::vector<TransitionKeys>& keys,
                       const RewardMap& rewards, const std::shared_ptr<const NodeTable>& nodes,
                       double invalid_penalty = kDefaultInvalidPenalty);

// shape() for every trajectory of the group the graph was built from.
std::vector<ShapedTrajectory> shape_group(const RolloutGroup& group, const StateGraph& graph,
                                          const RewardMap& rewards,
                                          double invalid_penalty = kDefaultInvalidPenalty);

}  // namespace rewardflow

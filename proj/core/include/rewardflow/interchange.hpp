#pragma once

#include <iosfwd>
#include <vector>

#include "rewardflow/advantage.hpp"
#include "rewardflow/propagation.hpp"
#include "rewardflow/shaping.hpp"
#include "rewardflow/state_graph.hpp"
#include "rewardflow/trajectory.hpp"

namespace rewardflow {

// Trajectory file: JSON Lines, one object per transition:
//   {"rollout":0,"step":0,"state_text":"...","action":"...",
//    "next_state_text":"...","valid":true,"terminal_reward":1.0}
// terminal_reward repeats the trajectory's outcome on every line; a
// trajectory succeeded when it is > 0. Lines may appear in any order.
RolloutGroup read_trajectories(std::istream& in);
void write_trajectories(std::ostream& out, const RolloutGroup& group);

// Rewards file: JSON Lines. One "node" record per graph node
//   {"type":"node","id":3,"key":"...","distance":4,"reward":0.6561,"success":false}
// (distance is null when unreachable), then one "transition" record per step
//   {"type":"transition","rollout":0,"step":2,"from":3,"to":4,"valid":true,
//    "shaped_reward":0.06561,"a_action":..,"a_traj":..,"a_combined":..}
void write_rewards(std::ostream& out, const StateGraph& graph, const RewardMap& rewards,
                   const std::vector<ShapedTrajectory>& shaped, const AdvantageBatch& advantages);

}  // namespace rewardflow

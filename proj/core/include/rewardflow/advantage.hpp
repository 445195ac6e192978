#pragma once

#include <span>
#include <string>
#include <vector>

#include "rewardflow/shaping.hpp"

namespace rewardflow {

inline constexpr double kDefaultEpsilonStd = 1e-6;

// Denominator of the standardization: population std + epsilon, or 1.
enum class ScaleMode { kStd, kNone };

struct AdvantageOptions {
  double alpha_action = 1.0;
  double alpha_traj = 1.0;
  double epsilon_std = kDefaultEpsilonStd;
  ScaleMode scale = ScaleMode::kStd;

  void validate() const;
};

struct StateGroupMember {
  int trajectory = 0;  // position in the shaped group
  int step = 0;
  std::string action;
  double reward = 0.0;
};

struct StateGroup {
  std::string state_key;
  std::vector<StateGroupMember> members;
};

struct TransitionAdvantage {
  double action = 0.0;
  double traj = 0.0;
  double combined = 0.0;
};

struct AdvantageBatch {
  // [trajectory][step]
  std::vector<std::vector<TransitionAdvantage>> values;
  AdvantageOptions options;
};

// (x - mean) / (population std + eps), or x - mean under kNone. Groups of
// one come out exactly 0.
std::vector<double> standardize(std::span<const double> values, double epsilon_std,
                                 ScaleMode scale = ScaleMode::kStd);

// Transitions bucketed by canonical pre-action state, first-seen order.
// Invalid transitions are included.
std::vector<StateGroup> group_by_state(std::span<const ShapedTrajectory> shaped);

// Per group, per member.
std::vector<std::vector<double>> action_advantages(std::span<const StateGroup> groups, double epsilon_std,
                                                   ScaleMode scale = ScaleMode::kStd);

std::vector<double> trajectory_advantages(std::span<const double> outcomes, double epsilon_std,
                                          ScaleMode scale = ScaleMode::kStd);

inline double combine(double a_action, double a_traj, double alpha_action, double alpha_traj) {
  return alpha_action * a_action + alpha_traj * a_traj;
}

std::vector<double> grpo_advantages(std::span<const double> outcomes, double epsilon_std = kDefaultEpsilonStd);

// A_i = r_i - mean of the others. Throws UsageError for fewer than 2.
std::vector<double> rloo_advantages(std::span<const double> outcomes);

// Action-level, trajectory-level and combined advantages for one group.
AdvantageBatch rewardflow_advantages(std::span<const ShapedTrajectory> shaped, const AdvantageOptions& options);

// Broadcast one value per trajectory to all its transitions; action = 0.
AdvantageBatch broadcast_advantages(const RolloutGroup& group, std::span<const double> per_trajectory);

std::vector<double> outcomes_of(const RolloutGroup& group);

}  // namespace rewardflow

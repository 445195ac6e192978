#include "rewardflow/interchange.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <json.hpp>
#include <ostream>

#include "rewardflow/errors.hpp"

namespace rewardflow {

using nlohmann::json;

namespace {

struct Record {
  std::string state_text;
  std::string action;
  std::string next_state_text;
  bool valid = false;
  double terminal_reward = 0.0;
};

template <typename T>
T field(const json& j, const char* name, std::size_t line) {
  auto it = j.find(name);
  if (it == j.end()) throw IoError("line " + std::to_string(line) + ": missing field '" + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw IoError("line " + std::to_string(line) + ": field '" + name + "' has the wrong type");
  }
}

}  // namespace

RolloutGroup read_trajectories(std::istream& in) {
  std::map<int, std::map<int, Record>> by_rollout;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IoError("line " + std::to_string(number) + ": " + e.what());
    }
    const int rollout = field<int>(j, "rollout", number);
    const int step = field<int>(j, "step", number);
    Record r{field<std::string>(j, "state_text", number), field<std::string>(j, "action", number),
             field<std::string>(j, "next_state_text", number), field<bool>(j, "valid", number),
             field<double>(j, "terminal_reward", number)};
    if (!by_rollout[rollout].emplace(step, std::move(r)).second) {
      throw IoError("duplicate record for rollout " + std::to_string(rollout) + " step " + std::to_string(step));
    }
  }

  RolloutGroup group;
  for (auto& [rollout, steps] : by_rollout) {
    Trajectory traj;
    traj.rollout_index = rollout;
    int expected = 0;
    for (auto& [step, r] : steps) {
      if (step != expected++) {
        throw IoError("rollout " + std::to_string(rollout) + " skips step " + std::to_string(expected - 1));
      }
      Transition tr;
      tr.state.observation = std::move(r.state_text);
      tr.action = std::move(r.action);
      tr.next_state.observation = std::move(r.next_state_text);
      tr.valid = r.valid;
      tr.step_index = step;
      tr.policy_key = tr.state.observation;
      traj.terminal_reward = r.terminal_reward;
      traj.transitions.push_back(std::move(tr));
    }
    if (traj.terminal_reward < 0.0 || traj.terminal_reward > 1.0) {
      throw IoError("terminal_reward outside [0,1] in rollout " + std::to_string(rollout));
    }
    if (traj.terminal_reward > 0.0) {
      traj.transitions.back().next_state.is_terminal = true;
      traj.transitions.back().next_state.is_success = true;
    }
    group.trajectories.push_back(std::move(traj));
  }
  return group;
}

void write_trajectories(std::ostream& out, const RolloutGroup& group) {
  for (const Trajectory& traj : group.trajectories) {
    for (const Transition& tr : traj.transitions) {
      json j = {{"rollout", traj.rollout_index},
                {"step", tr.step_index},
                {"state_text", tr.state.observation},
                {"action", tr.action},
                {"next_state_text", tr.next_state.observation},
                {"valid", tr.valid},
                {"terminal_reward", traj.terminal_reward}};
      out << j.dump() << '\n';
    }
  }
}

void write_rewards(std::ostream& out, const StateGraph& graph, const RewardMap& rewards,
                   const std::vector<ShapedTrajectory>& shaped, const AdvantageBatch& advantages) {
  if (!rewards.belongs_to(graph)) throw ConsistencyError("rewards were computed for another graph");
  for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
    const std::string& key = graph.nodes()[n];
    const double d = rewards.distance_at(n);
    json j = {{"type", "node"}, {"id", n}, {"key", key}};
    j["distance"] = std::isinf(d) ? json(nullptr) : json(d);
    j["reward"] = rewards.reward_at(n);
    j["success"] = graph.is_success(n);
    out << j.dump() << '\n';
  }
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    const auto& keys = graph.transition_keys().at(i);
    for (std::size_t t = 0; t < shaped[i].action_rewards.size(); ++t) {
      const TransitionAdvantage& a = advantages.values.at(i).at(t);
      json j = {{"type", "transition"},
                {"rollout", shaped[i].base->rollout_index},
                {"step", t},
                {"from", keys[t].from},
                {"to", keys[t].to},
                {"valid", keys[t].executed},
                {"shaped_reward", shaped[i].action_rewards[t]},
                {"a_action", a.action},
                {"a_traj", a.traj},
                {"a_combined", a.combined}};
      out << j.dump() << '\n';
    }
  }
}

}  // namespace rewardflow

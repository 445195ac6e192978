#include <deque>
#include <unordered_map>

#include "rewardflow/env.hpp"
#include "rewardflow/errors.hpp"

namespace rewardflow {

namespace {

struct Visit {
  std::string parent;
  std::string action;
};

}  // namespace

PlanResult plan_solution(const Environment& env, std::size_t budget) {
  PlanResult result;
  if (env.state().is_success) {
    result.solvable = true;
    return result;
  }
  if (env.state().is_terminal) return result;

  std::unordered_map<std::string, Visit> seen;
  std::deque<std::unique_ptr<Environment>> frontier;
  const std::string root = env.fingerprint();
  seen.emplace(root, Visit{});
  frontier.push_back(env.clone());

  while (!frontier.empty()) {
    std::unique_ptr<Environment> current = std::move(frontier.front());
    frontier.pop_front();
    if (++result.expanded > budget) {
      throw PlannerBudgetError("planner exceeded budget of " + std::to_string(budget) +
                               " expansions");
    }
    const std::string key = current->fingerprint();
    for (const std::string& action : current->state().admissible_actions) {
      auto next = current->clone();
      StepResult r = next->step(action);
      if (!r.valid) continue;
      std::string next_key = next->fingerprint();
      if (seen.contains(next_key)) continue;
      seen.emplace(next_key, Visit{key, action});
      if (r.state.is_success) {
        std::vector<std::string> reversed;
        for (std::string k = next_key; k != root;) {
          const Visit& v = seen.at(k);
          reversed.push_back(v.action);
          k = v.parent;
        }
        result.actions.assign(reversed.rbegin(), reversed.rend());
        result.solvable = true;
        return result;
      }
      if (!r.state.is_terminal) frontier.push_back(std::move(next));
    }
  }
  return result;
}

}  // namespace rewardflow

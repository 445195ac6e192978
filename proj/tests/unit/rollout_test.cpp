#include <doctest.h>

#include <cmath>
#include <set>

#include "builders.hpp"
#include "rewardflow/errors.hpp"
#include "rewardflow/rollout.hpp"

using namespace rewardflow;

namespace {

KeyDoorConfig keydoor(std::uint64_t seed) {
  KeyDoorConfig c;
  c.seed = seed;
  c.num_rooms = 2;
  return c;
}

RolloutOptions options(int g, int max_steps = 15) {
  RolloutOptions o;
  o.group_size = g;
  o.max_steps = max_steps;
  return o;
}

bool same(const Trajectory& a, const Trajectory& b) {
  if (a.transitions.size() != b.transitions.size() || a.terminal_reward != b.terminal_reward) return false;
  for (std::size_t t = 0; t < a.transitions.size(); ++t) {
    const Transition& x = a.transitions[t];
    const Transition& y = b.transitions[t];
    if (!(x.state == y.state) || x.action != y.action || !(x.next_state == y.next_state) || x.valid != y.valid ||
        x.log_prob_old != y.log_prob_old || x.policy_key != y.policy_key) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("a group is reproducible from its seed") {
  PolicyTable policy;
  const EnvSpec spec = keydoor(3);
  RolloutGroup a = sample_group(spec, policy, options(6), 42);
  RolloutGroup b = sample_group(spec, policy, options(6), 42);
  REQUIRE(a.trajectories.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(same(a.trajectories[i], b.trajectories[i]));

  RolloutGroup c = sample_group(spec, policy, options(6), 43);
  bool any_different = false;
  for (int i = 0; i < 6; ++i) any_different = any_different || !same(a.trajectories[i], c.trajectories[i]);
  CHECK(any_different);
}

TEST_CASE("rollout i does not depend on the group size") {
  PolicyTable policy;
  const EnvSpec spec = keydoor(8);
  RolloutGroup small = sample_group(spec, policy, options(2), 5);
  RolloutGroup large = sample_group(spec, policy, options(7), 5);
  CHECK(same(small.trajectories[0], large.trajectories[0]));
  CHECK(same(small.trajectories[1], large.trajectories[1]));
}

TEST_CASE("greedy rollouts of a group are identical") {
  PolicyTable policy;
  auto env = make_environment(keydoor(1));
  RolloutOptions o = options(4);
  o.greedy = true;
  RolloutGroup g = sample_group(*env, policy, o, 9);
  for (const auto& t : g.trajectories) CHECK(same(t, g.trajectories[0]));
}

TEST_CASE("trajectories respect the episode contract") {
  PolicyTable policy;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto env = make_environment(keydoor(seed));
    RolloutGroup g = sample_group(*env, policy, options(4, 12), seed);
    for (const auto& traj : g.trajectories) {
      REQUIRE_FALSE(traj.transitions.empty());
      CHECK(traj.transitions.size() <= 12);
      CHECK(traj.transitions.front().state == env->state());
      for (std::size_t t = 0; t < traj.transitions.size(); ++t) {
        const Transition& tr = traj.transitions[t];
        CHECK(tr.step_index == int(t));
        CHECK(tr.log_prob_old <= 0.0);
        CHECK(std::isfinite(tr.log_prob_old));
        if (!tr.valid) CHECK(is_invalid_observation(tr.next_state.observation));
        if (t + 1 < traj.transitions.size()) CHECK_FALSE(tr.next_state.is_terminal);
      }
      const bool won = traj.transitions.back().next_state.is_success;
      CHECK(traj.terminal_reward == (won ? 1.0 : 0.0));
      CHECK(traj.succeeded() == won);
      CHECK(traj.truncated == (!won && traj.transitions.size() == 12));
    }
  }
}

TEST_CASE("log_prob_old matches the sampling policy") {
  PolicyTable policy(0.5);
  policy.set_logit("x", "y", 1.0);
  auto env = make_environment(keydoor(2));
  RolloutGroup g = sample_group(*env, policy, options(3), 1);
  for (const auto& traj : g.trajectories) {
    for (const auto& tr : traj.transitions) {
      const auto& acts = tr.state.admissible_actions;
      // After an invalid step the state is the sentinel, whose action list is
      // carried over from the last real state.
      const auto lp = policy.log_probabilities(tr.policy_key, acts);
      std::size_t i = 0;
      while (i < acts.size() && acts[i] != tr.action) ++i;
      REQUIRE(i < acts.size());
      CHECK(tr.log_prob_old == doctest::Approx(lp[i]));
    }
  }
}

TEST_CASE("max_steps below one is rejected") {
  PolicyTable policy;
  auto env = make_environment(keydoor(0));
  CHECK_THROWS_AS(sample_group(*env, policy, options(2, 0), 1), UsageError);
  CHECK_THROWS_AS(sample_group(*env, policy, options(0), 1), UsageError);
}

TEST_CASE("unique counts: a single step") {
  RolloutGroup g = build::group({build::path({"a", "b"}, 0.0)});
  UniqueCounts c = count_unique(g);
  CHECK(c.total_states == 2);
  CHECK(c.unique_states == 2);
  CHECK(c.total_actions == 1);
  CHECK(c.unique_actions == 1);
}

TEST_CASE("unique counts: duplicated trajectories double the totals only") {
  const Trajectory t = build::path({"a", "b", "c", "d"}, 1.0);
  RolloutGroup g = build::group({t, t});
  UniqueCounts c = count_unique(g);
  CHECK(c.total_states == 8);
  CHECK(c.unique_states == 4);
  CHECK(c.total_actions == 6);
  CHECK(c.unique_actions == 3);
}

TEST_CASE("unique counts: sampled groups revisit states") {
  PolicyTable policy;
  RolloutGroup g = sample_group(EnvSpec{keydoor(4)}, policy, options(8), 2);
  UniqueCounts c = count_unique(g);
  CHECK(c.unique_states < c.total_states);
  CHECK(c.unique_actions <= c.total_actions);
  std::size_t total = 0;
  for (const auto& t : g.trajectories) total += t.transitions.size() + 1;
  CHECK(c.total_states == total);
}

#include <benchmark/benchmark.h>

#include <algorithm>

#include "rewardflow/advantage.hpp"
#include "rewardflow/policy.hpp"
#include "rewardflow/propagation.hpp"
#include "rewardflow/rng.hpp"
#include "rewardflow/rollout.hpp"
#include "rewardflow/shaping.hpp"
#include "rewardflow/state_graph.hpp"

using namespace rewardflow;

namespace {

RolloutGroup sample(bool keydoor, int g) {
  RolloutOptions o;
  o.group_size = g;
  EnvSpec spec = SokobanConfig{};
  if (keydoor) {
    KeyDoorConfig k;
    k.num_rooms = 2;
    spec = k;
    o.max_steps = k.max_steps;
  }
  return sample_group(spec, PolicyTable{}, o, 7);
}

GraphOptions exact() {
  GraphOptions o;
  o.cluster_threshold = 1.0;
  return o;
}

void BM_BuildGraph(benchmark::State& state) {
  const RolloutGroup group = sample(state.range(0) != 0, int(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(group, exact()));
}
BENCHMARK(BM_BuildGraph)->ArgsProduct({{0, 1}, {4, 8, 16}});

// Default 0.9 threshold pays for token-cosine scans over every cluster.
void BM_BuildGraphFuzzy(benchmark::State& state) {
  const RolloutGroup group = sample(true, int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(group));
}
BENCHMARK(BM_BuildGraphFuzzy)->Arg(8);

// Random walks over n states, every other one ending in the goal, so the
// reverse search has real work to do.
RolloutGroup walks(int n, int rollouts, int length) {
  Rng rng(11);
  RolloutGroup group;
  for (int i = 0; i < rollouts; ++i) {
    Trajectory t;
    t.rollout_index = i;
    std::string current = "state 0";
    for (int k = 0; k < length; ++k) {
      Transition tr;
      tr.state.observation = current;
      const bool last = k + 1 == length;
      const std::string next = last && i % 2 == 0 ? "goal" : "state " + std::to_string(rng.below(std::uint64_t(n)));
      tr.action = "go " + next;
      tr.state.admissible_actions = {tr.action};
      tr.next_state.observation = next;
      tr.valid = true;
      tr.step_index = k;
      if (last && i % 2 == 0) tr.next_state.is_success = tr.next_state.is_terminal = true;
      t.transitions.push_back(tr);
      current = next;
    }
    t.terminal_reward = i % 2 == 0 ? 1.0 : 0.0;
    group.trajectories.push_back(t);
  }
  return group;
}

void BM_Propagate(benchmark::State& state) {
  const StateGraph g = build_graph(walks(int(state.range(0)), 16, 25), exact());
  state.counters["nodes"] = double(g.num_nodes());
  for (auto _ : state) benchmark::DoNotOptimize(propagate_min(g));
}
BENCHMARK(BM_Propagate)->Arg(50)->Arg(400);

void BM_PropagateMean(benchmark::State& state) {
  const StateGraph g = build_graph(walks(400, 16, 25), exact());
  for (auto _ : state) benchmark::DoNotOptimize(propagate_mean(g));
}
BENCHMARK(BM_PropagateMean);

void BM_ShapeAndAdvantage(benchmark::State& state) {
  const RolloutGroup group = sample(true, 8);
  const StateGraph g = build_graph(group, exact());
  const RewardMap r = propagate_min(g);
  for (auto _ : state) {
    const auto shaped = shape_group(group, g, r);
    benchmark::DoNotOptimize(rewardflow_advantages(shaped, AdvantageOptions{}));
  }
}
BENCHMARK(BM_ShapeAndAdvantage);

void BM_PolicyUpdate(benchmark::State& state) {
  const RolloutGroup group = sample(false, 8);
  PolicyTable policy;
  PolicyBatch batch;
  for (const auto& traj : group.trajectories) {
    std::vector<PolicySample> samples;
    for (const auto& tr : traj.transitions) {
      const auto& acts = tr.state.admissible_actions;
      const auto idx = std::size_t(std::find(acts.begin(), acts.end(), tr.action) - acts.begin());
      samples.push_back({tr.policy_key, acts, idx, tr.log_prob_old, traj.terminal_reward - 0.5});
    }
    batch.trajectories.push_back(samples);
  }
  for (auto _ : state) benchmark::DoNotOptimize(update(policy, batch, UpdateConfig{}, policy));
}
BENCHMARK(BM_PolicyUpdate);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another compiler.
BENCHMARK_MAIN();

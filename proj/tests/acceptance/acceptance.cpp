// One line per acceptance criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "builders.hpp"
#include "finite_difference.hpp"
#include "rewardflow/advantage.hpp"
#include "rewardflow/experiment.hpp"
#include "rewardflow/propagation.hpp"
#include "rewardflow/shaping.hpp"

using namespace rewardflow;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / double(v.size());
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + fmt("%.3f", v[i]);
  return out + "]";
}

Outcome bfs_fixture() {
  const auto start = Clock::now();
  const auto c = oracle::load_alfworld_case();
  const auto expected = oracle::alfworld_hops(c);
  const StateGraph g = build_graph(build::alfworld_group(), build::exact_graph());
  const RewardMap r = propagate_min(g, 0.9);
  int mismatches = 0;
  for (const auto& [label, d] : expected) mismatches += r.distance(c.text.at(label)) == d ? 0 : 1;
  const bool sizes = r.size() == expected.size();
  const double t = seconds_since(start);
  return {mismatches == 0 && sizes && t < 1.0,
          std::to_string(expected.size()) + " nodes, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.3f s", t)};
}

Outcome bfs_random() {
  const auto start = Clock::now();
  std::mt19937_64 gen(2024);
  int mismatches = 0;
  std::size_t checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + int(gen() % 200);
    const int m = int(gen() % (3 * n + 1));
    std::vector<oracle::Arc> arcs;
    for (int k = 0; k < m; ++k) arcs.push_back({int(gen() % n), int(gen() % n)});
    std::vector<int> targets;
    const int s = int(gen() % 4);
    for (int k = 0; k < s; ++k) targets.push_back(int(gen() % n));
    const StateGraph g = build_graph(build::arc_group(arcs, targets), build::exact_graph());
    const RewardMap r = propagate_min(g);
    const std::vector<double> d = oracle::hops_to(n, arcs, targets);
    for (int u = 0; u < n; ++u) {
      const std::string key = build::node_name(u);
      if (!g.contains(key)) continue;
      ++checked;
      mismatches += r.distance(key) == d[u] ? 0 : 1;
    }
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 30.0,
          "500 graphs, " + std::to_string(checked) + " nodes, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.2f s", t)};
}

Outcome telescoping() {
  std::mt19937_64 gen(7);
  double worst = 0.0;
  int shaped_count = 0;
  while (shaped_count < 1000) {
    std::vector<Trajectory> ts;
    const int rollouts = 1 + int(gen() % 8);
    for (int i = 0; i < rollouts; ++i) {
      std::vector<std::string> states = {"s0"};
      const int len = 1 + int(gen() % 20);
      for (int k = 0; k < len; ++k) states.push_back("s" + std::to_string(gen() % 15));
      ts.push_back(build::path(states, gen() % 3 == 0 ? 1.0 : 0.0));
    }
    const RolloutGroup g = build::group(ts);
    const StateGraph graph = build_graph(g);
    const RewardMap r = propagate_min(graph, 0.5 + 0.5 * double(gen() % 1000) / 1000.0);
    for (const auto& s : shape_group(g, graph, r)) {
      double sum = 0.0;
      for (double v : s.action_rewards) sum += v;
      worst = std::max(worst, std::abs(sum - (s.state_rewards.back() - s.state_rewards.front())));
      ++shaped_count;
    }
  }
  return {worst < 1e-12, std::to_string(shaped_count) + " trajectories, max error " + fmt("%.2e", worst)};
}

Outcome advantage_identities() {
  std::mt19937_64 gen(5);
  double worst_action = 0.0, worst_traj = 0.0, worst_rloo = 0.0;
  bool singletons_zero = true;
  int singletons = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Trajectory> ts;
    const int rollouts = 2 + int(gen() % 7);
    for (int i = 0; i < rollouts; ++i) {
      std::vector<std::string> states = {"s0"};
      const int len = 1 + int(gen() % 10);
      for (int k = 0; k < len; ++k) states.push_back("s" + std::to_string(gen() % 12));
      ts.push_back(build::path(states, gen() % 2 ? 1.0 : 0.0));
    }
    const RolloutGroup g = build::group(ts);
    const StateGraph graph = build_graph(g);
    const RewardMap r = propagate_min(graph);
    const auto shaped = shape_group(g, graph, r);
    const auto groups = group_by_state(shaped);
    const auto adv = action_advantages(groups, kDefaultEpsilonStd);
    for (std::size_t k = 0; k < groups.size(); ++k) {
      worst_action = std::max(worst_action, std::abs(mean(adv[k])));
      if (groups[k].members.size() == 1) {
        ++singletons;
        singletons_zero = singletons_zero && adv[k][0] == 0.0;
      }
    }
    const auto outcomes = outcomes_of(g);
    worst_traj = std::max(worst_traj, std::abs(mean(trajectory_advantages(outcomes, kDefaultEpsilonStd))));
    worst_traj = std::max(worst_traj, std::abs(mean(grpo_advantages(outcomes))));
    double rloo = 0.0;
    for (double v : rloo_advantages(outcomes)) rloo += v;
    worst_rloo = std::max(worst_rloo, std::abs(rloo));
  }
  const bool pass = worst_action < 1e-9 && worst_traj < 1e-9 && worst_rloo < 1e-9 && singletons_zero && singletons > 0;
  return {pass, "max |mean| action " + fmt("%.1e", worst_action) + ", traj/grpo " + fmt("%.1e", worst_traj) +
                    ", rloo sum " + fmt("%.1e", worst_rloo) + ", " + std::to_string(singletons) +
                    " singleton groups all zero: " + (singletons_zero ? "yes" : "no")};
}

Outcome hand_values() {
  const auto a = trajectory_advantages(std::vector<double>{1, 1, 0, 0, 0, 0, 0, 0}, kDefaultEpsilonStd);
  bool ok = std::abs(a[0] - 1.732) < 1e-3 && std::abs(a[1] - 1.732) < 1e-3;
  for (std::size_t i = 2; i < 8; ++i) ok = ok && std::abs(a[i] + 0.577) < 1e-3;
  const auto r = rloo_advantages(std::vector<double>{1, 0, 0, 0});
  bool rloo_ok = std::abs(r[0] - 1.0) < 1e-9;
  for (std::size_t i = 1; i < 4; ++i) rloo_ok = rloo_ok && std::abs(r[i] + 1.0 / 3.0) < 1e-9;
  return {ok && rloo_ok, "traj " + fmt("%+.4f", a[0]) + "/" + fmt("%+.4f", a[2]) + ", rloo " + list(r)};
}

Outcome gradient_check() {
  const auto start = Clock::now();
  std::mt19937_64 gen(31);
  UpdateConfig config;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) worst = std::max(worst, fd::gradient_error(fd::random_problem(gen), config));
  const double t = seconds_since(start);
  return {worst < 1e-4 && t < 10.0, "100 batches, max relative error " + fmt("%.2e", worst) + ", " + fmt("%.2f s", t)};
}

Outcome objective_closed_form() {
  std::mt19937_64 gen(17);
  UpdateConfig no_kl;
  no_kl.kl_beta = 0.0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const fd::Problem p = fd::random_problem(gen, 0.4, 0.0);
    double expected = 0.0;
    for (const auto& traj : p.batch.trajectories) {
      double sum = 0.0;
      for (const auto& s : traj) sum += s.advantage;
      expected += sum / double(traj.size());
    }
    expected /= double(p.batch.trajectories.size());
    worst = std::max(worst, std::abs(surrogate_objective(p.policy, p.batch, no_kl, p.reference) - expected));
  }

  // Sign analysis over a (rho, A) grid: the min keeps rho*A unless the ratio
  // has left the trust region in the direction the advantage rewards.
  int clip_mismatches = 0;
  const std::vector<std::string> actions = {"a", "b"};
  PolicyTable policy(1.0);
  for (double eps : {0.1, 0.2, 0.3}) {
    no_kl.clip_epsilon = eps;
    for (int i = 0; i <= 40; ++i) {
      const double rho = 0.4 + 0.03 * i;
      for (double adv : {-3.0, -1.0, -0.25, 0.0, 0.25, 1.0, 3.0}) {
        PolicySample s{"s", actions, 0, std::log(0.5) - std::log(rho), adv};
        double expected_term;
        if (adv >= 0) {
          expected_term = rho > 1 + eps ? (1 + eps) * adv : rho * adv;
        } else {
          expected_term = rho < 1 - eps ? (1 - eps) * adv : rho * adv;
        }
        const double got = surrogate_objective(policy, PolicyBatch{{{s}}}, no_kl, policy);
        clip_mismatches += std::abs(got - expected_term) < 1e-9 ? 0 : 1;
      }
    }
  }
  return {worst < 1e-9 && clip_mismatches == 0,
          "max |J - mean A| " + fmt("%.1e", worst) + ", clip grid mismatches " + std::to_string(clip_mismatches)};
}

std::vector<double> final_evals(ExperimentConfig config, const std::vector<std::uint64_t>& seeds) {
  std::vector<double> out;
  for (std::uint64_t seed : seeds) {
    config.seed = seed;
    out.push_back(run_experiment(config).final_eval);
  }
  return out;
}

const std::vector<std::uint64_t> kSeeds = {1, 2, 3, 4, 5};

Outcome sokoban_direction() {
  const auto start = Clock::now();
  ExperimentConfig base;  // single-box 6x6 Sokoban, 100 steps
  base.env = "sokoban";
  ExperimentConfig grpo = base;
  grpo.algo = Algo::kGrpo;
  ExperimentConfig rloo = base;
  rloo.algo = Algo::kRloo;
  const double flow = mean(final_evals(base, kSeeds));
  const double g = mean(final_evals(grpo, kSeeds));
  const double r = mean(final_evals(rloo, kSeeds));
  std::vector<double> by_g;
  for (int size : {4, 6}) {
    ExperimentConfig c = base;
    c.group_size = size;
    by_g.push_back(mean(final_evals(c, kSeeds)));
  }
  by_g.push_back(flow);
  const double t = seconds_since(start);
  const bool margin = flow - g >= 0.10 && flow - r >= 0.10;
  const bool monotone = by_g[0] <= by_g[1] && by_g[1] <= by_g[2];
  return {margin && monotone && t < 600.0,
          "rewardflow " + fmt("%.3f", flow) + " vs grpo " + fmt("%.3f", g) + " rloo " + fmt("%.3f", r) +
              "; G=4/6/8 " + list(by_g) + "; " + fmt("%.0f s", t)};
}

Outcome keydoor_ablation() {
  ExperimentConfig base;
  base.env = "keydoor";
  base.num_rooms = 2;
  base.num_keys = 1;
  ExperimentConfig no_prune = base;
  no_prune.prune_invalid = false;
  ExperimentConfig no_norm = base;
  no_norm.normalize_states = false;
  ExperimentConfig mean_hop = base;
  mean_hop.propagation = PropagationMode::kMean;
  const double full = mean(final_evals(base, kSeeds));
  const double np = mean(final_evals(no_prune, kSeeds));
  const double nn = mean(final_evals(no_norm, kSeeds));
  const double mh = mean(final_evals(mean_hop, kSeeds));
  const bool pass = full - np >= 0.05 && full - nn >= 0.05 && full >= mh;
  return {pass, "full " + fmt("%.3f", full) + ", no-prune " + fmt("%.3f", np) + ", no-normalize " +
                    fmt("%.3f", nn) + ", mean-hop " + fmt("%.3f", mh)};
}

// Drops the trailing wall-time columns.
std::string without_timing(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::size_t cut = line.size();
    for (int k = 0; k < 3; ++k) cut = line.rfind(',', cut - 1);
    out += line.substr(0, cut) + "\n";
  }
  return out;
}

Outcome determinism() {
  ExperimentConfig c;
  c.env = "keydoor";
  c.num_rooms = 2;
  c.training_steps = 20;
  c.eval_interval = 5;
  std::vector<std::string> csvs;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = fs::temp_directory_path() / ("rewardflow_accept_det" + std::to_string(run));
    fs::remove_all(dir);
    c.output_dir = dir.string();
    train(c);
    csvs.push_back(without_timing(dir / "metrics.csv"));
    fs::remove_all(dir);
  }
  const bool pass = csvs[0] == csvs[1] && csvs[0].size() > metrics_header().size();
  return {pass, std::to_string(std::count(csvs[0].begin(), csvs[0].end(), '\n')) + " lines, identical: " +
                    (csvs[0] == csvs[1] ? "yes" : "no")};
}

Outcome graph_growth() {
  std::vector<double> nodes, edges;
  for (int g : {2, 4, 6, 8, 12}) {
    ExperimentConfig c;
    c.env = "sokoban";
    c.group_size = g;
    c.training_steps = 1;
    c.eval_interval = 0;
    c.eval_tasks = 1;
    const RunResult r = run_experiment(c);
    nodes.push_back(r.metrics[0].avg_nodes);
    edges.push_back(r.metrics[0].avg_edges);
  }
  bool pass = true;
  for (std::size_t i = 1; i < nodes.size(); ++i) pass = pass && nodes[i] > nodes[i - 1] && edges[i] > edges[i - 1];
  return {pass, "G=2/4/6/8/12 nodes " + list(nodes) + " edges " + list(edges)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"bfs matches oracle on the fixture", bfs_fixture},
      {"bfs matches oracle on random graphs", bfs_random},
      {"shaped rewards telescope", telescoping},
      {"advantage identities", advantage_identities},
      {"advantage hand values", hand_values},
      {"surrogate gradient vs finite differences", gradient_check},
      {"objective closed form and clipping", objective_closed_form},
      {"sokoban: rewardflow beats outcome baselines, monotone in G", sokoban_direction},
      {"keydoor ablations", keydoor_ablation},
      {"byte-identical metrics", determinism},
      {"graph grows with rollout count", graph_growth},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}

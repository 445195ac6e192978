// rewardflow: train / evaluate tabular agents and run the reward pipeline on
// trajectory files.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rewardflow/advantage.hpp"
#include "rewardflow/experiment.hpp"
#include "rewardflow/interchange.hpp"
#include "rewardflow/propagation.hpp"
#include "rewardflow/shaping.hpp"
#include "rewardflow/state_graph.hpp"

namespace rf = rewardflow;

namespace {

// Flags shared by every subcommand that builds an ExperimentConfig. Values
// only override the config file when given.
struct Overrides {
  std::string config_path;
  std::optional<std::string> env, algo, propagation, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> group_size, steps;
  std::optional<double> gamma, alpha_action, alpha_traj;
  bool no_prune = false;
  bool no_normalize = false;
  bool export_graphs = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--env", env, "sokoban or keydoor");
    app->add_option("--algo", algo, "rewardflow, grpo or rloo");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--group-size", group_size, "rollouts per task");
    app->add_option("--gamma", gamma, "decay per hop");
    app->add_option("--propagation", propagation, "min, mean or none");
    app->add_option("--alpha-action", alpha_action, "weight of the action-level advantage");
    app->add_option("--alpha-traj", alpha_traj, "weight of the trajectory-level advantage");
    app->add_flag("--no-prune", no_prune, "keep invalid transitions in the graph");
    app->add_flag("--no-normalize", no_normalize, "use raw observations as state keys");
    app->add_option("--steps", steps, "training steps");
    app->add_option("--out", out, "output directory or file");
    app->add_flag("--export-graphs", export_graphs, "write DOT graphs for the last step");
  }

  rf::ExperimentConfig build() const {
    rf::ExperimentConfig c = config_path.empty() ? rf::ExperimentConfig{} : rf::ExperimentConfig::load(config_path);
    if (env) c.env = *env;
    if (algo) c.algo = rf::parse_algo(*algo);
    if (propagation) c.propagation = rf::parse_propagation(*propagation);
    if (out) c.output_dir = *out;
    if (seed) c.seed = *seed;
    if (group_size) c.group_size = *group_size;
    if (steps) c.training_steps = *steps;
    if (gamma) c.gamma = *gamma;
    if (alpha_action) c.alpha_action = *alpha_action;
    if (alpha_traj) c.alpha_traj = *alpha_traj;
    if (no_prune) c.prune_invalid = false;
    if (no_normalize) c.normalize_states = false;
    if (export_graphs) c.export_graphs = true;
    c.validate();
    return c;
  }
};

rf::RolloutGroup read_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rf::IoError("cannot read " + path);
  return rf::read_trajectories(in);
}

// `shaped` points into `group`, so copies would dangle; moves keep the buffer.
struct Pipeline {
  Pipeline() = default;
  Pipeline(const Pipeline&) = delete;
  Pipeline(Pipeline&&) = default;

  rf::RolloutGroup group;
  rf::StateGraph graph;
  rf::RewardMap rewards;
  std::vector<rf::ShapedTrajectory> shaped;
  rf::AdvantageBatch advantages;
};

Pipeline run_pipeline(const std::string& path, const rf::ExperimentConfig& c) {
  Pipeline p;
  p.group = read_group(path);
  p.graph = rf::build_graph(p.group, c.graph_options());
  p.rewards = c.propagation == rf::PropagationMode::kNone
                  ? rf::zero_rewards(p.graph)
                  : rf::propagate(p.graph,
                                  c.propagation == rf::PropagationMode::kMin ? rf::PropagationStrategy::kMinHop
                                                                             : rf::PropagationStrategy::kMeanHop,
                                  c.gamma, c.max_propagation_iters);
  p.shaped = rf::shape_group(p.group, p.graph, p.rewards, c.invalid_penalty);
  p.advantages = rf::rewardflow_advantages(p.shaped, c.advantage_options());
  return p;
}

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (!out || *out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(*out, std::ios::binary);
  if (!f) throw rf::IoError("cannot write " + *out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RewardFlow: graph-propagated process rewards for tabular agents"};
  app.require_subcommand(1);

  Overrides train_o, eval_o, prop_o, graph_o;

  auto* train = app.add_subcommand("train", "run the training loop and write a run directory");
  train_o.attach(train);

  auto* eval = app.add_subcommand("eval", "evaluate a saved policy");
  eval_o.attach(eval);
  std::string policy_path;
  int eval_tasks = 0;
  bool sample = false;
  eval->add_option("--policy", policy_path, "policy.txt from a run (omit for the uniform policy)");
  eval->add_option("--tasks", eval_tasks, "number of tasks (default: eval_tasks)");
  eval->add_flag("--sample", sample, "sample actions instead of argmax");

  auto* prop = app.add_subcommand("propagate", "trajectory file -> rewards file");
  prop_o.attach(prop);
  std::string prop_in;
  prop->add_option("trajectories", prop_in, "JSON Lines trajectory file")->required()->check(CLI::ExistingFile);

  auto* graph = app.add_subcommand("graph", "trajectory file -> DOT graph");
  graph_o.attach(graph);
  std::string graph_in;
  graph->add_option("trajectories", graph_in, "JSON Lines trajectory file")->required()->check(CLI::ExistingFile);

  auto* report = app.add_subcommand("report", "stage timing summary of a run directory");
  std::string run_dir;
  report->add_option("run_dir", run_dir, "directory written by train")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const rf::ExperimentConfig c = train_o.build();
      const rf::RunResult r = rf::train(c);
      std::printf("steps %zu  final eval success %.4f  -> %s\n", r.metrics.size(), r.final_eval,
                  c.output_dir.c_str());
    } else if (eval->parsed()) {
      const rf::ExperimentConfig c = eval_o.build();
      rf::PolicyTable policy(c.temperature);
      if (!policy_path.empty()) {
        std::ifstream in(policy_path);
        if (!in) throw rf::IoError("cannot read " + policy_path);
        policy = rf::PolicyTable::load(in);
      }
      const int n = eval_tasks > 0 ? eval_tasks : c.eval_tasks;
      const double rate = rf::evaluate(policy, c, n, rf::EvalOptions{!sample, c.seed});
      std::printf("success_rate %.6f over %d tasks\n", rate, n);
    } else if (prop->parsed()) {
      const rf::ExperimentConfig c = prop_o.build();
      const Pipeline p = run_pipeline(prop_in, c);
      std::ostringstream text;
      rf::write_rewards(text, p.graph, p.rewards, p.shaped, p.advantages);
      emit(prop_o.out, text.str());
    } else if (graph->parsed()) {
      const rf::ExperimentConfig c = graph_o.build();
      const Pipeline p = run_pipeline(graph_in, c);
      emit(graph_o.out, rf::export_dot(p.graph, &p.rewards));
    } else if (report->parsed()) {
      const rf::TimingReport t = rf::timing_report(run_dir);
      std::printf("steps            %d\n", t.steps);
      std::printf("rollout   %10.4f s\n", t.rollout);
      std::printf("graph     %10.4f s\n", t.graph);
      std::printf("update    %10.4f s\n", t.update);
      std::printf("total     %10.4f s\n", t.total);
      std::printf("graph share %8.2f %%\n", 100.0 * t.graph_share);
    }
  } catch (const rf::Error& e) {
    std::fprintf(stderr, "rewardflow: %s\n", e.what());
    return 1;
  }
  return 0;
}

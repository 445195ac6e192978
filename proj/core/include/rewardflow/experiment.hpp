#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rewardflow/advantage.hpp"
#include "rewardflow/env.hpp"
#include "rewardflow/errors.hpp"
#include "rewardflow/policy.hpp"
#include "rewardflow/propagation.hpp"
#include "rewardflow/rollout.hpp"
#include "rewardflow/state_graph.hpp"

namespace rewardflow {

enum class Algo { kRewardFlow, kGrpo, kRloo };
// kNone leaves every node at R = 0, so only penalties reach the action level.
enum class PropagationMode { kMin, kMean, kNone };

std::string to_string(Algo algo);
std::string to_string(PropagationMode mode);
Algo parse_algo(std::string_view text);
PropagationMode parse_propagation(std::string_view text);

// Flat key = value text form; field names are the keys.
struct ExperimentConfig {
  std::string env = "sokoban";  // sokoban | keydoor
  int grid_size = 6;
  int num_boxes = 1;
  int min_solution_length = 1;
  int max_interior_walls = 2;
  int num_rooms = 1;
  int num_keys = 1;
  bool ambiguous = true;
  bool start_at_door = false;
  int receptacles_per_room = 2;
  int max_steps = 0;  // 0 picks the environment's default

  Algo algo = Algo::kRewardFlow;
  int group_size = 8;
  double gamma = kDefaultGamma;
  PropagationMode propagation = PropagationMode::kMin;
  int max_propagation_iters = kDefaultMaxPropagationIters;
  double alpha_action = 1.0;
  double alpha_traj = 1.0;
  double epsilon_std = kDefaultEpsilonStd;
  ScaleMode advantage_scale = ScaleMode::kStd;
  // The tabular environments render every state exactly, so only identical
  // text merges by default.
  double cluster_threshold = 1.0;
  bool prune_invalid = true;
  bool normalize_states = true;
  double invalid_penalty = 0.1;

  double temperature = 0.4;
  double clip_epsilon = 0.2;
  double kl_beta = 0.01;
  // The objective averages over trajectories and steps, so per-logit
  // gradients are O(1 / (tasks * G * T)); plain ascent needs a large step.
  double learning_rate = 50.0;
  int epochs_per_batch = 1;

  int training_steps = 100;
  int tasks_per_step = 16;
  int task_pool = 128;  // training and evaluation draw from tasks 0..task_pool-1
  int eval_interval = 10;
  int eval_tasks = 128;
  std::uint64_t seed = 1;
  std::string output_dir = "runs/latest";
  bool export_graphs = false;

  void validate() const;  // throws ConfigError
  int effective_max_steps() const;
  EnvSpec env_spec(std::uint64_t task_seed) const;
  RolloutOptions rollout_options(bool greedy = false) const;
  GraphOptions graph_options() const;
  AdvantageOptions advantage_options() const;
  UpdateConfig update_config() const;

  // Applies one key = value pair. Unknown keys and malformed values throw
  // ConfigError.
  void set(std::string_view key, std::string_view value);
  std::string to_text() const;
  static ExperimentConfig from_text(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::uint64_t task_seed(const ExperimentConfig& config, int task);

// Initial environments for tasks 0..n-1, generated on first use.
class TaskPool {
 public:
  explicit TaskPool(ExperimentConfig config);
  const Environment& task(int index);
  int size() const { return config_.task_pool; }
  const ExperimentConfig& config() const { return config_; }

 private:
  ExperimentConfig config_;
  std::vector<std::unique_ptr<Environment>> envs_;
};

struct EvalOptions {
  bool greedy = true;
  std::uint64_t seed = 0;  // only used when sampling
};

// Fraction of tasks 0..num_tasks-1 (mod pool size) solved by one rollout
// each. Throws UsageError for num_tasks < 1.
double evaluate(const PolicyTable& policy, TaskPool& pool, int num_tasks, const EvalOptions& options = {});
double evaluate(const PolicyTable& policy, const ExperimentConfig& config, int num_tasks,
                const EvalOptions& options = {});

struct MetricsRow {
  int step = 0;
  double train_success_rate = 0.0;
  std::optional<double> eval_success_rate;  // only on evaluation steps
  double mean_entropy = 0.0;
  double avg_nodes = 0.0;  // 0 for algorithms that build no graph
  double avg_edges = 0.0;
  double invalid_action_rate = 0.0;
  double wall_time_graph = 0.0;
  double wall_time_rollout = 0.0;
  double wall_time_update = 0.0;
};

std::string metrics_header();
std::string metrics_line(const MetricsRow& row);
std::vector<MetricsRow> read_metrics(const std::filesystem::path& csv);

// A stage of the training loop failed.
class StageError : public Error {
 public:
  StageError(std::string stage, int step, const std::string& what)
      : Error(stage + " failed at step " + std::to_string(step) + ": " + what), stage_(std::move(stage)), step_(step) {}
  const std::string& stage() const { return stage_; }
  int step() const { return step_; }

 private:
  std::string stage_;
  int step_;
};

struct StepArtifacts {
  int step = 0;
  std::vector<RolloutGroup> groups;
  std::vector<StateGraph> graphs;
  std::vector<RewardMap> rewards;
  std::vector<AdvantageBatch> advantages;
};

struct RunResult {
  std::vector<MetricsRow> metrics;
  PolicyTable policy;
  double final_eval = 0.0;
};

// Observer for tests and tooling; called after each step's update.
using StepObserver = std::function<void(const StepArtifacts&, const MetricsRow&)>;

// The training loop without touching the filesystem.
RunResult run_experiment(const ExperimentConfig& config, const StepObserver& observer = {});

// run_experiment plus artifacts in config.output_dir: config.txt,
// manifest.txt, metrics.csv, policy.txt and, with export_graphs, the final
// step's graphs under graphs/. A failing stage is recorded in the manifest
// and rethrown.
RunResult train(const ExperimentConfig& config);

struct TimingReport {
  int steps = 0;
  double graph = 0.0;
  double rollout = 0.0;
  double update = 0.0;
  double total = 0.0;
  double graph_share = 0.0;  // graph / total, 0 when total is 0
};

// Sums the wall-time columns of run_dir/metrics.csv. Throws IoError when the
// file is missing or has no rows.
TimingReport timing_report(const std::filesystem::path& run_dir);

}  // namespace rewardflow

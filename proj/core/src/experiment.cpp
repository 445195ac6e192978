#include "rewardflow/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rewardflow/shaping.hpp"

namespace rewardflow {

std::string to_string(Algo algo) {
  switch (algo) {
    case Algo::kRewardFlow: return "rewardflow";
    case Algo::kGrpo: return "grpo";
    case Algo::kRloo: return "rloo";
  }
  return "?";
}

std::string to_string(PropagationMode mode) {
  switch (mode) {
    case PropagationMode::kMin: return "min";
    case PropagationMode::kMean: return "mean";
    case PropagationMode::kNone: return "none";
  }
  return "?";
}

Algo parse_algo(std::string_view text) {
  if (text == "rewardflow") return Algo::kRewardFlow;
  if (text == "grpo") return Algo::kGrpo;
  if (text == "rloo") return Algo::kRloo;
  throw ConfigError("unknown algo '" + std::string(text) + "' (rewardflow, grpo, rloo)");
}

PropagationMode parse_propagation(std::string_view text) {
  if (text == "min") return PropagationMode::kMin;
  if (text == "mean") return PropagationMode::kMean;
  if (text == "none") return PropagationMode::kNone;
  throw ConfigError("unknown propagation '" + std::string(text) + "' (min, mean, none)");
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  // from_chars for double is missing from older libstdc++
  std::string s(value);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + s + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(value) + "'");
}

struct Field {
  const char* name;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view)> set;
};

#define RF_INT(member)                                                                   \
  Field {                                                                                \
#member, [](const ExperimentConfig& c) { return std::to_string(c.member); },         \
        [](ExperimentConfig& c, std::string_view v) { c.member = parse_number<int>(#member, v); } \
  }
#define RF_DOUBLE(member)                                                              \
  Field {                                                                              \
#member, [](const ExperimentConfig& c) { return fmt_double(c.member); },           \
        [](ExperimentConfig& c, std::string_view v) { c.member = parse_double(#member, v); } \
  }
#define RF_BOOL(member)                                                                       \
  Field {                                                                                     \
#member, [](const ExperimentConfig& c) { return std::string(c.member ? "true" : "false"); }, \
        [](ExperimentConfig& c, std::string_view v) { c.member = parse_bool(#member, v); }   \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      Field{"env", [](const ExperimentConfig& c) { return c.env; },
            [](ExperimentConfig& c, std::string_view v) { c.env = std::string(v); }},
      RF_INT(grid_size),
      RF_INT(num_boxes),
      RF_INT(min_solution_length),
      RF_INT(max_interior_walls),
      RF_INT(num_rooms),
      RF_INT(num_keys),
      RF_BOOL(ambiguous),
      RF_BOOL(start_at_door),
      RF_INT(receptacles_per_room),
      RF_INT(max_steps),
      Field{"algo", [](const ExperimentConfig& c) { return to_string(c.algo); },
            [](ExperimentConfig& c, std::string_view v) { c.algo = parse_algo(v); }},
      RF_INT(group_size),
      RF_DOUBLE(gamma),
      Field{"propagation", [](const ExperimentConfig& c) { return to_string(c.propagation); },
            [](ExperimentConfig& c, std::string_view v) { c.propagation = parse_propagation(v); }},
      RF_INT(max_propagation_iters),
      RF_DOUBLE(alpha_action),
      RF_DOUBLE(alpha_traj),
      RF_DOUBLE(epsilon_std),
      Field{"advantage_scale",
            [](const ExperimentConfig& c) { return std::string(c.advantage_scale == ScaleMode::kStd ? "std" : "none"); },
            [](ExperimentConfig& c, std::string_view v) {
              if (v == "std") {
                c.advantage_scale = ScaleMode::kStd;
              } else if (v == "none") {
                c.advantage_scale = ScaleMode::kNone;
              } else {
                throw ConfigError("advantage_scale must be std or none");
              }
            }},
      RF_DOUBLE(cluster_threshold),
      RF_BOOL(prune_invalid),
      RF_BOOL(normalize_states),
      RF_DOUBLE(invalid_penalty),
      RF_DOUBLE(temperature),
      RF_DOUBLE(clip_epsilon),
      RF_DOUBLE(kl_beta),
      RF_DOUBLE(learning_rate),
      RF_INT(epochs_per_batch),
      RF_INT(training_steps),
      RF_INT(tasks_per_step),
      RF_INT(task_pool),
      RF_INT(eval_interval),
      RF_INT(eval_tasks),
      Field{"seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
            [](ExperimentConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>("seed", v); }},
      Field{"output_dir", [](const ExperimentConfig& c) { return c.output_dir; },
            [](ExperimentConfig& c, std::string_view v) { c.output_dir = std::string(v); }},
      RF_BOOL(export_graphs),
  };
  return kFields;
}

#undef RF_INT
#undef RF_DOUBLE
#undef RF_BOOL

}  // namespace

void ExperimentConfig::validate() const {
  if (env != "sokoban" && env != "keydoor") throw ConfigError("env must be sokoban or keydoor");
  if (grid_size < 3) throw ConfigError("grid_size must be >= 3");
  if (num_boxes < 1) throw ConfigError("num_boxes must be >= 1");
  if (max_steps < 0) throw ConfigError("max_steps must be >= 0");
  if (group_size < 1) throw ConfigError("group_size must be >= 1");
  if (algo == Algo::kRloo && group_size < 2) throw ConfigError("rloo needs group_size >= 2");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in (0,1]");
  if (max_propagation_iters < 1) throw ConfigError("max_propagation_iters must be >= 1");
  if (!(cluster_threshold > 0.0 && cluster_threshold <= 1.0)) throw ConfigError("cluster_threshold must be in (0,1]");
  if (invalid_penalty < 0.0) throw ConfigError("invalid_penalty must be >= 0");
  if (!(temperature > 0.0)) throw ConfigError("temperature must be > 0");
  if (training_steps < 0) throw ConfigError("training_steps must be >= 0");
  if (tasks_per_step < 1) throw ConfigError("tasks_per_step must be >= 1");
  if (task_pool < 1) throw ConfigError("task_pool must be >= 1");
  if (eval_interval < 0) throw ConfigError("eval_interval must be >= 0");
  if (eval_tasks < 1) throw ConfigError("eval_tasks must be >= 1");
  advantage_options().validate();
  update_config().validate();
}

int ExperimentConfig::effective_max_steps() const {
  if (max_steps > 0) return max_steps;
  return env == "keydoor" ? KeyDoorConfig{}.max_steps : SokobanConfig{}.max_steps;
}

EnvSpec ExperimentConfig::env_spec(std::uint64_t task_seed) const {
  if (env == "keydoor") {
    KeyDoorConfig c;
    c.num_rooms = num_rooms;
    c.num_keys = num_keys;
    c.seed = task_seed;
    c.max_steps = effective_max_steps();
    c.ambiguous = ambiguous;
    c.start_at_door = start_at_door;
    c.receptacles_per_room = receptacles_per_room;
    return c;
  }
  SokobanConfig c;
  c.grid_size = grid_size;
  c.num_boxes = num_boxes;
  c.seed = task_seed;
  c.max_steps = effective_max_steps();
  c.min_solution_length = min_solution_length;
  c.max_interior_walls = max_interior_walls;
  return c;
}

RolloutOptions ExperimentConfig::rollout_options(bool greedy) const {
  RolloutOptions o;
  o.group_size = group_size;
  o.max_steps = effective_max_steps();
  o.greedy = greedy;
  // The agent always sees its own history; normalize_states only changes
  // how the graph keys states.
  o.canonical = graph_options().canonical();
  o.canonical.normalize = true;
  return o;
}

GraphOptions ExperimentConfig::graph_options() const {
  GraphOptions o;
  o.prune_invalid = prune_invalid;
  o.normalize = normalize_states;
  o.cluster_threshold = cluster_threshold;
  return o;
}

AdvantageOptions ExperimentConfig::advantage_options() const {
  return AdvantageOptions{alpha_action, alpha_traj, epsilon_std, advantage_scale};
}

UpdateConfig ExperimentConfig::update_config() const {
  return UpdateConfig{clip_epsilon, kl_beta, learning_rate, epochs_per_batch};
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  for (const Field& f : fields()) {
    if (key == f.name) {
      f.set(*this, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const Field& f : fields()) out += std::string(f.name) + " = " + f.get(*this) + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::from_text(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    config.set(trim(std::string_view(trimmed).substr(0, eq)), trim(std::string_view(trimmed).substr(eq + 1)));
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

std::uint64_t task_seed(const ExperimentConfig& config, int task) {
  return derive_seed({config.seed, 0x7461736bULL, static_cast<std::uint64_t>(task)});
}

TaskPool::TaskPool(ExperimentConfig config) : config_(std::move(config)) {
  envs_.resize(static_cast<std::size_t>(config_.task_pool));
}

const Environment& TaskPool::task(int index) {
  auto& slot = envs_.at(static_cast<std::size_t>(index));
  if (!slot) slot = make_environment(config_.env_spec(task_seed(config_, index)));
  return *slot;
}

double evaluate(const PolicyTable& policy, TaskPool& pool, int num_tasks, const EvalOptions& options) {
  if (num_tasks < 1) throw UsageError("evaluation needs at least one task");
  const RolloutOptions ro = pool.config().rollout_options(options.greedy);
  int solved = 0;
  for (int j = 0; j < num_tasks; ++j) {
    const Trajectory t = run_episode(pool.task(j % pool.size()), policy, ro,
                                     derive_seed({options.seed, static_cast<std::uint64_t>(j)}), 0);
    if (t.succeeded()) ++solved;
  }
  return static_cast<double>(solved) / num_tasks;
}

double evaluate(const PolicyTable& policy, const ExperimentConfig& config, int num_tasks,
                const EvalOptions& options) {
  TaskPool pool(config);
  return evaluate(policy, pool, num_tasks, options);
}

std::string metrics_header() {
  return "step,train_success_rate,eval_success_rate,mean_entropy,avg_nodes,avg_edges,invalid_action_rate,"
         "wall_time_graph,wall_time_rollout,wall_time_update";
}

std::string metrics_line(const MetricsRow& row) {
  char buf[512];
  char eval[32] = "";
  if (row.eval_success_rate) std::snprintf(eval, sizeof(eval), "%.6f", *row.eval_success_rate);
  std::snprintf(buf, sizeof(buf), "%d,%.6f,%s,%.9f,%.4f,%.4f,%.6f,%.6f,%.6f,%.6f", row.step,
                row.train_success_rate, eval, row.mean_entropy, row.avg_nodes, row.avg_edges,
                row.invalid_action_rate, row.wall_time_graph, row.wall_time_rollout, row.wall_time_update);
  return buf;
}

std::vector<MetricsRow> read_metrics(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot read metrics " + csv.string());
  std::string line;
  if (!std::getline(in, line) || line != metrics_header()) throw IoError("unexpected metrics header in " + csv.string());
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 10) throw IoError("malformed metrics row: " + line);
    MetricsRow r;
    try {
      r.step = std::stoi(cells[0]);
      r.train_success_rate = std::stod(cells[1]);
      if (!cells[2].empty()) r.eval_success_rate = std::stod(cells[2]);
      r.mean_entropy = std::stod(cells[3]);
      r.avg_nodes = std::stod(cells[4]);
      r.avg_edges = std::stod(cells[5]);
      r.invalid_action_rate = std::stod(cells[6]);
      r.wall_time_graph = std::stod(cells[7]);
      r.wall_time_rollout = std::stod(cells[8]);
      r.wall_time_update = std::stod(cells[9]);
    } catch (const std::exception&) {
      throw IoError("malformed metrics row: " + line);
    }
    rows.push_back(r);
  }
  return rows;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
auto stage(const char* name, int step, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, step, e.what());
  }
}

std::size_t index_of_action(const std::vector<std::string>& actions, const std::string& action) {
  const auto it = std::find(actions.begin(), actions.end(), action);
  if (it == actions.end()) throw ConsistencyError("sampled action is not admissible: " + action);
  return static_cast<std::size_t>(it - actions.begin());
}

// Distinct tasks when the pool allows it, drawn by partial shuffle.
std::vector<int> pick_tasks(const ExperimentConfig& config, int step) {
  Rng rng(derive_seed({config.seed, 0x7069636bULL, static_cast<std::uint64_t>(step)}));
  std::vector<int> out;
  if (config.tasks_per_step <= config.task_pool) {
    std::vector<int> all(static_cast<std::size_t>(config.task_pool));
    for (int i = 0; i < config.task_pool; ++i) all[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < config.tasks_per_step; ++k) {
      const auto j = static_cast<std::size_t>(k) + rng.below(all.size() - static_cast<std::size_t>(k));
      std::swap(all[static_cast<std::size_t>(k)], all[j]);
      out.push_back(all[static_cast<std::size_t>(k)]);
    }
  } else {
    for (int k = 0; k < config.tasks_per_step; ++k) {
      out.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(config.task_pool))));
    }
  }
  return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const StepObserver& observer) {
  config.validate();
  TaskPool pool(config);
  PolicyTable policy(config.temperature);
  const PolicyTable reference = policy;
  const RolloutOptions rollout = config.rollout_options(false);
  const GraphOptions graph_options = config.graph_options();
  const AdvantageOptions adv_options = config.advantage_options();
  const UpdateConfig update_config = config.update_config();
  const bool with_graph = config.algo == Algo::kRewardFlow;

  RunResult result{{}, policy, 0.0};
  for (int step = 1; step <= config.training_steps; ++step) {
    StepArtifacts art;
    art.step = step;
    MetricsRow row;
    row.step = step;

    auto t0 = Clock::now();
    stage("rollout", step, [&] {
      const std::vector<int> tasks = pick_tasks(config, step);
      for (std::size_t k = 0; k < tasks.size(); ++k) {
        const std::uint64_t seed = derive_seed({config.seed, 0x726f6c6cULL, static_cast<std::uint64_t>(step), k});
        art.groups.push_back(sample_group(pool.task(tasks[k]), policy, rollout, seed,
                                          "task-" + std::to_string(tasks[k])));
      }
      return 0;
    });
    row.wall_time_rollout = seconds_since(t0);

    std::vector<std::vector<ShapedTrajectory>> shaped(art.groups.size());
    if (with_graph) {
      t0 = Clock::now();
      stage("graph", step, [&] {
        for (std::size_t k = 0; k < art.groups.size(); ++k) {
          art.graphs.push_back(build_graph(art.groups[k], graph_options));
          const StateGraph& g = art.graphs.back();
          if (config.propagation == PropagationMode::kNone) {
            art.rewards.push_back(zero_rewards(g));
          } else {
            art.rewards.push_back(propagate(g,
                                            config.propagation == PropagationMode::kMin ? PropagationStrategy::kMinHop
                                                                                       : PropagationStrategy::kMeanHop,
                                            config.gamma, config.max_propagation_iters));
          }
          shaped[k] = shape_group(art.groups[k], g, art.rewards.back(), config.invalid_penalty);
        }
        return 0;
      });
      row.wall_time_graph = seconds_since(t0);
    }

    t0 = Clock::now();
    stage("update", step, [&] {
      PolicyBatch batch;
      std::vector<StateRef> visited;
      std::set<std::string> seen;
      std::size_t transitions = 0, invalid = 0, trajectories = 0, successes = 0;
      for (std::size_t k = 0; k < art.groups.size(); ++k) {
        const RolloutGroup& group = art.groups[k];
        if (with_graph) {
          art.advantages.push_back(rewardflow_advantages(shaped[k], adv_options));
        } else {
          const std::vector<double> outcomes = outcomes_of(group);
          art.advantages.push_back(broadcast_advantages(
              group, config.algo == Algo::kGrpo ? grpo_advantages(outcomes, config.epsilon_std)
                                                : rloo_advantages(outcomes)));
        }
        const AdvantageBatch& adv = art.advantages.back();
        for (std::size_t i = 0; i < group.trajectories.size(); ++i) {
          const Trajectory& traj = group.trajectories[i];
          ++trajectories;
          if (traj.succeeded()) ++successes;
          std::vector<PolicySample> samples;
          for (std::size_t t = 0; t < traj.transitions.size(); ++t) {
            const Transition& tr = traj.transitions[t];
            ++transitions;
            if (!tr.valid) ++invalid;
            const auto& actions = tr.state.admissible_actions;
            samples.push_back(PolicySample{tr.policy_key, actions, index_of_action(actions, tr.action),
                                           tr.log_prob_old, adv.values[i][t].combined});
            if (seen.insert(tr.policy_key).second) visited.push_back(StateRef{tr.policy_key, actions});
          }
          batch.trajectories.push_back(std::move(samples));
        }
      }
      row.train_success_rate = trajectories ? static_cast<double>(successes) / trajectories : 0.0;
      row.invalid_action_rate = transitions ? static_cast<double>(invalid) / transitions : 0.0;
      row.mean_entropy = policy_entropy(policy, visited);
      policy = update(policy, batch, update_config, reference);
      return 0;
    });
    row.wall_time_update = seconds_since(t0);

    if (with_graph && !art.graphs.empty()) {
      for (const StateGraph& g : art.graphs) {
        row.avg_nodes += static_cast<double>(g.num_nodes());
        row.avg_edges += static_cast<double>(g.num_edges());
      }
      row.avg_nodes /= static_cast<double>(art.graphs.size());
      row.avg_edges /= static_cast<double>(art.graphs.size());
    }

    const bool eval_now =
        config.eval_interval > 0 && (step % config.eval_interval == 0 || step == config.training_steps);
    if (eval_now) {
      row.eval_success_rate = stage("eval", step, [&] { return evaluate(policy, pool, config.eval_tasks); });
      result.final_eval = *row.eval_success_rate;
    }
    if (observer) observer(art, row);
    result.metrics.push_back(row);
  }
  result.policy = policy;
  if (config.training_steps == 0 || config.eval_interval == 0) {
    result.final_eval = evaluate(policy, pool, config.eval_tasks);
  }
  return result;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

RunResult train(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "config.txt", config.to_text());

  std::ofstream csv(dir / "metrics.csv", std::ios::binary);
  if (!csv) throw IoError("cannot write metrics in " + dir.string());
  csv << metrics_header() << '\n';

  StepObserver observer = [&](const StepArtifacts& art, const MetricsRow& row) {
    csv << metrics_line(row) << '\n';
    csv.flush();
    if (config.export_graphs && art.step == config.training_steps) {
      fs::create_directories(dir / "graphs");
      for (std::size_t k = 0; k < art.graphs.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "step%03d_%s.dot", art.step, art.groups[k].task_id.c_str());
        write_file(dir / "graphs" / name, export_dot(art.graphs[k], &art.rewards[k]));
      }
    }
  };

  std::ostringstream manifest;
  manifest << "run: " << dir.string() << "\n";
  try {
    RunResult result = run_experiment(config, observer);
    std::ofstream policy_out(dir / "policy.txt", std::ios::binary);
    result.policy.save(policy_out);
    char line[128];
    std::snprintf(line, sizeof(line), "final_eval_success_rate: %.6f\n", result.final_eval);
    manifest << "status: ok\n" << "steps: " << result.metrics.size() << "\n" << line
             << "policy_entries: " << result.policy.size() << "\n";
    manifest << "\n[config]\n" << config.to_text();
    write_file(dir / "manifest.txt", manifest.str());
    return result;
  } catch (const StageError& e) {
    manifest << "status: failed\nstage: " << e.stage() << "\nstep: " << e.step() << "\nerror: " << e.what() << "\n";
    manifest << "\n[config]\n" << config.to_text();
    write_file(dir / "manifest.txt", manifest.str());
    throw;
  }
}

TimingReport timing_report(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "metrics.csv";
  if (!std::filesystem::exists(path)) throw IoError("no metrics.csv in " + run_dir.string());
  const std::vector<MetricsRow> rows = read_metrics(path);
  if (rows.empty()) throw IoError("metrics.csv in " + run_dir.string() + " has no rows");
  TimingReport report;
  report.steps = static_cast<int>(rows.size());
  for (const MetricsRow& r : rows) {
    report.graph += r.wall_time_graph;
    report.rollout += r.wall_time_rollout;
    report.update += r.wall_time_update;
  }
  report.total = report.graph + report.rollout + report.update;
  report.graph_share = report.total > 0.0 ? report.graph / report.total : 0.0;
  return report;
}

}  // namespace rewardflow

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rewardflow/rng.hpp"

namespace rewardflow {

// Tabular masked-softmax policy over (state key, action) logits. Unseen
// pairs have logit 0, so an untouched state is uniform over its admissible
// actions.
class PolicyTable {
 public:
  using ActionLogits = std::unordered_map<std::string, double>;

  explicit PolicyTable(double temperature = 0.4);

  double temperature() const { return temperature_; }
  double logit(std::string_view state, std::string_view action) const;
  void set_logit(const std::string& state, const std::string& action, double value);
  void add_to_logit(const std::string& state, const std::string& action, double delta);

  // pi(.|state) restricted to `actions`, temperature-scaled.
  std::vector<double> probabilities(std::string_view state, std::span<const std::string> actions) const;
  std::vector<double> log_probabilities(std::string_view state, std::span<const std::string> actions) const;

  struct Choice {
    std::size_t index = 0;
    double log_prob = 0.0;
  };
  // Samples from the masked softmax. Throws UsageError on an empty action set.
  Choice act(std::string_view state, std::span<const std::string> actions, Rng& rng) const;
  // Highest-probability action; ties go to the earliest admissible action.
  Choice greedy(std::string_view state, std::span<const std::string> actions) const;

  const std::unordered_map<std::string, ActionLogits>& table() const { return logits_; }
  std::size_t size() const;

  // Line-oriented text form, sorted for byte-stable output:
  //   temperature <t>
  //   <escaped state>\t<escaped action>\t<logit>
  void save(std::ostream& out) const;
  static PolicyTable load(std::istream& in);

 private:
  double temperature_;
  std::unordered_map<std::string, ActionLogits> logits_;
};

struct UpdateConfig {
  double clip_epsilon = 0.2;
  double kl_beta = 0.01;
  double learning_rate = 0.1;
  int epochs_per_batch = 1;

  void validate() const;
};

// One decision in the optimisation batch.
struct PolicySample {
  std::string state;
  std::vector<std::string> actions;  // admissible set at decision time
  std::size_t action = 0;            // index into `actions`
  double log_prob_old = 0.0;
  double advantage = 0.0;
};

// Samples grouped by trajectory; the objective averages within a trajectory
// first (1/T_i) and then across trajectories.
struct PolicyBatch {
  std::vector<std::vector<PolicySample>> trajectories;
};

struct StateRef {
  std::string state;
  std::vector<std::string> actions;
};

// exp(log pi_new(a|s) - log_prob_old)
double ratio(const PolicyTable& policy, const PolicySample& sample);

// Exact categorical KL(pi || ref) at one state.
double kl_at(const PolicyTable& policy, const PolicyTable& reference, std::string_view state,
             std::span<const std::string> actions);

// Mean over `states` of the exact KL.
double kl_to_reference(const PolicyTable& policy, const PolicyTable& reference,
                       std::span<const StateRef> states);

// Mean over `states` of -sum pi ln pi over admissible actions.
double policy_entropy(const PolicyTable& policy, std::span<const StateRef> states);

// J = mean_i (1/T_i) sum_t [ min(rho A, clip(rho, 1-eps, 1+eps) A) - beta KL(s_t) ].
// Throws NumericalError on a non-finite advantage or ratio.
double surrogate_objective(const PolicyTable& policy, const PolicyBatch& batch,
                           const UpdateConfig& config, const PolicyTable& reference);

// dJ/dlogit for every (state, action) pair that shares a state with a sample.
using PolicyGradient = std::unordered_map<std::string, PolicyTable::ActionLogits>;
PolicyGradient surrogate_gradient(const PolicyTable& policy, const PolicyBatch& batch,
                                  const UpdateConfig& config, const PolicyTable& reference);

// epochs_per_batch full-batch gradient-ascent steps on J.
PolicyTable update(const PolicyTable& policy, const PolicyBatch& batch, const UpdateConfig& config,
                   const PolicyTable& reference);

}  // namespace rewardflow

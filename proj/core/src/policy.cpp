#include "rewardflow/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include "rewardflow/errors.hpp"

namespace rewardflow {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char n = s[++i];
      out.push_back(n == 't' ? '\t' : n == 'n' ? '\n' : n);
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PolicyTable::PolicyTable(double temperature) : temperature_(temperature) {
  if (!(temperature > 0.0)) throw ConfigError("policy temperature must be > 0");
}

double PolicyTable::logit(std::string_view state, std::string_view action) const {
  auto it = logits_.find(std::string(state));
  if (it == logits_.end()) return 0.0;
  auto jt = it->second.find(std::string(action));
  return jt == it->second.end() ? 0.0 : jt->second;
}

void PolicyTable::set_logit(const std::string& state, const std::string& action, double value) {
  logits_[state][action] = value;
}

void PolicyTable::add_to_logit(const std::string& state, const std::string& action, double delta) {
  logits_[state][action] += delta;
}

std::size_t PolicyTable::size() const {
  std::size_t n = 0;
  for (const auto& [state, row] : logits_) n += row.size();
  return n;
}

std::vector<double> PolicyTable::log_probabilities(std::string_view state,
                                                   std::span<const std::string> actions) const {
  std::vector<double> z(actions.size(), 0.0);
  auto it = logits_.find(std::string(state));
  if (it != logits_.end()) {
    for (std::size_t i = 0; i < actions.size(); ++i) {
      auto jt = it->second.find(actions[i]);
      if (jt != it->second.end()) z[i] = jt->second / temperature_;
    }
  }
  if (z.empty()) return z;
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  const double lse = m + std::log(sum);
  for (double& v : z) v -= lse;
  return z;
}

std::vector<double> PolicyTable::probabilities(std::string_view state,
                                               std::span<const std::string> actions) const {
  std::vector<double> p = log_probabilities(state, actions);
  for (double& v : p) v = std::exp(v);
  return p;
}

PolicyTable::Choice PolicyTable::act(std::string_view state, std::span<const std::string> actions,
                                     Rng& rng) const {
  if (actions.empty()) throw UsageError("act() on a state with no admissible actions");
  const std::vector<double> lp = log_probabilities(state, actions);
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t chosen = actions.size() - 1;
  for (std::size_t i = 0; i < lp.size(); ++i) {
    cumulative += std::exp(lp[i]);
    if (u < cumulative) {
      chosen = i;
      break;
    }
  }
  if (!std::isfinite(lp[chosen])) throw NumericalError("sampled action has zero probability");
  return Choice{chosen, lp[chosen]};
}

PolicyTable::Choice PolicyTable::greedy(std::string_view state, std::span<const std::string> actions) const {
  if (actions.empty()) throw UsageError("greedy() on a state with no admissible actions");
  const std::vector<double> lp = log_probabilities(state, actions);
  const auto best = static_cast<std::size_t>(std::max_element(lp.begin(), lp.end()) - lp.begin());
  return Choice{best, lp[best]};
}

void PolicyTable::save(std::ostream& out) const {
  std::map<std::string, std::map<std::string, double>> sorted;
  for (const auto& [state, row] : logits_) {
    for (const auto& [action, value] : row) sorted[state][action] = value;
  }
  out << "temperature " << format_double(temperature_) << '\n';
  for (const auto& [state, row] : sorted) {
    for (const auto& [action, value] : row) {
      out << escape(state) << '\t' << escape(action) << '\t' << format_double(value) << '\n';
    }
  }
}

PolicyTable PolicyTable::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("temperature ")) {
    throw IoError("policy file is missing its temperature header");
  }
  PolicyTable table(std::stod(line.substr(12)));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) throw IoError("malformed policy line: " + line);
    table.set_logit(unescape(std::string_view(line).substr(0, a)),
                    unescape(std::string_view(line).substr(a + 1, b - a - 1)), std::stod(line.substr(b + 1)));
  }
  return table;
}

void UpdateConfig::validate() const {
  if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0)) throw ConfigError("clip_epsilon must be in (0,1)");
  if (kl_beta < 0.0) throw ConfigError("kl_beta must be >= 0");
  if (learning_rate < 0.0) throw ConfigError("learning_rate must be >= 0");
  if (epochs_per_batch < 1) throw ConfigError("epochs_per_batch must be >= 1");
}

double ratio(const PolicyTable& policy, const PolicySample& sample) {
  const std::vector<double> lp = policy.log_probabilities(sample.state, sample.actions);
  return std::exp(lp.at(sample.action) - sample.log_prob_old);
}

double kl_at(const PolicyTable& policy, const PolicyTable& reference, std::string_view state,
             std::span<const std::string> actions) {
  const std::vector<double> lp = policy.log_probabilities(state, actions);
  const std::vector<double> lr = reference.log_probabilities(state, actions);
  double kl = 0.0;
  for (std::size_t i = 0; i < lp.size(); ++i) kl += std::exp(lp[i]) * (lp[i] - lr[i]);
  return std::max(kl, 0.0);
}

double kl_to_reference(const PolicyTable& policy, const PolicyTable& reference,
                       std::span<const StateRef> states) {
  if (states.empty()) return 0.0;
  double total = 0.0;
  for (const StateRef& s : states) total += kl_at(policy, reference, s.state, s.actions);
  return total / static_cast<double>(states.size());
}

double policy_entropy(const PolicyTable& policy, std::span<const StateRef> states) {
  if (states.empty()) return 0.0;
  double total = 0.0;
  for (const StateRef& s : states) {
    for (double lp : policy.log_probabilities(s.state, s.actions)) {
      const double p = std::exp(lp);
      if (p > 0.0) total -= p * lp;
    }
  }
  return total / static_cast<double>(states.size());
}

namespace {

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite ") + what + " in surrogate objective");
}

}  // namespace

double surrogate_objective(const PolicyTable& policy, const PolicyBatch& batch,
                           const UpdateConfig& config, const PolicyTable& reference) {
  double total = 0.0;
  std::size_t counted = 0;
  const double lo = 1.0 - config.clip_epsilon;
  const double hi = 1.0 + config.clip_epsilon;
  for (const auto& trajectory : batch.trajectories) {
    if (trajectory.empty()) continue;
    double sum = 0.0;
    for (const PolicySample& s : trajectory) {
      check_finite(s.advantage, "advantage");
      const double rho = ratio(policy, s);
      check_finite(rho, "ratio");
      sum += std::min(rho * s.advantage, clip(rho, lo, hi) * s.advantage);
      if (config.kl_beta != 0.0) sum -= config.kl_beta * kl_at(policy, reference, s.state, s.actions);
    }
    total += sum / static_cast<double>(trajectory.size());
    ++counted;
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

PolicyGradient surrogate_gradient(const PolicyTable& policy, const PolicyBatch& batch,
                                  const UpdateConfig& config, const PolicyTable& reference) {
  PolicyGradient grad;
  std::size_t counted = 0;
  for (const auto& trajectory : batch.trajectories) counted += trajectory.empty() ? 0 : 1;
  if (counted == 0) return grad;

  const double lo = 1.0 - config.clip_epsilon;
  const double hi = 1.0 + config.clip_epsilon;
  const double inv_tau = 1.0 / policy.temperature();
  for (const auto& trajectory : batch.trajectories) {
    if (trajectory.empty()) continue;
    const double weight = 1.0 / (static_cast<double>(counted) * static_cast<double>(trajectory.size()));
    for (const PolicySample& s : trajectory) {
      check_finite(s.advantage, "advantage");
      const std::vector<double> lp = policy.log_probabilities(s.state, s.actions);
      const double rho = std::exp(lp.at(s.action) - s.log_prob_old);
      check_finite(rho, "ratio");
      auto& row = grad[s.state];
      // The min picks the unclipped branch unless clipping lowers the value,
      // in which case the term is locally constant.
      const bool unclipped = rho * s.advantage <= clip(rho, lo, hi) * s.advantage;
      const double surrogate_scale = unclipped ? weight * s.advantage * rho * inv_tau : 0.0;

      double kl = 0.0;
      std::vector<double> lr;
      if (config.kl_beta != 0.0) {
        lr = reference.log_probabilities(s.state, s.actions);
        for (std::size_t i = 0; i < lp.size(); ++i) kl += std::exp(lp[i]) * (lp[i] - lr[i]);
      }
      for (std::size_t i = 0; i < s.actions.size(); ++i) {
        const double p = std::exp(lp[i]);
        double g = surrogate_scale * ((i == s.action ? 1.0 : 0.0) - p);
        if (config.kl_beta != 0.0) {
          g -= weight * config.kl_beta * inv_tau * p * ((lp[i] - lr[i]) - kl);
        }
        row[s.actions[i]] += g;
      }
    }
  }
  return grad;
}

PolicyTable update(const PolicyTable& policy, const PolicyBatch& batch, const UpdateConfig& config,
                   const PolicyTable& reference) {
  config.validate();
  PolicyTable current = policy;
  for (int epoch = 0; epoch < config.epochs_per_batch; ++epoch) {
    const PolicyGradient grad = surrogate_gradient(current, batch, config, reference);
    // Apply in sorted order so floating-point results do not depend on hash
    // iteration order.
    std::map<std::string, std::map<std::string, double>> ordered;
    for (const auto& [state, row] : grad) {
      for (const auto& [action, g] : row) ordered[state][action] = g;
    }
    for (const auto& [state, row] : ordered) {
      for (const auto& [action, g] : row) {
        if (g != 0.0) current.add_to_logit(state, action, config.learning_rate * g);
      }
    }
  }
  return current;
}

}  // namespace rewardflow

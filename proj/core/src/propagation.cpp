#include "rewardflow/propagation.hpp"

#include <cmath>
#include <string>

#include "rewardflow/errors.hpp"

namespace rewardflow {

RewardMap::RewardMap(std::shared_ptr<const NodeTable> nodes, std::vector<double> distance, double gamma,
                     PropagationStrategy strategy)
    : nodes_(std::move(nodes)), distance_(std::move(distance)), gamma_(gamma), strategy_(strategy) {
  if (!nodes_ || distance_.size() != nodes_->keys.size()) throw ConsistencyError("reward map size mismatch");
  reward_.resize(distance_.size());
  for (std::size_t i = 0; i < distance_.size(); ++i) {
    reward_[i] = std::isinf(distance_[i]) ? 0.0 : std::pow(gamma_, distance_[i]);
  }
}

const std::vector<std::string>& RewardMap::nodes() const {
  static const std::vector<std::string> kEmpty;
  return nodes_ ? nodes_->keys : kEmpty;
}

bool RewardMap::contains(const std::string& key) const { return nodes_ && nodes_->find(key).has_value(); }

std::size_t RewardMap::id(const std::string& key) const {
  if (nodes_) {
    if (auto i = nodes_->find(key)) return *i;
  }
  throw ConsistencyError("state has no propagated reward: " + key.substr(0, 80));
}

double RewardMap::distance(const std::string& key) const { return distance_[id(key)]; }
double RewardMap::reward(const std::string& key) const { return reward_[id(key)]; }
bool RewardMap::reachable(const std::string& key) const { return contains(key) && !std::isinf(distance_[id(key)]); }

double RewardMap::distance_at(std::size_t node) const {
  if (node >= distance_.size()) throw ConsistencyError("node id outside reward map");
  return distance_[node];
}

double RewardMap::reward_at(std::size_t node) const {
  if (node >= reward_.size()) throw ConsistencyError("node id outside reward map");
  return reward_[node];
}

bool RewardMap::reachable_at(std::size_t node) const { return !std::isinf(distance_at(node)); }

namespace {

void check_args(double gamma, int max_iters) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in (0,1]");
  if (max_iters < 1) throw ConfigError("max propagation iterations must be >= 1");
}

// Level-synchronous BFS over reversed edges. Each level is one iteration.
std::vector<double> reverse_bfs(const StateGraph& graph, const std::vector<std::size_t>& sources, int max_iters) {
  std::vector<double> dist(graph.num_nodes(), kUnreachable);
  std::vector<std::size_t> frontier;
  for (std::size_t s : sources) {
    if (dist[s] != 0.0) {
      dist[s] = 0.0;
      frontier.push_back(s);
    }
  }
  int level = 0;
  std::vector<std::size_t> next;
  while (!frontier.empty()) {
    next.clear();
    for (std::size_t v : frontier) {
      for (std::size_t e : graph.in_edges(v)) {
        const std::size_t u = graph.edges()[e].src;
        if (std::isinf(dist[u])) {
          dist[u] = static_cast<double>(level + 1);
          next.push_back(u);
        }
      }
    }
    if (!next.empty() && level + 1 > max_iters) {
      throw PropagationBudgetError("propagation needs more than " + std::to_string(max_iters) + " iterations");
    }
    ++level;
    frontier.swap(next);
  }
  return dist;
}

}  // namespace

RewardMap propagate_min(const StateGraph& graph, double gamma, int max_iters) {
  check_args(gamma, max_iters);
  return RewardMap(graph.node_table(), reverse_bfs(graph, graph.success_nodes(), max_iters), gamma,
                   PropagationStrategy::kMinHop);
}

RewardMap propagate_mean(const StateGraph& graph, double gamma, int max_iters) {
  check_args(gamma, max_iters);
  std::vector<double> sum(graph.num_nodes(), 0.0);
  std::vector<int> count(graph.num_nodes(), 0);
  for (std::size_t s : graph.success_nodes()) {
    const std::vector<double> d = reverse_bfs(graph, {s}, max_iters);
    for (std::size_t n = 0; n < d.size(); ++n) {
      if (!std::isinf(d[n])) {
        sum[n] += d[n];
        ++count[n];
      }
    }
  }
  std::vector<double> dist(graph.num_nodes(), kUnreachable);
  for (std::size_t n = 0; n < dist.size(); ++n) {
    if (count[n] > 0) dist[n] = sum[n] / count[n];
  }
  return RewardMap(graph.node_table(), std::move(dist), gamma, PropagationStrategy::kMeanHop);
}

RewardMap propagate(const StateGraph& graph, PropagationStrategy strategy, double gamma, int max_iters) {
  return strategy == PropagationStrategy::kMinHop ? propagate_min(graph, gamma, max_iters)
                                                  : propagate_mean(graph, gamma, max_iters);
}

RewardMap zero_rewards(const StateGraph& graph) {
  return RewardMap(graph.node_table(), std::vector<double>(graph.num_nodes(), kUnreachable), kDefaultGamma,
                   PropagationStrategy::kMinHop);
}

}  // namespace rewardflow

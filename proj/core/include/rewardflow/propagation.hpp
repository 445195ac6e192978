#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rewardflow/state_graph.hpp"

namespace rewardflow {

enum class PropagationStrategy { kMinHop, kMeanHop };

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultGamma = 0.9;
inline constexpr int kDefaultMaxPropagationIters = 1000;

// Hop distance to success and R = gamma^d per graph node. Distances are
// integral under kMinHop and may be fractional under kMeanHop; kUnreachable
// maps to reward 0.
class RewardMap {
 public:
  RewardMap() = default;
  RewardMap(std::shared_ptr<const NodeTable> nodes, std::vector<double> distance, double gamma,
            PropagationStrategy strategy);

  double gamma() const { return gamma_; }
  PropagationStrategy strategy() const { return strategy_; }
  std::size_t size() const { return distance_.size(); }
  const std::vector<std::string>& nodes() const;
  const std::vector<double>& distances() const { return distance_; }
  const std::vector<double>& rewards() const { return reward_; }
  // True when computed for `graph` (same node table).
  bool belongs_to(const StateGraph& graph) const { return nodes_ == graph.node_table(); }

  bool contains(const std::string& key) const;
  // By key. Both throw ConsistencyError for unknown keys.
  double distance(const std::string& key) const;
  double reward(const std::string& key) const;
  bool reachable(const std::string& key) const;

  // By node id. Throw ConsistencyError when out of range.
  double distance_at(std::size_t node) const;
  double reward_at(std::size_t node) const;
  bool reachable_at(std::size_t node) const;

 private:
  std::size_t id(const std::string& key) const;

  std::shared_ptr<const NodeTable> nodes_;
  std::vector<double> distance_;
  std::vector<double> reward_;
  double gamma_ = kDefaultGamma;
  PropagationStrategy strategy_ = PropagationStrategy::kMinHop;
};

// Multi-source BFS over reversed edges from every success node. Throws
// PropagationBudgetError when some node lies more than max_iters hops out.
RewardMap propagate_min(const StateGraph& graph, double gamma = kDefaultGamma,
                        int max_iters = kDefaultMaxPropagationIters);

// d = mean, over the success nodes that reach a node, of the hop distance to
// each. A success node's own 0 is part of its mean.
RewardMap propagate_mean(const StateGraph& graph, double gamma = kDefaultGamma,
                         int max_iters = kDefaultMaxPropagationIters);

RewardMap propagate(const StateGraph& graph, PropagationStrategy strategy, double gamma = kDefaultGamma,
                    int max_iters = kDefaultMaxPropagationIters);

// Every node unreachable (R = 0). Stands in for "no propagation".
RewardMap zero_rewards(const StateGraph& graph);

}  // namespace rewardflow

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rewardflow/canonical.hpp"
#include "rewardflow/trajectory.hpp"

namespace rewardflow {

class RewardMap;

struct GraphOptions {
  // Drop invalid transitions and the sentinel observations they produce. An
  // invalid step leaves the agent where it was, so the following transition
  // starts from the last real state.
  bool prune_invalid = true;
  bool normalize = true;
  double cluster_threshold = kDefaultClusterThreshold;
  std::vector<TransformRule> rules = default_transform_rules();

  CanonicalOptions canonical() const { return CanonicalOptions{normalize, cluster_threshold, rules}; }
};

// Canonical keys in node order. Shared by a graph and the reward maps
// computed from it. `index` also maps each merged member text to its node.
struct NodeTable {
  std::vector<std::string> keys;
  std::unordered_map<std::string, std::size_t> index;

  std::optional<std::size_t> find(const std::string& key) const {
    auto it = index.find(key);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

struct Edge {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::string action;
};

struct Occurrence {
  int rollout = 0;
  int step = 0;  // position in the state sequence, 0..T
};

// Canonical endpoints (node ids) of one raw transition.
struct TransitionKeys {
  std::size_t from = 0;
  std::size_t to = 0;
  // The environment executed it and did not answer with the sentinel.
  bool executed = false;
  // It contributed an edge to the graph.
  bool edge = false;
};

class StateGraph {
 public:
  StateGraph();

  std::size_t num_nodes() const { return nodes_->keys.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<std::string>& nodes() const { return nodes_->keys; }
  const std::string& key(std::size_t node) const { return nodes_->keys[node]; }
  const std::shared_ptr<const NodeTable>& node_table() const { return shared_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& success_nodes() const { return success_; }
  bool is_success(std::size_t node) const { return is_success_[node]; }

  std::optional<std::size_t> find(const std::string& key) const { return nodes_->find(key); }
  std::size_t index_of(const std::string& key) const;  // throws ConsistencyError
  bool contains(const std::string& key) const { return nodes_->find(key).has_value(); }
  std::optional<std::size_t> find_edge(const std::string& src, const std::string& action,
                                       const std::string& dst) const;

  std::size_t multiplicity(std::size_t edge) const { return multiplicity_[edge]; }
  const std::vector<Occurrence>& occurrences(std::size_t node) const { return occurrences_[node]; }

  // Edge indices leaving / entering a node.
  const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_[node]; }
  const std::vector<std::size_t>& in_edges(std::size_t node) const { return in_[node]; }

  // Per trajectory, in group order.
  const std::vector<std::vector<TransitionKeys>>& transition_keys() const { return transition_keys_; }

  const std::vector<CanonicalState>& clusters() const { return clusters_; }
  const GraphOptions& options() const { return options_; }

 private:
  friend StateGraph build_graph(const RolloutGroup& group, const GraphOptions& options);

  void ensure_node(std::size_t id, const std::string& key);
  void add_edge(std::size_t src, const std::string& action, std::size_t dst);
  void mark_success(std::size_t node);

  GraphOptions options_;
  std::shared_ptr<NodeTable> nodes_;
  std::shared_ptr<const NodeTable> shared_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> multiplicity_;
  std::vector<std::size_t> success_;
  std::vector<bool> is_success_;
  std::vector<std::vector<Occurrence>> occurrences_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<TransitionKeys>> transition_keys_;
  std::vector<CanonicalState> clusters_;
};

// Union of the group's canonical states and valid transitions, folded in
// trajectory order so node and edge numbering is deterministic.
StateGraph build_graph(const RolloutGroup& group, const GraphOptions& options = {});

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  std::size_t num_success = 0;
  std::size_t max_in_degree = 0;
  std::size_t max_out_degree = 0;
  // Only known when a reward map is supplied.
  std::optional<std::size_t> unreachable_count;
};

GraphStats graph_stats(const StateGraph& graph, const RewardMap* rewards = nullptr);

// Graphviz digraph. With rewards, node fill darkens with R and edges are red
// for a positive reward gain, blue for negative, grey for none.
std::string export_dot(const StateGraph& graph, const RewardMap* rewards = nullptr);

}  // namespace rewardflow

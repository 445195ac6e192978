#include "rewardflow/state_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rewardflow/errors.hpp"
#include "rewardflow/propagation.hpp"

namespace rewardflow {

namespace {

struct ViewIdHash {
  std::size_t operator()(const std::pair<std::string_view, std::size_t>& k) const {
    return std::hash<std::string_view>{}(k.first) ^ (k.second * 0x9e3779b97f4a7c15ULL);
  }
};

}  // namespace

StateGraph::StateGraph() : nodes_(std::make_shared<NodeTable>()), shared_nodes_(nodes_) {}

std::size_t StateGraph::index_of(const std::string& key) const {
  if (auto id = nodes_->find(key)) return *id;
  throw ConsistencyError("state not in graph: " + key.substr(0, 80));
}

std::optional<std::size_t> StateGraph::find_edge(const std::string& src, const std::string& action,
                                                 const std::string& dst) const {
  const auto s = find(src);
  const auto d = find(dst);
  if (!s || !d) return std::nullopt;
  for (std::size_t e : out_[*s]) {
    if (edges_[e].dst == *d && edges_[e].action == action) return e;
  }
  return std::nullopt;
}

// Node ids are the canonicalizer's cluster ids, which are handed out in
// first-seen order, so a new id is always the next one.
void StateGraph::ensure_node(std::size_t id, const std::string& key) {
  if (id < nodes_->keys.size()) return;
  nodes_->keys.push_back(key);
  is_success_.push_back(false);
  occurrences_.emplace_back();
  out_.emplace_back();
  in_.emplace_back();
}

void StateGraph::add_edge(std::size_t src, const std::string& action, std::size_t dst) {
  // Out-degrees are small, so a scan beats hashing the action text.
  for (std::size_t e : out_[src]) {
    if (edges_[e].dst == dst && edges_[e].action == action) {
      ++multiplicity_[e];
      return;
    }
  }
  out_[src].push_back(edges_.size());
  in_[dst].push_back(edges_.size());
  edges_.push_back(Edge{src, dst, action});
  multiplicity_.push_back(1);
}

void StateGraph::mark_success(std::size_t node) {
  if (is_success_[node]) return;
  is_success_[node] = true;
  success_.push_back(node);
}

StateGraph build_graph(const RolloutGroup& group, const GraphOptions& options) {
  StateGraph graph;
  graph.options_ = options;
  Canonicalizer canon(options.canonical());
  // Rollouts of one group revisit the same observations under the same
  // annotations, so cache (observation, annotation set) -> node.
  std::unordered_map<std::string, std::size_t> annotation_ids;
  std::unordered_map<std::pair<std::string_view, std::size_t>, std::size_t, ViewIdHash> seen;
  Annotations history;
  std::size_t history_id = 0;
  auto node_of = [&](const std::string& observation) {
    auto [it, inserted] = seen.try_emplace({observation, history_id}, 0);
    if (inserted) {
      it->second = canon.id_of(observation, history);
      graph.ensure_node(it->second, canon.clusters()[it->second].key);
    }
    return it->second;
  };
  auto record = [&](const std::string& action) {
    if (!history.record(action, options.rules)) return;
    history_id = annotation_ids.try_emplace(history.signature(), annotation_ids.size() + 1).first->second;
  };

  for (const Trajectory& traj : group.trajectories) {
    std::vector<TransitionKeys> tkeys;
    tkeys.reserve(traj.transitions.size());
    if (traj.transitions.empty()) {
      graph.transition_keys_.push_back(std::move(tkeys));
      continue;
    }
    history.clear();
    history_id = 0;
    std::size_t current = node_of(traj.transitions.front().state.observation);
    graph.occurrences_[current].push_back(Occurrence{traj.rollout_index, 0});

    for (std::size_t t = 0; t < traj.transitions.size(); ++t) {
      const Transition& tr = traj.transitions[t];
      const bool executed = tr.valid && !is_invalid_observation(tr.next_state.observation);
      if (executed && options.normalize) record(tr.action);

      // With pruning an invalid step leaves the agent where it was.
      const std::size_t next = options.prune_invalid && !executed
                                   ? current
                                   : node_of(tr.next_state.observation);
      graph.occurrences_[next].push_back(Occurrence{traj.rollout_index, static_cast<int>(t + 1)});

      const bool edge =
          !options.prune_invalid || validate_action(tr, graph.key(current), graph.key(next)).valid;
      if (edge) graph.add_edge(current, tr.action, next);
      tkeys.push_back(TransitionKeys{current, next, executed, edge});
      current = next;
    }
    if (traj.succeeded()) graph.mark_success(current);
    graph.transition_keys_.push_back(std::move(tkeys));
  }
  graph.nodes_->index = std::move(canon).release_index();
  graph.clusters_ = std::move(canon).release_clusters();
  return graph;
}

GraphStats graph_stats(const StateGraph& graph, const RewardMap* rewards) {
  GraphStats stats;
  stats.num_nodes = graph.num_nodes();
  stats.num_edges = graph.num_edges();
  stats.num_success = graph.success_nodes().size();
  for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
    stats.max_in_degree = std::max(stats.max_in_degree, graph.in_edges(n).size());
    stats.max_out_degree = std::max(stats.max_out_degree, graph.out_edges(n).size());
  }
  if (rewards != nullptr) {
    std::size_t unreachable = 0;
    for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
      if (!rewards->reachable_at(n)) ++unreachable;
    }
    stats.unreachable_count = unreachable;
  }
  return stats;
}

namespace {

std::string dot_escape(std::string_view text, std::size_t max_len) {
  std::string out;
  std::size_t n = 0;
  for (char c : text) {
    if (n++ == max_len) {
      out += "...";
      break;
    }
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string fill_color(double reward) {
  // white at R=0 to a deep blue at R=1
  const double r = std::clamp(reward, 0.0, 1.0);
  const auto mix = [r](int lo, int hi) { return static_cast<int>(std::lround(lo + (hi - lo) * r)); };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mix(255, 8), mix(255, 48), mix(255, 107));
  return buf;
}

}  // namespace

std::string export_dot(const StateGraph& graph, const RewardMap* rewards) {
  std::ostringstream out;
  out << "digraph state_graph {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, style=filled, fillcolor=\"#ffffff\", fontsize=10];\n";
  for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
    const std::string& key = graph.nodes()[n];
    out << "  n" << n << " [label=\"" << n << ": " << dot_escape(key, 60) << "\", tooltip=\""
        << dot_escape(key, 2000) << "\"";
    if (rewards != nullptr) {
      const double r = rewards->reward_at(n);
      out << ", fillcolor=\"" << fill_color(r) << "\"";
      if (r > 0.5) out << ", fontcolor=\"#ffffff\"";
    }
    if (graph.is_success(n)) out << ", peripheries=2";
    out << "];\n";
  }
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edges()[e];
    out << "  n" << edge.src << " -> n" << edge.dst << " [label=\"" << dot_escape(edge.action, 60) << "\"";
    if (graph.multiplicity(e) > 1) out << ", penwidth=" << std::min<std::size_t>(graph.multiplicity(e), 6);
    if (rewards != nullptr) {
      const double gain = rewards->reward_at(edge.dst) - rewards->reward_at(edge.src);
      const char* color = gain > 0.0 ? "#d62728" : gain < 0.0 ? "#1f77b4" : "#7f7f7f";
      out << ", color=\"" << color << "\"";
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace rewardflow

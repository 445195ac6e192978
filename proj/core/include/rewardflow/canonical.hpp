#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rewardflow/trajectory.hpp"

namespace rewardflow {

inline constexpr double kDefaultClusterThreshold = 0.9;

struct CanonicalState {
  std::string key;
  std::vector<std::string> members;
  bool enriched = false;
};

struct CanonicalAction {
  std::string key;
  bool valid = false;
};

// A transformative verb and the annotation appended to its object, e.g.
// {"clean", "cleaned"} turns "a key 1" into "a key 1 [cleaned]".
struct TransformRule {
  std::string verb;
  std::string annotation;
};

std::vector<TransformRule> default_transform_rules();

// True when the action's verb has a rule, i.e. it can change a property
// that enrichment annotates.
bool is_transformative(std::string_view action, std::span<const TransformRule> rules);

struct CanonicalOptions {
  // false: every observation is its own key (no enrichment, no merging).
  bool normalize = true;
  // Observations whose token cosine with a cluster representative reaches
  // the threshold join that cluster. At 1.0 only identical text merges.
  double threshold = kDefaultClusterThreshold;
  std::vector<TransformRule> rules = default_transform_rules();
};

// Cosine similarity of bag-of-whitespace-token count vectors. Two empty
// strings have similarity 1.
double similarity(std::string_view a, std::string_view b);

// Property annotations accumulated from transformative actions: objects
// and their tags in order of first transformation.
class Annotations {
 public:
  // Ignores actions without a rule or without an object. Returns whether
  // anything new was recorded.
  bool record(std::string_view action, std::span<const TransformRule> rules);
  bool empty() const { return properties_.empty(); }
  void clear() {
    properties_.clear();
    signature_.clear();
    recorded_.clear();
  }
  // Equal for equal contents; usable as a cache key.
  const std::string& signature() const { return signature_; }
  // Tags each object at its last whole-word mention in `observation`.
  std::string apply(std::string_view observation) const;

 private:
  std::vector<std::pair<std::string, std::vector<std::string>>> properties_;
  std::string signature_;
  std::vector<std::string> recorded_;  // actions already folded in
};

// Appends property annotations for objects transformed by earlier actions
// and mentioned in `observation`. Idempotent: annotations already present
// are not repeated.
std::string enrich(std::string_view observation, std::span<const std::string> transform_history,
                   std::span<const TransformRule> rules);

// The key a tabular agent conditions on: the enriched observation when
// normalizing, the raw text otherwise. Clustering is a group-level step and
// is not applied here.
std::string agent_key(std::string_view observation, std::span<const std::string> transform_history,
                      const CanonicalOptions& options);

// The normalization map. A sequential fold: clusters form in first-seen
// order and the first member of each cluster is its representative.
class Canonicalizer {
 public:
  explicit Canonicalizer(CanonicalOptions options = {});

  // Enriches ambiguous observations, then returns the cluster the result
  // belongs to (founding a new one if none is similar enough).
  CanonicalState normalize_state(std::string_view observation,
                                 std::span<const std::string> transform_history = {});

  // Same as normalize_state but returns only the key.
  const std::string& key_of(std::string_view observation,
                            std::span<const std::string> transform_history = {});

  // Index of the cluster in clusters().
  std::size_t id_of(std::string_view observation, std::span<const std::string> transform_history = {});
  std::size_t id_of(std::string_view observation, const Annotations& annotations);

  const std::vector<CanonicalState>& clusters() const { return clusters_; }
  std::vector<CanonicalState> release_clusters() && { return std::move(clusters_); }
  // Every text seen so far -> its cluster.
  std::unordered_map<std::string, std::size_t> release_index() && { return std::move(exact_); }
  const CanonicalOptions& options() const { return options_; }

 private:
  std::size_t assign(std::string text, bool enriched);

  CanonicalOptions options_;
  std::vector<CanonicalState> clusters_;
  std::unordered_map<std::string, std::size_t> exact_;
};

struct ClusterResult {
  std::vector<CanonicalState> clusters;
  std::unordered_map<std::string, std::size_t> assignment;  // observation -> cluster

  const CanonicalState& of(const std::string& observation) const {
    return clusters.at(assignment.at(observation));
  }
};

// Greedy single-pass clustering in input order.
ClusterResult cluster_states(std::span<const std::string> observations, double threshold);

// An action survives as a graph edge only if the environment executed it,
// the successor is not the invalid sentinel, and the canonical state changed.
CanonicalAction validate_action(const Transition& transition, std::string_view canonical_from,
                                std::string_view canonical_to);

}  // namespace rewardflow

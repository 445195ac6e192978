#include <doctest.h>

#include <map>
#include <set>
#include <tuple>

#include "builders.hpp"
#include "rewardflow/errors.hpp"
#include "rewardflow/propagation.hpp"
#include "rewardflow/state_graph.hpp"

using namespace rewardflow;

namespace {

GraphOptions exact(bool prune = true) {
  GraphOptions o;
  o.cluster_threshold = 1.0;
  o.prune_invalid = prune;
  return o;
}

using LabeledEdge = std::tuple<std::string, std::string, std::string>;

std::set<LabeledEdge> labeled_edges(const StateGraph& g, const oracle::AlfworldCase& c) {
  std::set<LabeledEdge> out;
  for (const Edge& e : g.edges()) out.insert({c.label_of(g.key(e.src)), c.label_of(g.key(e.dst)), e.action});
  return out;
}

}  // namespace

TEST_CASE("fixture graph matches the published edge list") {
  const auto c = oracle::load_alfworld_case();
  const RolloutGroup group = build::alfworld_group();
  REQUIRE(group.trajectories.size() == 3);
  const StateGraph g = build_graph(group, exact());
  CHECK(g.num_nodes() == 18);
  CHECK(g.num_edges() == 23);

  std::set<LabeledEdge> expected;
  for (const auto& e : c.edges) expected.insert({e.src, e.dst, e.action});
  CHECK(labeled_edges(g, c) == expected);

  REQUIRE(g.success_nodes().size() == 1);
  CHECK(c.label_of(g.key(g.success_nodes()[0])) == "*");
  for (const auto& key : g.nodes()) CHECK_FALSE(is_invalid_observation(key));
}

TEST_CASE("fixture graph without pruning keeps sentinel nodes") {
  const auto c = oracle::load_alfworld_case();
  const StateGraph g = build_graph(build::alfworld_group(), exact(false));
  CHECK(g.num_nodes() == 20);
  CHECK(g.num_edges() == 25);
  CHECK(g.contains(c.text.at("8")));
  CHECK(g.contains(c.text.at("10")));
  // The step after a failed action starts from the sentinel.
  CHECK(g.find_edge(c.text.at("8"), "move peppershaker 4 to diningtable 1", c.text.at("4")).has_value());
}

TEST_CASE("fixture degrees and stats") {
  const auto c = oracle::load_alfworld_case();
  const StateGraph g = build_graph(build::alfworld_group(), exact());
  std::map<std::string, std::size_t> in, out;
  for (const auto& e : c.edges) {
    ++out[e.src];
    ++in[e.dst];
  }
  std::size_t max_in = 0, max_out = 0;
  for (const auto& [label, d] : in) max_in = std::max(max_in, d);
  for (const auto& [label, d] : out) max_out = std::max(max_out, d);
  const RewardMap r = propagate_min(g);
  const GraphStats s = graph_stats(g, &r);
  CHECK(s.num_nodes == 18);
  CHECK(s.num_edges == 23);
  CHECK(s.num_success == 1);
  CHECK(s.max_in_degree == max_in);
  CHECK(s.max_out_degree == max_out);
  REQUIRE(s.unreachable_count.has_value());
  CHECK(*s.unreachable_count == 0);
  CHECK_FALSE(graph_stats(g).unreachable_count.has_value());
  for (std::size_t n = 0; n < g.num_nodes(); ++n) {
    CHECK(g.index_of(g.key(n)) == n);
    for (std::size_t e : g.out_edges(n)) CHECK(g.edges()[e].src == n);
    for (std::size_t e : g.in_edges(n)) CHECK(g.edges()[e].dst == n);
  }
  CHECK_THROWS_AS(g.index_of("not a state"), ConsistencyError);
}

TEST_CASE("a path trajectory gives a path graph") {
  const StateGraph g = build_graph(build::group({build::path({"s0", "s1", "s2", "s3", "s4"}, 1.0)}));
  CHECK(g.num_nodes() == 5);
  CHECK(g.num_edges() == 4);
  CHECK(g.is_success(g.index_of("s4")));
  for (std::size_t n = 0; n < 5; ++n) {
    REQUIRE(g.occurrences(n).size() == 1);
    CHECK(g.occurrences(n)[0].step == int(n));
  }
  CHECK(g.find_edge("s1", "s1>s2", "s2").has_value());
  CHECK_FALSE(g.find_edge("s2", "s1>s2", "s1").has_value());
}

TEST_CASE("duplicated rollouts double multiplicities but not the graph") {
  const Trajectory t = build::path({"a", "b", "c"}, 0.0);
  const StateGraph once = build_graph(build::group({t}));
  const StateGraph twice = build_graph(build::group({t, t}));
  CHECK(twice.num_nodes() == once.num_nodes());
  CHECK(twice.num_edges() == once.num_edges());
  for (std::size_t e = 0; e < twice.num_edges(); ++e) CHECK(twice.multiplicity(e) == 2 * once.multiplicity(e));
  CHECK(twice.success_nodes().empty());
  CHECK(twice.occurrences(twice.index_of("b")).size() == 2);
}

TEST_CASE("pruned invalid steps stay on the current node") {
  const Trajectory t = build::trajectory({{"a", "x", "Nothing happens.", false}, {"a", "go", "b"}, {"b", "stay", "b"}},
                                         0.0);
  const StateGraph g = build_graph(build::group({t}));
  CHECK(g.num_nodes() == 2);
  CHECK(g.num_edges() == 1);
  const auto& keys = g.transition_keys()[0];
  REQUIRE(keys.size() == 3);
  CHECK(keys[0].from == keys[0].to);
  CHECK_FALSE(keys[0].executed);
  CHECK_FALSE(keys[0].edge);
  CHECK(keys[1].edge);
  // Executed but a self-loop: no edge.
  CHECK(keys[2].executed);
  CHECK_FALSE(keys[2].edge);

  const StateGraph raw = build_graph(build::group({t}), exact(false));
  CHECK(raw.num_nodes() == 3);
  CHECK(raw.contains("Nothing happens."));
}

TEST_CASE("transition keys chain along every trajectory") {
  for (bool prune : {true, false}) {
    const StateGraph g = build_graph(build::alfworld_group(), exact(prune));
    for (const auto& keys : g.transition_keys()) {
      for (std::size_t t = 0; t + 1 < keys.size(); ++t) CHECK(keys[t].to == keys[t + 1].from);
      for (const auto& k : keys) {
        if (prune && k.edge) CHECK(k.executed);
        if (!prune) CHECK(k.edge);
      }
    }
  }
}

TEST_CASE("graph numbering is deterministic") {
  const StateGraph a = build_graph(build::alfworld_group(), exact());
  const StateGraph b = build_graph(build::alfworld_group(), exact());
  CHECK(a.nodes() == b.nodes());
  CHECK(export_dot(a) == export_dot(b));
}

TEST_CASE("transformative actions split ambiguous nodes") {
  const Trajectory t = build::trajectory(
      {{"at sink carrying a key 1", "clean key 1 with sinkbasin 1", "at sink carrying a key 1"},
       {"at sink carrying a key 1", "go to door 1", "at door carrying a key 1"}},
      1.0);
  const StateGraph g = build_graph(build::group({t}), exact());
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.contains("at sink carrying a key 1 [cleaned]"));
  CHECK(g.contains("at door carrying a key 1 [cleaned]"));

  GraphOptions raw = exact();
  raw.normalize = false;
  const StateGraph flat = build_graph(build::group({t}), raw);
  CHECK(flat.num_nodes() == 2);
  CHECK(flat.num_edges() == 1);
}

TEST_CASE("dot export colours reward gains") {
  const auto c = oracle::load_alfworld_case();
  const StateGraph g = build_graph(build::alfworld_group(), exact());
  const RewardMap r = propagate_min(g);
  const std::string dot = export_dot(g, &r);
  const std::string edge = "n" + std::to_string(g.index_of(c.text.at("12"))) + " -> n" +
                           std::to_string(g.index_of(c.text.at("*"))) + " [";
  const auto pos = dot.find(edge);
  REQUIRE(pos != std::string::npos);
  const std::string line = dot.substr(pos, dot.find('\n', pos) - pos);
  CHECK(line.find("#d62728") != std::string::npos);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(export_dot(g).find("#d62728") == std::string::npos);
}

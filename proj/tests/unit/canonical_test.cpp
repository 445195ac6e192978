#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rewardflow/canonical.hpp"

using namespace rewardflow;

TEST_CASE("token cosine similarity") {
  CHECK(similarity("go to desk one", "go to desk two") == doctest::Approx(0.75));
  CHECK(similarity("key on table", "table on key") == doctest::Approx(1.0));
  CHECK(similarity("alpha beta", "gamma delta") == 0.0);
  CHECK(similarity("", "") == 1.0);
  CHECK(similarity("", "x") == 0.0);
  CHECK(similarity("a a b", "a b") == doctest::Approx(3.0 / std::sqrt(10.0)));
  CHECK(similarity("a\nb\tc", "a b c") == doctest::Approx(1.0));
}

TEST_CASE("similarity agrees with the reference on random texts") {
  std::mt19937 gen(17);
  const std::vector<std::string> vocab = {"key", "door", "1", "2", "a", "the", "sinkbasin", "You"};
  auto text = [&] {
    std::string s;
    const int n = int(gen() % 7);
    for (int i = 0; i < n; ++i) s += vocab[gen() % vocab.size()] + " ";
    return s;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const std::string a = text(), b = text();
    CHECK(similarity(a, b) == doctest::Approx(oracle::cosine(a, b)));
    CHECK(similarity(a, b) == doctest::Approx(similarity(b, a)));
  }
}

TEST_CASE("enrichment tags the object of a transformative action") {
  const auto rules = default_transform_rules();
  const std::vector<std::string> history = {"clean key 1 with sinkbasin 1"};
  const std::string obs = "You are carrying: a key 1.";
  CHECK(enrich(obs, history, rules) == "You are carrying: a key 1 [cleaned].");
  // Idempotent.
  CHECK(enrich(enrich(obs, history, rules), history, rules) == enrich(obs, history, rules));
  // Whole words only: "key 12" is a different object.
  CHECK(enrich("You see a key 12.", history, rules) == "You see a key 12.");
  // Tags go on the last mention.
  CHECK(enrich("key 1 is here, a key 1.", history, rules) == "key 1 is here, a key 1 [cleaned].");
}

TEST_CASE("enrichment on an unnumbered object") {
  const std::vector<std::string> history = {"clean apple with sinkbasin 1"};
  CHECK(enrich("You are carrying an apple", history, default_transform_rules()) ==
        "You are carrying an apple [cleaned]");
}

TEST_CASE("enrichment ignores non-transformative actions and stacks tags in order") {
  const auto rules = default_transform_rules();
  CHECK_FALSE(is_transformative("go to sinkbasin 1", rules));
  CHECK(is_transformative("clean key 1 with sinkbasin 1", rules));
  const std::vector<std::string> history = {"go to sinkbasin 1", "heat mug 2 with microwave 1",
                                            "cool mug 2 with fridge 1", "heat mug 2 with microwave 1"};
  CHECK(enrich("a mug 2", history, rules) == "a mug 2 [heated] [cooled]");
  CHECK(enrich("no mention", history, rules) == "no mention");
}

TEST_CASE("annotations record incrementally and match the batch form") {
  const auto rules = default_transform_rules();
  const std::vector<std::string> history = {"open cabinet 3", "clean key 1 with sinkbasin 1", "go to door 1",
                                            "unlock door 1 with key 1"};
  Annotations a;
  std::vector<std::string> prefix;
  const std::string obs = "You arrive at door 1 near cabinet 3 carrying a key 1.";
  for (const auto& action : history) {
    a.record(action, rules);
    prefix.push_back(action);
    CHECK(a.apply(obs) == enrich(obs, prefix, rules));
  }
  CHECK_FALSE(a.record("open cabinet 3", rules));
  const std::string sig = a.signature();
  a.clear();
  CHECK(a.empty());
  CHECK(a.signature().empty());
  for (const auto& action : history) a.record(action, rules);
  CHECK(a.signature() == sig);
}

TEST_CASE("agent key enriches only when normalizing") {
  const std::vector<std::string> history = {"clean key 1 with sinkbasin 1"};
  CanonicalOptions on;
  CanonicalOptions off;
  off.normalize = false;
  CHECK(agent_key("a key 1", history, on) == "a key 1 [cleaned]");
  CHECK(agent_key("a key 1", history, off) == "a key 1");
}

TEST_CASE("ambiguous observations split after a transformation") {
  CanonicalOptions exact;
  exact.threshold = 1.0;
  Canonicalizer canon(exact);
  const std::string obs = "You are at sinkbasin 1. You are carrying: a key 1.";
  const std::size_t before = canon.id_of(obs);
  const std::vector<std::string> history = {"clean key 1 with sinkbasin 1"};
  const CanonicalState after = canon.normalize_state(obs, history);
  CHECK(canon.id_of(obs, history) != before);
  CHECK(after.enriched);
  CHECK(after.key.find("[cleaned]") != std::string::npos);
  CHECK(canon.key_of(obs) == obs);
}

TEST_CASE("threshold 1 groups only identical text") {
  const std::vector<std::string> obs = {"a b c", "c b a", "a b c", "a b", "a b"};
  ClusterResult r = cluster_states(obs, 1.0);
  CHECK(r.clusters.size() == 3);
  CHECK(r.of("a b c").key == "a b c");
  CHECK(r.of("c b a").key == "c b a");
  CHECK(r.of("a b").members.size() == 1);
}

TEST_CASE("threshold 0 collapses everything into the first observation") {
  const std::vector<std::string> obs = {"x y", "p q", "", "x"};
  ClusterResult r = cluster_states(obs, 0.0);
  REQUIRE(r.clusters.size() == 1);
  CHECK(r.clusters[0].key == "x y");
  CHECK(r.clusters[0].members.size() == 4);
}

TEST_CASE("clustering matches the greedy reference") {
  std::mt19937 gen(5);
  const std::vector<std::string> vocab = {"you", "see", "a", "cabinet", "1", "2", "3", "mug"};
  for (double threshold : {0.5, 0.8, 0.9, 0.95}) {
    std::vector<std::string> obs;
    for (int i = 0; i < 60; ++i) {
      std::string s;
      for (int k = 0; k < 5; ++k) s += vocab[gen() % vocab.size()] + " ";
      obs.push_back(s);
    }
    ClusterResult r = cluster_states(obs, threshold);
    const auto reps = oracle::greedy_representatives(obs, threshold);
    for (std::size_t i = 0; i < obs.size(); ++i) CHECK(r.of(obs[i]).key == reps[i]);
    for (const auto& c : r.clusters) CHECK(c.members.front() == c.key);
  }
}

TEST_CASE("canonicalizer is a function of first-seen order") {
  CanonicalOptions o;
  o.threshold = 0.7;
  Canonicalizer canon(o);
  CHECK(canon.id_of("a b c d") == 0);
  CHECK(canon.id_of("x y") == 1);
  CHECK(canon.id_of("a b c e") == 0);
  CHECK(canon.id_of("a b c e") == 0);
  CHECK(canon.clusters()[0].members.size() == 2);
}

TEST_CASE("normalize off keeps every text as its own key") {
  CanonicalOptions o;
  o.normalize = false;
  o.threshold = 0.0;
  Canonicalizer canon(o);
  const std::vector<std::string> history = {"clean key 1 with sinkbasin 1"};
  CHECK(canon.key_of("a key 1", history) == "a key 1");
  CHECK(canon.id_of("b") != canon.id_of("a key 1"));
}

TEST_CASE("action validity") {
  Transition tr;
  tr.action = "go to cabinet 1";
  tr.valid = true;
  tr.next_state.observation = "You arrive at cabinet 1.";
  CHECK(validate_action(tr, "s", "t").valid);
  CHECK(validate_action(tr, "s", "t").key == "go to cabinet 1");
  CHECK_FALSE(validate_action(tr, "s", "s").valid);
  tr.next_state.observation = "Nothing happens. You are carrying: a key 1.";
  CHECK_FALSE(validate_action(tr, "s", "t").valid);
  tr.next_state.observation = "You arrive at cabinet 1.";
  tr.valid = false;
  CHECK_FALSE(validate_action(tr, "s", "t").valid);
}

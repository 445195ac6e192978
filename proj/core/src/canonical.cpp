#include "rewardflow/canonical.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

namespace rewardflow {

namespace {

using TokenBag = std::vector<std::string_view>;

bool is_space(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }

TokenBag tokens_of(std::string_view text) {
  TokenBag out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Squared norm of the count vector of a sorted bag.
double squared_norm(const TokenBag& bag) {
  double sum = 0.0;
  for (std::size_t i = 0; i < bag.size();) {
    std::size_t j = i;
    while (j < bag.size() && bag[j] == bag[i]) ++j;
    const double c = static_cast<double>(j - i);
    sum += c * c;
    i = j;
  }
  return sum;
}

double cosine(const TokenBag& a, const TokenBag& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      const std::string_view tok = a[i];
      std::size_t ca = 0, cb = 0;
      while (i < a.size() && a[i] == tok) ++i, ++ca;
      while (j < b.size() && b[j] == tok) ++j, ++cb;
      dot += static_cast<double>(ca) * static_cast<double>(cb);
    }
  }
  const double value = dot / std::sqrt(squared_norm(a) * squared_norm(b));
  return std::clamp(value, 0.0, 1.0);
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Object phrase of a transformative action: the words after the verb up to
// the first preposition ("clean key 1 with sinkbasin 1" -> "key 1").
std::string action_object(std::string_view action) {
  static constexpr std::array<std::string_view, 7> kStops = {"with", "using", "in", "on", "from", "to", "into"};
  std::string object;
  std::size_t i = 0;
  bool verb = true;
  while (i < action.size()) {
    while (i < action.size() && is_space(action[i])) ++i;
    std::size_t j = i;
    while (j < action.size() && !is_space(action[j])) ++j;
    if (j == i) break;
    const std::string_view word = action.substr(i, j - i);
    i = j;
    if (verb) {
      verb = false;
      continue;
    }
    if (std::find(kStops.begin(), kStops.end(), word) != kStops.end()) break;
    if (!object.empty()) object.push_back(' ');
    object.append(word);
  }
  return object;
}

std::string_view first_word(std::string_view action) {
  std::size_t i = 0;
  while (i < action.size() && is_space(action[i])) ++i;
  std::size_t j = i;
  while (j < action.size() && !is_space(action[j])) ++j;
  return action.substr(i, j - i);
}

// Position just past the last whole-word occurrence of `needle`, or npos.
std::size_t last_mention_end(std::string_view text, std::string_view needle) {
  if (needle.empty()) return std::string_view::npos;
  std::size_t pos = text.rfind(needle);
  while (pos != std::string_view::npos) {
    const std::size_t end = pos + needle.size();
    const bool left_ok = pos == 0 || !word_char(text[pos - 1]);
    const bool right_ok = end == text.size() || !word_char(text[end]);
    if (left_ok && right_ok) return end;
    if (pos == 0) break;
    pos = text.rfind(needle, pos - 1);
  }
  return std::string_view::npos;
}

}  // namespace

std::vector<TransformRule> default_transform_rules() {
  return {{"clean", "cleaned"}, {"heat", "heated"}, {"cool", "cooled"},
          {"unlock", "unlocked"}, {"open", "opened"}};
}

bool is_transformative(std::string_view action, std::span<const TransformRule> rules) {
  const std::string_view verb = first_word(action);
  return std::any_of(rules.begin(), rules.end(), [&](const TransformRule& r) { return r.verb == verb; });
}

double similarity(std::string_view a, std::string_view b) {
  return cosine(tokens_of(a), tokens_of(b));
}

bool Annotations::record(std::string_view action, std::span<const TransformRule> rules) {
  const std::string_view verb = first_word(action);
  auto rule = std::find_if(rules.begin(), rules.end(), [&](const TransformRule& r) { return r.verb == verb; });
  if (rule == rules.end()) return false;
  if (std::find(recorded_.begin(), recorded_.end(), action) != recorded_.end()) return false;
  recorded_.emplace_back(action);
  std::string object = action_object(action);
  if (object.empty()) return false;
  auto it = std::find_if(properties_.begin(), properties_.end(), [&](const auto& p) { return p.first == object; });
  if (it == properties_.end()) {
    properties_.push_back({std::move(object), {}});
    it = std::prev(properties_.end());
  }
  const std::string& annotation = rule->annotation;
  const bool known = std::any_of(it->second.begin(), it->second.end(), [&](const std::string& t) {
    return t.size() == annotation.size() + 2 && t.compare(1, annotation.size(), annotation) == 0;
  });
  if (known) return false;
  std::string tag = "[" + annotation + "]";
  signature_ += it->first;
  signature_ += '\x1f';
  signature_ += tag;
  signature_ += '\x1e';
  it->second.push_back(std::move(tag));
  return true;
}

std::string Annotations::apply(std::string_view observation) const {
  std::string text;
  text.reserve(observation.size() + signature_.size());
  text.append(observation);
  for (const auto& [object, tags] : properties_) {
    std::size_t end = last_mention_end(text, object);
    if (end == std::string::npos) continue;
    for (const std::string& tag : tags) {
      // Skip tags already attached after this mention.
      std::size_t scan = end;
      bool present = false;
      while (text.compare(scan, 2, " [") == 0) {
        const std::size_t close = text.find(']', scan);
        if (close == std::string::npos) break;
        if (text.compare(scan + 1, close - scan, tag) == 0) present = true;
        scan = close + 1;
      }
      if (present) continue;
      text.insert(scan, 1, ' ');
      text.insert(scan + 1, tag);
      end = scan + tag.size() + 1;
    }
  }
  return text;
}

std::string enrich(std::string_view observation, std::span<const std::string> transform_history,
                   std::span<const TransformRule> rules) {
  Annotations annotations;
  for (const std::string& action : transform_history) annotations.record(action, rules);
  return annotations.apply(observation);
}

std::string agent_key(std::string_view observation, std::span<const std::string> transform_history,
                      const CanonicalOptions& options) {
  if (!options.normalize) return std::string(observation);
  return enrich(observation, transform_history, options.rules);
}

Canonicalizer::Canonicalizer(CanonicalOptions options) : options_(std::move(options)) {}

std::size_t Canonicalizer::assign(std::string text, bool enriched) {
  if (auto it = exact_.find(text); it != exact_.end()) return it->second;
  std::size_t id = clusters_.size();
  if (options_.normalize && options_.threshold < 1.0) {
    const TokenBag bag = tokens_of(text);
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      if (cosine(tokens_of(clusters_[c].key), bag) >= options_.threshold) {
        id = c;
        break;
      }
    }
  }
  if (id == clusters_.size()) {
    clusters_.push_back(CanonicalState{text, {text}, enriched});
  } else {
    clusters_[id].members.push_back(text);
  }
  exact_.emplace(std::move(text), id);
  return id;
}

std::size_t Canonicalizer::id_of(std::string_view observation, std::span<const std::string> transform_history) {
  if (!options_.normalize || transform_history.empty()) return assign(std::string(observation), false);
  Annotations annotations;
  for (const std::string& action : transform_history) annotations.record(action, options_.rules);
  return id_of(observation, annotations);
}

std::size_t Canonicalizer::id_of(std::string_view observation, const Annotations& annotations) {
  if (!options_.normalize || annotations.empty()) return assign(std::string(observation), false);
  std::string text = annotations.apply(observation);
  const bool enriched = text != observation;
  return assign(std::move(text), enriched);
}

const std::string& Canonicalizer::key_of(std::string_view observation,
                                         std::span<const std::string> transform_history) {
  return clusters_[id_of(observation, transform_history)].key;
}

CanonicalState Canonicalizer::normalize_state(std::string_view observation,
                                              std::span<const std::string> transform_history) {
  return clusters_[id_of(observation, transform_history)];
}

ClusterResult cluster_states(std::span<const std::string> observations, double threshold) {
  CanonicalOptions options;
  options.threshold = threshold;
  options.rules.clear();
  Canonicalizer canon(options);
  ClusterResult result;
  for (const std::string& obs : observations) canon.key_of(obs);
  result.clusters = canon.clusters();
  for (std::size_t c = 0; c < result.clusters.size(); ++c) {
    for (const std::string& member : result.clusters[c].members) result.assignment.emplace(member, c);
  }
  return result;
}

CanonicalAction validate_action(const Transition& transition, std::string_view canonical_from,
                                std::string_view canonical_to) {
  const bool valid = transition.valid && !is_invalid_observation(transition.next_state.observation) &&
                     canonical_from != canonical_to;
  return CanonicalAction{transition.action, valid};
}

}  // namespace rewardflow

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rewardflow {

// Observation returned for any step that fails to execute or leaves the
// configuration untouched. Text environments in the wild append context to
// it ("Nothing happens. You are carrying: ..."), so detection is by prefix.
inline constexpr std::string_view kInvalidObservation = "Nothing happens.";

inline bool is_invalid_observation(std::string_view text) {
  return text.substr(0, kInvalidObservation.size()) == kInvalidObservation;
}

struct EnvState {
  std::string observation;
  std::vector<std::string> admissible_actions;
  bool is_terminal = false;
  bool is_success = false;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct StepResult {
  EnvState state;
  bool valid = false;
};

// A single environment instance. Instances are independent; one instance
// must only be advanced by one caller at a time.
class Environment {
 public:
  virtual ~Environment() = default;

  // Current state without advancing.
  virtual const EnvState& state() const = 0;

  // Applies `action`. Throws UsageError when the current state is terminal.
  // Inadmissible or no-op actions return the invalid observation with
  // valid=false and leave the configuration unchanged.
  virtual StepResult step(std::string_view action) = 0;

  // Key identifying the dynamic configuration (positions, flags, inventory).
  // Two instances with equal fingerprints behave identically on every
  // future action sequence. Used by the planner.
  virtual std::string fingerprint() const = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

struct SokobanConfig {
  int grid_size = 6;
  int num_boxes = 1;
  std::uint64_t seed = 0;
  int max_steps = 15;
  // Rejection-sampling bounds on the generated puzzle's optimal length.
  int min_solution_length = 1;
  int max_interior_walls = 2;
};

struct KeyDoorConfig {
  int num_rooms = 1;
  int num_keys = 1;
  std::uint64_t seed = 0;
  int max_steps = 25;
  // When set, raw observations omit key cleanliness and door lock status,
  // so states before and after a transformative action read the same.
  bool ambiguous = true;
  // Start the agent at door 1 instead of the middle of room 1.
  bool start_at_door = false;
  int receptacles_per_room = 2;
};

using EnvSpec = std::variant<SokobanConfig, KeyDoorConfig>;

std::string env_name(const EnvSpec& spec);
int env_max_steps(const EnvSpec& spec);
EnvSpec with_seed(EnvSpec spec, std::uint64_t seed);

// Builds the instance described by `spec` and resets it to s_0. Identical
// specs give bit-identical initial states. Throws GenerationError when no
// solvable layout is found within the retry budget.
std::unique_ptr<Environment> make_environment(const EnvSpec& spec);

inline constexpr int kGenerationRetries = 1000;

struct PlanResult {
  bool solvable = false;
  std::vector<std::string> actions;
  std::size_t expanded = 0;
};

// Breadth-first search over configurations from the environment's current
// state. Returns a shortest successful action sequence, or solvable=false
// when the reachable space is exhausted. Throws PlannerBudgetError after
// `budget` expansions.
PlanResult plan_solution(const Environment& env, std::size_t budget = 200000);

}  // namespace rewardflow

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rewardflow/env.hpp"

namespace rewardflow {

// Text-adventure stand-in for household tasks. Rooms are chained by doors;
// door k (k <= num_keys) is locked and opens only with key k after the key
// has been cleaned at a sinkbasin. Opening the last door wins.
//
// Observations describe the current room, the agent's position and what it
// carries. When `ambiguous` is set they omit key cleanliness and door lock
// state, so the same text can stand for different configurations.
class KeyDoorEnv final : public Environment {
 public:
  explicit KeyDoorEnv(const KeyDoorConfig& config);

  const EnvState& state() const override { return state_; }
  StepResult step(std::string_view action) override;
  std::string fingerprint() const override;
  std::unique_ptr<Environment> clone() const override;

 private:
  enum class Kind { kContainer, kSurface, kSink, kDoor };

  struct Object {
    std::string name;
    Kind kind = Kind::kSurface;
    int room = 0;
    bool open = false;
    std::optional<int> key;  // key resting here
  };

  struct Key {
    bool clean = false;
    bool used = false;
  };

  bool generate(std::uint64_t seed);
  void refresh_state();
  std::string render() const;
  std::string object_text(const Object& object) const;
  std::string key_text(int key) const;
  int door_of(int room) const;
  bool accessible(const Object& object) const;

  KeyDoorConfig config_;
  std::vector<Object> objects_;
  std::vector<std::vector<int>> room_objects_;
  std::vector<Key> keys_;
  std::vector<char> door_locked_;
  int room_ = 0;
  int location_ = -1;   // object index, -1 = middle of the room
  int carrying_ = -1;   // key index, -1 = empty hands
  bool escaped_ = false;
  EnvState state_;
};

}  // namespace rewardflow

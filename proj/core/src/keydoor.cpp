#include "rewardflow/keydoor.hpp"

#include <array>

#include "rewardflow/errors.hpp"
#include "rewardflow/rng.hpp"

namespace rewardflow {

namespace {

struct KindSpec {
  const char* noun;
  bool container;
};

constexpr std::array<KindSpec, 4> kReceptacleKinds = {{
    {"cabinet", true},
    {"drawer", true},
    {"countertop", false},
    {"shelf", false},
}};

}  // namespace

KeyDoorEnv::KeyDoorEnv(const KeyDoorConfig& config) : config_(config) {
  if (config.num_rooms < 1) throw ConfigError("keydoor num_rooms must be >= 1");
  if (config.num_keys < 0 || config.num_keys > config.num_rooms) {
    throw ConfigError("keydoor num_keys must be in [0, num_rooms]");
  }
  if (config.receptacles_per_room < 1) throw ConfigError("keydoor receptacles_per_room must be >= 1");
  for (int attempt = 0; attempt < kGenerationRetries; ++attempt) {
    if (generate(derive_seed({config.seed, static_cast<std::uint64_t>(attempt), 0x6b64ULL}))) return;
  }
  throw GenerationError("no solvable keydoor layout after " + std::to_string(kGenerationRetries) +
                        " attempts (seed " + std::to_string(config.seed) + ")");
}

bool KeyDoorEnv::generate(std::uint64_t seed) {
  Rng rng(seed);
  objects_.clear();
  room_objects_.assign(static_cast<std::size_t>(config_.num_rooms), {});
  keys_.assign(static_cast<std::size_t>(config_.num_keys), Key{});
  door_locked_.assign(static_cast<std::size_t>(config_.num_rooms), 0);
  std::array<int, kReceptacleKinds.size()> counters{};

  for (int room = 0; room < config_.num_rooms; ++room) {
    std::vector<int> receptacles;
    for (int i = 0; i < config_.receptacles_per_room; ++i) {
      const std::size_t kind = rng.below(kReceptacleKinds.size());
      Object obj;
      obj.name = std::string(kReceptacleKinds[kind].noun) + " " + std::to_string(++counters[kind]);
      obj.kind = kReceptacleKinds[kind].container ? Kind::kContainer : Kind::kSurface;
      obj.room = room;
      receptacles.push_back(static_cast<int>(objects_.size()));
      room_objects_[room].push_back(static_cast<int>(objects_.size()));
      objects_.push_back(std::move(obj));
    }
    Object sink{"sinkbasin " + std::to_string(room + 1), Kind::kSink, room, true, std::nullopt};
    room_objects_[room].push_back(static_cast<int>(objects_.size()));
    objects_.push_back(std::move(sink));
    Object door{"door " + std::to_string(room + 1), Kind::kDoor, room, false, std::nullopt};
    room_objects_[room].push_back(static_cast<int>(objects_.size()));
    objects_.push_back(std::move(door));

    if (room < config_.num_keys) {
      door_locked_[room] = 1;
      const int holder = receptacles[rng.below(receptacles.size())];
      objects_[holder].key = room;
    }
  }

  room_ = 0;
  location_ = config_.start_at_door ? door_of(0) : -1;
  carrying_ = -1;
  escaped_ = false;
  refresh_state();

  PlanResult plan = plan_solution(*this);
  return plan.solvable && static_cast<int>(plan.actions.size()) <= config_.max_steps;
}

int KeyDoorEnv::door_of(int room) const {
  return room_objects_[room].back();
}

bool KeyDoorEnv::accessible(const Object& object) const {
  return object.kind != Kind::kContainer || object.open;
}

std::string KeyDoorEnv::key_text(int key) const {
  std::string name = "key " + std::to_string(key + 1);
  if (config_.ambiguous) return name;
  return (keys_[key].clean ? "clean " : "rusty ") + name;
}

std::string KeyDoorEnv::object_text(const Object& obj) const {
  std::string text = "a " + obj.name;
  auto holding = [&] { return obj.key ? "holding a " + key_text(*obj.key) : std::string("empty"); };
  switch (obj.kind) {
    case Kind::kContainer:
      text += obj.open ? " (open, " + holding() + ")" : " (closed)";
      break;
    case Kind::kSurface:
    case Kind::kSink:
      text += " (" + holding() + ")";
      break;
    case Kind::kDoor:
      if (config_.ambiguous) {
        text += " (closed)";
      } else {
        text += door_locked_[obj.room] ? " (locked)" : " (unlocked)";
      }
      break;
  }
  return text;
}

// Everything the agent could see from where it stands. A pure function of
// the configuration; with `ambiguous` it hides key cleanliness and locks.
std::string KeyDoorEnv::render() const {
  if (escaped_) return "You open the door " + std::to_string(config_.num_rooms) + " and escape. You Won!";
  std::string text = "Your task is to: escape through door " + std::to_string(config_.num_rooms) + ".";
  text += location_ < 0 ? " You are in the middle of room " + std::to_string(room_ + 1) + "."
                        : " You are at " + objects_[location_].name + " in room " + std::to_string(room_ + 1) + ".";
  text += " Looking around you, you see ";
  const auto& here = room_objects_[room_];
  for (std::size_t i = 0; i < here.size(); ++i) {
    if (i > 0) text += i + 1 == here.size() ? ", and " : ", ";
    text += object_text(objects_[here[i]]);
  }
  text += ".";
  text += carrying_ < 0 ? " You are not carrying anything." : " You are carrying: a " + key_text(carrying_) + ".";
  return text;
}

void KeyDoorEnv::refresh_state() {
  state_.observation = render();
  state_.is_success = escaped_;
  state_.is_terminal = escaped_;
  state_.admissible_actions.clear();
  if (escaped_) return;

  auto& actions = state_.admissible_actions;
  for (int idx : room_objects_[room_]) actions.push_back("go to " + objects_[idx].name);
  if (location_ < 0) return;
  const Object& here = objects_[location_];
  switch (here.kind) {
    case Kind::kContainer:
      actions.push_back("open " + here.name);
      [[fallthrough]];
    case Kind::kSurface:
      if (accessible(here) && here.key) {
        actions.push_back("take key " + std::to_string(*here.key + 1) + " from " + here.name);
      }
      break;
    case Kind::kSink:
      if (carrying_ >= 0) {
        actions.push_back("clean key " + std::to_string(carrying_ + 1) + " with " + here.name);
      }
      break;
    case Kind::kDoor:
      if (carrying_ >= 0) {
        actions.push_back("unlock " + here.name + " with key " + std::to_string(carrying_ + 1));
      }
      actions.push_back("open " + here.name);
      break;
  }
}

StepResult KeyDoorEnv::step(std::string_view action) {
  if (state_.is_terminal) throw UsageError("step() called on a terminal keydoor state");
  auto invalid = [&] {
    EnvState s = state_;
    s.observation = std::string(kInvalidObservation);
    return StepResult{std::move(s), false};
  };

  bool admissible = false;
  for (const auto& a : state_.admissible_actions) admissible = admissible || a == action;
  if (!admissible) return invalid();

  const std::string act(action);
  auto object_named = [&](std::string_view name) -> int {
    for (int idx : room_objects_[room_]) {
      if (objects_[idx].name == name) return idx;
    }
    return -1;
  };

  if (act.starts_with("go to ")) {
    const int target = object_named(std::string_view(act).substr(6));
    if (target < 0 || target == location_) return invalid();
    location_ = target;
  } else if (act.starts_with("take ")) {
    Object& here = objects_[location_];
    if (carrying_ >= 0 || !here.key || !accessible(here)) return invalid();
    carrying_ = *here.key;
    here.key.reset();
  } else if (act.starts_with("clean ")) {
    if (carrying_ < 0 || keys_[carrying_].clean) return invalid();
    keys_[carrying_].clean = true;
  } else if (act.starts_with("unlock ")) {
    const Object& here = objects_[location_];
    if (carrying_ != here.room || !keys_[carrying_].clean || !door_locked_[here.room]) {
      return invalid();
    }
    door_locked_[here.room] = 0;
    keys_[carrying_].used = true;
    carrying_ = -1;
  } else if (act.starts_with("open ")) {
    Object& here = objects_[location_];
    if (here.kind == Kind::kDoor) {
      if (door_locked_[here.room]) return invalid();
      if (here.room + 1 == config_.num_rooms) {
        escaped_ = true;
      } else {
        room_ = here.room + 1;
        location_ = -1;
      }
    } else {
      if (here.open) return invalid();
      here.open = true;
    }
  } else {
    return invalid();
  }
  refresh_state();
  return StepResult{state_, true};
}

std::string KeyDoorEnv::fingerprint() const {
  std::string key = std::to_string(room_) + "|" + std::to_string(location_) + "|" +
                    std::to_string(carrying_) + "|" + (escaped_ ? "E" : "-") + "|";
  for (const auto& k : keys_) key += std::string(k.clean ? "c" : "r") + (k.used ? "u" : "-");
  key += "|";
  for (char locked : door_locked_) key.push_back(locked ? 'L' : 'U');
  key += "|";
  for (const auto& obj : objects_) {
    key.push_back(obj.open ? 'o' : '.');
    key += obj.key ? std::to_string(*obj.key) : "_";
  }
  return key;
}

std::unique_ptr<Environment> KeyDoorEnv::clone() const {
  return std::make_unique<KeyDoorEnv>(*this);
}

}  // namespace rewardflow

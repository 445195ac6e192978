#include "rewardflow/sokoban.hpp"

#include <algorithm>
#include <array>

#include "rewardflow/errors.hpp"
#include "rewardflow/rng.hpp"

namespace rewardflow {

namespace {

const std::vector<std::string> kMoves = {"up", "down", "left", "right"};

struct Delta {
  int dr;
  int dc;
};

std::optional<Delta> move_delta(std::string_view action) {
  if (action == "up") return Delta{-1, 0};
  if (action == "down") return Delta{1, 0};
  if (action == "left") return Delta{0, -1};
  if (action == "right") return Delta{0, 1};
  return std::nullopt;
}

}  // namespace

SokobanEnv::SokobanEnv(const SokobanConfig& config) {
  if (config.grid_size < 4) throw ConfigError("sokoban grid_size must be >= 4");
  if (config.num_boxes < 1) throw ConfigError("sokoban num_boxes must be >= 1");
  for (int attempt = 0; attempt < kGenerationRetries; ++attempt) {
    if (generate(derive_seed({config.seed, static_cast<std::uint64_t>(attempt)}), config)) return;
  }
  throw GenerationError("no solvable sokoban layout after " + std::to_string(kGenerationRetries) +
                        " attempts (seed " + std::to_string(config.seed) + ")");
}

bool SokobanEnv::generate(std::uint64_t seed, const SokobanConfig& config) {
  Rng rng(seed);
  width_ = height_ = config.grid_size;
  walls_.assign(static_cast<std::size_t>(width_ * height_), 0);
  targets_.assign(walls_.size(), 0);
  boxes_.clear();

  std::vector<int> interior;
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      if (r == 0 || c == 0 || r == height_ - 1 || c == width_ - 1) {
        walls_[cell(r, c)] = 1;
      } else {
        interior.push_back(cell(r, c));
      }
    }
  }
  // Partial Fisher-Yates: the first k entries become a random k-subset.
  auto take = [&](std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + rng.below(interior.size() - i);
      std::swap(interior[i], interior[j]);
    }
  };
  const int num_walls = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_interior_walls) + 1));
  const std::size_t needed = static_cast<std::size_t>(num_walls + 2 * config.num_boxes + 1);
  if (needed > interior.size()) return false;
  take(needed);
  std::size_t next = 0;
  for (int i = 0; i < num_walls; ++i) walls_[interior[next++]] = 1;
  for (int i = 0; i < config.num_boxes; ++i) targets_[interior[next++]] = 1;
  for (int i = 0; i < config.num_boxes; ++i) boxes_.push_back(interior[next++]);
  player_ = interior[next++];
  std::sort(boxes_.begin(), boxes_.end());
  refresh_state();
  if (state_.is_success) return false;

  PlanResult plan = plan_solution(*this);
  const int length = static_cast<int>(plan.actions.size());
  return plan.solvable && length >= config.min_solution_length && length <= config.max_steps;
}

SokobanEnv SokobanEnv::from_rows(const std::vector<std::string>& rows) {
  SokobanEnv env;
  env.height_ = static_cast<int>(rows.size());
  env.width_ = 0;
  for (const auto& row : rows) env.width_ = std::max(env.width_, static_cast<int>(row.size()));
  env.walls_.assign(static_cast<std::size_t>(env.width_ * env.height_), 0);
  env.targets_.assign(env.walls_.size(), 0);
  bool has_player = false;
  for (int r = 0; r < env.height_; ++r) {
    for (int c = 0; c < env.width_; ++c) {
      const char ch = c < static_cast<int>(rows[r].size()) ? rows[r][c] : '#';
      const int idx = env.cell(r, c);
      switch (ch) {
        case '#': env.walls_[idx] = 1; break;
        case '.': env.targets_[idx] = 1; break;
        case '$': env.boxes_.push_back(idx); break;
        case '*': env.targets_[idx] = 1; env.boxes_.push_back(idx); break;
        case '@': env.player_ = idx; has_player = true; break;
        case '+': env.targets_[idx] = 1; env.player_ = idx; has_player = true; break;
        case '_': case ' ': break;
        default: throw ConfigError(std::string("unknown sokoban symbol '") + ch + "'");
      }
    }
  }
  if (!has_player) throw ConfigError("sokoban layout has no player");
  std::sort(env.boxes_.begin(), env.boxes_.end());
  env.refresh_state();
  return env;
}

bool SokobanEnv::solved() const {
  return std::all_of(boxes_.begin(), boxes_.end(), [&](int b) { return targets_[b] != 0; });
}

std::string SokobanEnv::render() const {
  std::string out;
  out.reserve(static_cast<std::size_t>((width_ + 1) * height_));
  for (int r = 0; r < height_; ++r) {
    if (r > 0) out.push_back('\n');
    for (int c = 0; c < width_; ++c) {
      const int idx = cell(r, c);
      const bool box = std::binary_search(boxes_.begin(), boxes_.end(), idx);
      const bool target = targets_[idx] != 0;
      char ch = '_';
      if (walls_[idx]) ch = '#';
      else if (idx == player_) ch = target ? '+' : '@';
      else if (box) ch = target ? '*' : '$';
      else if (target) ch = '.';
      out.push_back(ch);
    }
  }
  return out;
}

void SokobanEnv::refresh_state() {
  state_.observation = render();
  state_.is_success = solved();
  state_.is_terminal = state_.is_success;
  if (state_.is_terminal) {
    state_.admissible_actions.clear();
  } else {
    state_.admissible_actions = kMoves;
  }
}

StepResult SokobanEnv::step(std::string_view action) {
  if (state_.is_terminal) throw UsageError("step() called on a terminal sokoban state");
  auto invalid = [&] {
    EnvState s = state_;
    s.observation = std::string(kInvalidObservation);
    return StepResult{std::move(s), false};
  };
  const auto delta = move_delta(action);
  if (!delta) return invalid();

  const int r = player_ / width_ + delta->dr;
  const int c = player_ % width_ + delta->dc;
  if (r < 0 || c < 0 || r >= height_ || c >= width_) return invalid();
  const int target = cell(r, c);
  if (walls_[target]) return invalid();

  auto box_it = std::lower_bound(boxes_.begin(), boxes_.end(), target);
  if (box_it != boxes_.end() && *box_it == target) {
    const int br = r + delta->dr;
    const int bc = c + delta->dc;
    if (br < 0 || bc < 0 || br >= height_ || bc >= width_) return invalid();
    const int beyond = cell(br, bc);
    if (walls_[beyond] || std::binary_search(boxes_.begin(), boxes_.end(), beyond)) return invalid();
    *box_it = beyond;
    std::sort(boxes_.begin(), boxes_.end());
  }
  player_ = target;
  refresh_state();
  return StepResult{state_, true};
}

std::string SokobanEnv::fingerprint() const {
  std::string key = std::to_string(player_);
  for (int b : boxes_) {
    key.push_back(',');
    key += std::to_string(b);
  }
  return key;
}

std::unique_ptr<Environment> SokobanEnv::clone() const {
  return std::make_unique<SokobanEnv>(*this);
}

}  // namespace rewardflow

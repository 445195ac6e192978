#pragma once

#include <string>
#include <vector>

#include "rewardflow/env.hpp"

namespace rewardflow {

// Grid-rendered Sokoban. Observations are the grid rows joined by '\n':
//   '#' wall   '_' floor   '.' target   '$' box   '*' box on target
//   '@' player '+' player on target
// Success is binary: every box on a target.
class SokobanEnv final : public Environment {
 public:
  // Generates a random solvable layout from config.seed.
  explicit SokobanEnv(const SokobanConfig& config);

  // Hand-built layout using the symbols above (blank is also floor).
  static SokobanEnv from_rows(const std::vector<std::string>& rows);

  const EnvState& state() const override { return state_; }
  StepResult step(std::string_view action) override;
  std::string fingerprint() const override;
  std::unique_ptr<Environment> clone() const override;

  std::string render() const;
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  SokobanEnv() = default;
  bool generate(std::uint64_t seed, const SokobanConfig& config);
  bool solved() const;
  void refresh_state();
  int cell(int row, int col) const { return row * width_ + col; }

  int width_ = 0;
  int height_ = 0;
  std::vector<char> walls_;
  std::vector<char> targets_;
  std::vector<int> boxes_;  // sorted cell indices
  int player_ = 0;
  EnvState state_;
};

}  // namespace rewardflow

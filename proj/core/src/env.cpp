#include "rewardflow/env.hpp"

#include "rewardflow/keydoor.hpp"
#include "rewardflow/sokoban.hpp"

namespace rewardflow {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string env_name(const EnvSpec& spec) {
  return std::visit(Overloaded{[](const SokobanConfig&) { return std::string("sokoban"); },
                               [](const KeyDoorConfig&) { return std::string("keydoor"); }},
                    spec);
}

int env_max_steps(const EnvSpec& spec) {
  return std::visit([](const auto& c) { return c.max_steps; }, spec);
}

EnvSpec with_seed(EnvSpec spec, std::uint64_t seed) {
  std::visit([seed](auto& c) { c.seed = seed; }, spec);
  return spec;
}

std::unique_ptr<Environment> make_environment(const EnvSpec& spec) {
  return std::visit(
      Overloaded{
          [](const SokobanConfig& c) -> std::unique_ptr<Environment> {
            return std::make_unique<SokobanEnv>(c);
          },
          [](const KeyDoorConfig& c) -> std::unique_ptr<Environment> {
            return std::make_unique<KeyDoorEnv>(c);
          }},
      spec);
}

}  // namespace rewardflow

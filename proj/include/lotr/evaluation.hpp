#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "lotr/simulator.hpp"

namespace lotr {

/// Half-width of the 95% normal-approximation interval: 1.96 sqrt(p(1-p)/n).
double ci_half_width(int wins, int games);

struct EvalReport {
  int difficulty = 0;
  int games = 0;
  int wins = 0;
  double winrate = 0.0;
  double ci = 0.0;
  double mean_rounds = 0.0;
  std::array<int, 5> outcomes{};  // indexed by Outcome
  std::uint64_t master_seed = 0;

  bool operator==(const EvalReport&) const = default;
  /// Multi-line text form.
  std::string describe() const;
};

/// Seed of game `index` in a batch; shared by every caller with the same master seed.
std::uint64_t game_seed(std::uint64_t master_seed, std::uint64_t index);

/// Plays n_games seeded games with learning disabled.
EvalReport evaluate(const AgentAssignment& team, int difficulty, int n_games, std::uint64_t master_seed,
                    std::shared_ptr<const GameData> data, GameConfig base = {});

}  // namespace lotr

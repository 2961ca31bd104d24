#include "lotr/evaluation.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <vector>

#include "lotr/errors.hpp"
#include "lotr/parallel.hpp"

namespace lotr {

double ci_half_width(int wins, int games) {
  if (games <= 0) return 0.0;
  const double p = static_cast<double>(wins) / games;
  return 1.96 * std::sqrt(p * (1.0 - p) / games);
}

std::uint64_t game_seed(std::uint64_t master_seed, std::uint64_t index) { return derive_seed(master_seed, {index}); }

EvalReport evaluate(const AgentAssignment& team, int difficulty, int n_games, std::uint64_t master_seed,
                    std::shared_ptr<const GameData> data, GameConfig base) {
  if (n_games <= 0) throw ConfigError("evaluation needs at least one game");
  team.validate();
  base.difficulty = difficulty;
  base.validate();

  std::vector<GameResult> results(static_cast<std::size_t>(n_games));
  parallel_for(results.size(), [&](std::size_t i) {
    GameConfig config = base;
    config.seed = game_seed(master_seed, i);
    GameState s = new_game(config, data);
    Rng agent_rng(derive_seed(master_seed, {i, 0xa6e47ULL}));
    results[i] = play_game(s, team, agent_rng);
  });

  EvalReport r;
  r.difficulty = difficulty;
  r.games = n_games;
  r.master_seed = master_seed;
  long long rounds = 0;
  for (const auto& g : results) {
    ++r.outcomes[static_cast<std::size_t>(g.outcome)];
    rounds += g.rounds;
  }
  r.wins = r.outcomes[static_cast<std::size_t>(Outcome::Win)];
  r.winrate = static_cast<double>(r.wins) / n_games;
  r.ci = ci_half_width(r.wins, n_games);
  r.mean_rounds = static_cast<double>(rounds) / n_games;
  return r;
}

std::string EvalReport::describe() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  out << "difficulty " << difficulty << "\ngames " << games << "\nwins " << wins << "\nwinrate "
      << 100.0 * winrate << " +- " << 100.0 * ci << " %\n";
  out << std::setprecision(2) << "mean_rounds " << mean_rounds << '\n';
  for (auto o : {Outcome::LossThreat, Outcome::LossHeroesDead, Outcome::LossTimeout})
    out << "loss_" << to_string(o) << ' ' << outcomes[static_cast<std::size_t>(o)] << '\n';
  out << "master_seed " << master_seed << '\n';
  return out.str();
}

}  // namespace lotr

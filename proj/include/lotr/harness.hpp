#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lotr/curriculum.hpp"
#include "lotr/evaluation.hpp"

namespace lotr {

/// RL flavour used for each role whenever a grid row marks it as learned.
struct GridKinds {
  std::string planning = "rl-macro";
  std::string questing = "rl-direct:2";
  std::string defense = "rl-direct";
};

/// The seven (planning, questing, defense) setups: three single-RL rows,
/// three double-RL rows, one triple-RL row.
std::vector<std::string> grid_setups(const GridKinds& kinds = {});

struct GridRow {
  std::string setup;
  bool rl[3] = {false, false, false};  // planning, questing, defense
  EvalReport report;
  int episodes = 0;  // training episodes spent on this row (0 if pre-trained)
};

struct GridReport {
  int difficulty = 0;
  std::vector<GridRow> rows;

  /// Table with one line per setup.
  std::string describe() const;
};

/// Trained agents, one per role; missing roles stay random.
struct BundleSet {
  std::shared_ptr<ActorCriticAgent> planning;
  std::shared_ptr<ActorCriticAgent> questing;
  std::shared_ptr<ActorCriticAgent> defense;
};

/// Builds the seven rows from one bundle per role and evaluates each with
/// the same game seeds. Throws ConfigError when a role needed by a row is missing.
GridReport multiagent_grid(const BundleSet& bundles, int difficulty, int n_games, std::uint64_t seed,
                           std::shared_ptr<const GameData> data, GameConfig base = {});

struct GridTraining {
  GridKinds kinds;
  HyperParams hp;
  int train_difficulty = 8;
  int episodes = 10000;
  int eval_difficulty = 8;
  int eval_games = 2000;
  std::uint64_t seed = 1;
  GameConfig base;
};

/// Trains every row's RL agents jointly from scratch (same seeds for every
/// row), then evaluates all rows on one shared game-seed sequence.
GridReport train_grid(const GridTraining& spec, std::shared_ptr<const GameData> data);

struct HpoSpace {
  int hidden_min = 30;
  int hidden_max = 150;
  double lr_min = 1e-4;
  double lr_max = 1e-3;
  std::vector<int> encodings{0, 1, 2, 3};
  /// Agent setup; "{enc}" is replaced by the sampled questing encoding.
  std::string agents = "random,rl-direct:{enc},random";
  int difficulty = 8;
  int episodes = 10000;
  int score_window = 1000;
  int eval_games = 1000;
  double gamma = 0.99;

  void validate() const;
};

struct HpoTrial {
  int index = 0;
  int hidden = 0;
  double learning_rate = 0.0;
  int encoding = 0;
  std::uint64_t seed = 0;
  double score = 0.0;  // best trailing average reward
  double winrate = 0.0;
  double ci = 0.0;
  double seconds = 0.0;
};

/// Deterministic in (space, n, seed).
std::vector<HpoTrial> sample_trials(const HpoSpace& space, int n, std::uint64_t seed);

/// Runs every sampled trial and returns them sorted by score, best first.
std::vector<HpoTrial> hpo_search(const HpoSpace& space, int trials, std::uint64_t seed,
                                 std::shared_ptr<const GameData> data, GameConfig base = {});

/// Columns: rank, neurons, learning rate, encoding, score, winrate.
std::string describe_trials(const std::vector<HpoTrial>& ranked);

}  // namespace lotr

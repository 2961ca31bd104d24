#include "lotr/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "lotr/config.hpp"
#include "lotr/curriculum.hpp"
#include "lotr/errors.hpp"
#include "lotr/harness.hpp"

namespace lotr {

namespace fs = std::filesystem;

void save_team(const fs::path& dir, const AgentAssignment& team) {
  fs::create_directories(dir);
  for (auto role : {Role::Planning, Role::Questing, Role::Defense}) {
    const auto& setup = team.at(role);
    if (setup.is_rl() && setup.agent) save_bundle((dir / (std::string(to_string(role)) + ".bundle")).string(), *setup.agent);
  }
}

AgentAssignment load_team(const fs::path& dir, const std::string& agents) {
  auto team = AgentAssignment::parse(agents);
  for (auto role : {Role::Planning, Role::Questing, Role::Defense}) {
    auto& setup = team.at(role);
    if (!setup.is_rl()) continue;
    const auto path = dir / (std::string(to_string(role)) + ".bundle");
    auto agent = load_bundle(path.string());
    if (agent.config().role != role)
      throw BundleMismatch(path.string() + " holds a " + to_string(agent.config().role) + " agent");
    setup.agent = std::make_shared<ActorCriticAgent>(std::move(agent));
  }
  team.validate();
  return team;
}

namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<int> difficulty;
  std::optional<std::string> config, cards, deck, encounter, out;
  std::optional<std::string> agents, bundles, strategy;
  std::optional<int> episodes, games, trials, hidden, train_difficulty;
  std::optional<double> lr, gamma, interrupt_threshold;
  std::optional<int> interrupt_window;
};

Settings resolve(const Flags& f) {
  Settings s;
  if (f.config) load_config(*f.config, s);
  if (f.seed) s.seed = *f.seed;
  if (f.difficulty) s.game.difficulty = *f.difficulty;
  if (f.cards) s.cards = *f.cards;
  if (f.deck) s.deck = *f.deck;
  if (f.encounter) s.encounter = *f.encounter;
  if (f.out) s.out = *f.out;
  if (f.agents) s.agents = *f.agents;
  if (f.strategy) apply_setting(s, "strategy", *f.strategy);
  if (f.episodes) s.episodes = *f.episodes;
  if (f.games) s.games = *f.games;
  if (f.trials) s.trials = *f.trials;
  if (f.hidden) s.hp.hidden = *f.hidden;
  if (f.lr) s.hp.learning_rate = *f.lr;
  if (f.gamma) s.hp.gamma = *f.gamma;
  if (f.interrupt_window || f.interrupt_threshold) {
    if (!s.interrupt) s.interrupt = InterruptRule{};
    if (f.interrupt_window) s.interrupt->window = *f.interrupt_window;
    if (f.interrupt_threshold) s.interrupt->threshold = *f.interrupt_threshold;
  }
  if (f.train_difficulty) s.grid.train_difficulty = *f.train_difficulty;
  s.game.validate();
  return s;
}

std::shared_ptr<const GameData> game_data(const Settings& s) {
  if (s.cards.empty() && s.deck.empty() && s.encounter.empty()) return default_game_data();
  const auto dir = default_data_dir();
  return load_game_data(s.cards.empty() ? dir / "cards.csv" : s.cards, s.deck.empty() ? dir / "deck.csv" : s.deck,
                        s.encounter.empty() ? dir / "encounter.csv" : s.encounter);
}

AgentAssignment team_for(const Settings& s, const Flags& f) {
  if (f.bundles) return load_team(*f.bundles, s.agents);
  auto team = AgentAssignment::parse(s.agents);
  team.initialize(s.hp, derive_seed(s.seed, {1}));
  return team;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path);
  if (!file) throw IoError("cannot write " + path.string());
  file << text;
}

int run_play(const Settings& s, const Flags& f, std::ostream& out) {
  auto data = game_data(s);
  auto team = team_for(s, f);
  GameConfig config = s.game;
  config.seed = s.seed;
  GameState state = new_game(config, data);
  Rng rng(derive_seed(s.seed, {0xa9e47ULL}));
  auto result = play_game(state, team, rng, &out);
  out << "outcome " << to_string(result.outcome) << " rounds " << result.rounds << " decisions " << result.decisions
      << '\n';
  return 0;
}

int run_train(const Settings& s, const Flags& f, std::ostream& out) {
  auto data = game_data(s);
  auto team = team_for(s, f);
  auto run = run_learning(std::move(team), s.game.difficulty, s.episodes, s.interrupt, derive_seed(s.seed, {2}), data,
                          s.game);
  fs::create_directories(s.out);
  {
    std::ofstream log(s.out / "train_log.csv");
    if (!log) throw IoError("cannot write " + (s.out / "train_log.csv").string());
    write_run_log(log, run);
  }
  save_team(s.out, run.agents);
  out << "agents " << run.agents.describe() << "\ndifficulty " << run.difficulty << "\nepisodes " << run.episodes_used
      << "\nstop " << to_string(run.stop_reason) << "\nfinal_average " << run.final_average(run.log_window)
      << "\nlog " << (s.out / "train_log.csv").string() << '\n';
  return 0;
}

int run_evaluate(const Settings& s, const Flags& f, std::ostream& out) {
  auto data = game_data(s);
  auto team = team_for(s, f);
  auto report = evaluate(team, s.game.difficulty, s.games, s.seed, data, s.game);
  const std::string text = "agents " + team.describe() + "\n" + report.describe();
  write_file(s.out / "eval_report.txt", text);
  out << text;
  return 0;
}

int run_curriculum(const Settings& s, std::ostream& out) {
  auto spec = s.strategy;
  spec.agents = s.agents;
  spec.hp = s.hp;
  spec.seed = s.seed;
  spec.base = s.game;
  auto report = run_strategy(spec, game_data(s));
  write_file(s.out / "curriculum_report.txt", report.describe());
  if (report.best) save_team(s.out / "best", report.best_agents);
  out << report.describe();
  return 0;
}

int run_grid(const Settings& s, const Flags& f, std::ostream& out) {
  auto spec = s.grid;
  spec.hp = s.hp;
  spec.seed = s.seed;
  spec.base = s.game;
  spec.eval_games = f.games ? *f.games : spec.eval_games;
  if (f.episodes) spec.episodes = *f.episodes;
  if (f.difficulty) {
    spec.eval_difficulty = *f.difficulty;
    if (!f.train_difficulty) spec.train_difficulty = *f.difficulty;
  }
  auto report = train_grid(spec, game_data(s));
  write_file(s.out / "grid_report.txt", report.describe());
  out << report.describe();
  return 0;
}

int run_hpo(const Settings& s, const Flags& f, std::ostream& out) {
  auto space = s.hpo;
  if (f.difficulty) space.difficulty = *f.difficulty;
  if (f.episodes) space.episodes = *f.episodes;
  if (f.games) space.eval_games = *f.games;
  space.gamma = s.hp.gamma;
  auto ranked = hpo_search(space, s.trials, s.seed, game_data(s), s.game);
  write_file(s.out / "hpo_report.txt", describe_trials(ranked));
  out << describe_trials(ranked);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solo card-game simulator with actor-critic agents", "lotr"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Flags f;
  auto* g = app.add_option_group("global");
  g->add_option("--seed", f.seed, "master seed");
  g->add_option("--difficulty", f.difficulty, "quest points needed to win (1-20)");
  g->add_option("--config", f.config, "key = value settings file");
  g->add_option("--cards", f.cards, "card database csv");
  g->add_option("--deck", f.deck, "player deck copy table");
  g->add_option("--encounter", f.encounter, "encounter copy table");
  g->add_option("--out", f.out, "output directory");

  auto agent_opts = [&](CLI::App* cmd) {
    cmd->add_option("--agents", f.agents, "planning,questing,defense e.g. random,rl-direct:2,random");
    cmd->add_option("--bundles", f.bundles, "directory of trained <role>.bundle files");
    cmd->add_option("--hidden", f.hidden, "hidden units for fresh networks");
    cmd->add_option("--lr", f.lr, "learning rate");
    cmd->add_option("--gamma", f.gamma, "discount");
  };
  auto* play = app.add_subcommand("play", "play one seeded game and print its trace");
  agent_opts(play);
  auto* train = app.add_subcommand("train", "one learning run; writes train_log.csv and bundles");
  agent_opts(train);
  train->add_option("--episodes", f.episodes, "episode cap");
  train->add_option("--interrupt-window", f.interrupt_window, "trailing window for early stop");
  train->add_option("--interrupt-threshold", f.interrupt_threshold, "stop once the trailing average exceeds this");
  auto* curriculum = app.add_subcommand("curriculum", "run a learning strategy");
  curriculum->add_option("--agents", f.agents, "agent setup");
  curriculum->add_option("--strategy", f.strategy, "one_step, two_step_continued or two_step_interrupted");
  curriculum->add_option("--hidden", f.hidden, "hidden units");
  curriculum->add_option("--lr", f.lr, "learning rate");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "winrate of a setup over seeded games");
  agent_opts(evaluate_cmd);
  evaluate_cmd->add_option("--games", f.games, "number of games");
  auto* grid = app.add_subcommand("grid", "train and evaluate the seven multi-agent setups");
  grid->add_option("--episodes", f.episodes, "training episodes per setup");
  grid->add_option("--games", f.games, "evaluation games per setup");
  grid->add_option("--train-difficulty", f.train_difficulty, "training difficulty");
  grid->add_option("--hidden", f.hidden, "hidden units");
  grid->add_option("--lr", f.lr, "learning rate");
  auto* hpo = app.add_subcommand("hpo", "random hyper-parameter search");
  hpo->add_option("--trials", f.trials, "number of trials");
  hpo->add_option("--episodes", f.episodes, "episodes per trial");
  hpo->add_option("--games", f.games, "post-hoc evaluation games");
  for (auto* cmd : {play, train, curriculum, evaluate_cmd, grid, hpo}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    const Settings s = resolve(f);
    if (*play) return run_play(s, f, out);
    if (*train) return run_train(s, f, out);
    if (*curriculum) return run_curriculum(s, out);
    if (*evaluate_cmd) return run_evaluate(s, f, out);
    if (*grid) return run_grid(s, f, out);
    if (*hpo) return run_hpo(s, f, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const SchemaError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace lotr

#include "lotr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "lotr/errors.hpp"
#include "lotr/parallel.hpp"

namespace lotr {

namespace {

constexpr std::array<Role, 3> kRoles{Role::Planning, Role::Questing, Role::Defense};

// Table order: singles, doubles, triple.
constexpr bool kGridMask[7][3] = {
    {true, false, false}, {false, true, false}, {false, false, true}, {true, true, false},
    {true, false, true},  {false, true, true},  {true, true, true},
};

std::string setup_text(const bool rl[3], const std::string kinds[3]) {
  std::string out;
  for (int r = 0; r < 3; ++r) out += (r ? "," : "") + (rl[r] ? kinds[r] : std::string("random"));
  return out;
}

std::string kind_token(const ActorCriticAgent& agent) {
  const auto& c = agent.config();
  std::string token = c.head == ActionHead::Macro ? "rl-macro" : "rl-direct";
  if (c.role == Role::Questing) token += ":" + std::string(1, to_string(c.scheme)[8]);
  return token;
}

}  // namespace

std::vector<std::string> grid_setups(const GridKinds& kinds) {
  const std::string k[3] = {kinds.planning, kinds.questing, kinds.defense};
  std::vector<std::string> out;
  for (const auto& row : kGridMask) out.push_back(setup_text(row, k));
  return out;
}

GridReport multiagent_grid(const BundleSet& bundles, int difficulty, int n_games, std::uint64_t seed,
                           std::shared_ptr<const GameData> data, GameConfig base) {
  const std::shared_ptr<ActorCriticAgent> agents[3] = {bundles.planning, bundles.questing, bundles.defense};
  std::string kinds[3];
  for (int r = 0; r < 3; ++r) {
    if (!agents[r]) throw ConfigError(std::string("grid needs a ") + to_string(kRoles[r]) + " bundle");
    if (agents[r]->config().role != kRoles[r])
      throw BundleMismatch(std::string("bundle for ") + to_string(kRoles[r]) + " was trained for " +
                           to_string(agents[r]->config().role));
    kinds[r] = kind_token(*agents[r]);
  }
  GridReport report;
  report.difficulty = difficulty;
  std::vector<AgentAssignment> teams;
  for (const auto& row : kGridMask) {
    GridRow g;
    std::copy(row, row + 3, g.rl);
    g.setup = setup_text(row, kinds);
    auto team = AgentAssignment::parse(g.setup);
    for (int r = 0; r < 3; ++r)
      if (row[r]) team.at(kRoles[r]).agent = agents[r];
    team.validate();
    teams.push_back(std::move(team));
    report.rows.push_back(std::move(g));
  }
  // Rows share the master seed, so each plays the same game seeds.
  for (std::size_t i = 0; i < teams.size(); ++i)
    report.rows[i].report = evaluate(teams[i], difficulty, n_games, seed, data, base);
  return report;
}

GridReport train_grid(const GridTraining& spec, std::shared_ptr<const GameData> data) {
  const auto setups = grid_setups(spec.kinds);
  GridReport report;
  report.difficulty = spec.eval_difficulty;
  report.rows.resize(setups.size());
  std::vector<AgentAssignment> trained(setups.size());
  parallel_for(setups.size(), [&](std::size_t i) {
    auto team = AgentAssignment::parse(setups[i]);
    // A role gets the same initial weights in every row it appears in.
    team.initialize(spec.hp, derive_seed(spec.seed, {0x9e1dULL}));
    auto run = run_learning(std::move(team), spec.train_difficulty, spec.episodes, std::nullopt,
                            derive_seed(spec.seed, {0x9e1dULL, 1}), data, spec.base);
    report.rows[i].setup = setups[i];
    std::copy(kGridMask[i], kGridMask[i] + 3, report.rows[i].rl);
    report.rows[i].episodes = run.episodes_used;
    trained[i] = std::move(run.agents);
  });
  const auto eval_seed = derive_seed(spec.seed, {0x9e1dULL, 2});
  for (std::size_t i = 0; i < setups.size(); ++i)
    report.rows[i].report =
        evaluate(trained[i], spec.eval_difficulty, spec.eval_games, eval_seed, data, spec.base);
  return report;
}

std::string GridReport::describe() const {
  std::ostringstream out;
  out << "difficulty " << difficulty << '\n';
  out << std::left << std::setw(14) << "planning" << std::setw(14) << "questing" << std::setw(14) << "defense"
      << "winrate\n";
  out << std::fixed << std::setprecision(1);
  for (const auto& row : rows) {
    std::istringstream parts(row.setup);
    std::string cell;
    while (std::getline(parts, cell, ',')) out << std::setw(14) << cell;
    out << 100.0 * row.report.winrate << " +- " << 100.0 * row.report.ci << '\n';
  }
  return out.str();
}

void HpoSpace::validate() const {
  if (hidden_min < 1 || hidden_max < hidden_min) throw ConfigError("hidden range must satisfy 1 <= min <= max");
  if (!(lr_min > 0.0) || lr_max < lr_min) throw ConfigError("learning rate range must satisfy 0 < min <= max");
  if (encodings.empty()) throw ConfigError("no questing encodings to sample");
  for (int e : encodings)
    if (e < 0 || e > 3) throw ConfigError("questing encoding must be 0..3");
  if (agents.find("{enc}") == std::string::npos) AgentAssignment::parse(agents);
  if (episodes < 1 || score_window < 1 || eval_games < 1) throw ConfigError("hpo budgets must be positive");
}

std::vector<HpoTrial> sample_trials(const HpoSpace& space, int n, std::uint64_t seed) {
  space.validate();
  if (n < 0) throw ConfigError("trial count must be non-negative");
  Rng rng(derive_seed(seed, {0x4b0ULL}));
  std::vector<HpoTrial> trials;
  const double log_lo = std::log(space.lr_min), log_hi = std::log(space.lr_max);
  for (int i = 0; i < n; ++i) {
    HpoTrial t;
    t.index = i;
    t.hidden = space.hidden_min +
               static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(space.hidden_max - space.hidden_min + 1)));
    t.learning_rate = std::exp(log_lo + (log_hi - log_lo) * uniform01(rng));
    t.encoding = space.encodings[uniform_index(rng, space.encodings.size())];
    t.seed = derive_seed(seed, {0x4b0ULL, static_cast<std::uint64_t>(i)});
    trials.push_back(t);
  }
  return trials;
}

std::vector<HpoTrial> hpo_search(const HpoSpace& space, int trials, std::uint64_t seed,
                                 std::shared_ptr<const GameData> data, GameConfig base) {
  auto sampled = sample_trials(space, trials, seed);
  parallel_for(sampled.size(), [&](std::size_t i) {
    auto& t = sampled[i];
    std::string agents = space.agents;
    if (auto at = agents.find("{enc}"); at != std::string::npos) agents.replace(at, 5, std::to_string(t.encoding));
    auto team = AgentAssignment::parse(agents);
    team.initialize(HyperParams{t.hidden, t.learning_rate, space.gamma}, derive_seed(t.seed, {1}));
    auto run = run_learning(std::move(team), space.difficulty, space.episodes, std::nullopt, derive_seed(t.seed, {2}),
                            data, base);
    t.score = run.best_trailing(space.score_window);
    auto eval = evaluate(run.agents, space.difficulty, space.eval_games, derive_seed(seed, {0x4b0ULL, 0xe7a1ULL}),
                         data, base);
    t.winrate = eval.winrate;
    t.ci = eval.ci;
    t.seconds = run.seconds;
  });
  std::stable_sort(sampled.begin(), sampled.end(), [](const HpoTrial& a, const HpoTrial& b) { return a.score > b.score; });
  return sampled;
}

std::string describe_trials(const std::vector<HpoTrial>& ranked) {
  std::ostringstream out;
  out << "rank neurons learning_rate encoding score winrate\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& t = ranked[i];
    out << (i + 1) << ' ' << t.hidden << ' ' << std::setprecision(2) << std::scientific << t.learning_rate << ' '
        << std::fixed << t.encoding << ' ' << std::setprecision(3) << t.score << ' ' << std::setprecision(1)
        << 100.0 * t.winrate << " +- " << 100.0 * t.ci << '\n';
  }
  if (ranked.empty()) out << "(no trials)\n";
  return out.str();
}

}  // namespace lotr

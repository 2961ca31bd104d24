#include "lotr/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lotr/errors.hpp"

namespace lotr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

int as_int(const std::string& k, const std::string& v) { return parse_number<int>(k, v); }
double as_double(const std::string& k, const std::string& v) { return parse_number<double>(k, v); }

std::vector<int> as_int_list(const std::string& k, const std::string& v) {
  std::vector<int> out;
  std::istringstream in(v);
  for (std::string item; std::getline(in, item, ',');) out.push_back(as_int(k, trim(item)));
  if (out.empty()) throw ConfigError(k + " needs at least one value");
  return out;
}

std::optional<int> as_cap(const std::string& k, const std::string& v) {
  if (v == "none") return std::nullopt;
  return as_int(k, v);
}

using Setter = std::function<void(Settings&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      // game
      {"difficulty", [](Settings& s, auto& k, auto& v) { s.game.difficulty = as_int(k, v); }},
      {"max_rounds", [](Settings& s, auto& k, auto& v) { s.game.max_rounds = as_int(k, v); }},
      {"starting_threat", [](Settings& s, auto& k, auto& v) { s.game.starting_threat = as_int(k, v); }},
      {"threat_limit", [](Settings& s, auto& k, auto& v) { s.game.threat_limit = as_int(k, v); }},
      {"opening_hand", [](Settings& s, auto& k, auto& v) { s.game.opening_hand = as_int(k, v); }},
      {"seed", [](Settings& s, auto& k, auto& v) { s.seed = parse_number<std::uint64_t>(k, v); }},
      // agents
      {"agents", [](Settings& s, auto&, auto& v) { s.agents = v; }},
      {"hidden", [](Settings& s, auto& k, auto& v) { s.hp.hidden = as_int(k, v); }},
      {"learning_rate", [](Settings& s, auto& k, auto& v) { s.hp.learning_rate = as_double(k, v); }},
      {"gamma", [](Settings& s, auto& k, auto& v) { s.hp.gamma = as_double(k, v); }},
      // single runs
      {"episodes", [](Settings& s, auto& k, auto& v) { s.episodes = as_int(k, v); }},
      {"games", [](Settings& s, auto& k, auto& v) { s.games = as_int(k, v); }},
      {"interrupt_window",
       [](Settings& s, auto& k, auto& v) {
         if (!s.interrupt) s.interrupt = InterruptRule{};
         s.interrupt->window = as_int(k, v);
       }},
      {"interrupt_threshold",
       [](Settings& s, auto& k, auto& v) {
         if (!s.interrupt) s.interrupt = InterruptRule{};
         s.interrupt->threshold = as_double(k, v);
       }},
      // curriculum
      {"strategy",
       [](Settings& s, auto&, auto& v) {
         auto kind = parse_strategy(v);
         auto d = StrategySpec::defaults(kind);
         s.strategy.kind = kind;
         s.strategy.step1 = d.step1;
         s.strategy.step2 = d.step2;
       }},
      {"step1_difficulties", [](Settings& s, auto& k, auto& v) { s.strategy.step1_difficulties = as_int_list(k, v); }},
      {"step2_difficulty", [](Settings& s, auto& k, auto& v) { s.strategy.step2_difficulty = as_int(k, v); }},
      {"step1_iterations", [](Settings& s, auto& k, auto& v) { s.strategy.step1.iterations = as_int(k, v); }},
      {"step1_episodes", [](Settings& s, auto& k, auto& v) { s.strategy.step1.episodes_per_iteration = as_int(k, v); }},
      {"step1_cap", [](Settings& s, auto& k, auto& v) { s.strategy.step1.episode_cap = as_cap(k, v); }},
      {"step2_iterations", [](Settings& s, auto& k, auto& v) { s.strategy.step2.iterations = as_int(k, v); }},
      {"step2_episodes", [](Settings& s, auto& k, auto& v) { s.strategy.step2.episodes_per_iteration = as_int(k, v); }},
      {"step2_cap", [](Settings& s, auto& k, auto& v) { s.strategy.step2.episode_cap = as_cap(k, v); }},
      {"selection_winrate", [](Settings& s, auto& k, auto& v) { s.strategy.selection_winrate = as_double(k, v); }},
      {"step1_window", [](Settings& s, auto& k, auto& v) { s.strategy.step1_interrupt.window = as_int(k, v); }},
      {"step1_threshold", [](Settings& s, auto& k, auto& v) { s.strategy.step1_interrupt.threshold = as_double(k, v); }},
      {"step2_window", [](Settings& s, auto& k, auto& v) { s.strategy.step2_interrupt.window = as_int(k, v); }},
      {"step2_threshold", [](Settings& s, auto& k, auto& v) { s.strategy.step2_interrupt.threshold = as_double(k, v); }},
      {"score_window", [](Settings& s, auto& k, auto& v) { s.strategy.score_window = as_int(k, v); }},
      {"eval_games", [](Settings& s, auto& k, auto& v) { s.strategy.eval_games = as_int(k, v); }},
      // grid
      {"grid_planning", [](Settings& s, auto&, auto& v) { s.grid.kinds.planning = v; }},
      {"grid_questing", [](Settings& s, auto&, auto& v) { s.grid.kinds.questing = v; }},
      {"grid_defense", [](Settings& s, auto&, auto& v) { s.grid.kinds.defense = v; }},
      {"grid_train_difficulty", [](Settings& s, auto& k, auto& v) { s.grid.train_difficulty = as_int(k, v); }},
      {"grid_episodes", [](Settings& s, auto& k, auto& v) { s.grid.episodes = as_int(k, v); }},
      // hpo
      {"trials", [](Settings& s, auto& k, auto& v) { s.trials = as_int(k, v); }},
      {"hpo_hidden_min", [](Settings& s, auto& k, auto& v) { s.hpo.hidden_min = as_int(k, v); }},
      {"hpo_hidden_max", [](Settings& s, auto& k, auto& v) { s.hpo.hidden_max = as_int(k, v); }},
      {"hpo_lr_min", [](Settings& s, auto& k, auto& v) { s.hpo.lr_min = as_double(k, v); }},
      {"hpo_lr_max", [](Settings& s, auto& k, auto& v) { s.hpo.lr_max = as_double(k, v); }},
      {"hpo_encodings", [](Settings& s, auto& k, auto& v) { s.hpo.encodings = as_int_list(k, v); }},
      {"hpo_agents", [](Settings& s, auto&, auto& v) { s.hpo.agents = v; }},
      {"hpo_episodes", [](Settings& s, auto& k, auto& v) { s.hpo.episodes = as_int(k, v); }},
      {"hpo_score_window", [](Settings& s, auto& k, auto& v) { s.hpo.score_window = as_int(k, v); }},
      {"hpo_eval_games", [](Settings& s, auto& k, auto& v) { s.hpo.eval_games = as_int(k, v); }},
      // paths
      {"cards", [](Settings& s, auto&, auto& v) { s.cards = v; }},
      {"deck", [](Settings& s, auto&, auto& v) { s.deck = v; }},
      {"encounter", [](Settings& s, auto&, auto& v) { s.encounter = v; }},
      {"out", [](Settings& s, auto&, auto& v) { s.out = v; }},
  };
  return table;
}

}  // namespace

void apply_setting(Settings& s, const std::string& key, const std::string& value) {
  auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(s, key, value);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void parse_config(std::istream& in, Settings& s, const std::string& source) {
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(source, n, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw FormatError(source, n, "expected 'key = value'");
    try {
      apply_setting(s, key, value);
    } catch (const ConfigError& e) {
      throw FormatError(source, n, e.what());
    }
  }
}

void load_config(const std::filesystem::path& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  parse_config(in, s, path.string());
}

}  // namespace lotr

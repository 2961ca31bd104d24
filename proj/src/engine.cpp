#include "lotr/engine.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "lotr/errors.hpp"

namespace lotr {

const char* to_string(Violation v) noexcept {
  switch (v) {
    case Violation::WrongPhase: return "WrongPhase";
    case Violation::GameOver: return "GameOver";
    case Violation::NotInHand: return "NotInHand";
    case Violation::Unaffordable: return "Unaffordable";
    case Violation::NotOnTable: return "NotOnTable";
    case Violation::NotReady: return "NotReady";
    case Violation::TransientCommit: return "TransientCommit";
    case Violation::InvalidDefender: return "InvalidDefender";
    case Violation::DoubleAssignment: return "DoubleAssignment";
    case Violation::AttackerNotEngaged: return "AttackerNotEngaged";
  }
  return "?";
}

const char* to_string(Phase p) noexcept {
  switch (p) {
    case Phase::Resource: return "Resource";
    case Phase::Planning: return "Planning";
    case Phase::Questing: return "Questing";
    case Phase::Travel: return "Travel";
    case Phase::Encounter: return "Encounter";
    case Phase::Defense: return "Defense";
    case Phase::Attack: return "Attack";
    case Phase::Refresh: return "Refresh";
  }
  return "?";
}

const char* to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Ongoing: return "Ongoing";
    case Outcome::Win: return "Win";
    case Outcome::LossThreat: return "LossThreat";
    case Outcome::LossHeroesDead: return "LossHeroesDead";
    case Outcome::LossTimeout: return "LossTimeout";
  }
  return "?";
}

void GameConfig::validate() const {
  if (difficulty < 1 || difficulty > 20)
    throw ConfigError("difficulty must be in 1..20, got " + std::to_string(difficulty));
  if (max_rounds < 1) throw ConfigError("max_rounds must be positive");
  if (opening_hand < 0) throw ConfigError("opening_hand must be non-negative");
  if (threat_limit <= starting_threat) throw ConfigError("threat_limit must exceed starting_threat");
}

int GameState::surviving_heroes() const noexcept {
  return static_cast<int>(std::count_if(table.begin(), table.end(), [](const auto& c) { return is_hero(c.card); }));
}

namespace {

void expect_phase(const GameState& s, Phase p) {
  if (s.over()) throw RuleError(Violation::GameOver, std::string("game already ended: ") + to_string(s.outcome));
  if (s.phase != p)
    throw RuleError(Violation::WrongPhase,
                    std::string("expected ") + to_string(p) + " phase, state is in " + to_string(s.phase));
}

void draw_player_card(GameState& s) {
  if (s.player_deck.empty()) return;
  s.hand.push_back(s.player_deck.back());
  s.player_deck.pop_back();
  ++s.random_events;
}

void reveal_encounter_card(GameState& s) {
  if (s.encounter_deck.empty()) {
    s.encounter_deck.swap(s.encounter_discard);
    shuffle(std::span<CardId>(s.encounter_deck), s.rng);
  }
  if (s.encounter_deck.empty()) return;
  s.staging_area.push_back(s.encounter_deck.back());
  s.encounter_deck.pop_back();
  ++s.random_events;
}

int remaining_hp(const GameState& s, const CharacterInPlay& c) { return s.def(c.card).hit_points - c.damage; }

void apply_progress(GameState& s, int points) {
  if (s.active_location) {
    auto& loc = *s.active_location;
    int needed = s.def(loc.card).quest_points - loc.progress;
    if (points < needed) {
      loc.progress += points;
      return;
    }
    points -= needed;
    s.encounter_discard.push_back(loc.card);
    s.active_location.reset();
  }
  s.quest_progress += points;
  if (s.quest_progress >= s.config.difficulty) s.outcome = Outcome::Win;
}

void raise_threat(GameState& s, int amount) {
  s.threat_level += amount;
  if (s.threat_level >= s.config.threat_limit) s.outcome = Outcome::LossThreat;
}

}  // namespace

GameState new_game(const GameConfig& config, std::shared_ptr<const GameData> data) {
  config.validate();
  if (!data) throw ConfigError("no game data");
  GameState s;
  s.data = std::move(data);
  s.config = config;
  s.rng.seed(config.seed);
  s.threat_level = config.starting_threat;
  s.player_deck = build_player_deck(s.data->cards, s.data->deck, s.rng);
  s.encounter_deck = build_encounter_deck(s.data->cards, s.data->encounter, s.rng);
  for (CardId hero : s.data->cards.ids_of(CardKind::Hero)) s.table.push_back({hero});
  for (int i = 0; i < config.opening_hand && !s.player_deck.empty(); ++i) {
    s.hand.push_back(s.player_deck.back());
    s.player_deck.pop_back();
  }
  return s;
}

void resource_phase(GameState& s) {
  expect_phase(s, Phase::Resource);
  s.resource_pool += s.surviving_heroes();
  draw_player_card(s);
  s.phase = Phase::Planning;
}

void apply_planning(GameState& s, CardId card) {
  expect_phase(s, Phase::Planning);
  auto it = std::find(s.hand.begin(), s.hand.end(), card);
  if (it == s.hand.end()) throw RuleError(Violation::NotInHand, "card " + std::to_string(card));
  int cost = s.def(card).cost;
  if (cost > s.resource_pool)
    throw RuleError(Violation::Unaffordable,
                    "card " + std::to_string(card) + " costs " + std::to_string(cost) + ", pool " +
                        std::to_string(s.resource_pool));
  s.hand.erase(it);
  s.resource_pool -= cost;
  s.table.push_back({card});
}

void end_planning(GameState& s) {
  expect_phase(s, Phase::Planning);
  s.phase = Phase::Questing;
}

std::vector<CardId> affordable_cards(const GameState& s) {
  std::vector<CardId> out;
  for (CardId id : s.hand)
    if (s.def(id).cost <= s.resource_pool) out.push_back(id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int combined_threat(const GameState& s) {
  int t = 0;
  for (CardId id : s.staging_area) t += s.def(id).threat;
  return t;
}

bool can_quest(const GameState& s, const CharacterInPlay& c) {
  return !c.exhausted && !c.committed && !s.def(c.card).transient;
}

std::vector<std::size_t> available_copies(const GameState& s, CardId card) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.table.size(); ++i)
    if (s.table[i].card == card && !s.table[i].exhausted && !s.table[i].committed) out.push_back(i);
  return out;
}

void questing_phase(GameState& s, const std::vector<CardId>& committed) {
  expect_phase(s, Phase::Questing);

  // Validate the whole commitment before touching the state.
  std::vector<std::size_t> picks;
  std::vector<bool> taken(s.table.size(), false);
  for (CardId id : committed) {
    if (!is_character(id)) throw RuleError(Violation::NotOnTable, "card " + std::to_string(id) + " is not a character");
    if (s.def(id).transient) throw RuleError(Violation::TransientCommit, "card " + std::to_string(id));
    bool on_table = false;
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < s.table.size() && !pick; ++i) {
      if (s.table[i].card != id) continue;
      on_table = true;
      if (!taken[i] && can_quest(s, s.table[i])) pick = i;
    }
    if (!on_table) throw RuleError(Violation::NotOnTable, "card " + std::to_string(id));
    if (!pick) throw RuleError(Violation::NotReady, "no ready copy of card " + std::to_string(id));
    taken[*pick] = true;
    picks.push_back(*pick);
  }

  int willpower = 0;
  for (auto i : picks) {
    s.table[i].exhausted = true;
    s.table[i].committed = true;
    willpower += s.def(s.table[i].card).willpower;
  }

  reveal_encounter_card(s);

  const int threat = combined_threat(s);
  if (willpower > threat)
    apply_progress(s, willpower - threat);
  else if (willpower < threat)
    raise_threat(s, threat - willpower);

  if (!s.over()) s.phase = Phase::Travel;
}

void travel_phase(GameState& s) {
  expect_phase(s, Phase::Travel);
  if (!s.active_location) {
    auto best = s.staging_area.end();
    for (auto it = s.staging_area.begin(); it != s.staging_area.end(); ++it) {
      if (!is_land(*it)) continue;
      if (best == s.staging_area.end() || s.def(*it).threat > s.def(*best).threat ||
          (s.def(*it).threat == s.def(*best).threat && *it < *best))
        best = it;
    }
    if (best != s.staging_area.end()) {
      s.active_location = ActiveLocation{*best, 0};
      s.staging_area.erase(best);
    }
  }
  s.phase = Phase::Encounter;
}

void encounter_phase(GameState& s) {
  expect_phase(s, Phase::Encounter);
  std::vector<CardId> engaging;
  std::vector<CardId> staying;
  for (CardId id : s.staging_area) {
    if (is_enemy(id) && s.def(id).engagement_cost <= s.threat_level)
      engaging.push_back(id);
    else
      staying.push_back(id);
  }
  std::stable_sort(engaging.begin(), engaging.end(), [&](CardId a, CardId b) {
    return s.def(a).engagement_cost != s.def(b).engagement_cost ? s.def(a).engagement_cost < s.def(b).engagement_cost
                                                                 : a < b;
  });
  for (CardId id : engaging) s.engagement_area.push_back({id, 0});
  std::stable_sort(s.engagement_area.begin(), s.engagement_area.end(),
                   [](const auto& a, const auto& b) { return a.card < b.card; });
  s.staging_area = std::move(staying);
  s.phase = Phase::Defense;
}

void defense_phase(GameState& s, const DefenseAssignment& assignment) {
  expect_phase(s, Phase::Defense);
  if (assignment.size() > s.engagement_area.size())
    throw RuleError(Violation::InvalidDefender, "more assignments than engaged enemies");
  std::vector<bool> used(s.table.size(), false);
  for (const auto& slot : assignment) {
    if (!slot) continue;
    if (*slot >= s.table.size()) throw RuleError(Violation::InvalidDefender, "table index out of range");
    const auto& c = s.table[*slot];
    if (c.exhausted || c.committed)
      throw RuleError(Violation::InvalidDefender, "card " + std::to_string(c.card) + " is not ready");
    if (used[*slot]) throw RuleError(Violation::DoubleAssignment, "card " + std::to_string(c.card));
    used[*slot] = true;
  }

  auto alive = [&](const CharacterInPlay& c) { return remaining_hp(s, c) > 0; };
  for (std::size_t e = 0; e < s.engagement_area.size(); ++e) {
    const auto& enemy = s.def(s.engagement_area[e].card);
    std::optional<std::size_t> defender = e < assignment.size() ? assignment[e] : std::nullopt;
    if (defender) {
      auto& c = s.table[*defender];
      c.exhausted = true;
      c.damage += std::max(0, enemy.attack - s.def(c.card).defense);
      continue;
    }
    std::optional<std::size_t> target;
    for (std::size_t i = 0; i < s.table.size(); ++i) {
      const auto& c = s.table[i];
      if (!is_hero(c.card) || !alive(c)) continue;
      if (!target || remaining_hp(s, c) > remaining_hp(s, s.table[*target])) target = i;
    }
    if (target) s.table[*target].damage += enemy.attack;
  }

  std::vector<CharacterInPlay> survivors;
  for (auto& c : s.table) {
    if (alive(c))
      survivors.push_back(c);
    else
      s.player_discard.push_back(c.card);
  }
  s.table = std::move(survivors);
  if (s.surviving_heroes() == 0) {
    s.outcome = Outcome::LossHeroesDead;
    return;
  }
  s.phase = Phase::Attack;
}

void attack_phase(GameState& s) {
  expect_phase(s, Phase::Attack);
  s.phase = Phase::Refresh;
  if (s.engagement_area.empty()) return;
  int total_attack = 0;
  bool any = false;
  for (const auto& c : s.table) {
    if (c.exhausted || c.committed) continue;
    total_attack += s.def(c.card).attack;
    any = true;
  }
  if (!any) return;

  std::size_t target = 0;
  auto enemy_hp = [&](std::size_t i) {
    return s.def(s.engagement_area[i].card).hit_points - s.engagement_area[i].damage;
  };
  for (std::size_t i = 1; i < s.engagement_area.size(); ++i)
    if (enemy_hp(i) < enemy_hp(target)) target = i;

  for (auto& c : s.table)
    if (!c.exhausted && !c.committed) c.exhausted = true;

  auto& enemy = s.engagement_area[target];
  enemy.damage += std::max(0, total_attack - s.def(enemy.card).defense);
  if (enemy.damage >= s.def(enemy.card).hit_points) {
    s.encounter_discard.push_back(enemy.card);
    s.engagement_area.erase(s.engagement_area.begin() + static_cast<std::ptrdiff_t>(target));
  }
}

void refresh_phase(GameState& s) {
  expect_phase(s, Phase::Refresh);
  std::vector<CharacterInPlay> kept;
  for (auto& c : s.table) {
    if (s.def(c.card).transient) {
      s.player_discard.push_back(c.card);
      continue;
    }
    c.exhausted = false;
    c.committed = false;
    kept.push_back(c);
  }
  s.table = std::move(kept);
  ++s.round;
  s.phase = Phase::Resource;
  raise_threat(s, 1);
  if (!s.over() && s.round > s.config.max_rounds) s.outcome = Outcome::LossTimeout;
}

std::size_t card_count(const GameState& s) {
  return s.hand.size() + s.table.size() + s.staging_area.size() + s.engagement_area.size() +
         (s.active_location ? 1 : 0) + s.player_deck.size() + s.player_discard.size() + s.encounter_deck.size() +
         s.encounter_discard.size();
}

namespace {

void write_ids(std::ostream& out, const char* label, std::vector<CardId> ids, bool sorted) {
  if (sorted) std::sort(ids.begin(), ids.end());
  out << label;
  for (CardId id : ids) out << ' ' << id;
  out << '\n';
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string serialize(const GameState& s) {
  std::ostringstream out;
  out << "round " << s.round << '\n';
  out << "phase " << to_string(s.phase) << '\n';
  out << "outcome " << to_string(s.outcome) << '\n';
  out << "difficulty " << s.config.difficulty << '\n';
  out << "threat " << s.threat_level << '\n';
  out << "pool " << s.resource_pool << '\n';
  out << "progress " << s.quest_progress << '\n';
  write_ids(out, "hand", s.hand, true);
  out << "table";
  for (const auto& c : s.table)
    out << ' ' << c.card << ':' << c.damage << ':' << (c.exhausted ? 'x' : 'r') << (c.committed ? 'c' : '-');
  out << '\n';
  write_ids(out, "staging", s.staging_area, true);
  out << "engaged";
  for (const auto& e : s.engagement_area) out << ' ' << e.card << ':' << e.damage;
  out << '\n';
  out << "location";
  if (s.active_location) out << ' ' << s.active_location->card << ':' << s.active_location->progress;
  out << '\n';
  write_ids(out, "player_deck", s.player_deck, false);
  write_ids(out, "player_discard", s.player_discard, true);
  write_ids(out, "encounter_deck", s.encounter_deck, false);
  write_ids(out, "encounter_discard", s.encounter_discard, true);
  std::ostringstream rng_state;
  rng_state << s.rng;
  out << "random_events " << s.random_events << '\n';
  out << "rng " << std::hex << fnv1a(rng_state.str()) << std::dec << '\n';
  return out.str();
}

}  // namespace lotr

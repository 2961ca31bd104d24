#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lotr/cards.hpp"
#include "lotr/random.hpp"

namespace lotr {

struct GameConfig {
  int difficulty = 20;  // quest points needed to win, 1..20
  std::uint64_t seed = 0;
  int max_rounds = 72;
  int starting_threat = 28;
  int threat_limit = 50;  // reaching this threat level loses
  int opening_hand = 6;

  /// Throws ConfigError.
  void validate() const;
};

enum class Phase { Resource, Planning, Questing, Travel, Encounter, Defense, Attack, Refresh };
enum class Outcome { Ongoing, Win, LossThreat, LossHeroesDead, LossTimeout };

const char* to_string(Phase p) noexcept;
const char* to_string(Outcome o) noexcept;

/// +1 on a win, -1 on any loss, 0 while the game runs.
constexpr double terminal_reward(Outcome o) noexcept {
  return o == Outcome::Ongoing ? 0.0 : (o == Outcome::Win ? 1.0 : -1.0);
}

struct CharacterInPlay {
  CardId card = 0;
  int damage = 0;
  bool exhausted = false;
  bool committed = false;

  bool ready() const noexcept { return !exhausted; }
  bool operator==(const CharacterInPlay&) const = default;
};

struct EngagedEnemy {
  CardId card = 0;
  int damage = 0;
  bool operator==(const EngagedEnemy&) const = default;
};

struct ActiveLocation {
  CardId card = 0;
  int progress = 0;
  bool operator==(const ActiveLocation&) const = default;
};

struct GameState {
  std::shared_ptr<const GameData> data;
  GameConfig config;

  int round = 1;
  Phase phase = Phase::Resource;
  int threat_level = 28;
  int resource_pool = 0;
  std::vector<CardId> hand;
  std::vector<CharacterInPlay> table;
  std::vector<CardId> staging_area;
  std::vector<EngagedEnemy> engagement_area;  // kept sorted by card id
  std::optional<ActiveLocation> active_location;
  int quest_progress = 0;
  std::vector<CardId> player_deck;  // top of deck is the back
  std::vector<CardId> player_discard;
  std::vector<CardId> encounter_deck;
  std::vector<CardId> encounter_discard;
  Rng rng;
  Outcome outcome = Outcome::Ongoing;
  /// Count of random card events (player draws and encounter reveals).
  std::int64_t random_events = 0;

  const CardDef& def(CardId id) const { return data->cards.at(id); }
  bool over() const noexcept { return outcome != Outcome::Ongoing; }
  int surviving_heroes() const noexcept;
};

GameState new_game(const GameConfig& config, std::shared_ptr<const GameData> data);

/// Engagement-area slot for defense assignments: one optional table index
/// per engaged enemy, in engagement-area order.
using DefenseAssignment = std::vector<std::optional<std::size_t>>;

void resource_phase(GameState& s);
void apply_planning(GameState& s, CardId card);
/// Closes the planning phase; purchases are done.
void end_planning(GameState& s);
std::vector<CardId> affordable_cards(const GameState& s);
int combined_threat(const GameState& s);
/// Each id commits one ready, uncommitted copy of that character.
void questing_phase(GameState& s, const std::vector<CardId>& committed);
void travel_phase(GameState& s);
void encounter_phase(GameState& s);
void defense_phase(GameState& s, const DefenseAssignment& assignment);
void attack_phase(GameState& s);
void refresh_phase(GameState& s);

/// Table indices of ready, uncommitted characters of `card`.
std::vector<std::size_t> available_copies(const GameState& s, CardId card);
/// Characters that may be committed to the quest right now.
bool can_quest(const GameState& s, const CharacterInPlay& c);

/// Deterministic line-oriented dump; unordered zones are printed sorted.
std::string serialize(const GameState& s);

/// Total physical card copies across all zones (heroes included).
std::size_t card_count(const GameState& s);

}  // namespace lotr

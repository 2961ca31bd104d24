#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lotr/decoders.hpp"
#include "lotr/encoders.hpp"
#include "lotr/engine.hpp"
#include "lotr/errors.hpp"
#include "lotr/random.hpp"

namespace lotr::testing {

inline GameState fresh_game(int difficulty = 20, std::uint64_t seed = 1) {
  GameConfig c;
  c.difficulty = difficulty;
  c.seed = seed;
  return new_game(c, default_game_data());
}

/// A started game with every zone emptied, parked in `phase`.
inline GameState bare_state(Phase phase, int difficulty = 20) {
  GameState s = fresh_game(difficulty);
  s.hand.clear();
  s.player_deck.clear();
  s.encounter_deck.clear();
  s.phase = phase;
  return s;
}

using CardCounts = std::array<int, kCardIdLimit>;

inline CardCounts all_cards(const GameState& s) {
  CardCounts out{};
  auto add = [&](const auto& ids) {
    for (CardId id : ids) ++out[static_cast<std::size_t>(id)];
  };
  add(s.hand);
  add(s.staging_area);
  add(s.player_deck);
  add(s.player_discard);
  add(s.encounter_deck);
  add(s.encounter_discard);
  for (const auto& c : s.table) ++out[static_cast<std::size_t>(c.card)];
  for (const auto& e : s.engagement_area) ++out[static_cast<std::size_t>(e.card)];
  if (s.active_location) ++out[static_cast<std::size_t>(s.active_location->card)];
  return out;
}

inline CardCounts expected_cards(const GameData& d) {
  CardCounts out{};
  for (CardId h : d.cards.ids_of(CardKind::Hero)) ++out[static_cast<std::size_t>(h)];
  for (const auto& [id, n] : d.deck.entries) out[static_cast<std::size_t>(id)] += n;
  for (const auto& [id, n] : d.encounter.entries) out[static_cast<std::size_t>(id)] += n;
  return out;
}

/// Plays one random-agent game phase by phase and checks the engine
/// invariants after every step. Returns the first violation, or nothing.
/// `dumps` collects the serialized state at each round boundary.
inline std::optional<std::string> fuzz_game(int difficulty, std::uint64_t seed, std::vector<std::string>* dumps = nullptr) {
  GameConfig config;
  config.difficulty = difficulty;
  config.seed = seed;
  GameState s = new_game(config, default_game_data());
  const auto expected = expected_cards(*s.data);
  std::size_t total = 0;
  for (int n : expected) total += static_cast<std::size_t>(n);
  Rng agent_rng(derive_seed(seed, {77}));
  RandomAgent choice(ActionHead::Choice), commit(ActionHead::Commit);
  Decider planning(choice, agent_rng), questing(commit, agent_rng), defense(choice, agent_rng);

  std::ostringstream why;
  auto fail = [&](const std::string& what) {
    why << "difficulty " << difficulty << " seed " << seed << " round " << s.round << ": " << what;
    return why.str();
  };
  auto check = [&](Phase expected_phase) -> std::optional<std::string> {
    if (all_cards(s) != expected) return fail("card multiset not conserved");
    if (card_count(s) != total) return fail("card count drifted");
    if (s.resource_pool < 0) return fail("negative resource pool");
    for (const auto& c : s.table)
      if (c.damage >= s.def(c.card).hit_points) return fail("dead character left on table");
    if (!s.over() && s.phase != expected_phase) return fail(std::string("phase ") + to_string(s.phase));
    if (s.outcome == Outcome::Win && s.quest_progress < difficulty) return fail("win below difficulty");
    if (s.outcome != Outcome::Win && s.quest_progress >= difficulty) return fail("progress reached without win");
    if (s.outcome == Outcome::LossThreat && s.threat_level < s.config.threat_limit) return fail("threat loss below limit");
    if (s.outcome == Outcome::Ongoing && s.threat_level >= s.config.threat_limit) return fail("threat limit ignored");
    if ((s.outcome == Outcome::LossHeroesDead) != (s.surviving_heroes() == 0)) return fail("hero loss mismatch");
    return std::nullopt;
  };

  int last_progress = 0;
  int last_round = 0;
  while (!s.over()) {
    if (s.round <= last_round) return fail("round did not increase");
    last_round = s.round;
    if (dumps) dumps->push_back(serialize(s));
    const auto events = s.random_events;
    const bool deck_left = !s.player_deck.empty();

    resource_phase(s);
    if (auto e = check(Phase::Planning)) return e;
    direct_planning_loop(planning, s);
    end_planning(s);
    if (auto e = check(Phase::Questing)) return e;
    const bool encounter_left = !s.encounter_deck.empty() || !s.encounter_discard.empty();
    direct_questing(questing, s, EncodingScheme::Questing2);
    if (s.random_events - events != (deck_left ? 1 : 0) + (encounter_left ? 1 : 0))
      return fail("expected one draw and one reveal this round");
    if (s.quest_progress < last_progress) return fail("quest progress decreased");
    last_progress = s.quest_progress;
    if (auto e = check(Phase::Travel)) return e;
    if (s.over()) break;
    travel_phase(s);
    if (auto e = check(Phase::Encounter)) return e;
    encounter_phase(s);
    if (auto e = check(Phase::Defense)) return e;
    direct_defense(defense, s);
    if (auto e = check(Phase::Attack)) return e;
    if (s.over()) break;
    attack_phase(s);
    if (auto e = check(Phase::Refresh)) return e;
    refresh_phase(s);
    if (auto e = check(Phase::Resource)) return e;
    if (s.round > s.config.max_rounds + 1) return fail("game ran past max_rounds");
  }
  if (dumps) dumps->push_back(serialize(s));
  return std::nullopt;
}

/// Plays one random game and calls fn(state) at every planning, questing
/// and defense decision point, before the decision is made.
template <class Fn>
void visit_decision_states(int difficulty, std::uint64_t seed, Fn&& fn) {
  GameConfig config;
  config.difficulty = difficulty;
  config.seed = seed;
  GameState s = new_game(config, default_game_data());
  Rng rng(derive_seed(seed, {78}));
  RandomAgent choice(ActionHead::Choice), commit(ActionHead::Commit);
  Decider planning(choice, rng), questing(commit, rng), defense(choice, rng);
  while (!s.over()) {
    resource_phase(s);
    fn(s);
    direct_planning_loop(planning, s);
    end_planning(s);
    fn(s);
    direct_questing(questing, s, EncodingScheme::Questing0);
    if (s.over()) break;
    travel_phase(s);
    encounter_phase(s);
    fn(s);
    direct_defense(defense, s);
    if (s.over()) break;
    attack_phase(s);
    refresh_phase(s);
  }
}

}  // namespace lotr::testing

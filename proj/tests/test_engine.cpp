#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace lotr;
using lotr::testing::bare_state;
using lotr::testing::fresh_game;

namespace {

std::size_t hero_index(const GameState& s, CardId hero) {
  for (std::size_t i = 0; i < s.table.size(); ++i)
    if (s.table[i].card == hero) return i;
  return s.table.size();
}

Violation violation_of(auto&& fn) {
  try {
    fn();
  } catch (const RuleError& e) {
    return e.violation();
  }
  FAIL("expected a RuleError");
  return Violation::WrongPhase;
}

}  // namespace

TEST_CASE("new game") {
  for (int d : {1, 8, 20}) {
    auto s = fresh_game(d, 11);
    CHECK(s.hand.size() == 6);
    REQUIRE(s.table.size() == 3);
    for (const auto& c : s.table) {
      CHECK(is_hero(c.card));
      CHECK(c.ready());
      CHECK(c.damage == 0);
    }
    CHECK(s.threat_level == 28);
    CHECK(s.round == 1);
    CHECK(s.phase == Phase::Resource);
    CHECK(s.player_deck.size() == 24);
    CHECK(s.encounter_deck.size() == 42);
    CHECK(card_count(s) == 75);
  }
  CHECK(serialize(fresh_game(20, 7)) == serialize(fresh_game(20, 7)));
  CHECK(serialize(fresh_game(20, 7)) != serialize(fresh_game(20, 8)));

  GameConfig bad;
  bad.difficulty = 0;
  CHECK_THROWS_AS(new_game(bad, default_game_data()), ConfigError);
  bad.difficulty = 21;
  CHECK_THROWS_AS(new_game(bad, default_game_data()), ConfigError);
}

TEST_CASE("resource phase") {
  auto s = fresh_game();
  resource_phase(s);
  CHECK(s.resource_pool == 3);
  CHECK(s.hand.size() == 7);
  CHECK(s.phase == Phase::Planning);
  CHECK(s.random_events == 1);

  auto two = bare_state(Phase::Resource);
  two.resource_pool = 2;
  two.table.erase(two.table.begin());
  resource_phase(two);
  CHECK(two.resource_pool == 4);
  CHECK(two.hand.empty());
  CHECK(two.random_events == 0);

  CHECK(violation_of([&] { resource_phase(two); }) == Violation::WrongPhase);
}

TEST_CASE("planning purchases follow the example loop") {
  auto s = bare_state(Phase::Planning);
  s.hand = {3, 8, 9, 16};
  s.resource_pool = 5;
  CHECK(affordable_cards(s) == std::vector<CardId>{3, 8, 9, 16});
  apply_planning(s, 9);
  CHECK(s.resource_pool == 3);
  CHECK(s.table.back().card == 9);
  apply_planning(s, 3);
  CHECK(s.resource_pool == 0);
  CHECK(s.table.size() == 5);
  CHECK(violation_of([&] { apply_planning(s, 8); }) == Violation::Unaffordable);
  CHECK(violation_of([&] { apply_planning(s, 5); }) == Violation::NotInHand);
  CHECK(affordable_cards(s).empty());
  s.hand = {8, 16};
  CHECK(affordable_cards(s).empty());
  s.hand.clear();
  s.resource_pool = 9;
  CHECK(affordable_cards(s).empty());
  end_planning(s);
  CHECK(s.phase == Phase::Questing);
}

TEST_CASE("affordable cards at pool 5 with the full hand") {
  auto s = bare_state(Phase::Planning);
  s.hand = {3, 8, 9, 16};
  s.resource_pool = 5;
  CHECK(affordable_cards(s) == std::vector<CardId>{3, 8, 9, 16});
  s.resource_pool = 4;
  CHECK(affordable_cards(s) == std::vector<CardId>{3, 8, 9});
}

TEST_CASE("combined threat") {
  auto s = bare_state(Phase::Questing);
  CHECK(combined_threat(s) == 0);
  s.staging_area = {22, 28, 30};
  CHECK(combined_threat(s) == 7);
  s.staging_area.push_back(37);
  CHECK(combined_threat(s) == 7 + s.def(37).threat);
}

TEST_CASE("questing resolution") {
  // willpower: Aragorn 4, Theodred 0, Gloin 1; allies 5 and 16 have 2.
  auto setup = [](std::vector<CardId> staging, std::vector<CardId> allies, int difficulty = 20) {
    auto s = bare_state(Phase::Questing, difficulty);
    s.staging_area = std::move(staging);
    for (CardId a : allies) s.table.push_back({a});
    s.encounter_deck = {34};  // Eastern Crows, threat 2
    return s;
  };

  SUBCASE("shortfall raises threat") {
    auto s = setup({22, 28}, {});  // T = 4 + 2 revealed
    s.quest_progress = 4;
    questing_phase(s, {0, 2});  // W = 5
    CHECK(s.threat_level == 29);
    CHECK(s.quest_progress == 4);
    CHECK(s.phase == Phase::Travel);
    CHECK(s.random_events == 1);
    CHECK(s.table[0].committed);
    CHECK(s.table[0].exhausted);
    CHECK_FALSE(s.table[1].committed);
  }
  SUBCASE("tie changes nothing") {
    auto s = setup({22, 30}, {5, 16});
    s.encounter_deck = {37};       // T = 5 + 2
    questing_phase(s, {0, 2, 5});  // W = 4 + 1 + 2
    CHECK(s.threat_level == 28);
    CHECK(s.quest_progress == 0);
  }
  SUBCASE("surplus wins at difficulty") {
    auto s = setup({22, 28}, {5, 16, 16}, 8);  // T = 4 + 2 = 6
    s.quest_progress = 6;
    questing_phase(s, {0, 2, 5, 16});  // W = 9, +3
    CHECK(s.quest_progress == 9);
    CHECK(s.outcome == Outcome::Win);
    CHECK(s.over());
    CHECK(violation_of([&] { travel_phase(s); }) == Violation::GameOver);
  }
  SUBCASE("surplus fills the active location first") {
    auto s = setup({}, {5});
    s.active_location = ActiveLocation{39, 0};  // 2 quest points
    s.encounter_deck = {24};                  // T = 2
    questing_phase(s, {0, 2, 5});               // W = 7, surplus 5
    CHECK_FALSE(s.active_location);
    CHECK(s.quest_progress == 3);
    CHECK(s.encounter_discard == std::vector<CardId>{39});
  }
  SUBCASE("illegal commitments") {
    auto s = setup({}, {18, 5});
    CHECK(violation_of([&] { questing_phase(s, {18}); }) == Violation::TransientCommit);
    CHECK(violation_of([&] { questing_phase(s, {9}); }) == Violation::NotOnTable);
    CHECK(violation_of([&] { questing_phase(s, {5, 5}); }) == Violation::NotReady);
    CHECK(violation_of([&] { questing_phase(s, {22}); }) == Violation::NotOnTable);
    s.table[0].exhausted = true;
    CHECK(violation_of([&] { questing_phase(s, {0}); }) == Violation::NotReady);
    CHECK(s.random_events == 0);
    CHECK(s.phase == Phase::Questing);
  }
  SUBCASE("empty encounter deck reshuffles the discard") {
    auto s = setup({}, {});
    s.encounter_deck.clear();
    s.encounter_discard = {22, 23};
    questing_phase(s, {});
    CHECK(s.staging_area.size() == 1);
    CHECK(s.encounter_deck.size() == 1);
    CHECK(s.encounter_discard.empty());
    CHECK(s.random_events == 1);
  }
}

TEST_CASE("threat limit boundary") {
  auto s = bare_state(Phase::Refresh);
  s.threat_level = 48;
  refresh_phase(s);
  CHECK(s.threat_level == 49);
  CHECK(s.outcome == Outcome::Ongoing);
  s.phase = Phase::Refresh;
  refresh_phase(s);
  CHECK(s.threat_level == 50);
  CHECK(s.outcome == Outcome::LossThreat);
}

TEST_CASE("refresh readies, discards transients and times out") {
  auto s = bare_state(Phase::Refresh);
  s.table.push_back({19, 0, true, true});
  s.table[0].exhausted = s.table[0].committed = true;
  s.table.push_back({5, 1, true, false});
  refresh_phase(s);
  CHECK(s.round == 2);
  CHECK(s.table.size() == 4);
  for (const auto& c : s.table) CHECK(c.ready());
  CHECK(s.table.back().damage == 1);
  CHECK(s.player_discard == std::vector<CardId>{19});

  auto t = bare_state(Phase::Refresh);
  t.round = t.config.max_rounds;
  refresh_phase(t);
  CHECK(t.outcome == Outcome::LossTimeout);
}

TEST_CASE("travel picks the highest threat land") {
  auto s = bare_state(Phase::Travel);
  s.staging_area = {22, 37, 39, 38};  // threats 2, 4, 3
  travel_phase(s);
  REQUIRE(s.active_location);
  CHECK(s.active_location->card == 39);
  CHECK(s.staging_area == std::vector<CardId>{22, 37, 38});
  CHECK(s.phase == Phase::Encounter);

  s.phase = Phase::Travel;
  travel_phase(s);
  CHECK(s.active_location->card == 39);
  CHECK(s.staging_area.size() == 3);

  auto none = bare_state(Phase::Travel);
  none.staging_area = {22};
  travel_phase(none);
  CHECK_FALSE(none.active_location);
}

TEST_CASE("encounter engages enemies at or below the threat level") {
  auto s = bare_state(Phase::Encounter);
  s.threat_level = 30;
  s.staging_area = {26, 22, 37};  // engagement 35, 25
  encounter_phase(s);
  REQUIRE(s.engagement_area.size() == 1);
  CHECK(s.engagement_area[0].card == 22);
  CHECK(s.staging_area == std::vector<CardId>{26, 37});
  CHECK(s.phase == Phase::Defense);

  auto empty = bare_state(Phase::Encounter);
  empty.staging_area = {37};
  encounter_phase(empty);
  CHECK(empty.engagement_area.empty());
}

TEST_CASE("defense") {
  auto s = bare_state(Phase::Defense);
  s.table.push_back({8});  // defense 2, 3 hp
  s.engagement_area = {{23}, {32}};  // attack 3, attack 3

  SUBCASE("defended damage is attack minus defense") {
    defense_phase(s, {hero_index(s, 1), std::nullopt});
    // Theodred: defense 1, takes 2. Undefended 3 goes to the hero with most hp left.
    CHECK(s.table[1].damage == 2);
    CHECK(s.table[1].exhausted);
    CHECK(s.table[0].damage == 3);
    CHECK(s.phase == Phase::Attack);
  }
  SUBCASE("high defense absorbs everything") {
    auto t = bare_state(Phase::Defense);
    t.table.push_back({19});  // defense 3
    t.engagement_area = {{24}};  // attack 1
    defense_phase(t, {3});
    CHECK(t.table[3].damage == 0);
  }
  SUBCASE("lethal damage discards the character") {
    s.table.push_back({10});  // defense 0, 1 hp
    defense_phase(s, {4, 3});
    CHECK(s.table.size() == 4);
    CHECK(s.table[3].damage == 1);
    CHECK(s.player_discard == std::vector<CardId>{10});
  }
  SUBCASE("errors") {
    CHECK(violation_of([&] { defense_phase(s, {3, 3}); }) == Violation::DoubleAssignment);
    CHECK(violation_of([&] { defense_phase(s, {9}); }) == Violation::InvalidDefender);
    s.table[3].exhausted = true;
    CHECK(violation_of([&] { defense_phase(s, {3}); }) == Violation::InvalidDefender);
    CHECK(violation_of([&] { defense_phase(s, {std::nullopt, std::nullopt, std::nullopt}); }) ==
          Violation::InvalidDefender);
  }
  SUBCASE("last hero dying loses the game") {
    auto t = bare_state(Phase::Defense);
    t.table = {{0}};              // 5 hp
    t.engagement_area = {{33}};  // attack 6
    defense_phase(t, {});
    CHECK(t.table.empty());
    CHECK(t.outcome == Outcome::LossHeroesDead);
    CHECK(t.player_discard == std::vector<CardId>{0});
  }
}

TEST_CASE("attack") {
  auto s = bare_state(Phase::Attack);
  s.table.push_back({10});  // heroes 3+2+2 plus 2
  s.engagement_area = {{25}, {36}};  // Orcs def 0 hp 3, Wolf Rider def 0 hp 2
  attack_phase(s);
  CHECK(s.engagement_area.size() == 1);
  CHECK(s.engagement_area[0].card == 25);
  CHECK(s.encounter_discard == std::vector<CardId>{36});
  for (const auto& c : s.table) CHECK(c.exhausted);
  CHECK(s.phase == Phase::Refresh);

  auto weak = bare_state(Phase::Attack);
  weak.table = {{1}};  // attack 2
  weak.engagement_area = {{26}};  // defense 3
  attack_phase(weak);
  CHECK(weak.engagement_area[0].damage == 0);

  auto none = bare_state(Phase::Attack);
  for (auto& c : none.table) c.exhausted = true;
  none.engagement_area = {{25}};
  attack_phase(none);
  CHECK(none.engagement_area[0].damage == 0);
}

TEST_CASE("phase order is enforced") {
  auto s = fresh_game();
  CHECK(violation_of([&] { end_planning(s); }) == Violation::WrongPhase);
  CHECK(violation_of([&] { questing_phase(s, {}); }) == Violation::WrongPhase);
  CHECK(violation_of([&] { travel_phase(s); }) == Violation::WrongPhase);
  CHECK(violation_of([&] { encounter_phase(s); }) == Violation::WrongPhase);
  CHECK(violation_of([&] { defense_phase(s, {}); }) == Violation::WrongPhase);
  CHECK(violation_of([&] { attack_phase(s); }) == Violation::WrongPhase);
  CHECK(violation_of([&] { refresh_phase(s); }) == Violation::WrongPhase);
}

TEST_CASE("serialized state is stable") {
  auto s = fresh_game(20, 3);
  const auto a = serialize(s);
  std::reverse(s.hand.begin(), s.hand.end());
  CHECK(serialize(s) == a);
  CHECK(a.find("round 1\nphase Resource\noutcome Ongoing\n") == 0);
}

TEST_CASE("fuzzed random games keep every invariant") {
  for (int d : {1, 8, 20})
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      auto error = lotr::testing::fuzz_game(d, seed);
      CHECK_MESSAGE(!error, (error ? *error : ""));
    }
}

TEST_CASE("seeded replay is byte identical") {
  for (std::uint64_t seed : {1, 2, 3}) {
    std::vector<std::string> a, b;
    CHECK_FALSE(lotr::testing::fuzz_game(8, seed, &a));
    CHECK_FALSE(lotr::testing::fuzz_game(8, seed, &b));
    CHECK(a == b);
  }
}

#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "lotr/cards.hpp"
#include "lotr/errors.hpp"

using namespace lotr;

namespace {

std::string shipped_csv() {
  std::ostringstream out;
  write_card_db(out, default_game_data()->cards);
  return out.str();
}

std::string replace_row(std::string csv, CardId id, const std::string& row) {
  std::istringstream in(csv);
  std::ostringstream out;
  const std::string prefix = std::to_string(id) + ",";
  for (std::string line; std::getline(in, line);) out << (line.rfind(prefix, 0) == 0 ? row : line) << '\n';
  return out.str();
}

}  // namespace

TEST_CASE("shipped card set has 41 definitions") {
  const auto& db = default_game_data()->cards;
  CHECK(db.size() == 41);
  CHECK(db.count(CardKind::Hero) == 3);
  CHECK(db.count(CardKind::Ally) == 17);
  CHECK(db.count(CardKind::Enemy) == 15);
  CHECK(db.count(CardKind::Land) == 6);
  CHECK_FALSE(db.contains(20));
  CHECK_FALSE(db.contains(21));
  CHECK_THROWS_AS(db.at(20), SchemaError);
}

TEST_CASE("fixture values used by the planning and questing examples") {
  const auto& db = default_game_data()->cards;
  CHECK(db.at(9).cost == 2);
  CHECK(db.at(3).cost == 3);
  CHECK(db.at(8).cost == 4);
  CHECK(db.at(16).cost == 5);
  CHECK(db.at(22).threat + db.at(28).threat + db.at(30).threat == 7);
  CHECK(db.at(22).engagement_cost == 25);
  for (CardId id : db.ids_of(CardKind::Ally)) CHECK(db.at(id).transient == is_transient_id(id));
}

TEST_CASE("write then parse round-trips") {
  const auto& db = default_game_data()->cards;
  std::istringstream in(shipped_csv());
  auto again = parse_card_db(in);
  for (CardId id : db.ids()) CHECK(again.at(id) == db.at(id));
}

TEST_CASE("an edited ally row is read back field by field") {
  std::istringstream in(replace_row(shipped_csv(), 3, "3,Guide,ally,2,1,0,1,2,0,0,0,0"));
  auto db = parse_card_db(in);
  const auto& c = db.at(3);
  CHECK(c.cost == 2);
  CHECK(c.willpower == 1);
  CHECK(c.defense == 1);
  CHECK(c.attack == 0);
  CHECK(c.hit_points == 2);
  CHECK(c.kind == CardKind::Ally);
}

TEST_CASE("duplicate id is a schema error") {
  std::string csv = shipped_csv() + "8,Tracker again,ally,4,1,2,2,3,0,0,0,0\n";
  std::istringstream in(csv);
  CHECK_THROWS_AS(parse_card_db(in), SchemaError);
}

TEST_CASE("missing card or wrong kind for its id range") {
  std::istringstream missing(replace_row(shipped_csv(), 42, "# gone"));
  CHECK_THROWS_AS(parse_card_db(missing), SchemaError);
  std::istringstream wrong(replace_row(shipped_csv(), 4, "4,Guard,enemy,0,0,1,0,2,2,10,0,0"));
  CHECK_THROWS_AS(parse_card_db(wrong), SchemaError);
}

TEST_CASE("malformed rows report their line") {
  std::istringstream in(replace_row(shipped_csv(), 5, "5,Faramir,ally,four,2,1,2,3,0,0,0,0"));
  try {
    parse_card_db(in);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() > 1);
  }
}

TEST_CASE("kind_of follows the id layout") {
  CHECK(kind_of(0) == CardKind::Hero);
  CHECK(kind_of(19) == CardKind::Ally);
  CHECK(kind_of(22) == CardKind::Enemy);
  CHECK(kind_of(42) == CardKind::Land);
  CHECK_THROWS_AS(kind_of(20), SchemaError);
  CHECK_THROWS_AS(kind_of(43), SchemaError);
  CHECK_THROWS_AS(kind_of(-1), SchemaError);
}

TEST_CASE("player deck building") {
  const auto& db = default_game_data()->cards;
  CopyTable single{{{3, 30}}};
  Rng a(5);
  auto deck = build_player_deck(db, single, a);
  CHECK(deck == std::vector<CardId>(30, 3));

  const auto& spec = default_game_data()->deck;
  Rng r1(42), r2(42), r3(43);
  auto d1 = build_player_deck(db, spec, r1);
  auto d2 = build_player_deck(db, spec, r2);
  auto d3 = build_player_deck(db, spec, r3);
  CHECK(d1.size() == 30);
  CHECK(d1 == d2);
  CHECK(d1 != d3);
  std::sort(d1.begin(), d1.end());
  std::sort(d3.begin(), d3.end());
  CHECK(d1 == d3);
}

TEST_CASE("deck spec validation") {
  const auto& db = default_game_data()->cards;
  CHECK_THROWS_AS(validate_deck_spec(db, CopyTable{{{3, 29}}}), SchemaError);
  CHECK_THROWS_AS(validate_deck_spec(db, CopyTable{{{3, 29}, {22, 1}}}), SchemaError);
  CHECK_THROWS_AS(validate_deck_spec(db, CopyTable{{{0, 30}}}), SchemaError);
  CHECK_NOTHROW(validate_deck_spec(db, default_game_data()->deck));
}

TEST_CASE("encounter deck") {
  const auto& data = *default_game_data();
  CHECK(data.encounter.total() == 42);
  Rng a(9), b(9);
  auto d1 = build_encounter_deck(data.cards, data.encounter, a);
  auto d2 = build_encounter_deck(data.cards, data.encounter, b);
  CHECK(d1.size() == 42);
  CHECK(d1 == d2);
  for (CardId id : d1) CHECK((is_enemy(id) || is_land(id)));
  CHECK_THROWS_AS(validate_encounter_table(data.cards, CopyTable{{{22, 1}, {5, 1}}}), SchemaError);
  CHECK_THROWS_AS(validate_encounter_table(data.cards, CopyTable{}), SchemaError);
}

TEST_CASE("copy tables parse comments and reject junk") {
  std::istringstream ok("# x\nid,copies\n22,2\n37,1\n");
  auto t = parse_copy_table(ok);
  CHECK(t.total() == 3);
  std::istringstream bad("id,copies\n22;2\n");
  CHECK_THROWS_AS(parse_copy_table(bad), FormatError);
}

TEST_CASE("missing files are io errors") {
  CHECK_THROWS_AS(load_card_db("/nonexistent/cards.csv"), IoError);
}

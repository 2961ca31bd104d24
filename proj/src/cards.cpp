#include "lotr/cards.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lotr/errors.hpp"

namespace lotr {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_int(const std::string& field, const std::string& source, int line, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw FormatError(source, line, std::string("bad integer for ") + what + ": '" + field + "'");
  return value;
}

CardKind parse_kind(const std::string& field, const std::string& source, int line) {
  if (field == "hero") return CardKind::Hero;
  if (field == "ally") return CardKind::Ally;
  if (field == "enemy") return CardKind::Enemy;
  if (field == "land") return CardKind::Land;
  throw FormatError(source, line, "unknown kind '" + field + "'");
}

bool parse_bool(const std::string& field, const std::string& source, int line) {
  if (field == "1" || field == "true") return true;
  if (field == "0" || field == "false") return false;
  throw FormatError(source, line, "bad boolean '" + field + "'");
}

// Yields (line number, content) for every non-blank, non-comment line.
template <class F>
void for_each_record(std::istream& in, F&& f) {
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto line = trim(raw);
    if (line.empty()) continue;
    f(lineno, line);
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

void check_meaningless_zero(const CardDef& d, int value, const char* field) {
  if (value != 0)
    throw SchemaError("card " + std::to_string(d.id) + " (" + to_string(d.kind) + ") must leave " + field + " at 0");
}

void validate_def(const CardDef& d) {
  if (d.kind != kind_of(d.id))
    throw SchemaError("card " + std::to_string(d.id) + " declared " + to_string(d.kind) + " but id range is " +
                      to_string(kind_of(d.id)));
  if (d.transient != is_transient_id(d.id))
    throw SchemaError("card " + std::to_string(d.id) + ": transient flag must be set exactly for ids 18-19");
  for (int v : {d.cost, d.willpower, d.attack, d.defense, d.hit_points, d.threat, d.engagement_cost, d.quest_points})
    if (v < 0) throw SchemaError("card " + std::to_string(d.id) + " has a negative stat");
  switch (d.kind) {
    case CardKind::Hero:
      check_meaningless_zero(d, d.cost, "cost");
      check_meaningless_zero(d, d.threat, "threat");
      check_meaningless_zero(d, d.engagement_cost, "engagement_cost");
      check_meaningless_zero(d, d.quest_points, "quest_points");
      break;
    case CardKind::Ally:
      if (d.cost < 1) throw SchemaError("ally " + std::to_string(d.id) + " must cost at least 1");
      check_meaningless_zero(d, d.threat, "threat");
      check_meaningless_zero(d, d.engagement_cost, "engagement_cost");
      check_meaningless_zero(d, d.quest_points, "quest_points");
      break;
    case CardKind::Enemy:
      check_meaningless_zero(d, d.cost, "cost");
      check_meaningless_zero(d, d.willpower, "willpower");
      check_meaningless_zero(d, d.quest_points, "quest_points");
      break;
    case CardKind::Land:
      check_meaningless_zero(d, d.cost, "cost");
      check_meaningless_zero(d, d.willpower, "willpower");
      check_meaningless_zero(d, d.attack, "attack");
      check_meaningless_zero(d, d.defense, "defense");
      check_meaningless_zero(d, d.hit_points, "hit_points");
      check_meaningless_zero(d, d.engagement_cost, "engagement_cost");
      if (d.quest_points < 1) throw SchemaError("land " + std::to_string(d.id) + " needs quest_points >= 1");
      break;
  }
  if (d.kind != CardKind::Land && d.hit_points < 1)
    throw SchemaError("card " + std::to_string(d.id) + " needs hit_points >= 1");
}

std::vector<CardId> expand_and_shuffle(const CopyTable& table, Rng& rng) {
  std::vector<CardId> deck;
  deck.reserve(static_cast<std::size_t>(std::max(table.total(), 0)));
  for (auto [id, copies] : table.entries) deck.insert(deck.end(), static_cast<std::size_t>(copies), id);
  shuffle(std::span<CardId>(deck), rng);
  return deck;
}

}  // namespace

const char* to_string(CardKind kind) noexcept {
  switch (kind) {
    case CardKind::Hero: return "hero";
    case CardKind::Ally: return "ally";
    case CardKind::Enemy: return "enemy";
    case CardKind::Land: return "land";
  }
  return "?";
}

CardKind kind_of(CardId id) {
  if (is_hero(id)) return CardKind::Hero;
  if (is_ally(id)) return CardKind::Ally;
  if (is_enemy(id)) return CardKind::Enemy;
  if (is_land(id)) return CardKind::Land;
  throw SchemaError("card id " + std::to_string(id) + " is outside the id layout");
}

const CardDef& CardDb::at(CardId id) const {
  if (!contains(id)) throw SchemaError("unknown card id " + std::to_string(id));
  return defs_[static_cast<std::size_t>(id)];
}

std::vector<CardId> CardDb::ids_of(CardKind kind) const {
  std::vector<CardId> out;
  for (CardId id : ids_)
    if (defs_[static_cast<std::size_t>(id)].kind == kind) out.push_back(id);
  return out;
}

CardDb CardDb::from_defs(std::vector<CardDef> defs) {
  CardDb db;
  for (auto& d : defs) {
    validate_def(d);
    auto slot = static_cast<std::size_t>(d.id);
    if (db.present_[slot]) throw SchemaError("duplicate card id " + std::to_string(d.id));
    db.present_[slot] = true;
    ++db.counts_[static_cast<std::size_t>(d.kind)];
    db.defs_[slot] = std::move(d);
  }
  const std::array<int, 4> expected{kHeroCount, kAllyCount, kEnemyCount, kLandCount};
  for (std::size_t k = 0; k < 4; ++k)
    if (db.counts_[k] != expected[k])
      throw SchemaError(std::string("expected ") + std::to_string(expected[k]) + " " +
                        to_string(static_cast<CardKind>(k)) + " cards, found " + std::to_string(db.counts_[k]));
  for (CardId id = 0; id < kCardIdLimit; ++id)
    if (db.present_[static_cast<std::size_t>(id)]) db.ids_.push_back(id);
  return db;
}

CardDb parse_card_db(std::istream& in, const std::string& source) {
  std::vector<CardDef> defs;
  bool header_seen = false;
  for_each_record(in, [&](int lineno, const std::string& line) {
    if (!header_seen) {
      if (line != kCardDbHeader) throw FormatError(source, lineno, "missing or wrong header");
      header_seen = true;
      return;
    }
    auto f = split_csv(line);
    if (f.size() != 12) throw FormatError(source, lineno, "expected 12 fields, got " + std::to_string(f.size()));
    CardDef d;
    d.id = parse_int(f[0], source, lineno, "id");
    if (d.id < 0 || d.id >= kCardIdLimit || (d.id > kLastAlly && d.id < kFirstEnemy))
      throw FormatError(source, lineno, "id " + f[0] + " out of range");
    d.name = f[1];
    d.kind = parse_kind(f[2], source, lineno);
    d.cost = parse_int(f[3], source, lineno, "cost");
    d.willpower = parse_int(f[4], source, lineno, "willpower");
    d.attack = parse_int(f[5], source, lineno, "attack");
    d.defense = parse_int(f[6], source, lineno, "defense");
    d.hit_points = parse_int(f[7], source, lineno, "hit_points");
    d.threat = parse_int(f[8], source, lineno, "threat");
    d.engagement_cost = parse_int(f[9], source, lineno, "engagement_cost");
    d.quest_points = parse_int(f[10], source, lineno, "quest_points");
    d.transient = parse_bool(f[11], source, lineno);
    defs.push_back(std::move(d));
  });
  if (!header_seen) throw FormatError(source, 0, "empty card file");
  return CardDb::from_defs(std::move(defs));
}

CardDb load_card_db(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_card_db(in, path.string());
}

void write_card_db(std::ostream& out, const CardDb& db) {
  out << kCardDbHeader << '\n';
  for (CardId id : db.ids()) {
    const auto& d = db.at(id);
    out << d.id << ',' << d.name << ',' << to_string(d.kind) << ',' << d.cost << ',' << d.willpower << ','
        << d.attack << ',' << d.defense << ',' << d.hit_points << ',' << d.threat << ',' << d.engagement_cost << ','
        << d.quest_points << ',' << (d.transient ? 1 : 0) << '\n';
  }
}

int CopyTable::total() const noexcept {
  int sum = 0;
  for (const auto& e : entries) sum += e.second;
  return sum;
}

CopyTable parse_copy_table(std::istream& in, const std::string& source) {
  CopyTable table;
  bool header_seen = false;
  for_each_record(in, [&](int lineno, const std::string& line) {
    if (!header_seen) {
      if (line != "id,copies") throw FormatError(source, lineno, "missing or wrong header (want id,copies)");
      header_seen = true;
      return;
    }
    auto f = split_csv(line);
    if (f.size() != 2) throw FormatError(source, lineno, "expected 2 fields");
    int id = parse_int(f[0], source, lineno, "id");
    int copies = parse_int(f[1], source, lineno, "copies");
    if (copies < 0) throw FormatError(source, lineno, "negative copy count");
    table.entries.emplace_back(id, copies);
  });
  if (!header_seen) throw FormatError(source, 0, "empty copy table");
  return table;
}

CopyTable load_copy_table(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_copy_table(in, path.string());
}

void validate_deck_spec(const CardDb& db, const CopyTable& spec) {
  for (auto [id, copies] : spec.entries) {
    if (!db.contains(id) || db.at(id).kind != CardKind::Ally)
      throw SchemaError("deck spec references non-ally id " + std::to_string(id));
    if (copies < 0) throw SchemaError("negative copy count for id " + std::to_string(id));
  }
  if (spec.total() != kPlayerDeckSize)
    throw SchemaError("deck spec totals " + std::to_string(spec.total()) + " cards, expected 30");
}

void validate_encounter_table(const CardDb& db, const CopyTable& table) {
  for (auto [id, copies] : table.entries) {
    if (!db.contains(id) || !(db.at(id).kind == CardKind::Enemy || db.at(id).kind == CardKind::Land))
      throw SchemaError("encounter table references non-encounter id " + std::to_string(id));
    if (copies < 0) throw SchemaError("negative copy count for id " + std::to_string(id));
  }
  if (table.total() < 1) throw SchemaError("encounter table is empty");
}

std::vector<CardId> build_player_deck(const CardDb& db, const CopyTable& spec, Rng& rng) {
  validate_deck_spec(db, spec);
  return expand_and_shuffle(spec, rng);
}

std::vector<CardId> build_encounter_deck(const CardDb& db, const CopyTable& table, Rng& rng) {
  validate_encounter_table(db, table);
  return expand_and_shuffle(table, rng);
}

std::shared_ptr<const GameData> load_game_data(const std::filesystem::path& cards,
                                               const std::filesystem::path& deck,
                                               const std::filesystem::path& encounter) {
  auto data = std::make_shared<GameData>();
  data->cards = load_card_db(cards);
  data->deck = load_copy_table(deck);
  data->encounter = load_copy_table(encounter);
  validate_deck_spec(data->cards, data->deck);
  validate_encounter_table(data->cards, data->encounter);
  return data;
}

std::filesystem::path default_data_dir() { return LOTR_DATA_DIR; }

std::shared_ptr<const GameData> default_game_data() {
  static const auto data = load_game_data(default_data_dir() / "cards.csv", default_data_dir() / "deck.csv",
                                          default_data_dir() / "encounter.csv");
  return data;
}

}  // namespace lotr

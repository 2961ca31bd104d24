#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lotr/random.hpp"

namespace lotr {

// Global id layout: heroes 0-2, allies 3-19, enemies 22-36, lands 37-42.
using CardId = int;

inline constexpr CardId kFirstHero = 0, kLastHero = 2;
inline constexpr CardId kFirstAlly = 3, kLastAlly = 19;
inline constexpr CardId kFirstEnemy = 22, kLastEnemy = 36;
inline constexpr CardId kFirstLand = 37, kLastLand = 42;
inline constexpr CardId kFirstTransient = 18;
inline constexpr int kCardIdLimit = kLastLand + 1;

inline constexpr int kHeroCount = kLastHero - kFirstHero + 1;     // 3
inline constexpr int kAllyCount = kLastAlly - kFirstAlly + 1;     // 17
inline constexpr int kEnemyCount = kLastEnemy - kFirstEnemy + 1;  // 15
inline constexpr int kLandCount = kLastLand - kFirstLand + 1;     // 6
inline constexpr int kQuestingAllyCount = kFirstTransient - kFirstAlly;  // 15
inline constexpr int kPlayerDeckSize = 30;

enum class CardKind { Hero, Ally, Enemy, Land };

const char* to_string(CardKind kind) noexcept;

constexpr bool is_hero(CardId id) noexcept { return id >= kFirstHero && id <= kLastHero; }
constexpr bool is_ally(CardId id) noexcept { return id >= kFirstAlly && id <= kLastAlly; }
constexpr bool is_enemy(CardId id) noexcept { return id >= kFirstEnemy && id <= kLastEnemy; }
constexpr bool is_land(CardId id) noexcept { return id >= kFirstLand && id <= kLastLand; }
constexpr bool is_character(CardId id) noexcept { return is_hero(id) || is_ally(id); }
constexpr bool is_transient_id(CardId id) noexcept { return id >= kFirstTransient && id <= kLastAlly; }

/// Kind implied by the id layout; throws SchemaError for ids 20-21 or out of range.
CardKind kind_of(CardId id);

struct CardDef {
  CardId id = 0;
  std::string name;
  CardKind kind = CardKind::Ally;
  int cost = 0;
  int willpower = 0;
  int attack = 0;
  int defense = 0;
  int hit_points = 0;
  int threat = 0;
  int engagement_cost = 0;
  int quest_points = 0;
  bool transient = false;

  bool operator==(const CardDef&) const = default;
};

/// Immutable card database: exactly 3 heroes, 17 allies, 15 enemies, 6 lands.
class CardDb {
 public:
  const CardDef& at(CardId id) const;
  bool contains(CardId id) const noexcept {
    return id >= 0 && id < kCardIdLimit && present_[static_cast<std::size_t>(id)];
  }
  std::size_t size() const noexcept { return ids_.size(); }
  int count(CardKind kind) const noexcept { return counts_[static_cast<std::size_t>(kind)]; }

  /// Ids in ascending order.
  const std::vector<CardId>& ids() const noexcept { return ids_; }
  std::vector<CardId> ids_of(CardKind kind) const;

  /// Validates cardinality and uniqueness; throws SchemaError.
  static CardDb from_defs(std::vector<CardDef> defs);

 private:
  std::array<CardDef, kCardIdLimit> defs_{};
  std::array<bool, kCardIdLimit> present_{};
  std::array<int, 4> counts_{};
  std::vector<CardId> ids_;
};

CardDb load_card_db(const std::filesystem::path& path);
CardDb parse_card_db(std::istream& in, const std::string& source = "<stream>");
void write_card_db(std::ostream& out, const CardDb& db);

inline constexpr const char* kCardDbHeader =
    "id,name,kind,cost,willpower,attack,defense,hit_points,threat,engagement_cost,quest_points,transient";

/// `id,copies` rows. Used for player deck specs and the encounter copy table.
struct CopyTable {
  std::vector<std::pair<CardId, int>> entries;
  int total() const noexcept;
};

CopyTable load_copy_table(const std::filesystem::path& path);
CopyTable parse_copy_table(std::istream& in, const std::string& source = "<stream>");

/// 30 ally copies. Throws SchemaError otherwise.
void validate_deck_spec(const CardDb& db, const CopyTable& spec);
/// Enemy and land ids only, at least one card.
void validate_encounter_table(const CardDb& db, const CopyTable& table);

std::vector<CardId> build_player_deck(const CardDb& db, const CopyTable& spec, Rng& rng);
std::vector<CardId> build_encounter_deck(const CardDb& db, const CopyTable& table, Rng& rng);

/// Everything a game needs besides its config: cards, the player's deck spec
/// and the encounter copy table.
struct GameData {
  CardDb cards;
  CopyTable deck;
  CopyTable encounter;
};

std::shared_ptr<const GameData> load_game_data(const std::filesystem::path& cards,
                                               const std::filesystem::path& deck,
                                               const std::filesystem::path& encounter);

std::filesystem::path default_data_dir();
/// The shipped fixture set under default_data_dir().
std::shared_ptr<const GameData> default_game_data();

}  // namespace lotr

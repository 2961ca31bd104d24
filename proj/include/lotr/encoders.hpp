#pragma once

#include <Eigen/Core>

#include "lotr/engine.hpp"

namespace lotr {

enum class EncodingScheme { Planning, Questing0, Questing1, Questing2, Questing3, Defense };

constexpr int dimension(EncodingScheme scheme) noexcept {
  switch (scheme) {
    case EncodingScheme::Planning: return 33;
    case EncodingScheme::Questing0: return 34;
    case EncodingScheme::Questing1: return 40;
    case EncodingScheme::Questing2: return 34;
    case EncodingScheme::Questing3: return 34;
    case EncodingScheme::Defense: return 48;
  }
  return 0;
}

const char* to_string(EncodingScheme scheme) noexcept;
/// Inverse of to_string; throws ConfigError.
EncodingScheme parse_scheme(const std::string& name);
/// Questing0..Questing3 for 0..3; throws ConfigError otherwise.
EncodingScheme questing_scheme(int type);
constexpr bool is_questing(EncodingScheme s) noexcept {
  return s == EncodingScheme::Questing0 || s == EncodingScheme::Questing1 || s == EncodingScheme::Questing2 ||
         s == EncodingScheme::Questing3;
}

struct FeatureVector {
  EncodingScheme scheme = EncodingScheme::Planning;
  Eigen::VectorXd values;

  bool operator==(const FeatureVector& o) const { return scheme == o.scheme && values == o.values; }
};

// Slot layout helpers shared with the action decoders.
constexpr int hand_slot(CardId ally) noexcept { return ally - kFirstAlly; }                   // 0..16
constexpr int enemy_slot(CardId enemy) noexcept { return enemy - kFirstEnemy; }               // 0..14
constexpr int land_slot(CardId land) noexcept { return land - kFirstLand; }                   // 0..5
constexpr int character_slot(CardId character) noexcept { return character; }                 // 0..17
inline constexpr int kCharacterSlots = kHeroCount + kQuestingAllyCount;                       // 18

FeatureVector encode_planning(const GameState& s);
FeatureVector encode_questing(const GameState& s, EncodingScheme scheme);
/// Features for defending against the first engaged copy of `attacker`.
FeatureVector encode_defense(const GameState& s, CardId attacker);
/// Same, addressing the attacker by engagement-area index.
FeatureVector encode_defense_at(const GameState& s, std::size_t attacker);
/// Dispatches on scheme; defense needs the attacker index.
FeatureVector encode(const GameState& s, EncodingScheme scheme, std::size_t attacker = 0);

}  // namespace lotr

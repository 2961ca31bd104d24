#include "lotr/encoders.hpp"

#include "lotr/errors.hpp"

namespace lotr {

const char* to_string(EncodingScheme scheme) noexcept {
  switch (scheme) {
    case EncodingScheme::Planning: return "planning";
    case EncodingScheme::Questing0: return "questing0";
    case EncodingScheme::Questing1: return "questing1";
    case EncodingScheme::Questing2: return "questing2";
    case EncodingScheme::Questing3: return "questing3";
    case EncodingScheme::Defense: return "defense";
  }
  return "?";
}

EncodingScheme parse_scheme(const std::string& name) {
  for (auto s : {EncodingScheme::Planning, EncodingScheme::Questing0, EncodingScheme::Questing1,
                 EncodingScheme::Questing2, EncodingScheme::Questing3, EncodingScheme::Defense})
    if (name == to_string(s)) return s;
  throw ConfigError("unknown encoding scheme '" + name + "'");
}

EncodingScheme questing_scheme(int type) {
  switch (type) {
    case 0: return EncodingScheme::Questing0;
    case 1: return EncodingScheme::Questing1;
    case 2: return EncodingScheme::Questing2;
    case 3: return EncodingScheme::Questing3;
  }
  throw ConfigError("questing encoding type must be 0..3, got " + std::to_string(type));
}

namespace {

void require(const GameState& s, Phase p) {
  if (s.phase != p)
    throw RuleError(Violation::WrongPhase,
                    std::string("cannot encode ") + to_string(p) + " features in " + to_string(s.phase) + " phase");
}

FeatureVector zeros(EncodingScheme scheme) { return {scheme, Eigen::VectorXd::Zero(dimension(scheme))}; }

// Heroes on table plus non-transient allies; `filter` picks which characters count.
template <class Filter>
void write_characters(const GameState& s, Eigen::Ref<Eigen::VectorXd> out, Filter&& filter) {
  for (const auto& c : s.table) {
    if (s.def(c.card).transient || !filter(c)) continue;
    out[character_slot(c.card)] = 1.0;
  }
}

void write_enemies(const std::vector<CardId>& zone, Eigen::Ref<Eigen::VectorXd> out) {
  for (CardId id : zone)
    if (is_enemy(id)) out[enemy_slot(id)] = 1.0;
}

}  // namespace

FeatureVector encode_planning(const GameState& s) {
  require(s, Phase::Planning);
  auto f = zeros(EncodingScheme::Planning);
  for (CardId id : s.hand) f.values[hand_slot(id)] = 1.0;
  write_enemies(s.staging_area, f.values.segment(kAllyCount, kEnemyCount));
  f.values[32] = s.resource_pool;
  return f;
}

FeatureVector encode_questing(const GameState& s, EncodingScheme scheme) {
  if (!is_questing(scheme)) throw ConfigError(std::string("not a questing scheme: ") + to_string(scheme));
  require(s, Phase::Questing);
  auto f = zeros(scheme);
  auto& v = f.values;
  write_characters(s, v.head(kCharacterSlots), [](const CharacterInPlay&) { return true; });
  auto tail = v.tail(v.size() - kCharacterSlots);
  switch (scheme) {
    case EncodingScheme::Questing0:
      write_enemies(s.staging_area, tail.head(kEnemyCount));
      tail[kEnemyCount] = s.round;
      break;
    case EncodingScheme::Questing1:
      for (CardId id : s.staging_area)
        if (is_land(id)) tail[land_slot(id)] = 1.0;
      if (s.active_location) tail[land_slot(s.active_location->card)] = 1.0;
      write_enemies(s.staging_area, tail.segment(kLandCount, kEnemyCount));
      tail[kLandCount + kEnemyCount] = s.round;
      break;
    case EncodingScheme::Questing2:
      write_enemies(s.staging_area, tail.head(kEnemyCount));
      tail[kEnemyCount] = combined_threat(s);
      break;
    case EncodingScheme::Questing3:
      for (const auto& e : s.engagement_area) tail[enemy_slot(e.card)] = 1.0;
      tail[kEnemyCount] = combined_threat(s);
      break;
    default: break;
  }
  return f;
}

FeatureVector encode_defense(const GameState& s, CardId attacker) {
  require(s, Phase::Defense);
  for (std::size_t i = 0; i < s.engagement_area.size(); ++i)
    if (s.engagement_area[i].card == attacker) return encode_defense_at(s, i);
  throw RuleError(Violation::AttackerNotEngaged, "card " + std::to_string(attacker));
}

FeatureVector encode_defense_at(const GameState& s, std::size_t attacker) {
  require(s, Phase::Defense);
  if (attacker >= s.engagement_area.size())
    throw RuleError(Violation::AttackerNotEngaged, "engagement index " + std::to_string(attacker));
  auto f = zeros(EncodingScheme::Defense);
  auto& v = f.values;
  write_characters(s, v.head(kCharacterSlots), [](const CharacterInPlay& c) { return !c.exhausted && !c.committed; });
  for (const auto& e : s.engagement_area) v[kCharacterSlots + enemy_slot(e.card)] = 1.0;
  v[kCharacterSlots + kEnemyCount + enemy_slot(s.engagement_area[attacker].card)] = 1.0;
  return f;
}

FeatureVector encode(const GameState& s, EncodingScheme scheme, std::size_t attacker) {
  switch (scheme) {
    case EncodingScheme::Planning: return encode_planning(s);
    case EncodingScheme::Defense: return encode_defense_at(s, attacker);
    default: return encode_questing(s, scheme);
  }
}

}  // namespace lotr

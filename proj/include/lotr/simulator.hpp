#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>

#include "lotr/agents.hpp"
#include "lotr/decoders.hpp"
#include "lotr/engine.hpp"

namespace lotr {

enum class PolicyKind { Random, RlMacro, RlDirect };

struct HyperParams {
  int hidden = 70;
  double learning_rate = 6e-4;
  double gamma = 0.99;
};

struct PhaseSetup {
  PolicyKind kind = PolicyKind::Random;
  EncodingScheme scheme = EncodingScheme::Planning;
  std::shared_ptr<ActorCriticAgent> agent;  // RL kinds only

  bool is_rl() const noexcept { return kind != PolicyKind::Random; }
};

/// Which policy controls planning, questing and defense.
class AgentAssignment {
 public:
  /// "planning,questing,defense" where each entry is random, rl-macro or
  /// rl-direct; questing entries accept an encoding suffix (":2").
  static AgentAssignment parse(const std::string& text);

  PhaseSetup& at(Role r) { return phases_[static_cast<std::size_t>(r)]; }
  const PhaseSetup& at(Role r) const { return phases_[static_cast<std::size_t>(r)]; }

  /// Creates fresh networks for every RL slot that has none.
  void initialize(const HyperParams& hp, std::uint64_t seed);
  /// Deep copy: agents are duplicated, not shared.
  AgentAssignment clone() const;
  /// Throws BundleMismatch if an RL slot lacks an agent or its encoding/head disagree.
  void validate() const;
  /// Same text format as parse.
  std::string describe() const;
  int rl_count() const noexcept;

 private:
  std::array<PhaseSetup, 3> phases_;
};

AgentConfig agent_config_for(Role role, const PhaseSetup& setup, const HyperParams& hp);

struct GameResult {
  Outcome outcome = Outcome::Ongoing;
  int rounds = 0;
  int decisions = 0;
};

/// Plays one game to the end with frozen agents.
GameResult play_game(GameState& s, const AgentAssignment& team, Rng& agent_rng, std::ostream* trace = nullptr);
/// Plays one game, feeding every decision transition to the RL agents.
GameResult train_game(GameState& s, AgentAssignment& team, Rng& agent_rng);

}  // namespace lotr

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lotr/agents.hpp"
#include "lotr/encoders.hpp"
#include "lotr/engine.hpp"

namespace lotr {

inline constexpr std::array<double, 6> kBetas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
inline constexpr int kPassAction = kAllyCount;           // direct planning
inline constexpr int kNoDefenderAction = kCharacterSlots;  // direct defense

/// Binds a policy to one decision role for a game and chains its
/// consecutive decisions into transitions for the learning hook.
class Decider {
 public:
  /// Frozen: acts, never learns.
  Decider(const DecisionPolicy& policy, Rng& rng) : policy_(&policy), rng_(&rng) {}
  Decider(DecisionPolicy& policy, Rng& rng, bool learning)
      : policy_(&policy), learner_(learning && policy.learns() ? &policy : nullptr), rng_(&rng) {}

  Action decide(const FeatureVector& s, Mask mask);
  /// Emits the terminal transition for the last pending decision.
  void finish(double reward);

  const DecisionPolicy& policy() const noexcept { return *policy_; }
  int queries() const noexcept { return queries_; }
  int transitions() const noexcept { return transitions_; }

 private:
  const DecisionPolicy* policy_;
  DecisionPolicy* learner_ = nullptr;
  Rng* rng_;
  std::optional<Transition> pending_;
  int queries_ = 0;
  int transitions_ = 0;
};

/// (beta * willpower + (1 - beta) * defense) / max(cost, 1); questing uses cost 1.
double score_card(const CardDef& card, double beta, bool questing = false);

/// Buys greedily in descending score order until nothing left is affordable.
std::vector<CardId> macro_planning(GameState& s, double beta);
/// Commit list: best-scoring ready characters until willpower exceeds the combined threat.
std::vector<CardId> macro_questing(const GameState& s, double beta);

Mask planning_mask(const GameState& s);
Mask questing_mask(const GameState& s);
/// `used` marks table indices already defending this phase.
Mask defense_mask(const GameState& s, const std::vector<bool>& used);

/// One query per purchase plus the final pass (if any); applies purchases.
std::vector<CardId> direct_planning_loop(Decider& agent, GameState& s);
/// Agent picks beta once, then macro_planning.
std::vector<CardId> macro_planning_step(Decider& agent, GameState& s);
/// Single commit-mask query; applies questing_phase.
std::vector<CardId> direct_questing(Decider& agent, GameState& s, EncodingScheme scheme);
std::vector<CardId> macro_questing_step(Decider& agent, GameState& s, EncodingScheme scheme);
/// One query per engaged enemy; applies defense_phase.
DefenseAssignment direct_defense(Decider& agent, GameState& s);

/// Converts a commit mask to ids: every ready copy of each set, legal slot.
std::vector<CardId> commits_to_ids(const GameState& s, const std::vector<bool>& commits);

}  // namespace lotr

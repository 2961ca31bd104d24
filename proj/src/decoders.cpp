#include "lotr/decoders.hpp"

#include <algorithm>

#include "lotr/errors.hpp"

namespace lotr {

Action Decider::decide(const FeatureVector& s, Mask mask) {
  Action a = policy_->act(s, mask, *rng_);
  ++queries_;
  if (learner_) {
    if (pending_) {
      pending_->next = s;
      learner_->observe(*pending_);
      ++transitions_;
    }
    pending_ = Transition{s, a, std::move(mask), 0.0, std::nullopt, false};
  }
  return a;
}

void Decider::finish(double reward) {
  if (learner_ && pending_) {
    pending_->reward = reward;
    pending_->done = true;
    pending_->next.reset();
    learner_->observe(*pending_);
    ++transitions_;
  }
  pending_.reset();
}

double score_card(const CardDef& card, double beta, bool questing) {
  const double cost = questing ? 1.0 : static_cast<double>(std::max(card.cost, 1));
  return (beta * card.willpower + (1.0 - beta) * card.defense) / cost;
}

namespace {

// Descending score, ascending id on ties; stable for equal ids.
template <class Item, class IdOf>
void sort_by_score(std::vector<Item>& items, const GameState& s, double beta, bool questing, IdOf id_of) {
  std::stable_sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    const double fa = score_card(s.def(id_of(a)), beta, questing);
    const double fb = score_card(s.def(id_of(b)), beta, questing);
    if (fa != fb) return fa > fb;
    return id_of(a) < id_of(b);
  });
}

double beta_of(const Action& a) {
  if (a.index < 0 || a.index >= static_cast<int>(kBetas.size())) throw ConfigError("macro action out of range");
  return kBetas[static_cast<std::size_t>(a.index)];
}

}  // namespace

std::vector<CardId> macro_planning(GameState& s, double beta) {
  std::vector<CardId> order = s.hand;
  sort_by_score(order, s, beta, false, [](CardId id) { return id; });
  std::vector<CardId> bought;
  for (CardId id : order) {
    if (s.def(id).cost > s.resource_pool) continue;
    apply_planning(s, id);
    bought.push_back(id);
  }
  return bought;
}

std::vector<CardId> macro_questing(const GameState& s, double beta) {
  std::vector<CardId> ready;
  for (const auto& c : s.table)
    if (can_quest(s, c)) ready.push_back(c.card);
  sort_by_score(ready, s, beta, true, [](CardId id) { return id; });
  const int threat = combined_threat(s);
  std::vector<CardId> commits;
  int willpower = 0;
  for (CardId id : ready) {
    if (willpower > threat) break;
    commits.push_back(id);
    willpower += s.def(id).willpower;
  }
  return commits;
}

Mask planning_mask(const GameState& s) {
  Mask mask(kAllyCount + 1, false);
  for (CardId id : affordable_cards(s)) mask[static_cast<std::size_t>(hand_slot(id))] = true;
  mask[kPassAction] = true;
  return mask;
}

Mask questing_mask(const GameState& s) {
  Mask mask(kCharacterSlots, false);
  for (const auto& c : s.table)
    if (can_quest(s, c)) mask[static_cast<std::size_t>(character_slot(c.card))] = true;
  return mask;
}

Mask defense_mask(const GameState& s, const std::vector<bool>& used) {
  Mask mask(kCharacterSlots + 1, false);
  for (std::size_t i = 0; i < s.table.size(); ++i) {
    const auto& c = s.table[i];
    if (c.exhausted || c.committed || s.def(c.card).transient || used[i]) continue;
    mask[static_cast<std::size_t>(character_slot(c.card))] = true;
  }
  mask[kNoDefenderAction] = true;
  return mask;
}

std::vector<CardId> direct_planning_loop(Decider& agent, GameState& s) {
  std::vector<CardId> bought;
  while (!affordable_cards(s).empty()) {
    Action a = agent.decide(encode_planning(s), planning_mask(s));
    if (a.index == kPassAction) break;
    CardId id = kFirstAlly + a.index;
    apply_planning(s, id);
    bought.push_back(id);
  }
  return bought;
}

std::vector<CardId> macro_planning_step(Decider& agent, GameState& s) {
  Action a = agent.decide(encode_planning(s), Mask(kBetas.size(), true));
  return macro_planning(s, beta_of(a));
}

std::vector<CardId> commits_to_ids(const GameState& s, const std::vector<bool>& commits) {
  std::vector<CardId> ids;
  for (const auto& c : s.table) {
    if (!can_quest(s, c)) continue;
    auto slot = static_cast<std::size_t>(character_slot(c.card));
    if (slot < commits.size() && commits[slot]) ids.push_back(c.card);
  }
  return ids;
}

std::vector<CardId> direct_questing(Decider& agent, GameState& s, EncodingScheme scheme) {
  Action a = agent.decide(encode_questing(s, scheme), questing_mask(s));
  auto ids = commits_to_ids(s, a.commits);
  questing_phase(s, ids);
  return ids;
}

std::vector<CardId> macro_questing_step(Decider& agent, GameState& s, EncodingScheme scheme) {
  Action a = agent.decide(encode_questing(s, scheme), Mask(kBetas.size(), true));
  auto ids = macro_questing(s, beta_of(a));
  questing_phase(s, ids);
  return ids;
}

DefenseAssignment direct_defense(Decider& agent, GameState& s) {
  DefenseAssignment assignment;
  std::vector<bool> used(s.table.size(), false);
  for (std::size_t e = 0; e < s.engagement_area.size(); ++e) {
    Action a = agent.decide(encode_defense_at(s, e), defense_mask(s, used));
    if (a.index == kNoDefenderAction) {
      assignment.emplace_back(std::nullopt);
      continue;
    }
    std::optional<std::size_t> pick;
    for (std::size_t i : available_copies(s, a.index))
      if (!used[i]) {
        pick = i;
        break;
      }
    if (!pick) throw RuleError(Violation::InvalidDefender, "policy chose an unavailable defender");
    used[*pick] = true;
    assignment.emplace_back(pick);
  }
  defense_phase(s, assignment);
  return assignment;
}

}  // namespace lotr

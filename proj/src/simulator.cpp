#include "lotr/simulator.hpp"

#include <ostream>
#include <sstream>
#include <utility>

#include "lotr/errors.hpp"

namespace lotr {

namespace {

constexpr std::array<Role, 3> kRoles{Role::Planning, Role::Questing, Role::Defense};

PhaseSetup parse_phase(Role role, const std::string& token) {
  PhaseSetup p;
  std::string kind = token;
  std::string suffix;
  if (auto colon = token.find(':'); colon != std::string::npos) {
    kind = token.substr(0, colon);
    suffix = token.substr(colon + 1);
  }
  if (kind == "random")
    p.kind = PolicyKind::Random;
  else if (kind == "rl-macro")
    p.kind = PolicyKind::RlMacro;
  else if (kind == "rl-direct" || kind == "rl")
    p.kind = PolicyKind::RlDirect;
  else
    throw ConfigError("unknown agent kind '" + token + "'");
  if (!suffix.empty() && (role != Role::Questing || p.kind == PolicyKind::Random))
    throw ConfigError("encoding suffix only applies to RL questing agents: '" + token + "'");
  if (role == Role::Defense && p.kind == PolicyKind::RlMacro) throw ConfigError("defense has no macroaction decoder");
  switch (role) {
    case Role::Planning: p.scheme = EncodingScheme::Planning; break;
    case Role::Defense: p.scheme = EncodingScheme::Defense; break;
    case Role::Questing: {
      int type = 2;
      if (!suffix.empty()) {
        if (suffix.size() != 1 || suffix[0] < '0' || suffix[0] > '3')
          throw ConfigError("questing encoding must be 0..3, got '" + suffix + "'");
        type = suffix[0] - '0';
      }
      p.scheme = questing_scheme(type);
      break;
    }
  }
  return p;
}

ActionHead head_for(Role role, PolicyKind kind) {
  if (kind == PolicyKind::RlMacro) return ActionHead::Macro;
  return role == Role::Questing ? ActionHead::Commit : ActionHead::Choice;
}

const RandomAgent& random_for(Role role) {
  static const RandomAgent choice(ActionHead::Choice);
  static const RandomAgent commit(ActionHead::Commit);
  return role == Role::Questing ? commit : choice;
}

class TraceSink {
 public:
  explicit TraceSink(std::ostream* out) : out_(out) {}
  void phase(const GameState& s, const char* label) {
    if (out_) *out_ << "== round " << s.round << ' ' << label << '\n';
  }
  void dump(const GameState& s) {
    if (out_) *out_ << serialize(s);
  }
  void ids(const char* label, const std::vector<CardId>& ids) {
    if (!out_) return;
    *out_ << label;
    for (CardId id : ids) *out_ << ' ' << id;
    *out_ << '\n';
  }
  void features(const GameState& s, EncodingScheme scheme, std::size_t attacker = 0) {
    if (!out_) return;
    auto f = encode(s, scheme, attacker);
    *out_ << "features " << to_string(scheme);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) *out_ << ' ' << static_cast<long long>(f.values[i]);
    *out_ << '\n';
  }

 private:
  std::ostream* out_;
};

GameResult run_game(GameState& s, const AgentAssignment& team, Rng& rng, bool learning, std::ostream* trace_out) {
  team.validate();
  auto make = [&](Role r) {
    const auto& setup = team.at(r);
    if (!setup.is_rl()) return Decider(random_for(r), rng);
    return learning ? Decider(*setup.agent, rng, true) : Decider(std::as_const(*setup.agent), rng);
  };
  Decider planning = make(Role::Planning);
  Decider questing = make(Role::Questing);
  Decider defense = make(Role::Defense);
  const auto& plan_setup = team.at(Role::Planning);
  const auto& quest_setup = team.at(Role::Questing);
  TraceSink trace(trace_out);

  while (!s.over()) {
    resource_phase(s);
    trace.phase(s, "planning");
    trace.features(s, EncodingScheme::Planning);
    auto bought = plan_setup.kind == PolicyKind::RlMacro ? macro_planning_step(planning, s)
                                                         : direct_planning_loop(planning, s);
    trace.ids("played", bought);
    end_planning(s);

    trace.phase(s, "questing");
    trace.features(s, quest_setup.scheme);
    auto committed = quest_setup.kind == PolicyKind::RlMacro ? macro_questing_step(questing, s, quest_setup.scheme)
                                                             : direct_questing(questing, s, quest_setup.scheme);
    trace.ids("committed", committed);
    if (s.over()) break;

    travel_phase(s);
    encounter_phase(s);
    trace.phase(s, "defense");
    for (std::size_t e = 0; e < s.engagement_area.size(); ++e) trace.features(s, EncodingScheme::Defense, e);
    auto assignment = direct_defense(defense, s);
    if (trace_out) {
      *trace_out << "defenders";
      for (const auto& a : assignment) *trace_out << ' ' << (a ? std::to_string(*a) : "-");
      *trace_out << '\n';
    }
    if (s.over()) break;

    attack_phase(s);
    refresh_phase(s);
    trace.dump(s);
  }
  trace.dump(s);

  const double reward = terminal_reward(s.outcome);
  planning.finish(reward);
  questing.finish(reward);
  defense.finish(reward);
  return {s.outcome, s.round, planning.queries() + questing.queries() + defense.queries()};
}

}  // namespace

AgentAssignment AgentAssignment::parse(const std::string& text) {
  AgentAssignment a;
  std::istringstream in(text);
  std::string token;
  std::size_t i = 0;
  while (std::getline(in, token, ',')) {
    if (i >= 3) throw ConfigError("agent assignment needs exactly three entries: '" + text + "'");
    a.phases_[i] = parse_phase(kRoles[i], token);
    ++i;
  }
  if (i != 3) throw ConfigError("agent assignment needs exactly three entries: '" + text + "'");
  return a;
}

AgentConfig agent_config_for(Role role, const PhaseSetup& setup, const HyperParams& hp) {
  AgentConfig c;
  c.role = role;
  c.scheme = setup.scheme;
  c.head = head_for(role, setup.kind);
  c.hidden = hp.hidden;
  c.alpha_actor = hp.learning_rate;
  c.alpha_critic = hp.learning_rate;
  c.gamma = hp.gamma;
  return c;
}

void AgentAssignment::initialize(const HyperParams& hp, std::uint64_t seed) {
  for (Role r : kRoles) {
    auto& p = at(r);
    if (!p.is_rl() || p.agent) continue;
    p.agent = std::make_shared<ActorCriticAgent>(agent_config_for(r, p, hp),
                                                 derive_seed(seed, {static_cast<std::uint64_t>(r)}));
  }
}

AgentAssignment AgentAssignment::clone() const {
  AgentAssignment copy = *this;
  for (auto& p : copy.phases_)
    if (p.agent) p.agent = std::make_shared<ActorCriticAgent>(*p.agent);
  return copy;
}

void AgentAssignment::validate() const {
  for (Role r : kRoles) {
    const auto& p = at(r);
    if (!p.is_rl()) continue;
    if (!p.agent) throw BundleMismatch(std::string("no agent for RL ") + to_string(r) + " slot");
    const auto& c = p.agent->config();
    if (c.role != r || c.scheme != p.scheme || c.head != head_for(r, p.kind))
      throw BundleMismatch(std::string("agent bundle (") + to_string(c.role) + " " + to_string(c.scheme) + " " +
                           to_string(c.head) + ") does not fit the " + to_string(r) + " slot");
  }
}

std::string AgentAssignment::describe() const {
  std::string out;
  for (Role r : kRoles) {
    const auto& p = at(r);
    if (!out.empty()) out += ',';
    switch (p.kind) {
      case PolicyKind::Random: out += "random"; break;
      case PolicyKind::RlMacro: out += "rl-macro"; break;
      case PolicyKind::RlDirect: out += "rl-direct"; break;
    }
    if (r == Role::Questing && p.is_rl()) out += ":" + std::string(1, to_string(p.scheme)[8]);
  }
  return out;
}

int AgentAssignment::rl_count() const noexcept {
  int n = 0;
  for (const auto& p : phases_) n += p.is_rl() ? 1 : 0;
  return n;
}

GameResult play_game(GameState& s, const AgentAssignment& team, Rng& agent_rng, std::ostream* trace) {
  return run_game(s, team, agent_rng, false, trace);
}

GameResult train_game(GameState& s, AgentAssignment& team, Rng& agent_rng) {
  return run_game(s, team, agent_rng, true, nullptr);
}

}  // namespace lotr

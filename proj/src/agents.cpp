#include "lotr/agents.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lotr/errors.hpp"

namespace lotr {

const char* to_string(Role r) noexcept {
  switch (r) {
    case Role::Planning: return "planning";
    case Role::Questing: return "questing";
    case Role::Defense: return "defense";
  }
  return "?";
}

const char* to_string(ActionHead h) noexcept {
  switch (h) {
    case ActionHead::Macro: return "macro";
    case ActionHead::Choice: return "choice";
    case ActionHead::Commit: return "commit";
  }
  return "?";
}

Role parse_role(const std::string& name) {
  for (auto r : {Role::Planning, Role::Questing, Role::Defense})
    if (name == to_string(r)) return r;
  throw ConfigError("unknown role '" + name + "'");
}

ActionHead parse_head(const std::string& name) {
  for (auto h : {ActionHead::Macro, ActionHead::Choice, ActionHead::Commit})
    if (name == to_string(h)) return h;
  throw ConfigError("unknown action head '" + name + "'");
}

int action_count(Role role, ActionHead head) {
  switch (head) {
    case ActionHead::Macro:
      if (role == Role::Defense) throw ConfigError("defense has no macroaction decoder");
      return 6;
    case ActionHead::Commit:
      if (role != Role::Questing) throw ConfigError("commit heads only exist for questing");
      return kCharacterSlots;
    case ActionHead::Choice:
      if (role == Role::Planning) return kAllyCount + 1;      // hand slots + pass
      if (role == Role::Defense) return kCharacterSlots + 1;  // characters + no defender
      throw ConfigError("questing uses a commit head, not a choice head");
  }
  return 0;
}

namespace {

int sample_categorical(const Eigen::VectorXd& p, Rng& rng) {
  double u = uniform01(rng);
  int last = -1;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    last = static_cast<int>(i);
    u -= p[i];
    if (u < 0.0) return last;
  }
  return last;  // rounding: fall back to the last positive entry
}

void check_mask(const Mask& mask, int expected) {
  if (static_cast<int>(mask.size()) != expected)
    throw ConfigError("mask has " + std::to_string(mask.size()) + " slots, head expects " + std::to_string(expected));
}

}  // namespace

Action RandomAgent::act(const FeatureVector&, const Mask& mask, Rng& rng) const {
  Action a;
  if (head_ == ActionHead::Commit) {
    a.commits.assign(mask.size(), false);
    int legal = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      ++legal;
      a.commits[i] = (rng() >> 63) != 0;
    }
    a.log_prob = -legal * std::log(2.0);
    return a;
  }
  std::vector<int> legal;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) legal.push_back(static_cast<int>(i));
  if (legal.empty()) throw EmptyMask();
  a.index = legal[uniform_index(rng, legal.size())];
  a.log_prob = -std::log(static_cast<double>(legal.size()));
  return a;
}

ActorCriticAgent::ActorCriticAgent(const AgentConfig& config, std::uint64_t seed) : config_(config) {
  const int in = dimension(config.scheme);
  const int out = action_count(config.role, config.head);
  actor_ = Mlpd::init(in, config.hidden, out, derive_seed(seed, {1}));
  critic_ = Mlpd::init(in, config.hidden, 1, derive_seed(seed, {2}));
}

ActorCriticAgent::ActorCriticAgent(const AgentConfig& config, Mlpd actor, Mlpd critic)
    : config_(config), actor_(std::move(actor)), critic_(std::move(critic)) {
  const int in = dimension(config.scheme);
  if (actor_.input_dim() != in || critic_.input_dim() != in)
    throw BundleMismatch(std::string("networks do not match the ") + to_string(config.scheme) + " encoding");
  if (actor_.output_dim() != action_count(config.role, config.head)) throw BundleMismatch("actor output size mismatch");
  if (critic_.output_dim() != 1) throw BundleMismatch("critic must have one output");
  config_.hidden = actor_.hidden_dim();
}

Action ActorCriticAgent::act(const FeatureVector& s, const Mask& mask, Rng& rng) const {
  check_mask(mask, actor_.output_dim());
  const Eigen::VectorXd logits = actor_.forward(s.values);
  Action a;
  if (config_.head == ActionHead::Commit) {
    a.commits.assign(mask.size(), false);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      const double z = logits[static_cast<Eigen::Index>(i)];
      const bool take = uniform01(rng) < sigmoid(z);
      a.commits[i] = take;
      a.log_prob += take ? log_sigmoid(z) : log_sigmoid(-z);
    }
    return a;
  }
  const Eigen::VectorXd p = masked_softmax(logits, mask);
  a.index = sample_categorical(p, rng);
  a.log_prob = std::log(p[a.index]);
  return a;
}

double ActorCriticAgent::value(const FeatureVector& s) const { return critic_.forward(s.values)[0]; }

double ActorCriticAgent::td_error(const Transition& t) const {
  const double next = (t.done || !t.next) ? 0.0 : value(*t.next);
  return t.reward + config_.gamma * next - value(t.s);
}

double ActorCriticAgent::log_prob(const FeatureVector& s, const Action& a, const Mask& mask) const {
  const Eigen::VectorXd logits = actor_.forward(s.values);
  if (config_.head == ActionHead::Commit) {
    double lp = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      const double z = logits[static_cast<Eigen::Index>(i)];
      lp += a.commits[i] ? log_sigmoid(z) : log_sigmoid(-z);
    }
    return lp;
  }
  return std::log(masked_softmax(logits, mask)[a.index]);
}

// d log pi(a|s) / d logits.
Eigen::VectorXd ActorCriticAgent::logit_gradient(const Eigen::VectorXd& logits, const Action& a,
                                                 const Mask& mask) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(logits.size());
  if (config_.head == ActionHead::Commit) {
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      const auto k = static_cast<Eigen::Index>(i);
      g[k] = (a.commits[i] ? 1.0 : 0.0) - sigmoid(logits[k]);
    }
    return g;
  }
  g = -masked_softmax(logits, mask);
  g[a.index] += 1.0;
  return g;
}

MlpParams<double> ActorCriticAgent::grad_log_prob(const FeatureVector& s, const Action& a, const Mask& mask) const {
  auto trace = actor_.forward_trace(s.values);
  Eigen::VectorXd dz = logit_gradient(trace.output, a, mask);
  return actor_.backward(std::move(trace), dz);
}

void ActorCriticAgent::observe(const Transition& t) {
  const double delta = td_error(t);

  auto critic_trace = critic_.forward_trace(t.s.values);
  auto critic_grad = critic_.backward(std::move(critic_trace), Eigen::VectorXd::Ones(1));

  auto actor_grad = grad_log_prob(t.s, t.action, t.mask);

  critic_.apply_gradients(critic_grad, config_.alpha_critic * delta);
  actor_.apply_gradients(actor_grad, config_.alpha_actor * delta);
}

double episode_credit(std::span<const double> rewards) {
  IncrementalMean q;
  for (double r : rewards) q.add(r);
  return q.value();
}

void write_bundle(std::ostream& out, const ActorCriticAgent& agent) {
  const auto& c = agent.config();
  auto old = out.precision(17);
  out << to_string(c.role) << ' ' << to_string(c.scheme) << ' ' << to_string(c.head) << ' '
      << agent.actor().input_dim() << ' ' << agent.actor().hidden_dim() << ' ' << agent.actor().output_dim() << ' '
      << c.gamma << ' ' << c.alpha_actor << ' ' << c.alpha_critic << '\n';
  out.precision(old);
  write_weights(out, agent.actor());
  write_weights(out, agent.critic());
}

ActorCriticAgent read_bundle(std::istream& in) {
  std::string manifest;
  if (!std::getline(in, manifest)) throw FormatError("bundle", 1, "missing manifest line");
  std::istringstream m(manifest);
  std::string role, scheme, head;
  int n_in = 0, n_hid = 0, n_out = 0;
  AgentConfig c;
  if (!(m >> role >> scheme >> head >> n_in >> n_hid >> n_out >> c.gamma >> c.alpha_actor >> c.alpha_critic))
    throw FormatError("bundle", 1, "manifest must read 'role scheme head in hid out gamma alpha_actor alpha_critic'");
  c.role = parse_role(role);
  c.scheme = parse_scheme(scheme);
  c.head = parse_head(head);
  c.hidden = n_hid;
  auto actor = read_weights<double>(in);
  auto critic = read_weights<double>(in);
  if (actor.input_dim() != n_in || actor.hidden_dim() != n_hid || actor.output_dim() != n_out)
    throw BundleMismatch("actor weights disagree with the manifest dims");
  return ActorCriticAgent(c, std::move(actor), std::move(critic));
}

void save_bundle(const std::string& path, const ActorCriticAgent& agent) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_bundle(out, agent);
}

ActorCriticAgent load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return read_bundle(in);
}

}  // namespace lotr

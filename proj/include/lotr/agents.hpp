#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lotr/encoders.hpp"
#include "lotr/neural.hpp"
#include "lotr/random.hpp"

namespace lotr {

/// Which of the three agent-controlled decisions a policy serves.
enum class Role { Planning, Questing, Defense };

/// Macro: categorical over the 6 beta values. Choice: categorical over
/// concrete options (cards, pass, no defender). Commit: one two-point
/// choice per character slot.
enum class ActionHead { Macro, Choice, Commit };

const char* to_string(Role r) noexcept;
const char* to_string(ActionHead h) noexcept;
Role parse_role(const std::string& name);
ActionHead parse_head(const std::string& name);

using Mask = std::vector<bool>;

struct Action {
  int index = -1;             // categorical heads
  std::vector<bool> commits;  // commit heads
  double log_prob = 0.0;

  bool operator==(const Action&) const = default;
};

struct Transition {
  FeatureVector s;
  Action action;
  Mask mask;
  double reward = 0.0;
  std::optional<FeatureVector> next;  // absent at terminal
  bool done = false;
};

/// Common contract for everything that makes a phase decision.
class DecisionPolicy {
 public:
  virtual ~DecisionPolicy() = default;
  virtual ActionHead head() const noexcept = 0;
  /// Never selects a masked-out option. Throws EmptyMask for a categorical
  /// head with no legal option.
  virtual Action act(const FeatureVector& s, const Mask& mask, Rng& rng) const = 0;
  virtual void observe(const Transition&) {}
  virtual bool learns() const noexcept { return false; }
};

class RandomAgent final : public DecisionPolicy {
 public:
  explicit RandomAgent(ActionHead head) : head_(head) {}
  ActionHead head() const noexcept override { return head_; }
  Action act(const FeatureVector& s, const Mask& mask, Rng& rng) const override;

 private:
  ActionHead head_;
};

struct AgentConfig {
  Role role = Role::Questing;
  EncodingScheme scheme = EncodingScheme::Questing2;
  ActionHead head = ActionHead::Commit;
  int hidden = 70;
  double alpha_actor = 6e-4;
  double alpha_critic = 6e-4;
  double gamma = 0.99;
};

/// Number of actor outputs for a (role, head) pair.
int action_count(Role role, ActionHead head);

/// Online one-step actor-critic: separate policy and value networks.
class ActorCriticAgent final : public DecisionPolicy {
 public:
  ActorCriticAgent(const AgentConfig& config, std::uint64_t seed);
  ActorCriticAgent(const AgentConfig& config, Mlpd actor, Mlpd critic);

  ActionHead head() const noexcept override { return config_.head; }
  Action act(const FeatureVector& s, const Mask& mask, Rng& rng) const override;
  void observe(const Transition& t) override;
  bool learns() const noexcept override { return true; }

  double value(const FeatureVector& s) const;
  /// r + gamma v(s') - v(s), with v(s') = 0 at a terminal transition.
  double td_error(const Transition& t) const;
  /// Log-probability of `a` under the current policy (joint over slots for commit heads).
  double log_prob(const FeatureVector& s, const Action& a, const Mask& mask) const;
  /// Gradient of log_prob with respect to the actor parameters.
  MlpParams<double> grad_log_prob(const FeatureVector& s, const Action& a, const Mask& mask) const;

  const AgentConfig& config() const noexcept { return config_; }
  const Mlpd& actor() const noexcept { return actor_; }
  const Mlpd& critic() const noexcept { return critic_; }
  Mlpd& actor() noexcept { return actor_; }
  Mlpd& critic() noexcept { return critic_; }

 private:
  Eigen::VectorXd logit_gradient(const Eigen::VectorXd& logits, const Action& a, const Mask& mask) const;

  AgentConfig config_;
  Mlpd actor_;
  Mlpd critic_;
};

/// Running mean Q_{n+1} = Q_n + (R_n - Q_n) / n.
class IncrementalMean {
 public:
  void add(double r) noexcept {
    ++n_;
    q_ += (r - q_) / static_cast<double>(n_);
  }
  double value() const noexcept { return q_; }
  std::size_t count() const noexcept { return n_; }

 private:
  double q_ = 0.0;
  std::size_t n_ = 0;
};

/// Incremental mean of an episode reward list (0 for an empty list).
double episode_credit(std::span<const double> rewards);

// Agent bundle: manifest line then actor and critic weight blocks.
void write_bundle(std::ostream& out, const ActorCriticAgent& agent);
ActorCriticAgent read_bundle(std::istream& in);
void save_bundle(const std::string& path, const ActorCriticAgent& agent);
ActorCriticAgent load_bundle(const std::string& path);

}  // namespace lotr

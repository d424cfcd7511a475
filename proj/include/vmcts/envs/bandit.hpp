#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "vmcts/envs/env.hpp"
#include "vmcts/rng.hpp"

namespace vmcts {

/// Distribution family of the per-arm rewards. Both are supported on a
/// subset of [0, 1] with the configured mean: Bernoulli(q), or uniform on
/// [q - w, q + w] with w = min(q, 1 - q).
enum class RewardLaw { Bernoulli, UniformBounded };

/// Arm definitions shared by every state of one bandit instance. Means must
/// be sorted descending; priors default to uniform.
struct BanditArms {
  std::vector<double> means;
  std::vector<double> priors;
  RewardLaw law = RewardLaw::Bernoulli;

  static BanditArms make(std::vector<double> means, RewardLaw law = RewardLaw::Bernoulli,
                         std::vector<double> priors = {}) {
    BanditArms arms;
    arms.law = law;
    for (std::size_t i = 0; i < means.size(); ++i) {
      if (means[i] < 0.0 || means[i] > 1.0)
        throw std::invalid_argument("bandit: arm mean outside [0,1]");
      if (i > 0 && means[i] > means[i - 1])
        throw std::invalid_argument("bandit: arm means must be sorted descending");
    }
    if (means.size() < 2) throw std::invalid_argument("bandit: need at least two arms");
    arms.means = std::move(means);
    if (priors.empty()) {
      arms.priors.assign(arms.means.size(), 1.0 / static_cast<double>(arms.means.size()));
    } else {
      if (priors.size() != arms.means.size())
        throw std::invalid_argument("bandit: priors/means size mismatch");
      arms.priors = std::move(priors);
    }
    return arms;
  }

  std::size_t arm_count() const { return means.size(); }
};

/// A bandit episode seen through the game-state contract. The root offers
/// one action per arm; every deeper state remembers which arm was chosen at
/// the root, so leaf evaluations anywhere below an arm sample that arm's
/// reward. No state is ever terminal -- episodes are depth-1 in substance,
/// the chain below an arm only exists so the generic search drivers can run
/// unmodified.
class BanditState {
 public:
  explicit BanditState(BanditArms arms)
      : arms_(std::make_shared<const BanditArms>(std::move(arms))) {}

  std::vector<Action> legal_actions() const {
    std::vector<Action> out(arms_->arm_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<Action>(i);
    return out;
  }

  BanditState apply(Action a) const {
    if (a < 0 || static_cast<std::size_t>(a) >= arms_->arm_count())
      throw std::invalid_argument("bandit: bad arm index");
    BanditState next = *this;
    if (next.root_arm_ < 0) next.root_arm_ = a;
    next.depth_ += 1;
    return next;
  }

  bool is_terminal() const { return false; }
  double terminal_value() const { throw std::logic_error("bandit: states are never terminal"); }
  Player player_to_move() const { return Player::Single; }
  int move_number() const { return depth_; }

  const BanditArms& arms() const { return *arms_; }

  /// Arm selected at the root on the path to this state, or -1 at the root.
  Action root_arm() const { return root_arm_; }

 private:
  std::shared_ptr<const BanditArms> arms_;
  Action root_arm_ = -1;
  int depth_ = 0;
};

/// Independent reward sample for one arm: mean means[arm], support in [0,1].
inline double bandit_pull(const BanditArms& arms, Action arm, Rng& rng) {
  if (arm < 0 || static_cast<std::size_t>(arm) >= arms.arm_count())
    throw std::invalid_argument("bandit_pull: bad arm index");
  const double q = arms.means[arm];
  if (arms.law == RewardLaw::Bernoulli) return uniform_unit(rng) < q ? 1.0 : 0.0;
  const double w = std::min(q, 1.0 - q);
  return q + w * (2.0 * uniform_unit(rng) - 1.0);
}

inline double bandit_pull(const BanditState& state, Action arm, Rng& rng) {
  return bandit_pull(state.arms(), arm, rng);
}

static_assert(GameState<BanditState>);

}  // namespace vmcts

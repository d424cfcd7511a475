#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vmcts {

/// Index of an action in an environment's action encoding (board point,
/// bandit arm, pass, ...). Environments define the encoding.
using Action = std::int32_t;

/// Index of a node in a SearchTree arena.
using NodeId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

/// Side to move. Two-player environments use First/Second, single-player
/// environments report Single.
enum class Player : std::uint8_t { First, Second, Single };

inline Player opponent(Player p) {
  if (p == Player::First) return Player::Second;
  if (p == Player::Second) return Player::First;
  return Player::Single;
}

/// Thrown when a request is valid in principle but exceeds what the
/// component can do (e.g. exhaustively solving a game that is too large).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vmcts

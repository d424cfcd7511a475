#pragma once

#include <concepts>
#include <string>
#include <vector>

#include "vmcts/common.hpp"

namespace vmcts {

/// Contract every environment state satisfies. States are immutable values:
/// apply() returns a new state and never mutates the receiver.
/// legal_actions() is non-empty exactly when the state is non-terminal, and
/// terminal_value() is only meaningful on terminal states (reported from the
/// first player's perspective, in [-1, 1]).
template <class S>
concept GameState = std::copyable<S> && requires(const S s, Action a) {
  { s.legal_actions() } -> std::same_as<std::vector<Action>>;
  { s.apply(a) } -> std::same_as<S>;
  { s.is_terminal() } -> std::same_as<bool>;
  { s.terminal_value() } -> std::same_as<double>;
  { s.player_to_move() } -> std::same_as<Player>;
  { s.move_number() } -> std::same_as<int>;
};

/// Board-point actions are encoded row-major, `size*size` is the pass move
/// where an environment supports passing. Notation is `<col><row>` with
/// columns `a..` from the left and row 1 the top line of the printed board.
inline std::string action_notation(int size, Action a) {
  if (a == size * size) return "pass";
  const int row = a / size;
  const int col = a % size;
  return std::string(1, static_cast<char>('a' + col)) + std::to_string(row + 1);
}

inline Action parse_action_notation(int size, const std::string& text) {
  if (text == "pass") return size * size;
  if (text.size() < 2) throw std::invalid_argument("bad action notation: " + text);
  const int col = text[0] - 'a';
  int row = 0;
  try {
    row = std::stoi(text.substr(1)) - 1;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad action notation: " + text);
  }
  if (col < 0 || col >= size || row < 0 || row >= size)
    throw std::invalid_argument("action out of range: " + text);
  return row * size + col;
}

namespace detail {

inline char cell_char(int v) { return v == 0 ? '.' : (v == 1 ? 'X' : 'O'); }

inline int char_cell(char c, int line, int column) {
  if (c == '.') return 0;
  if (c == 'X') return 1;
  if (c == 'O') return 2;
  throw std::invalid_argument("line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": expected '.', 'X' or 'O'");
}

}  // namespace detail

}  // namespace vmcts

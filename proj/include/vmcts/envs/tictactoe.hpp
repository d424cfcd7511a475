#pragma once

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "vmcts/envs/env.hpp"

namespace vmcts {

/// Classic 3x3 tic-tac-toe. X is the first player; values are +1 for an X
/// win, -1 for an O win, 0 for a draw.
class TicTacToeState {
 public:
  static constexpr int kSize = 3;

  std::vector<Action> legal_actions() const {
    std::vector<Action> out;
    if (is_terminal()) return out;
    for (Action a = 0; a < 9; ++a)
      if (cells_[a] == 0) out.push_back(a);
    return out;
  }

  TicTacToeState apply(Action a) const {
    if (is_terminal()) throw std::invalid_argument("tictactoe: move on terminal state");
    if (a < 0 || a >= 9 || cells_[a] != 0)
      throw std::invalid_argument("tictactoe: illegal move " + std::to_string(a));
    TicTacToeState next = *this;
    next.cells_[a] = to_move_;
    next.to_move_ = static_cast<std::int8_t>(3 - to_move_);
    next.moves_ += 1;
    return next;
  }

  bool is_terminal() const { return winner() != 0 || moves_ == 9; }

  double terminal_value() const {
    if (!is_terminal()) throw std::logic_error("tictactoe: value of non-terminal state");
    const int w = winner();
    return w == 1 ? 1.0 : (w == 2 ? -1.0 : 0.0);
  }

  Player player_to_move() const { return to_move_ == 1 ? Player::First : Player::Second; }
  int move_number() const { return moves_; }

  std::string to_text() const {
    std::ostringstream out;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) out << detail::cell_char(cells_[r * 3 + c]);
      out << '\n';
    }
    out << "to-move: " << (to_move_ == 1 ? 'X' : 'O') << '\n';
    out << "moves: " << static_cast<int>(moves_) << '\n';
    return out.str();
  }

  static TicTacToeState from_text(const std::string& text);

  bool operator==(const TicTacToeState&) const = default;

 private:
  int winner() const {
    static constexpr std::array<std::array<int, 3>, 8> kLines{{{0, 1, 2},
                                                               {3, 4, 5},
                                                               {6, 7, 8},
                                                               {0, 3, 6},
                                                               {1, 4, 7},
                                                               {2, 5, 8},
                                                               {0, 4, 8},
                                                               {2, 4, 6}}};
    for (const auto& line : kLines) {
      const int v = cells_[line[0]];
      if (v != 0 && v == cells_[line[1]] && v == cells_[line[2]]) return v;
    }
    return 0;
  }

  std::array<std::int8_t, 9> cells_{};
  std::int8_t to_move_ = 1;
  std::int8_t moves_ = 0;
};

inline TicTacToeState TicTacToeState::from_text(const std::string& text) {
  TicTacToeState s;
  std::istringstream in(text);
  std::string line;
  int row = 0;
  int line_no = 0;
  int x_count = 0, o_count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find(':') != std::string::npos) {
      if (line.rfind("to-move:", 0) == 0) {
        const auto v = line.substr(line.find(':') + 1);
        const auto c = v.find_first_not_of(' ');
        if (c == std::string::npos || (v[c] != 'X' && v[c] != 'O'))
          throw std::invalid_argument("line " + std::to_string(line_no) +
                                      ", column " + std::to_string(v.size()) + ": bad to-move");
        s.to_move_ = v[c] == 'X' ? 1 : 2;
      }
      continue;
    }
    if (row >= 3 || line.size() != 3)
      throw std::invalid_argument("line " + std::to_string(line_no) + ", column 1: bad board row");
    for (int c = 0; c < 3; ++c) {
      s.cells_[row * 3 + c] = static_cast<std::int8_t>(detail::char_cell(line[c], line_no, c + 1));
      if (s.cells_[row * 3 + c] == 1) ++x_count;
      if (s.cells_[row * 3 + c] == 2) ++o_count;
    }
    ++row;
  }
  if (row != 3) throw std::invalid_argument("line " + std::to_string(line_no) + ", column 1: expected 3 board rows");
  s.moves_ = static_cast<std::int8_t>(x_count + o_count);
  return s;
}

static_assert(GameState<TicTacToeState>);

}  // namespace vmcts

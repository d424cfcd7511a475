#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "vmcts/envs/env.hpp"

namespace vmcts {

/// Five-in-a-row on an n x n board (no pass). X moves first; values are +1
/// for an X win, -1 for an O win, 0 when the board fills without a line.
class GomokuState {
 public:
  explicit GomokuState(int size = 7, int win_length = 5)
      : size_(size), win_length_(win_length), cells_(static_cast<std::size_t>(size) * size, 0) {
    if (size < win_length || size > 19)
      throw std::invalid_argument("gomoku: unsupported board size");
  }

  int size() const { return size_; }

  std::vector<Action> legal_actions() const {
    std::vector<Action> out;
    if (is_terminal()) return out;
    for (Action a = 0; a < size_ * size_; ++a)
      if (cells_[a] == 0) out.push_back(a);
    return out;
  }

  GomokuState apply(Action a) const {
    if (is_terminal()) throw std::invalid_argument("gomoku: move on terminal state");
    if (a < 0 || a >= size_ * size_ || cells_[a] != 0)
      throw std::invalid_argument("gomoku: illegal move " + std::to_string(a));
    GomokuState next = *this;
    next.cells_[a] = to_move_;
    if (next.line_through(a)) next.winner_ = to_move_;
    next.to_move_ = static_cast<std::int8_t>(3 - to_move_);
    next.moves_ += 1;
    return next;
  }

  bool is_terminal() const { return winner_ != 0 || moves_ == size_ * size_; }

  double terminal_value() const {
    if (!is_terminal()) throw std::logic_error("gomoku: value of non-terminal state");
    return winner_ == 1 ? 1.0 : (winner_ == 2 ? -1.0 : 0.0);
  }

  Player player_to_move() const { return to_move_ == 1 ? Player::First : Player::Second; }
  int move_number() const { return moves_; }

  std::string to_text() const {
    std::ostringstream out;
    for (int r = 0; r < size_; ++r) {
      for (int c = 0; c < size_; ++c) out << detail::cell_char(cells_[r * size_ + c]);
      out << '\n';
    }
    out << "to-move: " << (to_move_ == 1 ? 'X' : 'O') << '\n';
    out << "moves: " << moves_ << '\n';
    return out.str();
  }

  static GomokuState from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> rows;
    char to_move = 'X';
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find(':') != std::string::npos) {
        if (line.rfind("to-move:", 0) == 0) {
          const auto v = line.substr(line.find(':') + 1);
          const auto c = v.find_first_not_of(' ');
          if (c == std::string::npos || (v[c] != 'X' && v[c] != 'O'))
            throw std::invalid_argument("line " + std::to_string(line_no) + ", column 1: bad to-move");
          to_move = v[c];
        }
        continue;
      }
      rows.push_back(line);
    }
    const int n = static_cast<int>(rows.size());
    GomokuState s(n);
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(rows[r].size()) != n)
        throw std::invalid_argument("line " + std::to_string(r + 1) + ", column " +
                                    std::to_string(rows[r].size() + 1) + ": bad row length");
      for (int c = 0; c < n; ++c) {
        s.cells_[r * n + c] = static_cast<std::int8_t>(detail::char_cell(rows[r][c], r + 1, c + 1));
        if (s.cells_[r * n + c] != 0) s.moves_ += 1;
      }
    }
    s.to_move_ = to_move == 'X' ? 1 : 2;
    for (Action a = 0; a < n * n; ++a)
      if (s.cells_[a] != 0 && s.line_via(a)) s.winner_ = s.cells_[a];
    return s;
  }

  bool operator==(const GomokuState&) const = default;

 private:
  bool line_through(Action a) const { return line_via(a); }

  bool line_via(Action a) const {
    const int v = cells_[a];
    const int r = a / size_, c = a % size_;
    static constexpr int kDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
    for (const auto& d : kDirs) {
      int run = 1;
      for (int sign : {1, -1}) {
        int rr = r + sign * d[0], cc = c + sign * d[1];
        while (rr >= 0 && rr < size_ && cc >= 0 && cc < size_ && cells_[rr * size_ + cc] == v) {
          ++run;
          rr += sign * d[0];
          cc += sign * d[1];
        }
      }
      if (run >= win_length_) return true;
    }
    return false;
  }

  int size_;
  int win_length_;
  std::vector<std::int8_t> cells_;
  std::int8_t to_move_ = 1;
  std::int8_t winner_ = 0;
  int moves_ = 0;
};

static_assert(GameState<GomokuState>);

}  // namespace vmcts

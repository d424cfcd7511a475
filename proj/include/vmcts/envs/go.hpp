#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "vmcts/envs/env.hpp"
#include "vmcts/rng.hpp"

namespace vmcts {

/// Go with area scoring and positional superko. Black (X) moves first;
/// suicide is illegal, pass is always legal and two consecutive passes end
/// the game. Games are also cut off after 2*n*n moves and scored as they
/// stand. Values are +1 / -1 / 0 from black's perspective.
class GoState {
 public:
  explicit GoState(int size = 5, double komi = 6.5)
      : size_(size), komi_(komi), board_(static_cast<std::size_t>(size) * size, 0) {
    if (size < 2 || size > 19) throw std::invalid_argument("go: unsupported board size");
    history_.push_back(position_hash(board_));
  }

  int size() const { return size_; }
  double komi() const { return komi_; }
  Action pass_action() const { return size_ * size_; }
  int consecutive_passes() const { return passes_; }

  std::vector<Action> legal_actions() const {
    std::vector<Action> out;
    if (is_terminal()) return out;
    for (Action a = 0; a < size_ * size_; ++a)
      if (board_[a] == 0 && resolve_move(a).legal) out.push_back(a);
    out.push_back(pass_action());
    return out;
  }

  GoState apply(Action a) const {
    if (is_terminal()) throw std::invalid_argument("go: move on terminal state");
    GoState next = *this;
    next.moves_ += 1;
    if (a == pass_action()) {
      next.passes_ += 1;
      next.to_move_ = static_cast<std::int8_t>(3 - to_move_);
      return next;
    }
    if (a < 0 || a >= size_ * size_ || board_[a] != 0)
      throw std::invalid_argument("go: illegal move " + action_notation(size_, a));
    Resolution res = resolve_move(a);
    if (!res.legal)
      throw std::invalid_argument("go: illegal move " + action_notation(size_, a) +
                                  (res.suicide ? " (suicide)" : " (superko)"));
    next.board_ = std::move(res.board);
    next.passes_ = 0;
    next.to_move_ = static_cast<std::int8_t>(3 - to_move_);
    next.history_.push_back(res.hash);
    return next;
  }

  bool is_terminal() const { return passes_ >= 2 || moves_ >= 2 * size_ * size_; }

  double terminal_value() const {
    if (!is_terminal()) throw std::logic_error("go: value of non-terminal state");
    const double margin = score_margin();
    return margin > 0 ? 1.0 : (margin < 0 ? -1.0 : 0.0);
  }

  /// Tromp-Taylor area margin from black's perspective: stones plus empty
  /// regions reaching only one color, minus komi. Well-defined on any
  /// position, which the heuristic evaluator relies on.
  double score_margin() const {
    const int n = size_ * size_;
    std::vector<char> seen(n, 0);
    int black = 0, white = 0;
    for (int i = 0; i < n; ++i) {
      if (board_[i] == 1) ++black;
      if (board_[i] == 2) ++white;
    }
    for (int i = 0; i < n; ++i) {
      if (board_[i] != 0 || seen[i]) continue;
      // Flood-fill the empty region and record which colors it touches.
      std::vector<int> stack{i};
      std::vector<int> region;
      bool touches_black = false, touches_white = false;
      seen[i] = 1;
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        region.push_back(p);
        for (int q : neighbors(p)) {
          if (board_[q] == 1) touches_black = true;
          else if (board_[q] == 2) touches_white = true;
          else if (!seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
      }
      if (touches_black && !touches_white) black += static_cast<int>(region.size());
      if (touches_white && !touches_black) white += static_cast<int>(region.size());
    }
    return static_cast<double>(black) - static_cast<double>(white) - komi_;
  }

  Player player_to_move() const { return to_move_ == 1 ? Player::First : Player::Second; }
  int move_number() const { return moves_; }

  std::string to_text() const {
    std::ostringstream out;
    for (int r = 0; r < size_; ++r) {
      for (int c = 0; c < size_; ++c) out << detail::cell_char(board_[r * size_ + c]);
      out << '\n';
    }
    out << "to-move: " << (to_move_ == 1 ? 'X' : 'O') << '\n';
    out << "moves: " << moves_ << '\n';
    out << "passes: " << passes_ << '\n';
    out << "komi: " << komi_ << '\n';
    return out.str();
  }

  /// Parses a position snapshot. The resulting state starts a fresh superko
  /// history at the loaded position.
  static GoState from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> rows;
    char to_move = 'X';
    int passes = 0;
    double komi = 6.5;
    int moves = -1;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find(':') != std::string::npos) {
        const std::string key = line.substr(0, line.find(':'));
        std::string value = line.substr(line.find(':') + 1);
        const auto c = value.find_first_not_of(' ');
        if (c == std::string::npos)
          throw std::invalid_argument("line " + std::to_string(line_no) + ", column " +
                                      std::to_string(line.size() + 1) + ": missing value");
        value = value.substr(c);
        try {
          if (key == "to-move") to_move = value[0];
          else if (key == "passes") passes = std::stoi(value);
          else if (key == "komi") komi = std::stod(value);
          else if (key == "moves") moves = std::stoi(value);
          else throw std::invalid_argument("unknown key");
        } catch (const std::exception&) {
          throw std::invalid_argument("line " + std::to_string(line_no) + ", column 1: bad field '" + key + "'");
        }
        continue;
      }
      rows.push_back(line);
    }
    const int n = static_cast<int>(rows.size());
    GoState s(n, komi);
    int stones = 0;
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(rows[r].size()) != n)
        throw std::invalid_argument("line " + std::to_string(r + 1) + ", column " +
                                    std::to_string(rows[r].size() + 1) + ": bad row length");
      for (int c = 0; c < n; ++c) {
        s.board_[r * n + c] = static_cast<std::int8_t>(detail::char_cell(rows[r][c], r + 1, c + 1));
        if (s.board_[r * n + c] != 0) ++stones;
      }
    }
    s.to_move_ = to_move == 'X' ? 1 : 2;
    s.passes_ = passes;
    s.moves_ = moves >= 0 ? moves : stones;
    s.history_.clear();
    s.history_.push_back(s.position_hash(s.board_));
    return s;
  }

  bool operator==(const GoState&) const = default;

 private:
  struct Resolution {
    bool legal = false;
    bool suicide = false;
    std::vector<std::int8_t> board;
    std::uint64_t hash = 0;
  };

  std::vector<int> neighbors(int p) const {
    std::vector<int> out;
    const int r = p / size_, c = p % size_;
    if (r > 0) out.push_back(p - size_);
    if (r + 1 < size_) out.push_back(p + size_);
    if (c > 0) out.push_back(p - 1);
    if (c + 1 < size_) out.push_back(p + 1);
    return out;
  }

  // Collects the group containing p on `board` and reports whether it has
  // any liberty.
  static void group_of(const std::vector<std::int8_t>& board, int size, int p,
                       std::vector<int>& group, bool& has_liberty) {
    const int color = board[p];
    std::vector<char> seen(board.size(), 0);
    std::vector<int> stack{p};
    seen[p] = 1;
    group.clear();
    has_liberty = false;
    while (!stack.empty()) {
      const int q = stack.back();
      stack.pop_back();
      group.push_back(q);
      const int r = q / size, c = q % size;
      const int nb[4] = {r > 0 ? q - size : -1, r + 1 < size ? q + size : -1,
                         c > 0 ? q - 1 : -1, c + 1 < size ? q + 1 : -1};
      for (int x : nb) {
        if (x < 0) continue;
        if (board[x] == 0) has_liberty = true;
        else if (board[x] == color && !seen[x]) {
          seen[x] = 1;
          stack.push_back(x);
        }
      }
    }
  }

  // Plays to_move_ at point a on a scratch board: removes captured opponent
  // groups, rejects suicide and positional-superko repeats.
  Resolution resolve_move(Action a) const {
    Resolution res;
    res.board = board_;
    const std::int8_t own = to_move_;
    const std::int8_t opp = static_cast<std::int8_t>(3 - to_move_);
    res.board[a] = own;

    std::vector<int> group;
    bool has_liberty = false;
    for (int q : neighbors(a)) {
      if (res.board[q] != opp) continue;
      group_of(res.board, size_, q, group, has_liberty);
      if (!has_liberty)
        for (int g : group) res.board[g] = 0;
    }
    group_of(res.board, size_, a, group, has_liberty);
    if (!has_liberty) {
      res.suicide = true;
      return res;
    }
    res.hash = position_hash(res.board);
    if (std::find(history_.begin(), history_.end(), res.hash) != history_.end()) return res;
    res.legal = true;
    return res;
  }

  std::uint64_t position_hash(const std::vector<std::int8_t>& board) const {
    // Zobrist over (point, color); the table is derived deterministically
    // from the board size so hashes are stable across runs.
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(size_));
    for (std::size_t i = 0; i < board.size(); ++i)
      if (board[i] != 0) h ^= splitmix64((i << 2) | static_cast<std::uint64_t>(board[i]));
    return h;
  }

  int size_;
  double komi_;
  std::vector<std::int8_t> board_;
  std::int8_t to_move_ = 1;
  int passes_ = 0;
  int moves_ = 0;
  std::vector<std::uint64_t> history_;
};

static_assert(GameState<GoState>);

}  // namespace vmcts

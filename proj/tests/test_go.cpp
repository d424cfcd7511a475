#include <catch2/catch_amalgamated.hpp>

#include "vmcts/envs/go.hpp"

using namespace vmcts;

namespace {

GoState board5(const std::vector<std::string>& rows, char to_move = 'X', int passes = 0) {
  std::string text;
  for (const auto& r : rows) text += r + "\n";
  text += std::string("to-move: ") + to_move + "\n";
  text += "passes: " + std::to_string(passes) + "\n";
  return GoState::from_text(text);
}

// Area count by brute-force flood fill, independent of GoState's scorer.
double reference_margin(const std::vector<std::string>& rows, double komi) {
  const int n = static_cast<int>(rows.size());
  auto at = [&](int r, int c) { return rows[r][c]; };
  int black = 0, white = 0;
  std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (at(r, c) == 'X') ++black;
      if (at(r, c) == 'O') ++white;
      if (at(r, c) != '.' || seen[r][c]) continue;
      std::vector<std::pair<int, int>> stack{{r, c}}, region;
      bool tb = false, tw = false;
      seen[r][c] = 1;
      while (!stack.empty()) {
        auto [rr, cc] = stack.back();
        stack.pop_back();
        region.push_back({rr, cc});
        const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
        for (int d = 0; d < 4; ++d) {
          const int r2 = rr + dr[d], c2 = cc + dc[d];
          if (r2 < 0 || r2 >= n || c2 < 0 || c2 >= n) continue;
          if (at(r2, c2) == 'X') tb = true;
          else if (at(r2, c2) == 'O') tw = true;
          else if (!seen[r2][c2]) {
            seen[r2][c2] = 1;
            stack.push_back({r2, c2});
          }
        }
      }
      if (tb && !tw) black += static_cast<int>(region.size());
      if (tw && !tb) white += static_cast<int>(region.size());
    }
  }
  return black - white - komi;
}

}  // namespace

TEST_CASE("two passes from the empty board score to white by komi") {
  GoState s(5);
  s = s.apply(s.pass_action());
  REQUIRE(!s.is_terminal());
  s = s.apply(s.pass_action());
  REQUIRE(s.is_terminal());
  REQUIRE(s.terminal_value() == -1.0);  // 0 area each, komi 6.5 decides
}

TEST_CASE("capturing a single stone") {
  // White stone in the corner with one liberty left; black fills it and the
  // stone comes off.
  GoState g = board5({"O....",
                      "X....",
                      ".....",
                      ".....",
                      "....."});
  g = g.apply(1);  // b1
  REQUIRE(g.to_text().substr(0, 5) == ".X...");
}

TEST_CASE("suicide is illegal") {
  // Point a1 is surrounded by black; white may not play into it.
  const GoState g = board5({".X...",
                            "XX...",
                            ".....",
                            ".....",
                            "....."},
                           'O');
  REQUIRE_THROWS_AS(g.apply(0), std::invalid_argument);
  const auto legal = g.legal_actions();
  REQUIRE(std::find(legal.begin(), legal.end(), 0) == legal.end());
}

TEST_CASE("positional superko forbids immediate ko recapture") {
  const GoState g = board5({".XO..",
                            "XO.O.",
                            ".XO..",
                            ".....",
                            "....."});
  const GoState after = g.apply(7);  // black takes the ko at c2
  // White stone at b2 was captured.
  REQUIRE(after.to_text().substr(6, 5) == "X.XO.");
  const auto legal = after.legal_actions();
  REQUIRE(std::find(legal.begin(), legal.end(), 6) == legal.end());

  // Playing the forbidden point throws with a superko note.
  REQUIRE_THROWS_WITH(after.apply(6), Catch::Matchers::ContainsSubstring("superko"));
}

TEST_CASE("area scoring matches the reference flood fill") {
  const std::vector<std::string> rows{".....",
                                      ".....",
                                      "XXXXX",
                                      "OOOOO",
                                      "....."};
  const GoState g = board5(rows, 'X', 2);
  REQUIRE(g.is_terminal());
  REQUIRE(reference_margin(rows, 6.5) == -1.5);  // black 15, white 10, komi 6.5
  REQUIRE(g.score_margin() == -1.5);
  REQUIRE(g.terminal_value() == -1.0);

  const std::vector<std::string> black_heavy{"XX...",
                                             "XXX..",
                                             "XXXXX",
                                             "OO.XX",
                                             "....."};
  const GoState b = board5(black_heavy, 'X', 2);
  REQUIRE(b.score_margin() == reference_margin(black_heavy, 6.5));
}

TEST_CASE("game ends after the move cap") {
  GoState g(3, 0.5);
  int safety = 0;
  Rng rng(3);
  while (!g.is_terminal() && safety++ < 100) {
    const auto legal = g.legal_actions();
    g = g.apply(legal[uniform_index(rng, legal.size())]);
  }
  REQUIRE(g.is_terminal());
  REQUIRE(g.move_number() <= 2 * 9);
}

TEST_CASE("go text round trip") {
  GoState g(5);
  g = g.apply(12).apply(7).apply(8);
  const std::string text = g.to_text();
  const GoState parsed = GoState::from_text(text);
  REQUIRE(parsed.to_text() == text);

  REQUIRE_THROWS_WITH(GoState::from_text("..\n.Z\nto-move: X\n"),
                      Catch::Matchers::ContainsSubstring("line 2, column 2"));
}

TEST_CASE("action notation") {
  REQUIRE(action_notation(5, 0) == "a1");
  REQUIRE(action_notation(5, 12) == "c3");
  REQUIRE(action_notation(5, 25) == "pass");
  REQUIRE(parse_action_notation(5, "c3") == 12);
  REQUIRE(parse_action_notation(5, "pass") == 25);
  REQUIRE_THROWS_AS(parse_action_notation(5, "z9"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_action_notation(5, "q"), std::invalid_argument);
}

#pragma once

// Small building blocks shared by the three- and four-agent protocols.

#include <optional>
#include <utility>
#include <vector>

#include "envy4/bonus_table.hpp"
#include "envy4/context.hpp"
#include "envy4/piece.hpp"

namespace envy4 {

struct DivideAndChoose {
  Piece cutter_share;
  Piece chooser_share;
};

/// `cutter` halves p by his own value, `chooser` takes the half he prefers
/// (the left one on ties). Four queries, one cut.
inline DivideAndChoose divide_and_choose(Context& ctx, AgentId cutter, AgentId chooser,
                                         const Piece& p) {
  if (p.empty()) return {};
  Ratio total = ctx.rw.ask_eval(cutter, p);
  Ratio mid = ctx.rw.ask_cut(cutter, p, total / Ratio(2));
  Piece left = p.left_of(mid), right = p.right_of(mid);
  Ratio vl = ctx.rw.ask_eval(chooser, left);
  Ratio vr = ctx.rw.ask_eval(chooser, right);
  bool takes_left = vl >= vr;
  ctx.trace.emit("divide_and_choose", {{"cutter", cutter},
                                       {"chooser", chooser},
                                       {"point", mid},
                                       {"chooser_takes", takes_left ? "left" : "right"}});
  if (takes_left) return {right, left};
  return {left, right};
}

/// Gives each agent a distinct piece from his set of most valued pieces, if
/// possible. values[a][p] is agent a's value for piece p. Among all valid
/// assignments the lexicographically smallest (by agent order) is returned.
inline std::optional<std::vector<int>> top_piece_matching(
    const std::vector<std::vector<Ratio>>& values) {
  const std::size_t agents = values.size();
  std::vector<std::vector<int>> best(agents);
  for (std::size_t a = 0; a < agents; ++a) {
    const auto& row = values[a];
    if (row.empty()) return std::nullopt;
    Ratio top = row[0];
    for (const auto& v : row) top = max(top, v);
    for (std::size_t p = 0; p < row.size(); ++p)
      if (row[p] == top) best[a].push_back(static_cast<int>(p));
  }
  std::vector<int> pick(agents, -1);
  std::vector<bool> used(values.empty() ? 0 : values[0].size(), false);
  auto dfs = [&](auto&& self, std::size_t a) -> bool {
    if (a == agents) return true;
    for (int p : best[a]) {
      if (used[p]) continue;
      used[p] = true;
      pick[a] = p;
      if (self(self, a + 1)) return true;
      used[p] = false;
    }
    return false;
  };
  if (!dfs(dfs, 0)) return std::nullopt;
  return pick;
}

/// Row (1-based) in which no entry is the unique maximum of its column. Such a
/// row has every entry bounded by the sum of the rest of its column, and one
/// always exists for four rows of three entries: each column eliminates at
/// most one row. Ties go to the smallest row index.
inline int select_compromise_iteration(const BonusTable& t) {
  std::array<bool, 4> eliminated{};
  for (int c = 0; c < 3; ++c) {
    int arg = 0;
    for (int r = 1; r < 4; ++r)
      if (t[r][c] > t[arg][c]) arg = r;
    bool unique = true;
    for (int r = 0; r < 4; ++r)
      if (r != arg && t[r][c] == t[arg][c]) unique = false;
    if (unique) eliminated[arg] = true;
  }
  for (int r = 0; r < 4; ++r)
    if (!eliminated[r]) return r + 1;
  fail(ErrorKind::InternalInvariantViolation, "every row eliminated");
}

}  // namespace envy4

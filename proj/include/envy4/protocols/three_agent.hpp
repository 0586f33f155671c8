#pragma once

// Envy-free division among three agents. The cutter splits the cake into
// three equal pieces twice; when the other two keep fighting over the same
// piece, the one who trimmed it more in both rounds gives up the round where
// his extra slice was worth less to him. Whatever is left goes through
// divide-and-choose between the two non-cutters, who by then the cutter
// dominates.

#include <array>
#include <optional>
#include <vector>

#include "envy4/protocols/basic.hpp"
#include "envy4/verify.hpp"

namespace envy4 {

namespace detail {

struct ThreeRound {
  std::array<Piece, 3> pieces;
  std::array<std::array<Ratio, 3>, 2> values;  // values[m][b] for the two non-cutters
  std::array<int, 3> holder_of{};              // piece -> role: 0, 1 = non-cutters, 2 = cutter
  std::array<Piece, 3> share;                  // role -> piece received this round
  std::optional<int> contested;                // piece both trimmed
  std::array<Ratio, 2> trim;                   // trim points on the contested piece
  int partial_role = -1;                       // role who got the contested piece
  Piece leftover;
  Piece gap;  // between the two trims, inside the partial share
};

inline ThreeRound three_round(Context& ctx, const std::array<AgentId, 3>& ag, const Piece& cake,
                              const char* label) {
  ThreeRound r;
  Ratio total = ctx.rw.ask_eval(ag[2], cake);
  Ratio a = ctx.rw.ask_cut(ag[2], cake, total / Ratio(3));
  Ratio b = ctx.rw.ask_cut(ag[2], cake, total * Ratio(2, 3));
  r.pieces = {cake.left_of(a), cake.between(a, b), cake.right_of(b)};
  for (int m = 0; m < 2; ++m)
    for (int p = 0; p < 3; ++p) r.values[m][p] = ctx.rw.ask_eval(ag[m], r.pieces[p]);

  std::vector<std::vector<Ratio>> vals{{r.values[0].begin(), r.values[0].end()},
                                       {r.values[1].begin(), r.values[1].end()}};
  if (auto match = top_piece_matching(vals)) {
    std::array<bool, 3> used{};
    for (int m = 0; m < 2; ++m) {
      int p = (*match)[m];
      used[p] = true;
      r.holder_of[p] = m;
      r.share[m] = r.pieces[p];
    }
    for (int p = 0; p < 3; ++p)
      if (!used[p]) r.holder_of[p] = 2, r.share[2] = r.pieces[p];
    ctx.hit(std::string("three.") + label + ".matching");
    ctx.trace.emit("three_round", {{"round", label}, {"matching", *match}});
    return r;
  }

  // No matching: both strictly favour the same piece.
  int top = 0;
  for (int p = 1; p < 3; ++p)
    if (r.values[0][p] > r.values[0][top]) top = p;
  r.contested = top;
  std::array<int, 2> second{};
  for (int m = 0; m < 2; ++m) {
    int best = -1;
    for (int p = 0; p < 3; ++p)
      if (p != top && (best < 0 || r.values[m][p] > r.values[m][best])) best = p;
    second[m] = best;
    r.trim[m] = ctx.rw.ask_trim(ag[m], r.pieces[top], r.values[m][best]);
  }
  ctx.trace.emit("three_round",
                 {{"round", label}, {"contested", top}, {"trims", r.trim}});
  return r;
}

inline void settle_contest(ThreeRound& r, int winner) {
  int loser = 1 - winner;
  int top = *r.contested;
  const Ratio& cut = r.trim[loser];
  r.partial_role = winner;
  r.share[winner] = r.pieces[top].right_of(cut);
  r.leftover = r.pieces[top].left_of(cut);
  r.gap = r.pieces[top].between(cut, r.trim[winner]);
  r.holder_of[top] = winner;
  int best = -1;
  for (int p = 0; p < 3; ++p)
    if (p != top && (best < 0 || r.values[loser][p] > r.values[loser][best])) best = p;
  r.holder_of[best] = loser;
  r.share[loser] = r.pieces[best];
  for (int p = 0; p < 3; ++p)
    if (p != top && p != best) r.holder_of[p] = 2, r.share[2] = r.pieces[p];
}

}  // namespace detail

/// `agents[2]` cuts. Returns a complete allocation of `cake`.
inline Allocation three_agent_protocol(Context& ctx, const std::array<AgentId, 3>& agents,
                                       const Piece& cake) {
  ensure(agents[0] != agents[1] && agents[1] != agents[2] && agents[0] != agents[2],
         ErrorKind::PreconditionViolated, "agents must be distinct");
  Allocation out;
  for (AgentId a : agents) out[a] = Piece{};
  auto give = [&](const detail::ThreeRound& r) {
    for (int m = 0; m < 3; ++m) out[agents[m]] = out[agents[m]].unite(r.share[m]);
  };
  if (cake.empty()) return out;

  auto r1 = detail::three_round(ctx, agents, cake, "round1");
  if (!r1.contested) {
    give(r1);
    return out;
  }
  ctx.hit("three.round1.trim");
  // Ties in trim position go to the lower index.
  int i = r1.trim[1] > r1.trim[0] ? 1 : 0;
  detail::settle_contest(r1, i);

  Piece beta1 = r1.leftover;
  if (beta1.empty()) {
    give(r1);
    return out;
  }
  auto r2 = detail::three_round(ctx, agents, beta1, "round2");
  if (!r2.contested) {
    give(r1);
    give(r2);
    return out;
  }
  Piece rest;
  if (r2.trim[1 - i] >= r2.trim[i]) {
    ctx.hit("three.round2.other_wins");
    detail::settle_contest(r2, 1 - i);
  } else {
    ctx.hit("three.round2.same_wins");
    detail::settle_contest(r2, i);
    // i holds a partial piece twice: he gives up the round whose extra slice
    // he values less and takes his preferred complete piece there instead.
    Ratio g1 = ctx.rw.ask_eval(agents[i], r1.gap);
    Ratio g2 = ctx.rw.ask_eval(agents[i], r2.gap);
    detail::ThreeRound& r = g1 <= g2 ? r1 : r2;
    int top = *r.contested;
    int pick = -1;
    for (int p = 0; p < 3; ++p)
      if (p != top && (pick < 0 || r.values[i][p] > r.values[i][pick])) pick = p;
    int displaced = r.holder_of[pick];
    Piece partial = r.share[i];
    r.share[i] = r.pieces[pick];
    r.holder_of[pick] = i;
    if (displaced == 1 - i) {
      r.share[1 - i] = partial;
      r.holder_of[top] = 1 - i;
    } else {
      // The cutter is indifferent between complete pieces.
      int other = 3 - top - pick;
      r.share[2] = r.pieces[other];
      r.holder_of[other] = 2;
      r.share[1 - i] = partial;
      r.holder_of[top] = 1 - i;
    }
    r.partial_role = 1 - i;
    ctx.hit("three.permutation");
    ctx.trace.emit("three_permutation", {{"agent", agents[i]},
                                          {"gaps", {g1, g2}},
                                          {"round", g1 <= g2 ? 1 : 2},
                                          {"displaced", agents[displaced]}});
  }
  rest = r2.leftover;
  give(r1);
  give(r2);
  if (!rest.empty()) {
    ctx.hit("three.divide_and_choose");
    auto dc = divide_and_choose(ctx, agents[0], agents[1], rest);
    out[agents[0]] = out[agents[0]].unite(dc.cutter_share);
    out[agents[1]] = out[agents[1]].unite(dc.chooser_share);
  }
  return out;
}

}  // namespace envy4

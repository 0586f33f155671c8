#pragma once

// Finishing step once enough agents dominate others: whoever cannot be
// envied any more gets the rest of the cake, either whole, split by
// divide-and-choose, or quartered and picked in domination order.

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "envy4/protocols/basic.hpp"
#include "envy4/verify.hpp"

namespace envy4 {

enum class PostBranch { Empty, DivideAndChoose, GiveAll, QuarterAndPick };

inline std::string to_string(PostBranch b) {
  switch (b) {
    case PostBranch::Empty: return "empty";
    case PostBranch::DivideAndChoose: return "divide_and_choose";
    case PostBranch::GiveAll: return "give_all";
    case PostBranch::QuarterAndPick: return "quarter_and_pick";
  }
  return "?";
}

struct PostPlan {
  PostBranch branch = PostBranch::Empty;
  std::vector<AgentId> order;  // branch-specific roles, see post_double_domination
};

/// Chooses how the residue can be handed out without envy, given which
/// dominations are known. Returns nullopt when none of the branches applies.
inline std::optional<PostPlan> plan_post_double_domination(const DominationGraph& g,
                                                           std::vector<AgentId> agents) {
  std::sort(agents.begin(), agents.end());
  const std::size_t n = agents.size();
  auto others_than = [&](std::initializer_list<AgentId> skip) {
    std::vector<AgentId> out;
    for (AgentId a : agents)
      if (std::find(skip.begin(), skip.end(), a) == skip.end()) out.push_back(a);
    return out;
  };

  // A pair dominated by everybody else splits the residue between them.
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      AgentId ax = agents[x], ay = agents[y];
      bool ok = true;
      for (AgentId k : others_than({ax, ay})) ok = ok && g.has(k, ax) && g.has(k, ay);
      if (ok) return PostPlan{PostBranch::DivideAndChoose, {ax, ay}};
    }
  // Somebody everybody dominates takes it all.
  for (AgentId z : agents) {
    bool ok = true;
    for (AgentId k : others_than({z})) ok = ok && g.has(k, z);
    if (ok) return PostPlan{PostBranch::GiveAll, {z}};
  }
  // Pickers in an order where each later picker dominates all earlier ones;
  // the last agent cuts.
  if (n == 4) {
    std::array<AgentId, 4> p{agents[0], agents[1], agents[2], agents[3]};
    do {
      if (g.has(p[1], p[0]) && g.has(p[2], p[0]) && g.has(p[2], p[1]))
        return PostPlan{PostBranch::QuarterAndPick, {p[0], p[1], p[2], p[3]}};
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return std::nullopt;
}

/// Allocates the residue on top of `alloc`. Dominations in `g` must hold for
/// the true valuations; the result is then envy-free.
inline Allocation post_double_domination(Context& ctx, Allocation alloc, const Piece& residue,
                                         const DominationGraph& g,
                                         const std::vector<AgentId>& agents) {
  if (residue.empty()) {
    ctx.hit("post.empty");
    return alloc;
  }
  auto plan = plan_post_double_domination(g, agents);
  ensure(plan.has_value(), ErrorKind::PreconditionViolated,
         "domination graph admits no way to hand out the residue");
  ctx.hit("post." + to_string(plan->branch));
  ctx.trace.emit("post_double_domination",
                 {{"branch", to_string(plan->branch)}, {"roles", plan->order}, {"graph", g.to_json()}});

  switch (plan->branch) {
    case PostBranch::DivideAndChoose: {
      auto dc = divide_and_choose(ctx, plan->order[0], plan->order[1], residue);
      alloc[plan->order[0]] = alloc[plan->order[0]].unite(dc.cutter_share);
      alloc[plan->order[1]] = alloc[plan->order[1]].unite(dc.chooser_share);
      break;
    }
    case PostBranch::GiveAll:
      alloc[plan->order[0]] = alloc[plan->order[0]].unite(residue);
      break;
    case PostBranch::QuarterAndPick: {
      AgentId cutter = plan->order[3];
      Ratio total = ctx.rw.ask_eval(cutter, residue);
      std::vector<Ratio> marks;
      for (int k = 1; k <= 3; ++k) marks.push_back(ctx.rw.ask_cut(cutter, residue, total * Ratio(k, 4)));
      std::vector<Piece> pieces{residue.left_of(marks[0]), residue.between(marks[0], marks[1]),
                                residue.between(marks[1], marks[2]), residue.right_of(marks[2])};
      std::vector<bool> taken(4, false);
      for (int r = 0; r < 3; ++r) {
        AgentId who = plan->order[r];
        int best = -1;
        Ratio best_value;
        for (int b = 0; b < 4; ++b) {
          if (taken[b]) continue;
          Ratio v = ctx.rw.ask_eval(who, pieces[b]);
          if (best < 0 || v > best_value) best = b, best_value = v;
        }
        taken[best] = true;
        alloc[who] = alloc[who].unite(pieces[best]);
      }
      for (int b = 0; b < 4; ++b)
        if (!taken[b]) alloc[cutter] = alloc[cutter].unite(pieces[b]);
      break;
    }
    case PostBranch::Empty:
      break;
  }
  return alloc;
}

}  // namespace envy4

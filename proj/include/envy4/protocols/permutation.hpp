#pragma once

// Reassigns the pieces of one core run so that the agent who kept getting
// the significant piece gives it up. Pieces are not re-cut; only holders
// change. Every agent must still provably get what he trimmed to in that
// run, though he may lose the extra slice he got on top of it.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "envy4/protocols/core.hpp"

namespace envy4 {

enum class PermutationCase {
  SwapWithCompetitor,     // the competitor's own piece was cut at the holder's trim
  ThirdTakesCompetitors,  // ... or at the third non-cutter's trim
  SwapWithReference,      // competitor holds the piece the holder trimmed to
  CutterFreesReference,
  ThirdFreesReference,
  Other,                  // first valid reassignment in lexicographic order
};

inline std::string to_string(PermutationCase c) {
  switch (c) {
    case PermutationCase::SwapWithCompetitor: return "1a";
    case PermutationCase::ThirdTakesCompetitors: return "1b";
    case PermutationCase::SwapWithReference: return "2a";
    case PermutationCase::CutterFreesReference: return "2b";
    case PermutationCase::ThirdFreesReference: return "2c";
    case PermutationCase::Other: return "other";
  }
  return "?";
}

struct PermutationResult {
  CoreOutcome outcome;
  PermutationCase sub_case = PermutationCase::Other;
};

/// Extra acceptance test supplied by the caller (e.g. cross-run envy).
using PermutationCheck = std::function<bool(const CoreOutcome&)>;

namespace detail {

/// The value an agent was promised in this run: his trim target, or the
/// cutter's equal share, capped by what he provably got.
inline Ratio promised_value(const CoreOutcome& o, AgentId a) {
  if (a == o.cutter) return o.knowledge.share();
  for (const auto& t : o.trims)
    if (t.effective && t.agent == a) return min(t.target, o.own_lower(a));
  return o.own_lower(a);
}

inline CoreOutcome with_holders(const CoreOutcome& o, const std::array<AgentId, 4>& holders) {
  CoreOutcome r = o;
  for (int b = 0; b < 4; ++b) r.slots[b].holder = holders[b];
  r.bonus.clear();
  return r;
}

/// Agent other than `excluding` whose effective trim on piece b sits at the
/// cut point, lowest id first.
inline AgentId cut_definer(const CoreOutcome& o, int b, AgentId excluding) {
  AgentId who = 0;
  for (const auto& t : o.trims)
    if (t.effective && t.piece_id == b && t.agent != excluding && t.point == o.slots[b].cut &&
        (who == 0 || t.agent < who))
      who = t.agent;
  return who;
}

}  // namespace detail

/// True when `candidate` honours every promise of `original` and moves the
/// significant piece away from sig_holder.
inline bool permutation_valid(const CoreOutcome& original, const CoreOutcome& candidate,
                              AgentId sig_holder) {
  int sig = original.slot_of(sig_holder);
  if (candidate.slots[sig].holder == sig_holder) return false;
  if (!candidate.slots[candidate.slot_of(candidate.cutter)].complete()) return false;
  for (AgentId a : candidate.agents())
    if (candidate.own_lower(a) < detail::promised_value(original, a)) return false;
  return true;
}

inline PermutationResult permutation_protocol(const CoreOutcome& state, AgentId sig_holder,
                                              const PermutationCheck& accept = {}) {
  const AgentId j = sig_holder;
  const AgentId c = state.cutter;
  ensure(j != c, ErrorKind::PreconditionViolated, "the cutter cannot hold the significant piece");
  const int sj = state.slot_of(j);
  ensure(!state.slots[sj].complete(), ErrorKind::PreconditionViolated,
         "significant piece must be partial");

  AgentId k2 = detail::cut_definer(state, sj, j);
  if (k2 == 0 || k2 == c)
    for (AgentId a : state.others)
      if (a != j) { k2 = a; break; }
  AgentId k3 = 0;
  for (AgentId a : state.others)
    if (a != j && a != k2) k3 = a;
  const int s2 = state.slot_of(k2), s3 = state.slot_of(k3), sc = state.slot_of(c);

  auto holders_now = [&] {
    std::array<AgentId, 4> h{};
    for (int b = 0; b < 4; ++b) h[b] = state.slots[b].holder;
    return h;
  }();

  std::vector<std::pair<PermutationCase, std::array<AgentId, 4>>> tries;
  auto propose = [&](PermutationCase pc, std::vector<std::pair<int, AgentId>> moves) {
    auto h = holders_now;
    for (auto [slot, who] : moves) h[slot] = who;
    tries.push_back({pc, h});
  };

  if (!state.slots[s2].complete()) {
    AgentId definer = detail::cut_definer(state, s2, k2);
    if (definer == j) propose(PermutationCase::SwapWithCompetitor, {{sj, k2}, {s2, j}});
    if (definer == k3) {
      propose(PermutationCase::ThirdTakesCompetitors, {{s2, k3}, {sj, k2}, {s3, j}});
      propose(PermutationCase::ThirdTakesCompetitors, {{s2, k3}, {sj, k2}, {sc, j}, {s3, c}});
    }
  } else {
    auto ref = state.reference_piece.find(j);
    if (ref != state.reference_piece.end()) {
      AgentId ref_holder = state.slots[ref->second].holder;
      if (ref_holder == k2) propose(PermutationCase::SwapWithReference, {{sj, k2}, {s2, j}});
      if (ref_holder == c)
        propose(PermutationCase::CutterFreesReference, {{s2, c}, {sc, j}, {sj, k2}});
      if (ref_holder == k3) {
        propose(PermutationCase::ThirdFreesReference, {{s2, k3}, {s3, j}, {sj, k2}, {sc, c}});
        propose(PermutationCase::ThirdFreesReference, {{sc, k3}, {s3, j}, {sj, k2}, {s2, c}});
      }
    }
  }
  std::array<AgentId, 4> perm{c, j, k2, k3};
  std::sort(perm.begin(), perm.end());
  do tries.push_back({PermutationCase::Other, perm});
  while (std::next_permutation(perm.begin(), perm.end()));

  for (const auto& [pc, holders] : tries) {
    CoreOutcome cand = detail::with_holders(state, holders);
    if (!permutation_valid(state, cand, j)) continue;
    if (accept && !accept(cand)) continue;
    return {std::move(cand), pc};
  }
  fail(ErrorKind::InternalInvariantViolation, "no valid reassignment of the significant piece");
}

}  // namespace envy4

#pragma once

// One quartering-and-trimming round for four agents.
//
// The cutter splits the cake into four pieces of equal value to him. The
// other three value all four pieces; if each can get a distinct favourite the
// round ends with a complete allocation. Otherwise every non-cutter trims his
// two best pieces from the left down to the value of his third best, and the
// trim pattern decides whether somebody must re-trim his favourite down to
// his second best, or choose between two pieces he trimmed most.
//
// Every answer is kept as a fact "agent a values the part of piece b right of
// x at exactly v". Those facts give each agent a lower bound on his own share
// and an upper bound on every other share, and an allocation is accepted only
// when the bounds prove it envy-free. Cut points are restricted to the left
// edge of a piece and to effective trims on it; a piece goes to its holder
// from the rightmost mark that some other agent needs.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "envy4/context.hpp"
#include "envy4/error.hpp"
#include "envy4/protocols/basic.hpp"
#include "envy4/verify.hpp"

namespace envy4 {

/// Queries one core run may use, counting the cutter's first evaluation.
inline constexpr std::uint64_t kCoreQueryBudget = 26;

enum class CoreCase {
  Matching,             // every non-cutter gets a favourite
  PairedTriangle,       // ij|jk|ik
  SharedPair,           // ijk|ijk
  OneSingle,            // i|ijk|jk
  TwoSingles,           // jk|ik|i|j
  TwoSinglesSameAgent,  // ij|ij|k|k, handled with TwoSingles
  ThreeSingles,         // 1|2|3|123
};

inline std::string to_string(CoreCase c) {
  switch (c) {
    case CoreCase::Matching: return "matching";
    case CoreCase::PairedTriangle: return "ij|jk|ik";
    case CoreCase::SharedPair: return "ijk|ijk";
    case CoreCase::OneSingle: return "i|ijk|jk";
    case CoreCase::TwoSingles: return "jk|ik|i|j";
    case CoreCase::TwoSinglesSameAgent: return "ij|ij|k|k";
    case CoreCase::ThreeSingles: return "1|2|3|123";
  }
  return "?";
}

enum class TargetRank { Second, Third };

inline std::string to_string(TargetRank r) { return r == TargetRank::Second ? "second" : "third"; }

struct TrimRecord {
  int piece_id = 0;
  AgentId agent = 0;
  Ratio point;
  TargetRank target_rank = TargetRank::Third;
  Ratio target;
  bool effective = true;
};

/// "agent values the part of piece right of point at exactly value".
struct Fact {
  AgentId agent;
  int piece;
  Ratio point;
  Ratio value;
};

class RunKnowledge {
 public:
  RunKnowledge() = default;
  RunKnowledge(AgentId cutter, Ratio share, std::array<Piece, 4> pieces)
      : cutter_(cutter), share_(std::move(share)), pieces_(std::move(pieces)) {
    for (int b = 0; b < 4; ++b) learn({cutter_, b, pieces_[b].left_edge(), share_});
  }

  AgentId cutter() const { return cutter_; }
  const Ratio& share() const { return share_; }
  const std::array<Piece, 4>& pieces() const { return pieces_; }
  const std::vector<Fact>& facts() const { return facts_; }

  void learn(Fact f) { facts_.push_back(std::move(f)); }

  /// Best known lower bound on a's value of piece b right of x.
  Ratio lower(AgentId a, int b, const Ratio& x) const {
    Ratio lo;
    for (const auto& f : facts_)
      if (f.agent == a && f.piece == b && f.point >= x) lo = max(lo, f.value);
    return lo;
  }

  /// Best known upper bound, if any fact bounds it.
  std::optional<Ratio> upper(AgentId a, int b, const Ratio& x) const {
    std::optional<Ratio> hi;
    for (const auto& f : facts_)
      if (f.agent == a && f.piece == b && f.point <= x) hi = hi ? min(*hi, f.value) : f.value;
    return hi;
  }

  std::optional<Ratio> exact(AgentId a, int b, const Ratio& x) const {
    for (const auto& f : facts_)
      if (f.agent == a && f.piece == b && f.point == x) return f.value;
    return std::nullopt;
  }

  Ratio whole(AgentId a, int b) const {
    auto v = exact(a, b, pieces_[b].left_edge());
    ensure(v.has_value(), ErrorKind::InternalInvariantViolation, "piece value not known");
    return *v;
  }

 private:
  AgentId cutter_ = 0;
  Ratio share_;
  std::array<Piece, 4> pieces_;
  std::vector<Fact> facts_;
};

struct Slot {
  AgentId holder = 0;
  Ratio cut;  // left edge when the piece is given whole
  Piece kept;
  Piece removed;

  bool complete() const { return removed.empty(); }
};

struct Bonus {
  Piece piece;  // slice between the holder's own trim and the cut point
  Ratio value;  // surplus over the best other share, from the holder's view
};

struct CoreOutcome {
  AgentId cutter = 0;
  std::array<AgentId, 3> others{};
  Piece cake;
  RunKnowledge knowledge;
  CoreCase core_case = CoreCase::Matching;
  std::array<Slot, 4> slots;  // indexed by piece id
  std::vector<TrimRecord> trims;
  std::map<AgentId, int> reference_piece;  // piece whose value the agent trimmed down to
  std::set<AgentId> retrimmed;
  std::set<AgentId> choosers;
  std::set<AgentId> significant_holders;
  std::array<std::optional<Ratio>, 4> removed_value;  // cutter's value of each trimmed-away part
  std::map<AgentId, Bonus> bonus;
  std::uint64_t queries = 0;
  std::uint64_t cuts = 0;

  const std::array<Piece, 4>& quarters() const { return knowledge.pieces(); }

  int slot_of(AgentId a) const {
    for (int b = 0; b < 4; ++b)
      if (slots[b].holder == a) return b;
    fail(ErrorKind::InternalInvariantViolation, "agent holds no slot");
  }

  Allocation allocation() const {
    Allocation out;
    for (const auto& s : slots) out[s.holder] = s.kept;
    return out;
  }

  Piece residue() const {
    Piece r;
    for (const auto& s : slots) r = r.unite(s.removed);
    return r;
  }

  int partial_count() const {
    int n = 0;
    for (const auto& s : slots) n += !s.complete();
    return n;
  }

  std::vector<AgentId> agents() const { return {others[0], others[1], others[2], cutter}; }

  /// Lower bound on a's value of his own share in this run.
  Ratio own_lower(AgentId a) const {
    int b = slot_of(a);
    return knowledge.lower(a, b, slots[b].cut);
  }

  /// Upper bound on a's value of k's share in this run.
  Ratio other_upper(AgentId a, AgentId k) const {
    int b = slot_of(k);
    auto u = knowledge.upper(a, b, slots[b].cut);
    ensure(u.has_value(), ErrorKind::InternalInvariantViolation, "unbounded share value");
    return *u;
  }

  /// Known lower bound on V_a(own) - V_a(k's share).
  Ratio margin(AgentId a, AgentId k) const { return own_lower(a) - other_upper(a, k); }

  const TrimRecord* effective_trim(AgentId a, int b) const {
    for (const auto& t : trims)
      if (t.effective && t.agent == a && t.piece_id == b) return &t;
    return nullptr;
  }

  json to_json() const {
    json slots_j = json::array();
    for (int b = 0; b < 4; ++b)
      slots_j.push_back({{"piece_id", b},
                         {"holder", slots[b].holder},
                         {"cut", slots[b].cut},
                         {"kept", slots[b].kept},
                         {"removed", slots[b].removed}});
    json trims_j = json::array();
    for (const auto& t : trims)
      trims_j.push_back({{"piece_id", t.piece_id},
                         {"agent", t.agent},
                         {"point", t.point},
                         {"target_rank", to_string(t.target_rank)},
                         {"target", t.target},
                         {"effective", t.effective}});
    json bonus_j = json::object();
    for (const auto& [a, bn] : bonus)
      bonus_j[std::to_string(a)] = {{"piece", bn.piece}, {"value", bn.value}};
    return json{{"cutter", cutter},
                {"case", to_string(core_case)},
                {"quarters", quarters()},
                {"slots", slots_j},
                {"trims", trims_j},
                {"retrimmed", retrimmed},
                {"significant_holders", significant_holders},
                {"bonus", bonus_j},
                {"residue", residue()},
                {"queries", queries},
                {"cuts", cuts}};
  }
};

namespace detail {

struct CoreAssignment {
  std::array<int, 4> piece{};  // piece for others[0..2], then the cutter
  std::array<Ratio, 4> cut;    // per piece id
  int complete_others = 0;
};

inline std::vector<Ratio> cut_candidates(const CoreOutcome& o, int b) {
  std::vector<Ratio> pts{o.quarters()[b].left_edge()};
  for (const auto& t : o.trims)
    if (t.effective && t.piece_id == b) pts.push_back(t.point);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Raises cut points until every agent's known share dominates his known
/// bound on every other share. Returns nullopt when some agent's demand
/// cannot be met by any available mark.
inline std::optional<CoreAssignment> settle(const CoreOutcome& o, const std::array<int, 4>& perm,
                                            const std::array<std::vector<Ratio>, 4>& cands) {
  const auto& K = o.knowledge;
  std::array<std::size_t, 4> idx{};
  std::array<Ratio, 3> floor;
  for (bool changed = true; changed;) {
    changed = false;
    for (int m = 0; m < 3; ++m) floor[m] = K.lower(o.others[m], perm[m], cands[perm[m]][idx[perm[m]]]);
    for (int b = 0; b < 4; ++b) {
      for (int m = 0; m < 3; ++m) {
        if (perm[m] == b) continue;
        for (;;) {
          auto u = K.upper(o.others[m], b, cands[b][idx[b]]);
          if (u && *u <= floor[m]) break;
          if (idx[b] + 1 == cands[b].size()) return std::nullopt;
          ++idx[b];
          changed = true;
        }
      }
    }
    if (idx[perm[3]] != 0) return std::nullopt;
  }
  CoreAssignment a;
  a.piece = perm;
  for (int b = 0; b < 4; ++b) a.cut[b] = cands[b][idx[b]];
  for (int m = 0; m < 3; ++m) a.complete_others += idx[perm[m]] == 0;
  return a;
}

/// Best provably envy-free assignment with the cutter and at least one other
/// agent holding untouched pieces: most untouched pieces first, then the
/// first in lexicographic order of (piece of others[0], others[1], ...).
inline std::optional<CoreAssignment> solve_core(const CoreOutcome& o) {
  std::array<std::vector<Ratio>, 4> cands;
  for (int b = 0; b < 4; ++b) cands[b] = cut_candidates(o, b);
  std::array<int, 4> perm{0, 1, 2, 3};
  std::optional<CoreAssignment> best;
  do {
    auto a = settle(o, perm, cands);
    if (a && a->complete_others >= 1 && (!best || a->complete_others > best->complete_others))
      best = a;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline void apply(CoreOutcome& o, const CoreAssignment& a) {
  for (int m = 0; m < 4; ++m) {
    int b = a.piece[m];
    AgentId holder = m < 3 ? o.others[m] : o.cutter;
    const Piece& q = o.quarters()[b];
    o.slots[b] = {holder, a.cut[b], q.right_of(a.cut[b]), q.left_of(a.cut[b])};
  }
}

// Pieces in the agent's order of preference, ties to the lower piece id.
inline std::array<int, 4> ranking(const RunKnowledge& K, AgentId a) {
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return K.whole(a, x) > K.whole(a, y); });
  return order;
}

inline CoreCase classify(const CoreOutcome& o) {
  std::array<std::vector<AgentId>, 4> by_piece;
  for (const auto& t : o.trims)
    if (t.effective) by_piece[t.piece_id].push_back(t.agent);
  std::vector<int> singles;
  bool triple = false;
  for (int b = 0; b < 4; ++b) {
    if (by_piece[b].size() == 1) singles.push_back(b);
    if (by_piece[b].size() == 3) triple = true;
  }
  switch (singles.size()) {
    case 0: return triple ? CoreCase::SharedPair : CoreCase::PairedTriangle;
    case 1: return CoreCase::OneSingle;
    case 2:
      return by_piece[singles[0]][0] == by_piece[singles[1]][0] ? CoreCase::TwoSinglesSameAgent
                                                                : CoreCase::TwoSingles;
    case 3: return CoreCase::ThreeSingles;
    default: break;
  }
  fail(ErrorKind::InternalInvariantViolation, "trim pattern matches no case");
}

/// Agents asked to trim their favourite down to their second best, per case.
inline std::vector<AgentId> retrimmers(const CoreOutcome& o) {
  const auto& K = o.knowledge;
  auto top_value = [&](AgentId a) { return K.whole(a, ranking(K, a)[0]); };
  std::map<AgentId, std::vector<int>> singles_of;
  std::array<int, 4> count{};
  for (const auto& t : o.trims)
    if (t.effective) ++count[t.piece_id];
  for (const auto& t : o.trims)
    if (t.effective && count[t.piece_id] == 1) singles_of[t.agent].push_back(t.piece_id);

  std::vector<AgentId> out;
  switch (o.core_case) {
    case CoreCase::PairedTriangle: {
      // Two agents share a favourite a; the third agent k favours a piece that
      // is the second choice of one of them (j). The other one (i) and k
      // re-trim.
      std::map<int, std::vector<AgentId>> fans;
      for (AgentId a : o.others) fans[ranking(K, a)[0]].push_back(a);
      for (const auto& [piece, who] : fans) {
        if (who.size() != 2) continue;
        AgentId k = 0;
        for (AgentId a : o.others)
          if (a != who[0] && a != who[1]) k = a;
        int k_top = ranking(K, k)[0];
        AgentId i = ranking(K, who[0])[1] == k_top ? who[1] : who[0];
        out = {i, k};
        break;
      }
      break;
    }
    case CoreCase::SharedPair:
      break;
    case CoreCase::OneSingle:
    case CoreCase::TwoSingles:
    case CoreCase::TwoSinglesSameAgent:
    case CoreCase::ThreeSingles:
      for (const auto& [a, pieces] : singles_of) {
        bool holds_favourite = std::any_of(pieces.begin(), pieces.end(),
                                           [&](int b) { return K.whole(a, b) == top_value(a); });
        if (!holds_favourite) out.push_back(a);
      }
      if (out.size() == 3) {
        // All three compete for the triply trimmed piece. Two re-trims are
        // enough: keep the agent whose first trim there is leftmost.
        auto first_trim = [&](AgentId a) {
          for (const auto& t : o.trims)
            if (t.agent == a && t.piece_id != singles_of.at(a)[0]) return t.point;
          fail(ErrorKind::InternalInvariantViolation, "missing trim");
        };
        std::stable_sort(out.begin(), out.end(), [&](AgentId x, AgentId y) {
          return first_trim(x) < first_trim(y) || (first_trim(x) == first_trim(y) && x > y);
        });
        out.erase(out.begin());
      }
      break;
    case CoreCase::Matching:
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline const TrimRecord* rightmost(const CoreOutcome& o, int b, AgentId excluding = 0) {
  const TrimRecord* best = nullptr;
  for (const auto& t : o.trims) {
    if (!t.effective || t.piece_id != b || t.agent == excluding) continue;
    if (!best || t.point > best->point || (t.point == best->point && t.agent < best->agent))
      best = &t;
  }
  return best;
}

struct Unknown {
  AgentId agent;
  int piece;
  Ratio point;
};

/// Same fixed point as settle(), but reading every uncertain value in the
/// most favourable way. Returns the facts the allocation still depends on,
/// or nullopt if even the optimistic reading fails.
inline std::optional<std::vector<Unknown>> optimistic_gaps(
    const CoreOutcome& o, const std::array<int, 4>& perm,
    const std::array<std::vector<Ratio>, 4>& cands) {
  const auto& K = o.knowledge;
  auto hi = [&](AgentId a, int b, const Ratio& x) { return *K.upper(a, b, x); };
  std::array<std::size_t, 4> idx{};
  for (bool changed = true; changed;) {
    changed = false;
    for (int b = 0; b < 4; ++b)
      for (int m = 0; m < 3; ++m) {
        if (perm[m] == b) continue;
        while (K.lower(o.others[m], b, cands[b][idx[b]]) >
               hi(o.others[m], perm[m], cands[perm[m]][idx[perm[m]]])) {
          if (idx[b] + 1 == cands[b].size()) return std::nullopt;
          ++idx[b];
          changed = true;
        }
      }
    if (idx[perm[3]] != 0) return std::nullopt;
  }
  std::vector<Unknown> gaps;
  auto add = [&](AgentId a, int b, const Ratio& x) {
    if (K.exact(a, b, x)) return;
    for (const auto& g : gaps)
      if (g.agent == a && g.piece == b && g.point == x) return;
    gaps.push_back({a, b, x});
  };
  int complete = 0;
  for (int m = 0; m < 3; ++m) {
    AgentId a = o.others[m];
    const Ratio& own_x = cands[perm[m]][idx[perm[m]]];
    complete += idx[perm[m]] == 0;
    for (int b = 0; b < 4; ++b) {
      if (b == perm[m]) continue;
      const Ratio& x = cands[b][idx[b]];
      if (hi(a, b, x) <= K.lower(a, perm[m], own_x)) continue;
      add(a, b, x);
      add(a, perm[m], own_x);
    }
  }
  if (complete == 0) return std::nullopt;
  return gaps;
}

/// Unknown value whose answer may complete the allocation needing the fewest
/// further answers.
inline std::optional<Unknown> next_unknown(const CoreOutcome& o) {
  std::array<std::vector<Ratio>, 4> cands;
  for (int b = 0; b < 4; ++b) cands[b] = cut_candidates(o, b);
  std::array<int, 4> perm{0, 1, 2, 3};
  std::optional<std::vector<Unknown>> best;
  do {
    auto g = optimistic_gaps(o, perm, cands);
    if (g && !g->empty() && (!best || g->size() < best->size())) best = g;
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (!best) return std::nullopt;
  return best->front();
}

}  // namespace detail

/// Runs the core protocol on `cake`. `known_total` is the cutter's value of
/// the cake when an earlier answer already fixed it (saves the first query).
inline CoreOutcome core_protocol(Context& ctx, AgentId cutter, std::array<AgentId, 3> others,
                                 const Piece& cake, std::optional<Ratio> known_total = {}) {
  ensure(!cake.empty(), ErrorKind::PreconditionViolated, "core protocol on an empty cake");
  const auto q0 = ctx.rw.transcript().query_count();
  const auto c0 = ctx.rw.transcript().cut_count();
  std::sort(others.begin(), others.end());

  Ratio total = known_total ? *known_total : ctx.rw.ask_eval(cutter, cake);
  Ratio share = total / Ratio(4);
  std::array<Ratio, 3> marks;
  for (int k = 0; k < 3; ++k) marks[k] = ctx.rw.ask_cut(cutter, cake, share * Ratio(k + 1));
  std::array<Piece, 4> pieces{cake.left_of(marks[0]), cake.between(marks[0], marks[1]),
                              cake.between(marks[1], marks[2]), cake.right_of(marks[2])};

  CoreOutcome o;
  o.cutter = cutter;
  o.others = others;
  o.cake = cake;
  o.knowledge = RunKnowledge(cutter, share, pieces);
  ctx.trace.emit("quarters", {{"cutter", cutter}, {"marks", marks}, {"pieces", pieces}});

  std::vector<std::vector<Ratio>> values(3, std::vector<Ratio>(4));
  for (int m = 0; m < 3; ++m)
    for (int b = 0; b < 4; ++b) {
      values[m][b] = ctx.rw.ask_eval(others[m], pieces[b]);
      o.knowledge.learn({others[m], b, pieces[b].left_edge(), values[m][b]});
    }

  auto finish = [&] {
    o.queries = ctx.rw.transcript().query_count() - q0;
    o.cuts = ctx.rw.transcript().cut_count() - c0;
    ctx.hit("core.case." + to_string(o.core_case));
    ctx.trace.emit("core_allocation", o.to_json());
    return o;
  };

  if (auto match = top_piece_matching(values)) {
    o.core_case = CoreCase::Matching;
    std::array<bool, 4> used{};
    for (int m = 0; m < 3; ++m) {
      int b = (*match)[m];
      used[b] = true;
      o.slots[b] = {others[m], pieces[b].left_edge(), pieces[b], {}};
    }
    for (int b = 0; b < 4; ++b)
      if (!used[b]) o.slots[b] = {cutter, pieces[b].left_edge(), pieces[b], {}};
    return finish();
  }

  for (AgentId a : others) {
    auto order = detail::ranking(o.knowledge, a);
    Ratio target = o.knowledge.whole(a, order[2]);
    o.reference_piece[a] = order[2];
    for (int r = 0; r < 2; ++r) {
      int b = order[r];
      Ratio t = ctx.rw.ask_trim(a, pieces[b], target);
      o.trims.push_back({b, a, t, TargetRank::Third, target, true});
      o.knowledge.learn({a, b, t, target});
    }
  }
  o.core_case = detail::classify(o);
  ctx.trace.emit("trims", {{"case", to_string(o.core_case)}});

  auto solved = detail::solve_core(o);
  if (!solved) {
    for (AgentId a : detail::retrimmers(o)) {
      auto order = detail::ranking(o.knowledge, a);
      Ratio target = o.knowledge.whole(a, order[1]);
      Ratio t = ctx.rw.ask_trim(a, pieces[order[0]], target);
      for (auto& tr : o.trims)
        if (tr.agent == a) tr.effective = false;
      o.trims.push_back({order[0], a, t, TargetRank::Second, target, true});
      o.knowledge.learn({a, order[0], t, target});
      o.reference_piece[a] = order[1];
      o.retrimmed.insert(a);
      ctx.hit("core.retrim");
      ctx.trace.emit("retrim", {{"agent", a}, {"piece_id", order[0]}, {"point", t}});
    }
    solved = detail::solve_core(o);
  }
  if (!solved) {
    // Whoever holds the rightmost mark on a piece learns what he would get
    // from it, cut at the next mark. Agents leading on two pieces go first.
    std::vector<std::pair<AgentId, int>> asks;
    for (int pass = 0; pass < 2; ++pass)
      for (AgentId a : others) {
        std::vector<int> leads;
        for (int b = 0; b < 4; ++b) {
          auto* r = detail::rightmost(o, b);
          if (r && r->agent == a) leads.push_back(b);
        }
        if ((leads.size() >= 2) == (pass == 0))
          for (int b : leads) asks.push_back({a, b});
      }
    for (auto [a, b] : asks) {
      if (solved || ctx.rw.transcript().query_count() - q0 >= kCoreQueryBudget) break;
      auto* second = detail::rightmost(o, b, a);
      Ratio x = second ? second->point : pieces[b].left_edge();
      if (o.knowledge.exact(a, b, x)) continue;
      Ratio v = ctx.rw.ask_eval(a, pieces[b].right_of(x));
      o.knowledge.learn({a, b, x, v});
      o.choosers.insert(a);
      ctx.hit("core.choice");
      ctx.trace.emit("choice", {{"agent", a}, {"piece_id", b}, {"from", x}, {"value", v}});
      solved = detail::solve_core(o);
    }
    // Ask for the single value that brings some allocation closest to
    // being provably envy-free, until one is or the budget runs out.
    while (!solved && ctx.rw.transcript().query_count() - q0 < kCoreQueryBudget) {
      auto need = detail::next_unknown(o);
      if (!need) break;
      auto [a, b, x] = *need;
      Ratio v = ctx.rw.ask_eval(a, pieces[b].right_of(x));
      o.knowledge.learn({a, b, x, v});
      o.choosers.insert(a);
      ctx.hit("core.choice");
      ctx.trace.emit("choice", {{"agent", a}, {"piece_id", b}, {"from", x}, {"value", v}});
      solved = detail::solve_core(o);
    }
  }
  if (!solved)
    fail(ErrorKind::InternalInvariantViolation,
         "no envy-free core allocation for case " + to_string(o.core_case));
  detail::apply(o, *solved);
  return finish();
}

/// Cutter values every trimmed-away part (one Evaluate each). Holders of the
/// part he values most hold significant pieces; two holders only on ties.
inline std::set<AgentId> significant_pieces(Context& ctx, CoreOutcome& o) {
  Ratio best;
  for (int b = 0; b < 4; ++b) {
    const Slot& s = o.slots[b];
    if (s.complete()) continue;
    if (!o.removed_value[b]) {
      Ratio v = ctx.rw.ask_eval(o.cutter, s.removed);
      o.removed_value[b] = v;
      o.knowledge.learn({o.cutter, b, s.cut, o.knowledge.share() - v});
    }
    best = max(best, *o.removed_value[b]);
  }
  o.significant_holders.clear();
  for (int b = 0; b < 4; ++b)
    if (!o.slots[b].complete() && *o.removed_value[b] == best)
      o.significant_holders.insert(o.slots[b].holder);
  ctx.trace.emit("significant", {{"holders", o.significant_holders}, {"value", best}});
  return o.significant_holders;
}

/// Cutter's value of the residue, once significant_pieces has run.
inline std::optional<Ratio> residue_value_to_cutter(const CoreOutcome& o) {
  Ratio total;
  for (int b = 0; b < 4; ++b) {
    if (o.slots[b].complete()) continue;
    if (!o.removed_value[b]) return std::nullopt;
    total += *o.removed_value[b];
  }
  return total;
}

/// Values the holder's extra slice between his own trim and the cut point
/// (one Evaluate, skipped when already known). Complete holders and the
/// cutter get nothing extra.
inline Bonus measure_bonus(Context& ctx, CoreOutcome& o, AgentId a) {
  int b = o.slot_of(a);
  const Slot& s = o.slots[b];
  Bonus bn;
  const TrimRecord* t = o.effective_trim(a, b);
  // The cut can lie right of the holder's trim when an extra evaluation
  // showed that share is still enough for him; there is no slice then.
  if (!s.complete() && a != o.cutter && t && s.cut <= t->point) {
    bn.piece = o.quarters()[b].between(s.cut, t->point);
    if (auto known = o.knowledge.exact(a, b, s.cut)) {
      bn.value = *known - t->target;
    } else {
      bn.value = ctx.rw.ask_eval(a, bn.piece);
      o.knowledge.learn({a, b, s.cut, t->target + bn.value});
    }
  }
  o.bonus[a] = bn;
  return bn;
}

/// Ordinal guarantee the agent holds in this run: second best if he was
/// asked to re-trim his favourite, third best otherwise.
inline TargetRank guaranteed_rank(const CoreOutcome& o, AgentId a) {
  return o.retrimmed.count(a) ? TargetRank::Second : TargetRank::Third;
}

}  // namespace envy4

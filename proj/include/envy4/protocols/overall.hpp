#pragma once

// Complete envy-free division among four agents.
//
// Each agent in turn acts as cutter for up to five core runs on the
// leftover cake until he provably dominates two others; in between, if one
// agent kept receiving the significant piece, one run is reallocated. Once
// everybody dominates two agents (or nothing is left), the residue is handed
// out by post_double_domination.
//
// All reasoning about envy and domination uses only what the queries
// revealed (DominationLedger); verify.hpp then checks the result against the
// true valuations.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "envy4/protocols/core.hpp"
#include "envy4/protocols/permutation.hpp"
#include "envy4/protocols/post_dd.hpp"

namespace envy4 {

/// What the queries proved so far across all core runs.
class DominationLedger {
 public:
  explicit DominationLedger(std::vector<AgentId> agents, Piece cake)
      : agents_(std::move(agents)), residue_(std::move(cake)) {
    for (AgentId a : agents_) alloc_[a] = Piece{};
  }

  const std::vector<AgentId>& agents() const { return agents_; }
  const Allocation& allocation() const { return alloc_; }
  const Piece& residue() const { return residue_; }
  const std::vector<CoreOutcome>& runs() const { return runs_; }

  void commit(const CoreOutcome& o) {
    runs_.push_back(o);
    for (const auto& s : o.slots) alloc_[s.holder] = alloc_[s.holder].unite(s.kept);
    residue_ = o.residue();
    for (AgentId a : agents_) {
      Ratio ub;
      for (int b = 0; b < 4; ++b) {
        const Ratio left = o.quarters()[b].left_edge();
        ub += *o.knowledge.upper(a, b, left) - o.knowledge.lower(a, b, o.slots[b].cut);
      }
      auto& cur = residue_ub_[a];
      cur = cur ? min(*cur, ub) : ub;
    }
  }

  /// Swaps in a reallocated version of run `idx` (same cuts, new holders).
  void replace(std::size_t idx, CoreOutcome o) {
    runs_[idx] = std::move(o);
    for (AgentId a : agents_) alloc_[a] = Piece{};
    for (const auto& run : runs_)
      for (const auto& s : run.slots) alloc_[s.holder] = alloc_[s.holder].unite(s.kept);
  }

  Ratio margin(AgentId i, AgentId k) const {
    Ratio m;
    for (const auto& run : runs_) m += run.margin(i, k);
    return m;
  }

  std::optional<Ratio> residue_upper(AgentId a) const {
    auto it = residue_ub_.find(a);
    return it == residue_ub_.end() ? std::nullopt : it->second;
  }

  bool dominates(AgentId j, AgentId i) const {
    if (residue_.empty()) return true;
    auto ub = residue_upper(j);
    return ub && margin(j, i) >= *ub;
  }

  DominationGraph graph() const {
    DominationGraph g;
    for (AgentId j : agents_)
      for (AgentId i : agents_)
        if (i != j && dominates(j, i)) g.add(j, i);
    return g;
  }

  bool envy_free_known() const {
    for (AgentId i : agents_)
      for (AgentId k : agents_)
        if (i != k && margin(i, k) < Ratio(0)) return false;
    return true;
  }

  json to_json() const {
    json margins = json::object();
    for (AgentId i : agents_)
      for (AgentId k : agents_)
        if (i != k) margins[std::to_string(i) + "->" + std::to_string(k)] = margin(i, k);
    json ub = json::object();
    for (const auto& [a, v] : residue_ub_)
      if (v) ub[std::to_string(a)] = *v;
    return json{{"margins", margins}, {"residue_upper", ub}, {"graph", graph().to_json()}};
  }

 private:
  std::vector<AgentId> agents_;
  Allocation alloc_;
  Piece residue_;
  std::vector<CoreOutcome> runs_;
  std::map<AgentId, std::optional<Ratio>> residue_ub_;
};

struct OverallResult {
  Allocation allocation;
  DominationGraph graph;  // known dominations before the residue was handed out
  int core_runs = 0;
  int permutations = 0;
  std::vector<std::string> permutation_cases;
  std::string finish;  // post_double_domination branch, or "empty"
};

namespace detail {

inline void snapshot(Context& ctx, const DominationLedger& L) {
  ctx.snapshot = L.allocation();
  ctx.snapshot_residue = L.residue();
}

inline std::array<AgentId, 3> others_of(const std::vector<AgentId>& agents, AgentId c) {
  std::array<AgentId, 3> out{};
  int n = 0;
  for (AgentId a : agents)
    if (a != c) out[n++] = a;
  return out;
}

inline int known_out_degree(const DominationLedger& L, AgentId c) {
  int d = 0;
  for (AgentId a : L.agents()) d += a != c && L.dominates(c, a);
  return d;
}

/// Reallocates one of the phase's first four runs so that `j` no longer
/// holds its significant piece, without losing any proven envy-freeness or
/// domination. Returns the sub-case used, or nullopt if no row allows it.
inline std::optional<std::string> reallocate_monopoly(Context& ctx, DominationLedger& L,
                                                      const std::vector<std::size_t>& phase_runs,
                                                      AgentId j, OverallResult& res) {
  AgentId c = L.runs()[phase_runs[0]].cutter;
  auto others = others_of(L.agents(), c);
  const DominationGraph before = L.graph();
  BonusTable table{};
  for (int r = 0; r < 4; ++r) {
    CoreOutcome run = L.runs()[phase_runs[r]];
    for (int m = 0; m < 3; ++m) table[r][m] = measure_bonus(ctx, run, others[m]).value;
    L.replace(phase_runs[r], std::move(run));
  }
  int chosen = select_compromise_iteration(table);
  std::vector<int> rows{chosen};
  for (int r : brute_force_compromise_rows(table))
    if (r != chosen) rows.push_back(r);
  for (int r = 1; r <= 4; ++r)
    if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
  json table_j = json::array();
  for (const auto& row : table) table_j.push_back(json(std::vector<Ratio>(row.begin(), row.end())));
  ctx.trace.emit("bonus_table", {{"table", table_j}, {"row", chosen}, {"order", rows}});

  for (int row : rows) {
    std::size_t idx = phase_runs[row - 1];
    const CoreOutcome original = L.runs()[idx];
    if (!original.significant_holders.count(j)) continue;
    // Envy must stay provably absent, agents who already dominate two must
    // keep doing so, and the cutter must not lose ground.
    auto accept = [&](const CoreOutcome& cand) {
      DominationLedger trial = L;
      trial.replace(idx, cand);
      if (!trial.envy_free_known()) return false;
      for (AgentId a : L.agents())
        if (before.out_degree(a) >= 2 && known_out_degree(trial, a) < 2) return false;
      for (const auto& [a, b] : before.edges())
        if (a == c && !trial.dominates(a, b)) return false;
      return true;
    };
    try {
      auto pr = permutation_protocol(original, j, accept);
      L.replace(idx, pr.outcome);
      std::string label = to_string(pr.sub_case);
      ctx.hit("permutation." + label);
      ctx.hit(row == chosen ? "permutation.row.compromise" : "permutation.row.fallback");
      ctx.trace.emit("permutation", {{"row", row}, {"sub_case", label}, {"from", j},
                                     {"before", original.to_json()},
                                     {"run", pr.outcome.to_json()},
                                     {"allocation", allocation_to_json(L.allocation())},
                                     {"residue", L.residue()}});
      res.permutation_cases.push_back(label);
      ++res.permutations;
      return label;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InternalInvariantViolation) throw;
    }
  }
  ctx.hit("permutation.none");
  return std::nullopt;
}

inline std::set<AgentId> common_significant(const DominationLedger& L,
                                            const std::vector<std::size_t>& phase_runs) {
  std::set<AgentId> common = L.runs()[phase_runs[0]].significant_holders;
  for (std::size_t k = 1; k < phase_runs.size(); ++k) {
    std::set<AgentId> next;
    for (AgentId a : L.runs()[phase_runs[k]].significant_holders)
      if (common.count(a)) next.insert(a);
    common = std::move(next);
  }
  return common;
}

/// Runs cutter c's phase: up to five core runs until c provably dominates
/// two agents or the cake is gone.
inline void cutter_phase(Context& ctx, DominationLedger& L, AgentId c, OverallResult& res) {
  auto others = others_of(L.agents(), c);
  std::vector<std::size_t> phase_runs;
  std::optional<Ratio> known_total;
  auto run_core = [&](int iteration, bool measure) {
    ctx.trace.set_phase("cutter_phase", c, iteration);
    CoreOutcome o = core_protocol(ctx, c, others, L.residue(), known_total);
    ++res.core_runs;
    if (measure && !o.residue().empty()) {
      significant_pieces(ctx, o);
      known_total = residue_value_to_cutter(o);
    } else {
      known_total.reset();
    }
    L.commit(o);
    phase_runs.push_back(L.runs().size() - 1);
    snapshot(ctx, L);
    ctx.trace.emit("ledger", L.to_json());
  };
  auto done = [&] { return L.residue().empty() || known_out_degree(L, c) >= 2; };

  for (int it = 1; it <= 4 && !done(); ++it) run_core(it, true);
  if (done()) return;

  auto common = common_significant(L, phase_runs);
  for (AgentId j : common) {
    if (reallocate_monopoly(ctx, L, phase_runs, j, res)) break;
  }
  snapshot(ctx, L);
  if (done()) return;
  run_core(5, false);
  if (!done())
    fail(ErrorKind::InternalInvariantViolation,
         "cutter " + std::to_string(c) + " does not dominate two agents after five runs");
}

}  // namespace detail

/// Agents act as cutter from the highest id down.
inline OverallResult overall_protocol(Context& ctx, std::vector<AgentId> agents,
                                      const Piece& cake = Piece::whole()) {
  std::sort(agents.begin(), agents.end());
  ensure(agents.size() == 4 && std::adjacent_find(agents.begin(), agents.end()) == agents.end(),
         ErrorKind::PreconditionViolated, "four distinct agents required");
  OverallResult res;
  DominationLedger L(agents, cake);
  detail::snapshot(ctx, L);

  std::vector<AgentId> order(agents.rbegin(), agents.rend());
  for (AgentId c : order) {
    if (L.residue().empty()) break;
    if (detail::known_out_degree(L, c) >= 2) {
      ctx.hit("phase.skipped");
      continue;
    }
    ctx.hit("phase.run");
    detail::cutter_phase(ctx, L, c, res);
  }
  res.graph = L.graph();
  ctx.trace.set_phase("post_double_domination", 0, 0);
  res.allocation = post_double_domination(ctx, L.allocation(), L.residue(), res.graph, agents);
  res.finish = L.residue().empty() ? "empty" : to_string(plan_post_double_domination(res.graph, agents)->branch);
  ctx.snapshot = res.allocation;
  ctx.snapshot_residue = Piece{};
  ctx.trace.emit("final", {{"allocation", allocation_to_json(res.allocation)}});
  return res;
}

/// Two core runs with the same cutter, the first followed by the cutter's
/// valuation of what was trimmed away. Afterwards the cutter dominates the
/// holder of the first run's significant piece.
struct SingleDomination {
  Allocation allocation;
  Piece residue;
  std::set<AgentId> significant_holders;
};

inline SingleDomination single_domination_protocol(Context& ctx, AgentId cutter,
                                                   std::array<AgentId, 3> others,
                                                   const Piece& cake = Piece::whole()) {
  std::vector<AgentId> agents{others.begin(), others.end()};
  agents.push_back(cutter);
  std::sort(agents.begin(), agents.end());
  DominationLedger L(agents, cake);
  CoreOutcome first = core_protocol(ctx, cutter, others, cake);
  SingleDomination out;
  if (!first.residue().empty()) out.significant_holders = significant_pieces(ctx, first);
  L.commit(first);
  if (!L.residue().empty()) L.commit(core_protocol(ctx, cutter, others, L.residue(),
                                                   residue_value_to_cutter(first)));
  out.allocation = L.allocation();
  out.residue = L.residue();
  return out;
}

}  // namespace envy4

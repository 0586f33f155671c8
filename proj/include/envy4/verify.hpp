#pragma once

/**
 * @file verify.hpp
 * @brief Certification oracles.
 *
 * Everything here reads valuations directly (white-box) and never goes
 * through a QuerySession, so certification does not disturb query counts.
 * The oracles only look at allocations, residues and specs; they do not
 * consult protocol bookkeeping.
 */

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "envy4/bonus_table.hpp"
#include "envy4/error.hpp"
#include "envy4/json_io.hpp"
#include "envy4/piece.hpp"
#include "envy4/query.hpp"
#include "envy4/valuation.hpp"

namespace envy4 {

using Allocation = std::map<AgentId, Piece>;
using Profile = std::map<AgentId, ValuationSpec>;

// Allocations and profiles travel as objects keyed by agent id:
// {"1": [[l,r],...], ...} and {"1": {"breakpoints":..., "densities":...}, ...}.

template <class T>
json keyed_to_json(const std::map<AgentId, T>& m) {
  json j = json::object();
  for (const auto& [a, v] : m) j[std::to_string(a)] = v;
  return j;
}

template <class T>
std::map<AgentId, T> keyed_from_json(const json& j) {
  ensure(j.is_object(), ErrorKind::ParseError, "expected an object keyed by agent id");
  std::map<AgentId, T> m;
  for (const auto& [k, v] : j.items()) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    ensure(used == k.size() && id >= 1, ErrorKind::ParseError, "bad agent id '" + k + "'");
    m[id] = v.template get<T>();
  }
  return m;
}

inline json allocation_to_json(const Allocation& a) { return keyed_to_json(a); }
inline Allocation allocation_from_json(const json& j) { return keyed_from_json<Piece>(j); }
inline json profile_to_json(const Profile& p) { return keyed_to_json(p); }
inline Profile profile_from_json(const json& j) { return keyed_from_json<ValuationSpec>(j); }

struct EnvyWitness {
  AgentId envious;
  AgentId envied;
  Ratio own_value;
  Ratio other_value;
};

struct EnvyReport {
  bool envy_free = true;
  std::vector<EnvyWitness> witnesses;

  json to_json() const {
    json w = json::array();
    for (const auto& x : witnesses)
      w.push_back({{"agent", x.envious},
                   {"envies", x.envied},
                   {"own_value", x.own_value},
                   {"other_value", x.other_value}});
    return json{{"envy_free", envy_free}, {"witnesses", w}};
  }
};

namespace detail {

inline void require_disjoint(const Allocation& alloc, const Piece* residue = nullptr) {
  for (auto a = alloc.begin(); a != alloc.end(); ++a) {
    for (auto b = std::next(a); b != alloc.end(); ++b)
      if (a->second.overlaps(b->second))
        fail(ErrorKind::OverlapDetected, "pieces of agents " + std::to_string(a->first) +
                                             " and " + std::to_string(b->first) + " overlap");
    if (residue && a->second.overlaps(*residue))
      fail(ErrorKind::OverlapDetected,
           "piece of agent " + std::to_string(a->first) + " overlaps the residue");
  }
}

inline const ValuationSpec& spec_of(const Profile& specs, AgentId a) {
  auto it = specs.find(a);
  ensure(it != specs.end(), ErrorKind::PreconditionViolated,
         "no valuation for agent " + std::to_string(a));
  return it->second;
}

inline Piece piece_of(const Allocation& alloc, AgentId a) {
  auto it = alloc.find(a);
  return it == alloc.end() ? Piece{} : it->second;
}

}  // namespace detail

/// Exact pairwise envy check over every agent in specs.
inline EnvyReport check_envy_free(const Allocation& alloc, const Profile& specs) {
  detail::require_disjoint(alloc);
  EnvyReport r;
  for (const auto& [i, vi] : specs) {
    Ratio own = eval_piece(vi, detail::piece_of(alloc, i));
    for (const auto& [j, _] : specs) {
      if (i == j) continue;
      Ratio other = eval_piece(vi, detail::piece_of(alloc, j));
      if (other > own) r.witnesses.push_back({i, j, own, other});
    }
  }
  r.envy_free = r.witnesses.empty();
  return r;
}

/// j dominates i: j stays envy-free towards i even if i also got the residue.
inline bool check_domination(AgentId j, AgentId i, const Allocation& alloc, const Piece& residue,
                             const Profile& specs) {
  detail::require_disjoint(alloc, &residue);
  const auto& vj = detail::spec_of(specs, j);
  return eval_piece(vj, detail::piece_of(alloc, j)) >=
         eval_piece(vj, detail::piece_of(alloc, i)) + eval_piece(vj, residue);
}

/// Directed "j dominates i" relation over agents.
class DominationGraph {
 public:
  void add(AgentId j, AgentId i) { edges_.insert({j, i}); }
  bool has(AgentId j, AgentId i) const { return edges_.count({j, i}) != 0; }
  const std::set<std::pair<AgentId, AgentId>>& edges() const { return edges_; }

  int out_degree(AgentId j) const {
    int d = 0;
    for (const auto& e : edges_) d += e.first == j;
    return d;
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& [j, i] : edges_) arr.push_back(json::array({j, i}));
    return arr;
  }

 private:
  std::set<std::pair<AgentId, AgentId>> edges_;
};

inline DominationGraph domination_graph(const Allocation& alloc, const Piece& residue,
                                        const Profile& specs) {
  DominationGraph g;
  for (const auto& [j, _] : specs)
    for (const auto& [i, __] : specs)
      if (i != j && check_domination(j, i, alloc, residue, specs)) g.add(j, i);
  return g;
}

struct CoreReport {
  bool partial_envy_free = false;
  bool cutter_complete = false;
  bool non_cutter_complete = false;
  bool at_most_two_partial = false;
  bool conservation = false;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }

  json to_json() const {
    return json{{"partial_envy_free", partial_envy_free},
                {"cutter_complete", cutter_complete},
                {"non_cutter_complete", non_cutter_complete},
                {"at_most_two_partial", at_most_two_partial},
                {"conservation", conservation},
                {"failures", failures}};
  }
};

/// Postconditions of one core run: the allocation is envy-free, the cutter and
/// at least one other agent hold one of the cutter's pieces untouched, at most
/// two pieces were trimmed, and allocation plus residue is exactly the cake.
inline CoreReport check_core_postconditions(AgentId cutter, const std::vector<Piece>& quarters,
                                            const Allocation& alloc, const Piece& residue,
                                            const Piece& cake, const Profile& specs) {
  CoreReport r;
  auto note = [&](bool ok, const char* what) {
    if (!ok) r.failures.emplace_back(what);
    return ok;
  };
  auto is_quarter = [&](const Piece& p) {
    for (const auto& q : quarters)
      if (q == p) return true;
    return false;
  };

  bool disjoint = true;
  try {
    detail::require_disjoint(alloc, &residue);
  } catch (const Error&) {
    disjoint = false;
  }
  r.partial_envy_free = note(disjoint && check_envy_free(alloc, specs).envy_free,
                             "allocation is not envy-free");
  r.cutter_complete = note(is_quarter(detail::piece_of(alloc, cutter)), "cutter piece incomplete");
  int complete_others = 0, partial = 0;
  for (const auto& [a, p] : alloc) {
    bool full = is_quarter(p);
    if (a != cutter && full) ++complete_others;
    if (!full) ++partial;
  }
  r.non_cutter_complete = note(complete_others >= 1, "no non-cutter holds a complete piece");
  r.at_most_two_partial = note(partial <= 2, "more than two partial pieces");
  Piece all = residue;
  Ratio total_len = residue.length();
  for (const auto& [_, p] : alloc) {
    all = all.unite(p);
    total_len += p.length();
  }
  r.conservation = note(disjoint && all == cake && total_len == cake.length(),
                        "allocation and residue do not partition the cake");
  return r;
}

/// Rows in which every entry is at most the sum of the other entries of its
/// column, found by direct enumeration. Row indices are 1-based.
inline std::set<int> brute_force_compromise_rows(const BonusTable& t) {
  std::set<int> rows;
  for (int r = 0; r < 4; ++r) {
    bool ok = true;
    for (int c = 0; c < 3 && ok; ++c) {
      Ratio others;
      for (int s = 0; s < 4; ++s)
        if (s != r) others += t[s][c];
      ok = t[r][c] <= others;
    }
    if (ok) rows.insert(r + 1);
  }
  return rows;
}

}  // namespace envy4

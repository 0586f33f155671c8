// Acceptance gate: one PASS/FAIL line per top-level guarantee, exit status 1
// if any fails. Every check recomputes values from the true valuations with
// the test-side integration oracle.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "envy4/harness.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

bool envy_free(const Allocation& a, const Profile& p) {
  for (const auto& [i, own] : a) {
    Ratio mine = oracle_value(p.at(i), own);
    for (const auto& [k, other] : a)
      if (i != k && oracle_value(p.at(i), other) > mine) return false;
  }
  return true;
}

bool complete(const Allocation& a) {
  Piece all;
  Ratio len;
  for (const auto& [_, pc] : a) all = all.unite(pc), len += pc.length();
  return all == Piece::whole() && len == R(1);
}

// ---------------------------------------------------------------- campaign

struct PermutationStats {
  long fired = 0;
  long moved = 0;
  long promises_kept = 0;
  long envy_free_after = 0;
};

struct CampaignStats {
  long trials = 0;
  std::uint64_t max_queries = 0, max_cuts = 0;
  long envy_free = 0, complete = 0, errors = 0;
  long core_runs = 0, core_over_budget = 0;
  std::uint64_t core_max_queries = 0, core_max_cuts = 0;
  PermutationStats perm;
  std::string first_problem;
};

Piece slot_kept(const json& run, AgentId a) {
  for (const auto& s : run["slots"])
    if (s["holder"].get<AgentId>() == a) return s["kept"].get<Piece>();
  return {};
}

// Checks one reallocation event against the true valuations.
void check_permutation(const json& ev, const Profile& p, PermutationStats& st) {
  ++st.fired;
  const json& before = ev["before"];
  const json& after = ev["run"];
  const AgentId from = ev["from"];
  bool moved = true;
  for (std::size_t b = 0; b < 4; ++b)
    if (before["slots"][b]["holder"].get<AgentId>() == from)
      moved = moved && after["slots"][b]["holder"].get<AgentId>() != from;
  st.moved += moved;

  bool kept = true;
  const AgentId cutter = before["cutter"];
  for (const auto& [a, v] : p) {
    Ratio had = oracle_value(v, slot_kept(before, a));
    Ratio promised = had;
    if (a != cutter)
      for (const auto& t : before["trims"])
        if (t["effective"].get<bool>() && t["agent"].get<AgentId>() == a)
          promised = min(t["target"].get<Ratio>(), had);
    kept = kept && oracle_value(v, slot_kept(after, a)) >= promised;
  }
  st.promises_kept += kept;
  st.envy_free_after += envy_free(allocation_from_json(ev["allocation"]), p);
}

void inspect(const ProfileRun& run, const Profile& p, CampaignStats& st) {
  ++st.trials;
  const auto& r = run.record;
  st.max_queries = std::max(st.max_queries, r.queries);
  st.max_cuts = std::max(st.max_cuts, r.cuts);
  if (!r.error.empty()) {
    ++st.errors;
    if (st.first_problem.empty()) st.first_problem = r.label + ": " + r.error;
    return;
  }
  bool ef = envy_free(run.allocation, p), co = complete(run.allocation);
  st.envy_free += ef;
  st.complete += co;
  if ((!ef || !co) && st.first_problem.empty()) st.first_problem = r.label;
  for (const auto& e : run.ctx.trace.events()) {
    if (e.kind == "core_allocation") {
      ++st.core_runs;
      std::uint64_t q = e.payload["queries"], c = e.payload["cuts"];
      st.core_max_queries = std::max(st.core_max_queries, q);
      st.core_max_cuts = std::max(st.core_max_cuts, c);
      st.core_over_budget += q > 26 || c > 11;
    } else if (e.kind == "permutation") {
      check_permutation(e.payload, p, st.perm);
    }
  }
}

std::string counts(long a, long b) { return std::to_string(a) + "/" + std::to_string(b); }

void four_agent_campaign() {
  TrialConfig cfg;
  cfg.seed = 20240;
  const long n = 1200;
  CampaignStats st;
  for (long t = 0; t < n; ++t) {
    std::uint64_t s = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(t);
    Profile p = trial_profile(cfg, s);
    inspect(run_profile(p, ProtocolKind::FourAgent, "seed:" + std::to_string(s), s), p, st);
  }
  for (const auto& [name, p] : adversarial_profiles(ProtocolKind::FourAgent))
    inspect(run_profile(p, ProtocolKind::FourAgent, name), p, st);

  report(st.trials >= 1000 && st.max_cuts <= 203 && st.max_queries <= 584, "budget",
         std::to_string(st.trials) + " profiles, max cuts " + std::to_string(st.max_cuts) +
             " (<= 203), max queries " + std::to_string(st.max_queries) + " (<= 584)");
  report(st.errors == 0 && st.envy_free == st.trials && st.complete == st.trials, "envy_free_and_complete",
         "envy-free " + counts(st.envy_free, st.trials) + ", complete " + counts(st.complete, st.trials) +
             (st.first_problem.empty() ? "" : ", first problem " + st.first_problem));
  report(st.core_runs > 0 && st.core_over_budget == 0, "per_core_budget",
         std::to_string(st.core_runs) + " core runs inside campaigns, max cuts " +
             std::to_string(st.core_max_cuts) + " (<= 11), max queries " +
             std::to_string(st.core_max_queries) + " (<= 26)");
  const auto& pm = st.perm;
  report(pm.fired > 0 && pm.moved == pm.fired && pm.promises_kept == pm.fired &&
             pm.envy_free_after == pm.fired,
         "permutation",
         std::to_string(pm.fired) + " reallocations: piece moved " + counts(pm.moved, pm.fired) +
             ", promises kept " + counts(pm.promises_kept, pm.fired) + ", envy-free afterwards " +
             counts(pm.envy_free_after, pm.fired));
}

// ------------------------------------------------------------- core lemma

void core_lemma() {
  const long n = 10000;
  long ok = 0, within = 0;
  std::string first;
  const Piece gappy = piece({{R(0), R(1, 5)}, {R(2, 5), R(3, 5)}, {R(4, 5), R(1)}});
  for (long k = 1; k <= n; ++k) {
    const auto seed = static_cast<std::uint64_t>(k) * 7919u;
    Profile p = trial_profile(TrialConfig{}, seed);
    const AgentId cutter = static_cast<AgentId>(1 + k % 4);
    const Piece cake = k % 10 == 0 ? gappy : Piece::whole();
    Context ctx;
    add_simulated(ctx, p);
    try {
      CoreOutcome o = core_protocol(ctx, cutter, detail::others_of({1, 2, 3, 4}, cutter), cake);
      auto rep = check_core_postconditions(cutter, {o.quarters().begin(), o.quarters().end()},
                                           o.allocation(), o.residue(), cake, p);
      // Independent recheck of partial envy-freeness with the test oracle.
      bool ef = envy_free(o.allocation(), p);
      ok += rep.ok() && ef;
      within += o.cuts <= 11 && o.queries <= 26;
      if (!(rep.ok() && ef) && first.empty()) first = std::to_string(seed) + " " + rep.to_json().dump();
    } catch (const Error& e) {
      if (first.empty()) first = std::to_string(seed) + " " + e.what();
    }
  }
  report(ok == n && within == n, "core_postconditions",
         counts(ok, n) + " fuzzed core runs certified, " + counts(within, n) + " within 11 cuts / 26 queries" +
             (first.empty() ? "" : ", first problem " + first));
}

// ---------------------------------------------------- single domination

void single_domination() {
  const long n = 1000;
  long ok = 0, holders = 0;
  for (long k = 1; k <= n; ++k) {
    Profile p = trial_profile(TrialConfig{}, static_cast<std::uint64_t>(k) * 104729u);
    const AgentId cutter = static_cast<AgentId>(1 + k % 4);
    Context ctx;
    add_simulated(ctx, p);
    auto sd = single_domination_protocol(ctx, cutter, detail::others_of({1, 2, 3, 4}, cutter));
    bool all = true;
    for (AgentId j : sd.significant_holders) {
      ++holders;
      // cutter's value for own share minus j's share is at least the residue's value to him
      Ratio margin = oracle_value(p[cutter], sd.allocation[cutter]) - oracle_value(p[cutter], sd.allocation[j]);
      all = all && margin >= oracle_value(p[cutter], sd.residue) &&
            check_domination(cutter, j, sd.allocation, sd.residue, p);
    }
    ok += all;
  }
  report(ok == n && holders > 0, "single_domination",
         counts(ok, n) + " profiles, " + std::to_string(holders) + " significant holders dominated");
}

// --------------------------------------------------------- compromise row

void compromise_tables() {
  const std::array<Ratio, 4> small{R(0), R(1), R(2), R(3)};
  BonusTable t;
  long long bad = 0, total = 0;
  for (long code = 0; code < (1L << 24); ++code) {
    long c = code;
    for (auto& row : t)
      for (auto& x : row) x = small[c & 3], c >>= 2;
    auto rows = brute_force_compromise_rows(t);
    bad += rows.empty() || !rows.count(select_compromise_iteration(t));
    ++total;
  }
  std::mt19937_64 g(31337);
  long long bad_random = 0;
  const long random_tables = 10000;
  for (long k = 0; k < random_tables; ++k) {
    for (auto& row : t)
      for (auto& x : row)
        x = g() % 4 == 0 ? R(0) : Ratio(static_cast<long>(g() % 1000), static_cast<long>(1 + g() % 97));
    auto rows = brute_force_compromise_rows(t);
    bad_random += rows.empty() || !rows.count(select_compromise_iteration(t));
  }
  report(bad == 0 && bad_random == 0, "compromise_row",
         "all " + std::to_string(total) + " tables over {0,1,2,3}: " + std::to_string(bad) +
             " mismatches; " + std::to_string(random_tables) + " random rational tables: " +
             std::to_string(bad_random) + " mismatches");
}

// -------------------------------------------------------------- 3 agents

void three_agents() {
  TrialConfig cfg;
  cfg.protocol = ProtocolKind::ThreeAgent;
  const long n = 1000;
  long ok = 0;
  for (long k = 1; k <= n; ++k) {
    Profile p = trial_profile(cfg, static_cast<std::uint64_t>(k) * 15485863u);
    auto run = run_profile(p, ProtocolKind::ThreeAgent);
    ok += run.record.error.empty() && envy_free(run.allocation, p) && complete(run.allocation);
  }
  report(ok == n, "three_agent", counts(ok, n) + " profiles envy-free and complete");
}

// ------------------------------------------------------------ determinism

void determinism() {
  long same = 0, n = 0;
  for (std::uint64_t s : {1u, 77u, 4242u, 900001u, 31u, 8u}) {
    Profile p1 = trial_profile(TrialConfig{}, s), p2 = trial_profile(TrialConfig{}, s);
    auto a = run_profile(p1, ProtocolKind::FourAgent), b = run_profile(p2, ProtocolKind::FourAgent);
    same += a.ctx.rw.transcript().to_json().dump() == b.ctx.rw.transcript().to_json().dump() &&
            a.ctx.trace.to_json().dump() == b.ctx.trace.to_json().dump();
    ++n;
  }
  TrialConfig cfg;
  cfg.trials = 60;
  cfg.seed = 5;
  cfg.threads = 1;
  auto one = run_trials(cfg, false).to_json().dump();
  cfg.threads = 3;
  bool campaigns = one == run_trials(cfg, false).to_json().dump();
  report(same == n && campaigns, "determinism",
         counts(same, n) + " transcripts byte-identical on rerun, campaign report " +
             (campaigns ? "identical" : "differs") + " across thread counts");
}

// -------------------------------------------------------------- coverage

void coverage() {
  Coverage four, three;
  for (const auto& [name, p] : adversarial_profiles(ProtocolKind::FourAgent))
    for (const auto& [k, v] : run_profile(p, ProtocolKind::FourAgent, name).ctx.coverage) four[k] += v;
  for (const auto& [name, p] : adversarial_profiles(ProtocolKind::ThreeAgent))
    for (const auto& [k, v] : run_profile(p, ProtocolKind::ThreeAgent, name).ctx.coverage) three[k] += v;
  std::vector<std::string> missing;
  for (auto c : {CoreCase::Matching, CoreCase::PairedTriangle, CoreCase::SharedPair, CoreCase::OneSingle,
                 CoreCase::TwoSingles, CoreCase::TwoSinglesSameAgent, CoreCase::ThreeSingles})
    if (!four["core.case." + to_string(c)]) missing.push_back("core.case." + to_string(c));
  for (const char* k : {"permutation.1a", "permutation.1b", "permutation.2a", "permutation.2b",
                        "permutation.2c"})
    if (!four[k]) missing.push_back(k);
  for (const char* k : {"three.round1.matching", "three.round1.trim", "three.round2.matching",
                        "three.round2.other_wins", "three.round2.same_wins", "three.permutation",
                        "three.divide_and_choose"})
    if (!three[k]) missing.push_back(k);
  std::string miss;
  for (const auto& m : missing) miss += " " + m;
  report(missing.empty(), "branch_coverage",
         missing.empty() ? "7 core cases, 5 reallocation sub-cases, 7 three-agent branches reached"
                         : "never reached:" + miss);
}

template <class F>
void timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  std::printf("      (%.1f s)\n", static_cast<double>(ms.count()) / 1000.0);
}

}  // namespace

int main() {
  timed(four_agent_campaign);
  timed(core_lemma);
  timed(single_domination);
  timed(compromise_tables);
  timed(three_agents);
  timed(determinism);
  timed(coverage);
  std::printf("%s: %d failing criteria\n", failures ? "REJECTED" : "ACCEPTED", failures);
  return failures ? 1 : 0;
}

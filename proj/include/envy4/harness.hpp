#pragma once

// Profile generators and seeded trial campaigns.
//
// Every profile is a pure function of (seed, config); draws go through
// mt19937_64 with our own range reduction so results do not depend on the
// standard library's distribution classes.

#include <algorithm>
#include <atomic>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "envy4/protocols/overall.hpp"
#include "envy4/protocols/three_agent.hpp"
#include "envy4/verify.hpp"

namespace envy4 {

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform integer in [lo, hi].
inline long draw(std::mt19937_64& g, long lo, long hi) {
  return lo + static_cast<long>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace detail

struct DensityRange {
  Ratio lo{0};
  Ratio hi{8};
};

/// Random piecewise-constant valuation with 1..max_segments pieces. Each
/// density is lo + k(hi-lo)/8 for k in 0..8, and zero with probability 1/5
/// whatever lo is, so empty stretches show up regularly.
inline ValuationSpec gen_valuation(std::uint64_t seed, int max_segments,
                                   const DensityRange& range = {}) {
  ensure(max_segments >= 1 && range.lo >= Ratio(0) && range.hi >= range.lo,
         ErrorKind::PreconditionViolated, "bad generator bounds");
  std::mt19937_64 g(detail::splitmix(seed));
  const long segments = detail::draw(g, 1, max_segments);
  const long grid = 16L * max_segments;
  std::vector<long> marks;
  while (static_cast<long>(marks.size()) < segments - 1) {
    long m = detail::draw(g, 1, grid - 1);
    if (std::find(marks.begin(), marks.end(), m) == marks.end()) marks.push_back(m);
  }
  std::sort(marks.begin(), marks.end());
  ValuationSpec v;
  v.breakpoints.push_back(Ratio(0));
  for (long m : marks) v.breakpoints.push_back(Ratio(m, grid));
  v.breakpoints.push_back(Ratio(1));
  bool positive = false;
  for (long s = 0; s < segments; ++s) {
    Ratio d = detail::draw(g, 0, 4) == 0
                  ? Ratio(0)
                  : range.lo + (range.hi - range.lo) * Ratio(detail::draw(g, 0, 8), 8);
    positive = positive || d > Ratio(0);
    v.densities.push_back(d);
  }
  if (!positive) v.densities[detail::draw(g, 0, segments - 1)] = range.hi > Ratio(0) ? range.hi : Ratio(1);
  v.validate();
  return v;
}

/// Profile on a coarse grid where one or two "hot" cells are valued highly
/// by every agent, so several agents favour the same piece and trims
/// compete. `bias` is the chance that a given agent shares the hot cells.
inline Profile gen_contested_profile(std::uint64_t seed, int agents, int cells = 12,
                                     int bias_percent = 80) {
  std::mt19937_64 g(detail::splitmix(seed ^ 0xc0117e57ULL));
  std::vector<int> hot{static_cast<int>(detail::draw(g, 0, cells - 1))};
  if (detail::draw(g, 0, 1)) hot.push_back(static_cast<int>(detail::draw(g, 0, cells - 1)));
  Profile p;
  for (AgentId a = 1; a <= agents; ++a) {
    ValuationSpec v;
    bool shares = detail::draw(g, 1, 100) <= bias_percent;
    for (int c = 0; c <= cells; ++c) v.breakpoints.push_back(Ratio(c, cells));
    bool positive = false;
    for (int c = 0; c < cells; ++c) {
      long d = detail::draw(g, 0, 3);
      if (shares && std::find(hot.begin(), hot.end(), c) != hot.end()) d += detail::draw(g, 4, 12);
      positive = positive || d > 0;
      v.densities.push_back(Ratio(d));
    }
    if (!positive) v.densities[0] = Ratio(1);
    v.validate();
    p[a] = v;
  }
  return p;
}

enum class ProtocolKind { ThreeAgent, FourAgent };

struct TrialConfig {
  long trials = 1000;
  std::uint64_t seed = 1;
  int max_segments = 6;
  DensityRange density_range{};
  ProtocolKind protocol = ProtocolKind::FourAgent;
  bool adversarial_suite = false;
  /// Every n-th trial uses gen_contested_profile instead of independent
  /// random valuations (0 disables).
  int contested_every = 2;
  int contested_bias_percent = 80;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct TrialRecord {
  std::string label;
  std::uint64_t seed = 0;
  bool envy_free = false;
  bool complete = false;
  std::uint64_t queries = 0;
  std::uint64_t cuts = 0;
  int core_runs = 0;
  int permutations_fired = 0;
  std::string error;

  bool ok() const { return envy_free && complete && error.empty(); }

  json to_json() const {
    json j{{"label", label},         {"seed", seed},         {"envy_free", envy_free},
           {"complete", complete},   {"queries", queries},   {"cuts", cuts},
           {"core_runs", core_runs}, {"permutations_fired", permutations_fired}};
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

struct TrialReport {
  std::vector<TrialRecord> trials;
  std::uint64_t max_queries = 0;
  std::uint64_t max_cuts = 0;
  std::vector<std::string> failures;  // labels of failing trials
  Coverage coverage;

  json to_json() const {
    json t = json::array();
    for (const auto& r : trials) t.push_back(r.to_json());
    return json{{"trials", t},
                {"aggregates",
                 {{"max_queries", max_queries}, {"max_cuts", max_cuts}, {"failures", failures}}},
                {"coverage", coverage}};
  }
};

class AggregateFailure : public Error {
 public:
  explicit AggregateFailure(TrialReport report)
      : Error(ErrorKind::AggregateFailure, describe(report)), report_(std::move(report)) {}
  const TrialReport& report() const { return report_; }

 private:
  static std::string describe(const TrialReport& r) {
    std::string s = std::to_string(r.failures.size()) + " failing trial(s):";
    for (const auto& f : r.failures) s += " " + f;
    return s;
  }
  TrialReport report_;
};

/// Profile for trial `index` of a campaign.
inline Profile trial_profile(const TrialConfig& cfg, std::uint64_t trial_seed) {
  int n = cfg.protocol == ProtocolKind::FourAgent ? 4 : 3;
  if (cfg.contested_every > 0 && trial_seed % cfg.contested_every == 0)
    return gen_contested_profile(trial_seed, n, 12, cfg.contested_bias_percent);
  Profile p;
  for (AgentId a = 1; a <= n; ++a)
    p[a] = gen_valuation(detail::splitmix(trial_seed) + a, cfg.max_segments, cfg.density_range);
  return p;
}

struct ProfileRun {
  TrialRecord record;
  Allocation allocation;
  Context ctx;
};

/// Runs one protocol on simulated agents and certifies the result.
inline ProfileRun run_profile(const Profile& profile, ProtocolKind kind, std::string label = "",
                              std::uint64_t seed = 0) {
  ProfileRun out;
  out.record.label = std::move(label);
  out.record.seed = seed;
  Context& ctx = out.ctx;
  for (const auto& [a, v] : profile) ctx.rw.add(std::make_shared<SimulatedAgent>(a, v));
  try {
    if (kind == ProtocolKind::FourAgent) {
      std::vector<AgentId> ids;
      for (const auto& [a, _] : profile) ids.push_back(a);
      auto res = overall_protocol(ctx, ids);
      out.allocation = res.allocation;
      out.record.core_runs = res.core_runs;
      out.record.permutations_fired = res.permutations;
    } else {
      std::array<AgentId, 3> ids{};
      int k = 0;
      for (const auto& [a, _] : profile) ids[k++] = a;
      out.allocation = three_agent_protocol(ctx, ids, Piece::whole());
    }
    out.record.envy_free = check_envy_free(out.allocation, profile).envy_free;
    Piece all;
    Ratio len;
    for (const auto& [_, p] : out.allocation) all = all.unite(p), len += p.length();
    out.record.complete = all == Piece::whole() && len == Ratio(1);
  } catch (const Error& e) {
    out.record.error = e.what();
  }
  out.record.queries = ctx.rw.transcript().query_count();
  out.record.cuts = ctx.rw.transcript().cut_count();
  return out;
}

/// Hand-built profiles: identical and indifferent agents, narrow spikes,
/// and profiles found to drive specific protocol branches.
inline std::vector<std::pair<std::string, Profile>> adversarial_profiles(ProtocolKind kind);

inline TrialReport run_trials(const TrialConfig& cfg, bool throw_on_failure = true) {
  ensure(cfg.trials >= 1 && cfg.max_segments >= 1, ErrorKind::PreconditionViolated,
         "trials and max_segments must be positive");
  std::vector<std::pair<std::string, Profile>> jobs;
  std::vector<std::uint64_t> seeds;
  for (long t = 0; t < cfg.trials; ++t) {
    std::uint64_t s = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(t);
    jobs.push_back({"seed:" + std::to_string(s), trial_profile(cfg, s)});
    seeds.push_back(s);
  }
  if (cfg.adversarial_suite)
    for (auto& [name, p] : adversarial_profiles(cfg.protocol)) {
      jobs.push_back({"adversarial:" + name, std::move(p)});
      seeds.push_back(0);
    }

  std::vector<TrialRecord> records(jobs.size());
  std::vector<Coverage> coverage(jobs.size());
  std::atomic<std::size_t> next{0};
  unsigned n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, jobs.size()));
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      auto run = run_profile(jobs[i].second, cfg.protocol, jobs[i].first, seeds[i]);
      records[i] = std::move(run.record);
      coverage[i] = std::move(run.ctx.coverage);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  TrialReport rep;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    rep.max_queries = std::max(rep.max_queries, r.queries);
    rep.max_cuts = std::max(rep.max_cuts, r.cuts);
    if (!r.ok()) rep.failures.push_back(r.label);
    for (const auto& [k, v] : coverage[i]) rep.coverage[k] += v;
  }
  rep.trials = std::move(records);
  if (throw_on_failure && !rep.failures.empty()) throw AggregateFailure(rep);
  return rep;
}

}  // namespace envy4

#include "envy4/adversarial.hpp"

#include <catch_amalgamated.hpp>

#include "envy4/harness.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

const std::array<AgentId, 3> kAgents{1, 2, 3};

struct Outcome {
  Context ctx;
  Allocation alloc;
};

std::unique_ptr<Outcome> run(const Profile& p) {
  auto o = std::make_unique<Outcome>();
  add_simulated(o->ctx, p);
  o->alloc = three_agent_protocol(o->ctx, kAgents, Piece::whole());
  return o;
}

// Envy-freeness from the true valuations, computed pair by pair here rather
// than through the library's checker.
bool oracle_envy_free(const Allocation& a, const Profile& p) {
  for (const auto& [i, own] : a)
    for (const auto& [k, other] : a)
      if (i != k && oracle_value(p.at(i), other) > oracle_value(p.at(i), own)) return false;
  return true;
}

bool oracle_complete(const Allocation& a) {
  Piece all;
  Ratio len;
  for (const auto& [_, pc] : a) all = all.unite(pc), len += pc.length();
  return all == Piece::whole() && len == R(1);
}

}  // namespace

TEST_CASE("Three uniform agents each take a third") {
  auto o = run(same_profile(ValuationSpec::uniform(), 3));
  for (AgentId a : kAgents) CHECK(o->alloc[a].length() == R(1, 3));
  // Cutter: one Evaluate and two Cuts; the others value three pieces each.
  CHECK(o->ctx.rw.transcript().query_count() == 9);
  CHECK(o->ctx.rw.transcript().cut_count() == 2);
  CHECK(o->ctx.coverage["three.round1.matching"] == 1);
}

TEST_CASE("Distinct favourites end after the first round") {
  Profile p{{1, spec({R(0), R(1, 3), R(1)}, {R(3), R(0)})},
            {2, spec({R(0), R(2, 3), R(1)}, {R(0), R(3)})},
            {3, ValuationSpec::uniform()}};
  auto o = run(p);
  CHECK(o->alloc[1] == piece({{R(0), R(1, 3)}}));
  CHECK(o->alloc[2] == piece({{R(2, 3), R(1)}}));
  CHECK(o->alloc[3] == piece({{R(1, 3), R(2, 3)}}));
  CHECK(oracle_envy_free(o->alloc, p));
}

TEST_CASE("A shared favourite is trimmed and the rest is shared out") {
  auto hot = spec({R(0), R(1, 3), R(2, 3), R(1)}, {R(1), R(4), R(1)});
  Profile p{{1, hot}, {2, hot}, {3, ValuationSpec::uniform()}};
  auto o = run(p);
  CHECK(o->ctx.coverage["three.round1.trim"] == 1);
  CHECK(oracle_envy_free(o->alloc, p));
  CHECK(oracle_complete(o->alloc));
  CHECK(o->ctx.rw.transcript().cut_count() <= o->ctx.rw.transcript().query_count());
}

TEST_CASE("Random three-agent profiles are envy-free and complete") {
  TrialConfig cfg;
  cfg.protocol = ProtocolKind::ThreeAgent;
  std::uint64_t max_queries = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Profile p = trial_profile(cfg, seed);
    auto o = run(p);
    INFO("seed " << seed);
    REQUIRE(oracle_envy_free(o->alloc, p));
    REQUIRE(oracle_complete(o->alloc));
    max_queries = std::max(max_queries, o->ctx.rw.transcript().query_count());
  }
  // Two rounds of 9, two trims each, two gap valuations and divide-and-choose.
  CHECK(max_queries <= 9 + 2 + 9 + 2 + 2 + 4);
}

TEST_CASE("Adversarial three-agent profiles reach every branch") {
  Coverage total;
  for (const auto& [name, p] : adversarial_profiles(ProtocolKind::ThreeAgent)) {
    auto r = run_profile(p, ProtocolKind::ThreeAgent, name);
    INFO(name << " " << r.record.error);
    CHECK(r.record.ok());
    CHECK(oracle_envy_free(r.allocation, p));
    for (const auto& [k, v] : r.ctx.coverage) total[k] += v;
  }
  for (const char* key : {"three.round1.matching", "three.round1.trim", "three.round2.matching",
                          "three.round2.other_wins", "three.round2.same_wins", "three.permutation",
                          "three.divide_and_choose"}) {
    INFO(key);
    CHECK(total[key] > 0);
  }
}

TEST_CASE("Three-agent preconditions") {
  Context ctx;
  add_simulated(ctx, same_profile(ValuationSpec::uniform(), 3));
  CHECK_THROWS_AS(three_agent_protocol(ctx, {1, 1, 2}, Piece::whole()), Error);
  Allocation empty = three_agent_protocol(ctx, kAgents, Piece{});
  for (AgentId a : kAgents) CHECK(empty[a].empty());
  CHECK(ctx.rw.transcript().query_count() == 0);
}

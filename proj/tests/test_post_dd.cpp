#include <catch_amalgamated.hpp>

#include "envy4/harness.hpp"
#include "envy4/protocols/post_dd.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

DominationGraph graph(std::initializer_list<std::pair<AgentId, AgentId>> edges) {
  DominationGraph g;
  for (auto [j, i] : edges) g.add(j, i);
  return g;
}

const std::vector<AgentId> kAgents{1, 2, 3, 4};

// 4 dominates nobody and only 1 and 2 dominate 4. 1 and 3 dominate each
// other, 2 dominates 1 and 4, 1 dominates 4, 3 dominates 2.
DominationGraph final_case_graph() { return graph({{1, 3}, {3, 1}, {2, 1}, {2, 4}, {1, 4}, {3, 2}}); }

}  // namespace

TEST_CASE("An empty residue leaves the allocation alone") {
  Context ctx;
  add_simulated(ctx, same_profile(ValuationSpec::uniform()));
  Allocation a{{1, piece({{R(0), R(1, 2)}})}, {2, piece({{R(1, 2), R(1)}})}, {3, {}}, {4, {}}};
  CHECK(post_double_domination(ctx, a, Piece{}, DominationGraph{}, kAgents) == a);
  CHECK(ctx.rw.transcript().query_count() == 0);
}

TEST_CASE("Final-case graph: the undominating agent quarters, the rest pick in order") {
  auto plan = plan_post_double_domination(final_case_graph(), kAgents);
  REQUIRE(plan);
  CHECK(plan->branch == PostBranch::QuarterAndPick);
  CHECK(plan->order == std::vector<AgentId>{1, 2, 3, 4});

  Context ctx;
  add_simulated(ctx, same_profile(ValuationSpec::uniform()));
  Allocation a{{1, {}}, {2, {}}, {3, {}}, {4, {}}};
  Allocation out = post_double_domination(ctx, a, Piece::whole(), final_case_graph(), kAgents);
  const auto& e = ctx.rw.transcript().entries();
  // 4: one Evaluate and three Cuts; then 1, 2, 3 value 4, 3, 2 remaining pieces.
  REQUIRE(e.size() == 4 + 4 + 3 + 2);
  for (int k = 0; k < 4; ++k) CHECK(e[k].query.agent == 4);
  for (int k = 4; k < 8; ++k) CHECK(e[k].query.agent == 1);
  for (int k = 8; k < 11; ++k) CHECK(e[k].query.agent == 2);
  for (int k = 11; k < 13; ++k) CHECK(e[k].query.agent == 3);
  for (AgentId x : kAgents) CHECK(out[x].length() == R(1, 4));
  CHECK(out[1] == piece({{R(0), R(1, 4)}}));
}

TEST_CASE("A pair dominated by both others splits the residue") {
  auto g = graph({{1, 3}, {1, 4}, {2, 3}, {2, 4}});
  auto plan = plan_post_double_domination(g, kAgents);
  REQUIRE(plan);
  CHECK(plan->branch == PostBranch::DivideAndChoose);
  CHECK(plan->order == std::vector<AgentId>{3, 4});

  Context ctx;
  add_simulated(ctx, same_profile(ValuationSpec::uniform()));
  Piece residue = piece({{R(1, 2), R(1)}});
  Allocation a{{1, piece({{R(0), R(1, 4)}})}, {2, piece({{R(1, 4), R(1, 2)}})}, {3, {}}, {4, {}}};
  Allocation out = post_double_domination(ctx, a, residue, g, kAgents);
  CHECK(out[1] == a[1]);
  CHECK(out[2] == a[2]);
  CHECK(out[3].unite(out[4]) == residue);
  CHECK(out[3].length() == R(1, 4));
}

TEST_CASE("An agent dominated by everybody takes the whole residue") {
  auto g = graph({{1, 4}, {2, 4}, {3, 4}, {1, 2}, {3, 1}});
  auto plan = plan_post_double_domination(g, kAgents);
  REQUIRE(plan);
  CHECK(plan->branch == PostBranch::GiveAll);
  CHECK(plan->order == std::vector<AgentId>{4});
  Context ctx;
  add_simulated(ctx, same_profile(ValuationSpec::uniform()));
  Allocation out = post_double_domination(ctx, {{1, {}}, {2, {}}, {3, {}}, {4, {}}},
                                          Piece::whole(), g, kAgents);
  CHECK(out[4] == Piece::whole());
  CHECK(ctx.rw.transcript().query_count() == 0);
}

TEST_CASE("Every graph where each agent dominates two others has a plan") {
  // Each agent chooses 2 or 3 of the other three: 4^4 graphs.
  long graphs = 0;
  for (int code = 0; code < 256; ++code) {
    DominationGraph g;
    int c = code;
    for (AgentId j : kAgents) {
      int skip = c % 4;  // 0..2: which other agent j does not dominate, 3: none
      c /= 4;
      int k = 0;
      for (AgentId i : kAgents)
        if (i != j && k++ != skip) g.add(j, i);
    }
    ++graphs;
    INFO(g.to_json().dump());
    CHECK(plan_post_double_domination(g, kAgents).has_value());
  }
  CHECK(graphs == 256);
}

TEST_CASE("Without a usable domination pattern the residue cannot be handed out") {
  Context ctx;
  add_simulated(ctx, same_profile(ValuationSpec::uniform()));
  CHECK_FALSE(plan_post_double_domination(graph({{1, 2}}), kAgents).has_value());
  CHECK_THROWS_MATCHES(post_double_domination(ctx, {}, Piece::whole(), graph({{1, 2}}), kAgents),
                       Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::PreconditionViolated;
                       }));
}

TEST_CASE("Finishing from true dominations after a core run is envy-free") {
  int finished = 0;
  for (std::uint64_t seed = 1; seed <= 1500; ++seed) {
    TrialConfig cfg;
    Profile p = trial_profile(cfg, seed);
    Context ctx;
    add_simulated(ctx, p);
    CoreOutcome o = core_protocol(ctx, 4, {1, 2, 3}, Piece::whole());
    Piece residue = o.residue();
    if (residue.empty()) continue;
    DominationGraph g = domination_graph(o.allocation(), residue, p);
    if (!plan_post_double_domination(g, kAgents)) continue;
    Allocation out = post_double_domination(ctx, o.allocation(), residue, g, kAgents);
    INFO("seed " << seed);
    CHECK(check_envy_free(out, p).envy_free);
    Piece all;
    for (const auto& [_, pc] : out) all = all.unite(pc);
    CHECK(all == Piece::whole());
    ++finished;
  }
  CHECK(finished > 20);
}

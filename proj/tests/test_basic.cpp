#include <catch_amalgamated.hpp>

#include "envy4/protocols/basic.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

// Exhaustive reference: smallest assignment (lexicographic over agents) that
// gives every agent a distinct piece of maximal value to him.
std::optional<std::vector<int>> matching_oracle(const std::vector<std::vector<Ratio>>& v) {
  const int n = static_cast<int>(v.size()), m = static_cast<int>(v[0].size());
  std::vector<int> pick(n, 0);
  int total = 1;
  for (int a = 0; a < n; ++a) total *= m;
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int a = n - 1; a >= 0; --a) pick[a] = c % m, c /= m;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      for (int b = 0; b < a; ++b) ok = ok && pick[a] != pick[b];
      for (int p = 0; p < m; ++p) ok = ok && v[a][p] <= v[a][pick[a]];
    }
    if (ok) return pick;
  }
  return std::nullopt;
}

BonusTable table(std::array<std::array<long, 3>, 4> rows) {
  BonusTable t;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 3; ++c) t[r][c] = Ratio(rows[r][c]);
  return t;
}

}  // namespace

TEST_CASE("divide_and_choose between two uniform agents") {
  Context ctx;
  add_simulated(ctx, same_profile(ValuationSpec::uniform(), 2));
  auto dc = divide_and_choose(ctx, 1, 2, Piece::whole());
  CHECK(dc.cutter_share.unite(dc.chooser_share) == Piece::whole());
  CHECK(dc.cutter_share.length() == R(1, 2));
  CHECK(dc.chooser_share.length() == R(1, 2));
  CHECK(ctx.rw.transcript().cut_count() == 1);
  CHECK(ctx.rw.transcript().query_count() == 4);
}

TEST_CASE("divide_and_choose lets the chooser take his better half") {
  Context ctx;
  Profile p{{1, ValuationSpec::uniform()}, {2, spec({R(0), R(1, 2), R(1)}, {R(0), R(2)})}};
  add_simulated(ctx, p);
  auto dc = divide_and_choose(ctx, 1, 2, Piece::whole());
  CHECK(dc.chooser_share == piece({{R(1, 2), R(1)}}));
  CHECK(dc.cutter_share == piece({{R(0), R(1, 2)}}));
  // Enumerate the chooser's two options: he never prefers the one he left.
  CHECK(oracle_value(p[2], dc.chooser_share) >= oracle_value(p[2], dc.cutter_share));
  CHECK(oracle_value(p[1], dc.cutter_share) == oracle_value(p[1], dc.chooser_share));
}

TEST_CASE("divide_and_choose on an empty piece asks nothing") {
  Context ctx;
  add_simulated(ctx, same_profile(ValuationSpec::uniform(), 2));
  auto dc = divide_and_choose(ctx, 1, 2, Piece{});
  CHECK(dc.cutter_share.empty());
  CHECK(dc.chooser_share.empty());
  CHECK(ctx.rw.transcript().query_count() == 0);
}

TEST_CASE("divide_and_choose is envy-free on random pieces") {
  std::mt19937_64 g(2);
  for (int t = 0; t < 200; ++t) {
    Profile p{{1, spec({R(0), R(1, 3), R(1)}, {R(static_cast<long>(g() % 3)), R(1)})},
              {2, spec({R(0), R(2, 3), R(1)}, {R(1), R(static_cast<long>(g() % 5))})}};
    Context ctx;
    add_simulated(ctx, p);
    Piece cake = random_piece(g);
    auto dc = divide_and_choose(ctx, 1, 2, cake);
    CHECK(dc.cutter_share.unite(dc.chooser_share) == cake);
    CHECK(oracle_value(p[1], dc.cutter_share) >= oracle_value(p[1], dc.chooser_share));
    CHECK(oracle_value(p[2], dc.chooser_share) >= oracle_value(p[2], dc.cutter_share));
  }
}

TEST_CASE("top_piece_matching on the documented cases") {
  std::vector<std::vector<Ratio>> equal(3, std::vector<Ratio>(4, R(1)));
  CHECK(top_piece_matching(equal) == std::vector<int>{0, 1, 2});

  std::vector<std::vector<Ratio>> same_top{{R(0), R(5), R(1), R(1)},
                                           {R(1), R(3), R(0), R(0)},
                                           {R(2), R(4), R(3), R(1)}};
  CHECK_FALSE(top_piece_matching(same_top).has_value());

  std::vector<std::vector<Ratio>> sets{{R(2), R(2), R(1), R(0)},
                                       {R(0), R(3), R(1), R(1)},
                                       {R(0), R(4), R(4), R(1)}};
  CHECK(top_piece_matching(sets) == std::vector<int>{0, 1, 2});
  CHECK(matching_oracle(sets) == std::vector<int>{0, 1, 2});
}

TEST_CASE("top_piece_matching agrees with exhaustive enumeration") {
  std::mt19937_64 g(8);
  for (int t = 0; t < 5000; ++t) {
    std::vector<std::vector<Ratio>> v(3, std::vector<Ratio>(4));
    for (auto& row : v)
      for (auto& x : row) x = R(static_cast<long>(g() % 3));
    CHECK(top_piece_matching(v) == matching_oracle(v));
  }
}

TEST_CASE("select_compromise_iteration on the documented tables") {
  CHECK(select_compromise_iteration(table({})) == 1);
  auto t = table({{{5, 1, 0}, {1, 5, 0}, {2, 2, 0}, {0, 0, 9}}});
  CHECK(select_compromise_iteration(t) == 3);
  CHECK(brute_force_compromise_rows(t) == std::set<int>{3});
  auto ones = table({{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}}});
  CHECK(select_compromise_iteration(ones) == 1);
  CHECK(brute_force_compromise_rows(ones) == std::set<int>{1, 2, 3, 4});
}

TEST_CASE("select_compromise_iteration always picks a brute-force row") {
  // Every table with entries in {0,1,2}.
  std::array<std::array<long, 3>, 4> rows{};
  long count = 0;
  for (long code = 0; code < 531441; ++code) {
    long c = code;
    for (auto& row : rows)
      for (auto& x : row) x = c % 3, c /= 3;
    auto t = table(rows);
    auto ok = brute_force_compromise_rows(t);
    int r = select_compromise_iteration(t);
    if (!ok.count(r)) ++count;
  }
  CHECK(count == 0);
}

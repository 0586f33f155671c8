#pragma once

// Shared helpers for the unit tests: an integration oracle that does not
// share code with the library's sweep, random pieces, and context builders.

#include <memory>
#include <random>

#include "envy4/context.hpp"
#include "envy4/verify.hpp"

namespace testing_support {

using namespace envy4;

/// Sum of density * overlap over every (segment, interval) pair.
inline Ratio oracle_value(const ValuationSpec& v, const Piece& p) {
  Ratio total;
  for (std::size_t s = 0; s < v.densities.size(); ++s)
    for (const auto& iv : p.intervals()) {
      Ratio lo = max(v.breakpoints[s], iv.left), hi = min(v.breakpoints[s + 1], iv.right);
      if (lo < hi) total += (hi - lo) * v.densities[s];
    }
  return total;
}

/// Value of the part of p left of x.
inline Ratio oracle_left_value(const ValuationSpec& v, const Piece& p, const Ratio& x) {
  return oracle_value(v, p.intersect(normalize_piece({{Ratio(0), x}})));
}

/// x is the leftmost point where the left part of p reaches value r.
inline bool oracle_is_leftmost_cut(const ValuationSpec& v, const Piece& p, const Ratio& r,
                                   const Ratio& x) {
  if (oracle_left_value(v, p, x) != r) return false;
  if (r.is_zero()) return x == p.left_edge();
  const Ratio eps(1, 1000000007);
  return x - eps < Ratio(0) || oracle_left_value(v, p, x - eps) < r;
}

/// Random canonical piece with up to `n` intervals on a grid of 1/den.
inline Piece random_piece(std::mt19937_64& g, int n = 3, long den = 60) {
  std::vector<Interval> ivs;
  int k = 1 + static_cast<int>(g() % n);
  for (int i = 0; i < k; ++i) {
    long a = static_cast<long>(g() % den), b = static_cast<long>(g() % den);
    if (a > b) std::swap(a, b);
    ivs.push_back({Ratio(a, den), Ratio(b + 1, den)});
  }
  return normalize_piece(ivs);
}

inline void add_simulated(Context& ctx, const Profile& p) {
  for (const auto& [a, v] : p) ctx.rw.add(std::make_shared<SimulatedAgent>(a, v));
}

inline Profile same_profile(const ValuationSpec& v, int n = 4) {
  Profile p;
  for (AgentId a = 1; a <= n; ++a) p[a] = v;
  return p;
}

inline ValuationSpec spec(std::vector<Ratio> bps, std::vector<Ratio> dens) {
  ValuationSpec v{std::move(bps), std::move(dens)};
  v.validate();
  return v;
}

inline Piece piece(std::initializer_list<std::pair<Ratio, Ratio>> ivs) {
  std::vector<Interval> out;
  for (const auto& [l, r] : ivs) out.push_back({l, r});
  return normalize_piece(out);
}

inline Ratio R(long p, long q = 1) { return Ratio(p, q); }

}  // namespace testing_support

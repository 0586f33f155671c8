#pragma once

// Piecewise-constant valuations and exact Evaluate/Cut answers.
//
// A ValuationSpec is a density that is constant on each segment between
// consecutive breakpoints. The induced measure is non-negative, additive and
// divisible, so every Evaluate and Cut question over a Piece has an exact
// rational answer.

#include <string>
#include <vector>

#include "envy4/error.hpp"
#include "envy4/piece.hpp"
#include "envy4/ratio.hpp"

namespace envy4 {

struct ValuationSpec {
  std::vector<Ratio> breakpoints;  // 0 = b_0 < b_1 < ... < b_k = 1
  std::vector<Ratio> densities;    // one per segment, all >= 0

  static ValuationSpec uniform() { return {{Ratio(0), Ratio(1)}, {Ratio(1)}}; }

  /// Throws OutOfRange describing the first violated invariant.
  void validate() const {
    ensure(breakpoints.size() >= 2, ErrorKind::OutOfRange, "need at least two breakpoints");
    ensure(densities.size() + 1 == breakpoints.size(), ErrorKind::OutOfRange,
           "one density per segment required");
    ensure(breakpoints.front() == Ratio(0) && breakpoints.back() == Ratio(1),
           ErrorKind::OutOfRange, "breakpoints must start at 0 and end at 1");
    for (std::size_t k = 1; k < breakpoints.size(); ++k)
      ensure(breakpoints[k - 1] < breakpoints[k], ErrorKind::OutOfRange,
             "breakpoints must be strictly increasing");
    for (const auto& d : densities)
      ensure(d.sign() >= 0, ErrorKind::OutOfRange, "negative density " + d.str());
  }

  std::size_t segments() const { return densities.size(); }

  friend bool operator==(const ValuationSpec&, const ValuationSpec&) = default;
};

namespace detail {

// Calls f(lo, hi, density) for each maximal stretch of the piece on which the
// density is constant, left to right.
template <class F>
void for_each_stretch(const ValuationSpec& v, const Piece& p, F&& f) {
  std::size_t seg = 0;
  const std::size_t n = v.segments();
  for (const auto& iv : p.intervals()) {
    while (seg < n && v.breakpoints[seg + 1] <= iv.left) ++seg;
    for (std::size_t s = seg; s < n && v.breakpoints[s] < iv.right; ++s) {
      Ratio lo = max(iv.left, v.breakpoints[s]);
      Ratio hi = min(iv.right, v.breakpoints[s + 1]);
      if (lo < hi && f(lo, hi, v.densities[s])) return;
    }
  }
}

}  // namespace detail

/// Exact value of piece p under v.
inline Ratio eval_piece(const ValuationSpec& v, const Piece& p) {
  Ratio total;
  detail::for_each_stretch(v, p, [&](const Ratio& lo, const Ratio& hi, const Ratio& d) {
    if (!d.is_zero()) total += d * (hi - lo);
    return false;
  });
  return total;
}

struct CutResult {
  Ratio point;
  Piece left;
  Piece right;
};

/// Smallest point x such that the part of p left of x has value r.
inline CutResult cut_within(const ValuationSpec& v, const Piece& p, const Ratio& r) {
  ensure(r.sign() >= 0, ErrorKind::QueryInfeasible, "negative cut target " + r.str());
  CutResult out;
  if (r.is_zero()) {
    out.point = p.left_edge();
    out.right = p;
    return out;
  }
  Ratio remaining = r;
  bool found = false;
  detail::for_each_stretch(v, p, [&](const Ratio& lo, const Ratio& hi, const Ratio& d) {
    if (d.is_zero()) return false;
    Ratio value = d * (hi - lo);
    if (value >= remaining) {
      out.point = lo + remaining / d;
      found = true;
      return true;
    }
    remaining -= value;
    return false;
  });
  if (!found)
    fail(ErrorKind::QueryInfeasible, "target " + r.str() + " exceeds piece value " +
                                         eval_piece(v, p).str());
  out.left = p.left_of(out.point);
  out.right = p.right_of(out.point);
  return out;
}

/// Leftmost point t such that the part of p right of t has value target.
inline CutResult trim_within(const ValuationSpec& v, const Piece& p, const Ratio& target) {
  Ratio total = eval_piece(v, p);
  if (target > total)
    fail(ErrorKind::QueryInfeasible,
         "trim target " + target.str() + " exceeds piece value " + total.str());
  return cut_within(v, p, total - target);
}

}  // namespace envy4

#pragma once

// Pieces of the cake [0,1]: finite unions of closed intervals kept in a
// canonical form (sorted, positive length, no touching neighbours).

#include <algorithm>
#include <optional>
#include <ostream>
#include <vector>

#include "envy4/error.hpp"
#include "envy4/ratio.hpp"

namespace envy4 {

struct Interval {
  Ratio left;
  Ratio right;

  friend bool operator==(const Interval&, const Interval&) = default;
};

class Piece;
Piece normalize_piece(std::vector<Interval> intervals);

class Piece {
 public:
  Piece() = default;

  static Piece whole() { return normalize_piece({{Ratio(0), Ratio(1)}}); }

  const std::vector<Interval>& intervals() const { return iv_; }
  bool empty() const { return iv_.empty(); }

  /// Leftmost point of the piece; 0 for the empty piece.
  Ratio left_edge() const { return iv_.empty() ? Ratio(0) : iv_.front().left; }
  Ratio right_edge() const { return iv_.empty() ? Ratio(0) : iv_.back().right; }

  Ratio length() const {
    Ratio total;
    for (const auto& i : iv_) total += i.right - i.left;
    return total;
  }

  /// Part of the piece inside [0, x].
  Piece left_of(const Ratio& x) const {
    Piece out;
    for (const auto& i : iv_) {
      if (i.left >= x) break;
      out.iv_.push_back({i.left, min(i.right, x)});
    }
    return out;
  }

  /// Part of the piece inside [x, 1].
  Piece right_of(const Ratio& x) const {
    Piece out;
    for (const auto& i : iv_) {
      if (i.right <= x) continue;
      out.iv_.push_back({max(i.left, x), i.right});
    }
    return out;
  }

  /// Part of the piece inside [a, b].
  Piece between(const Ratio& a, const Ratio& b) const { return right_of(a).left_of(b); }

  /// True when x lies in the closure of one of the intervals.
  bool touches(const Ratio& x) const {
    return std::any_of(iv_.begin(), iv_.end(),
                       [&](const Interval& i) { return i.left <= x && x <= i.right; });
  }

  Piece unite(const Piece& other) const {
    std::vector<Interval> all = iv_;
    all.insert(all.end(), other.iv_.begin(), other.iv_.end());
    return normalize_piece(std::move(all));
  }

  Piece intersect(const Piece& other) const {
    std::vector<Interval> out;
    std::size_t a = 0, b = 0;
    while (a < iv_.size() && b < other.iv_.size()) {
      Ratio lo = max(iv_[a].left, other.iv_[b].left);
      Ratio hi = min(iv_[a].right, other.iv_[b].right);
      if (lo < hi) out.push_back({lo, hi});
      if (iv_[a].right < other.iv_[b].right) ++a; else ++b;
    }
    return normalize_piece(std::move(out));
  }

  /// Positive-measure overlap test.
  bool overlaps(const Piece& other) const { return !intersect(other).empty(); }

  /// Containment up to measure zero.
  bool contains(const Piece& other) const { return intersect(other) == other; }

  friend bool operator==(const Piece&, const Piece&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Piece& p) {
    os << '[';
    for (std::size_t k = 0; k < p.iv_.size(); ++k)
      os << (k ? "," : "") << '[' << p.iv_[k].left << ',' << p.iv_[k].right << ']';
    return os << ']';
  }

 private:
  friend Piece normalize_piece(std::vector<Interval> intervals);
  std::vector<Interval> iv_;
};

/// Canonical union of the given closed intervals. Overlapping and touching
/// intervals merge; zero-length ones vanish.
inline Piece normalize_piece(std::vector<Interval> intervals) {
  for (const auto& i : intervals) {
    if (i.left < Ratio(0) || i.right > Ratio(1) || i.left > i.right)
      fail(ErrorKind::OutOfRange,
           "interval [" + i.left.str() + "," + i.right.str() + "] not inside [0,1]");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.left < b.left; });
  Piece p;
  for (auto& i : intervals) {
    if (i.left == i.right) continue;
    if (!p.iv_.empty() && i.left <= p.iv_.back().right) {
      if (i.right > p.iv_.back().right) p.iv_.back().right = i.right;
    } else {
      p.iv_.push_back(std::move(i));
    }
  }
  return p;
}

/// Set difference p \ q. q must lie inside p (up to measure zero).
inline Piece piece_subtract(const Piece& p, const Piece& q) {
  if (!p.contains(q)) fail(ErrorKind::NotContained, "subtrahend not contained in piece");
  // Each interval of q sits inside a single interval of p: canonical pieces
  // have gaps of positive length.
  std::vector<Interval> out;
  std::size_t k = 0;
  const auto& qs = q.intervals();
  for (const auto& i : p.intervals()) {
    Ratio cursor = i.left;
    for (; k < qs.size() && qs[k].right <= i.right; ++k) {
      if (cursor < qs[k].left) out.push_back({cursor, qs[k].left});
      cursor = qs[k].right;
    }
    if (cursor < i.right) out.push_back({cursor, i.right});
  }
  return normalize_piece(std::move(out));
}

}  // namespace envy4

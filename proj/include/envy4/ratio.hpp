#pragma once

/**
 * @file ratio.hpp
 * @brief Exact rational numbers for cake points and agent values.
 *
 * Thin value type over GMP's mpq_class. Always kept in lowest terms with a
 * positive denominator, so equality is structural and the textual form
 * "p/q" is canonical.
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "envy4/error.hpp"

namespace envy4 {

class Ratio {
 public:
  Ratio() : v_(0) {}
  Ratio(long n) : v_(n) {}  // NOLINT: implicit from integers is intended
  Ratio(long n, long d) {
    ensure(d != 0, ErrorKind::ParseError, "zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Ratio(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Accepts "p/q" or "p" with optional leading '-'.
  static Ratio parse(std::string_view s) {
    auto valid_int = [](std::string_view t) {
      if (t.empty()) return false;
      std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
      if (i == t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    auto strip_plus = [](std::string_view t) {
      return std::string(t.size() && t[0] == '+' ? t.substr(1) : t);
    };
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-')
      fail(ErrorKind::ParseError, "not a rational: '" + std::string(s) + "'");
    mpz_class n(strip_plus(num), 10), d(strip_plus(den), 10);
    if (d == 0) fail(ErrorKind::ParseError, "zero denominator in '" + std::string(s) + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return Ratio(std::move(q));
  }

  /// Always "p/q", integers included ("3/1").
  std::string str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double approx() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }

  friend Ratio operator+(const Ratio& a, const Ratio& b) { return Ratio(mpq_class(a.v_ + b.v_)); }
  friend Ratio operator-(const Ratio& a, const Ratio& b) { return Ratio(mpq_class(a.v_ - b.v_)); }
  friend Ratio operator*(const Ratio& a, const Ratio& b) { return Ratio(mpq_class(a.v_ * b.v_)); }
  friend Ratio operator/(const Ratio& a, const Ratio& b) {
    ensure(!b.is_zero(), ErrorKind::InternalInvariantViolation, "division by zero");
    return Ratio(mpq_class(a.v_ / b.v_));
  }
  Ratio operator-() const { return Ratio(mpq_class(-v_)); }
  Ratio& operator+=(const Ratio& o) { v_ += o.v_; return *this; }
  Ratio& operator-=(const Ratio& o) { v_ -= o.v_; return *this; }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

inline const Ratio& min(const Ratio& a, const Ratio& b) { return b < a ? b : a; }
inline const Ratio& max(const Ratio& a, const Ratio& b) { return a < b ? b : a; }

}  // namespace envy4

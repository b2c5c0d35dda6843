#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>

namespace plhom {

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator. The sole scalar type: every coordinate, slope and
/// intercept in the library is a Rat, so all geometry is exact.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(int n) : v_(n) {}
  Rat(long n) : v_(static_cast<signed long>(n)) {}
  Rat(long num, long den);

  /// Wraps an mpq value, canonicalizing it first.
  static Rat of(mpq_class q);

  /// Accepts "p" or "p/q" with an optional leading sign on p.
  static Rat parse(std::string_view text);

  /// Renders "p/q" in lowest terms, or just "p" when the value is integral.
  std::string str() const { return v_.get_str(); }

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_), Canonical{}); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_), Canonical{}); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_), Canonical{}); }
  friend Rat operator/(const Rat& a, const Rat& b);
  Rat operator-() const { return Rat(mpq_class(-v_), Canonical{}); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) == 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

 private:
  struct Canonical {};
  Rat(mpq_class q, Canonical) : v_(std::move(q)) {}
  mpq_class v_;
};

Rat midpoint(const Rat& a, const Rat& b);

/// Exact integer power; exp may be negative (base must be nonzero then).
Rat rat_pow(const Rat& base, long exp);

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace plhom

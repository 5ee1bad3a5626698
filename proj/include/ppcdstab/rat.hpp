#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ppcdstab {

using BigInt = mpz_class;

/// Exact rational number in canonical form (positive denominator, reduced).
///
/// Thin value wrapper over GMP's mpq so that it can serve as an Eigen scalar
/// without dragging gmpxx expression templates into Eigen's expressions.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
  explicit Rat(const BigInt& v) : q_(v) {}
  Rat(const BigInt& num, const BigInt& den);
  Rat(long num, long den) : Rat(BigInt(num), BigInt(den)) {}
  explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "a", "a/b" or "-a/b" (whitespace not allowed). Throws Error(Parse).
  static Rat parse(std::string_view text);

  BigInt numerator() const { return q_.get_num(); }
  BigInt denominator() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  double to_double() const { return q_.get_d(); }
  /// "a/b", or "a" when the denominator is 1.
  std::string str() const;

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

Rat abs(const Rat& r);
Rat pow(const Rat& base, std::uint64_t exponent);
/// Natural logarithm as a double; valid for arbitrarily large numerators.
double log_double(const Rat& positive);
double log_double(const BigInt& positive);

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace ppcdstab

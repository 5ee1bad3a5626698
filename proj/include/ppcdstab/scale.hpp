#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "ppcdstab/rat.hpp"

namespace ppcdstab {

/// Positive scaling factor of an edge: a finite ratio > 0, or infinity.
///
/// Edge weights are carried multiplicatively; the additive weight of an edge
/// is log(ratio). Every verdict compares exact products against 1.
class Scale {
 public:
  /// Finite(1), the multiplicative identity.
  Scale() : ratio_(Rat(1)) {}

  static Scale finite(const Rat& ratio);
  static Scale infinite() { return Scale(std::nullopt); }

  bool is_infinite() const { return !ratio_.has_value(); }
  bool is_finite() const { return ratio_.has_value(); }
  /// Precondition: is_finite().
  const Rat& ratio() const;

  /// log(ratio) as a double, +inf for Infinite. Display and statistics only.
  double log_float() const;

  friend Scale operator*(const Scale& a, const Scale& b);
  Scale& operator*=(const Scale& o) { return *this = *this * o; }

  friend bool operator==(const Scale& a, const Scale& b) = default;
  /// Infinite compares above every finite scale.
  friend std::strong_ordering operator<=>(const Scale& a, const Scale& b);

  std::string str() const;

 private:
  explicit Scale(std::optional<Rat> r) : ratio_(std::move(r)) {}
  std::optional<Rat> ratio_;
};

Scale pow(const Scale& s, std::uint64_t k);

}  // namespace ppcdstab

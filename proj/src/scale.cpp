#include "ppcdstab/scale.hpp"

#include <limits>

#include "ppcdstab/errors.hpp"

namespace ppcdstab {

Scale Scale::finite(const Rat& ratio) {
  if (ratio.sign() <= 0) {
    throw Error(ErrorCode::InvalidArgument, "scale ratio must be positive, got " + ratio.str());
  }
  return Scale(ratio);
}

const Rat& Scale::ratio() const {
  if (!ratio_) throw Error(ErrorCode::InvalidArgument, "infinite scale has no ratio");
  return *ratio_;
}

double Scale::log_float() const {
  if (!ratio_) return std::numeric_limits<double>::infinity();
  return log_double(*ratio_);
}

Scale operator*(const Scale& a, const Scale& b) {
  if (a.is_infinite() || b.is_infinite()) return Scale::infinite();
  return Scale(*a.ratio_ * *b.ratio_);
}

std::strong_ordering operator<=>(const Scale& a, const Scale& b) {
  if (a.is_infinite() || b.is_infinite()) {
    return a.is_infinite() <=> b.is_infinite();
  }
  return *a.ratio_ <=> *b.ratio_;
}

std::string Scale::str() const { return ratio_ ? ratio_->str() : std::string("inf"); }

Scale pow(const Scale& s, std::uint64_t k) {
  if (k == 0) return Scale();
  if (s.is_infinite()) return s;
  return Scale::finite(pow(s.ratio(), k));
}

}  // namespace ppcdstab

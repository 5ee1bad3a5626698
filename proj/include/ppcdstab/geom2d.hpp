#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "ppcdstab/linalg.hpp"
#include "ppcdstab/rat.hpp"

namespace ppcdstab {

/// Half-line {t * dir : t >= 0} with a primitive integer direction.
class Ray {
 public:
  /// Divides out gcd(|dx|, |dy|). Throws Error(InvalidArgument) for (0, 0).
  Ray(long dx, long dy);

  long dx() const { return dx_; }
  long dy() const { return dy_; }
  Vec2Q dir() const { return vec2q(Rat(dx_), Rat(dy_)); }

  friend bool operator==(const Ray&, const Ray&) = default;

 private:
  long dx_;
  long dy_;
};

enum class Facet { Lo, Hi };
std::string_view to_string(Facet f);

/// Salient convex cone spanned counterclockwise from `lo` to `hi`
/// (cross(lo, hi) > 0, so the opening angle is strictly below pi).
class Sector {
 public:
  /// Throws Error(InvalidModel) unless cross(lo, hi) > 0.
  Sector(Ray lo, Ray hi);

  const Ray& lo() const { return lo_; }
  const Ray& hi() const { return hi_; }
  const Ray& facet(Facet f) const { return f == Facet::Lo ? lo_ : hi_; }
  /// Which facet equals `r`, if either.
  std::optional<Facet> facet_of(const Ray& r) const;

  friend bool operator==(const Sector&, const Sector&) = default;

 private:
  Ray lo_;
  Ray hi_;
};

/// True when lo and hi span a salient convex cone counterclockwise.
bool is_salient_ccw(const Ray& lo, const Ray& hi);

/// Coefficients (alpha, beta) with p = alpha * lo + beta * hi.
Vec2Q cone_coordinates(const Sector& sec, const Vec2Q& p);
bool sector_contains(const Sector& sec, const Vec2Q& p);

/// Constant nonzero flow vector.
class FlowVec {
 public:
  /// Throws Error(InvalidArgument) for the zero vector.
  FlowVec(Rat x, Rat y);
  const Vec2Q& r() const { return r_; }

  friend bool operator==(const FlowVec& a, const FlowVec& b) { return a.r_ == b.r_; }

 private:
  Vec2Q r_;
};

struct RayHit {
  Rat time;   // T > 0
  Rat scale;  // |landing|_inf / |start|_inf
  Rat along;  // landing = along * target.dir, along > 0
};

/// Solves start + flow * T = s * target.dir. Some iff T > 0 and s > 0.
/// Throws Error(DegenerateSystem) when flow is parallel to target.
std::optional<RayHit> flow_hit(const Vec2Q& start, const FlowVec& flow, const Ray& target);

/// flow_hit from the canonical point entry.dir.
std::optional<RayHit> ray_hit(const Ray& entry, const FlowVec& flow, const Ray& target);

struct Hit {
  Facet exit;
  Rat scale;
  Rat time;
  bool dwell_positive = true;
};
struct Diverge {};
enum class StuckReason { ImmediateExit, TowardApex, ReachesApex };
struct Stuck {
  StuckReason reason;
};
using StepOutcome = std::variant<Hit, Diverge, Stuck>;

std::string_view to_string(StuckReason r);

/// One continuous phase of a location entered on facet `entry`, starting from
/// probe * entry.dir (probe > 0). Throws Error(EntryNotAFacet) if `entry` is
/// not a facet of `sec`.
StepOutcome continuous_step(const Sector& sec, const Ray& entry, const FlowVec& flow, const Rat& probe = Rat(1));

}  // namespace ppcdstab

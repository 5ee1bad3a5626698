#include "ppcdstab/geom2d.hpp"

#include <numeric>

#include "ppcdstab/errors.hpp"

namespace ppcdstab {

Ray::Ray(long dx, long dy) {
  if (dx == 0 && dy == 0) throw Error(ErrorCode::InvalidArgument, "ray direction (0, 0)");
  const long g = std::gcd(dx, dy);
  dx_ = dx / g;
  dy_ = dy / g;
}

std::string_view to_string(Facet f) { return f == Facet::Lo ? "lo" : "hi"; }

std::string_view to_string(StuckReason r) {
  switch (r) {
    case StuckReason::ImmediateExit: return "flow leaves the invariant immediately";
    case StuckReason::TowardApex: return "flow runs along the entry facet toward the origin";
    case StuckReason::ReachesApex: return "trajectory reaches the origin";
  }
  return "?";
}

bool is_salient_ccw(const Ray& lo, const Ray& hi) { return cross(lo.dir(), hi.dir()).sign() > 0; }

Sector::Sector(Ray lo, Ray hi) : lo_(lo), hi_(hi) {
  if (!is_salient_ccw(lo_, hi_)) {
    throw Error(ErrorCode::InvalidModel, "sector from (" + std::to_string(lo.dx()) + "," + std::to_string(lo.dy()) +
                                             ") to (" + std::to_string(hi.dx()) + "," + std::to_string(hi.dy()) +
                                             ") is not a salient counterclockwise cone");
  }
}

std::optional<Facet> Sector::facet_of(const Ray& r) const {
  if (r == lo_) return Facet::Lo;
  if (r == hi_) return Facet::Hi;
  return std::nullopt;
}

Vec2Q cone_coordinates(const Sector& sec, const Vec2Q& p) {
  const Vec2Q lo = sec.lo().dir();
  const Vec2Q hi = sec.hi().dir();
  const Rat det = cross(lo, hi);
  return vec2q(cross(p, hi) / det, cross(lo, p) / det);
}

bool sector_contains(const Sector& sec, const Vec2Q& p) {
  const Vec2Q ab = cone_coordinates(sec, p);
  return ab(0).sign() >= 0 && ab(1).sign() >= 0;
}

FlowVec::FlowVec(Rat x, Rat y) : r_(vec2q(x, y)) {
  if (r_(0).is_zero() && r_(1).is_zero()) throw Error(ErrorCode::InvalidArgument, "zero flow vector");
}

namespace {

struct LineSolution {
  Rat time;
  Rat along;
};

// start + flow * T = s * target, by Cramer's rule.
LineSolution solve_line(const Vec2Q& start, const Vec2Q& flow, const Vec2Q& target) {
  const Rat det = cross(target, flow);
  if (det.is_zero()) throw Error(ErrorCode::DegenerateSystem, "flow is parallel to the target facet");
  return {cross(start, target) / det, cross(start, flow) / det};
}

}  // namespace

std::optional<RayHit> flow_hit(const Vec2Q& start, const FlowVec& flow, const Ray& target) {
  const Vec2Q t = target.dir();
  const LineSolution sol = solve_line(start, flow.r(), t);
  if (sol.time.sign() <= 0 || sol.along.sign() <= 0) return std::nullopt;
  const Vec2Q landing = t * sol.along;
  return RayHit{sol.time, inf_norm(landing) / inf_norm(start), sol.along};
}

std::optional<RayHit> ray_hit(const Ray& entry, const FlowVec& flow, const Ray& target) {
  return flow_hit(entry.dir(), flow, target);
}

StepOutcome continuous_step(const Sector& sec, const Ray& entry, const FlowVec& flow, const Rat& probe) {
  const auto entry_facet = sec.facet_of(entry);
  if (!entry_facet) throw Error(ErrorCode::EntryNotAFacet, "entry ray is not a facet of the invariant");
  if (probe.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "probe scale must be positive");

  const Vec2Q e = entry.dir();
  const Vec2Q& v = flow.r();
  if (cross(e, v).is_zero()) {
    if (e.dot(v).sign() > 0) return Diverge{};
    return Stuck{StuckReason::TowardApex};
  }
  // Moving off the entry facet must point into the cone.
  const int inward = *entry_facet == Facet::Lo ? cross(sec.lo().dir(), v).sign() : cross(v, sec.hi().dir()).sign();
  if (inward <= 0) return Stuck{StuckReason::ImmediateExit};
  if (sector_contains(sec, v)) return Diverge{};

  const Vec2Q start = e * probe;
  std::optional<Hit> best;
  for (Facet f : {Facet::Lo, Facet::Hi}) {
    const Ray& target = sec.facet(f);
    if (cross(target.dir(), v).is_zero()) continue;
    const LineSolution sol = solve_line(start, v, target.dir());
    // Landing exactly on the apex is not a facet transition.
    if (sol.time.sign() <= 0 || sol.along.sign() <= 0) continue;
    if (!best || sol.time < best->time) {
      best = Hit{f, inf_norm(Vec2Q(target.dir() * sol.along)) / inf_norm(start), sol.time, true};
    }
  }
  if (best) return *best;
  return Stuck{StuckReason::ReachesApex};
}

}  // namespace ppcdstab

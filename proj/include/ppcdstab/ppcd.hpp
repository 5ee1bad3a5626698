#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppcdstab/geom2d.hpp"
#include "ppcdstab/scale.hpp"
#include "ppcdstab/wdtmc.hpp"

namespace ppcdstab {

/// One discrete mode: constant flow inside a cone, one guard facet with a
/// switch distribution over successor modes.
///
/// `stall` is the probability that the system does not move during a step
/// (it stays at its current point and mode). It gives every quotient state a
/// weight-one self-loop, which is what makes rotating systems aperiodic.
struct Location {
  std::string id;
  Ray lo;
  Ray hi;
  FlowVec flow;
  Ray guard;
  std::map<std::string, Rat> switch_probs;
  Rat stall = Rat(0);

  /// Throws Error(InvalidModel) if lo/hi do not span a salient ccw cone.
  Sector invariant() const { return Sector(lo, hi); }
};

struct InitialState {
  std::string location;
  Facet facet = Facet::Lo;
};

struct Ppcd {
  std::vector<Location> locations;
  InitialState initial;

  /// nullptr if absent.
  const Location* find(const std::string& id) const;
};

struct ModelIssue {
  enum class Kind {
    BadDistribution,
    GuardNotAFacet,
    TargetMissingFacet,
    ReflexSector,
    DuplicateId,
    UnknownLocation,
    UncoveredEntryFacet,  // warning only
  };
  Kind kind;
  std::string message;

  bool is_warning() const { return kind == Kind::UncoveredEntryFacet; }
};

std::vector<ModelIssue> validate_ppcd(const Ppcd& model);
/// Throws Error(InvalidModel) listing every non-warning issue.
void require_valid(const Ppcd& model);

struct QuotientState {
  std::string location;
  Facet facet;

  friend bool operator==(const QuotientState&, const QuotientState&) = default;
  friend auto operator<=>(const QuotientState&, const QuotientState&) = default;
};

/// Chain state name of a quotient state: "<location>@lo" or "<location>@hi".
std::string state_name(const QuotientState& s);

struct Quotient {
  Wdtmc chain;
  std::vector<QuotientState> states;  // parallel to chain.states()
};

/// Finite quotient over (location, entry facet) pairs reachable from the
/// initial state, ordered by location id then facet. Continuous steps start
/// from probe * facet direction; by point independence the result does not
/// depend on the probe.
/// Throws Error(StuckTrajectory), Error(HitNonGuardFacet),
/// Error(EmptySwitchAtGuard), or Error(InvalidModel).
Quotient build_quotient(const Ppcd& model, const Rat& probe = Rat(1));

struct ConcreteState {
  std::string location;
  Vec2Q point;
};

enum class Termination { Completed, Diverged, Stuck };
std::string_view to_string(Termination t);

struct ConcretePath {
  std::vector<ConcreteState> steps;
  std::vector<Scale> step_scales;  // step_scales[i] = |x_{i+1}| / |x_i|
  Termination end = Termination::Completed;
  std::string note;  // why the run stopped early
};

/// Exact execution from `start_point` on the initial facet. Each step draws
/// one outcome from the mode's distribution (stall first, then switch targets
/// by id); a non-stall step follows the flow from the actual point to the
/// guard and switches. Throws Error(StartNotOnFacet).
ConcretePath simulate_concrete(const Ppcd& model, const Vec2Q& start_point, std::size_t steps, std::uint64_t seed);

struct ConservationTrial {
  std::uint64_t seed = 0;
  Rat start_multiple;
  std::size_t steps_taken = 0;
  Termination end = Termination::Completed;
  Scale concrete_product;
  Scale quotient_product;
  bool passed = false;
  std::string detail;
};

struct ConservationReport {
  std::vector<ConservationTrial> trials;
  std::size_t passed() const;
  bool all_passed() const { return passed() == trials.size(); }
};

/// Trial i runs with seed + i from start_multiple_i * initial facet direction
/// and replays the induced (location, facet) path on the quotient; it passes
/// when every step scale equals the quotient edge weight exactly.
ConservationReport weight_conservation_check(const Ppcd& model, std::size_t steps, std::size_t trials,
                                             std::uint64_t seed);

/// Start multiples cycled through by weight_conservation_check.
Rat conservation_start_multiple(std::size_t trial);

/// Quotient states visited by a concrete path, or nullopt if some point lies
/// on no facet of its location.
std::optional<Path> induced_quotient_path(const Ppcd& model, const Quotient& quotient, const ConcretePath& path);

struct AnalysisReport {
  Quotient quotient;
  Verdict absolute;
  std::optional<Verdict> almost_sure;
  std::string almost_sure_error;  // set when the almost-sure hypotheses fail
  double build_seconds = 0.0;
  double absolute_seconds = 0.0;
  double almost_sure_seconds = 0.0;
};

AnalysisReport analyze(const Ppcd& model);

}  // namespace ppcdstab

#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ppcdstab/ppcd.hpp"
#include "ppcdstab/wdtmc.hpp"

namespace ppcdstab {

inline constexpr std::string_view kGeneratorVersion = "ppcd-bench/1";

/// Eight 45-degree regions, `locs_per_region` locations each, flows of the
/// form a*x' + b*y' = 0 oriented counterclockwise, guards on the larger-angle
/// facet, random switches into the next region plus a 1/10 stall.
struct ExperimentConfig {
  int experiment = 1;  // 1, 2 or 3
  std::size_t locs_per_region = 12;
  long coefficient_lo = 1;
  long coefficient_hi = 5;
  std::uint64_t seed = 0;
};

/// Stall probability given to every generated location.
Rat experiment_stall();

/// Counterclockwise direction of a*x' + b*y' = 0: the normal (a, b) turned
/// by +90 degrees, i.e. (-b, a).
FlowVec flow_from_coefficients(const Rat& a, const Rat& b, bool counterclockwise = true);

Ppcd gen_experiment(const ExperimentConfig& cfg);

/// Quadrant robot: quadrant i (counterclockwise from the positive x-axis)
/// has one mode per heading; leaving quadrant i through its counterclockwise
/// axis, the robot picks mode j of quadrant i+1 with probability probs[i+1][j].
struct CaseStudyConfig {
  std::array<std::vector<FlowVec>, 4> headings;
  std::array<std::vector<Rat>, 4> probs;
  Rat stall = Rat(1, 10);
};

/// Throws Error(InvalidModel) when sizes or probabilities are inconsistent or
/// a heading does not carry its quadrant's entry axis to the next axis.
Ppcd gen_case_study(const CaseStudyConfig& cfg);

/// Heading (-1, s) in quadrant 1 carries (1, 0) to (0, s); turned by 90
/// degrees per quadrant it has the same scale there.
FlowVec quadrant_heading(int quadrant, const Rat& scale);

/// k headings per quadrant with scales spread evenly over
/// [nominal - spread, nominal + spread] and uniform probabilities.
CaseStudyConfig faulty_robot_config(std::size_t k, const Rat& nominal, const Rat& spread);

/// Irreducible, aperiodic chain: ring backbone, self-loops, random chords
/// with probability `density`, probabilities from integer weights 1..9,
/// scales p/q with p, q in 1..4.
Wdtmc gen_random_wdtmc(std::size_t states, const Rat& density, std::uint64_t seed);

}  // namespace ppcdstab

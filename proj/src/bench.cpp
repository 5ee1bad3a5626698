#include "ppcdstab/bench.hpp"

#include <string>

#include "ppcdstab/errors.hpp"
#include "ppcdstab/sampling.hpp"

namespace ppcdstab {

namespace {

const std::array<Ray, 8> kRegionRays = {Ray(1, 0),  Ray(1, 1),   Ray(0, 1),  Ray(-1, 1),
                                        Ray(-1, 0), Ray(-1, -1), Ray(0, -1), Ray(1, -1)};
const std::array<Ray, 4> kAxes = {Ray(1, 0), Ray(0, 1), Ray(-1, 0), Ray(0, -1)};

std::string padded(std::size_t value, std::size_t count) {
  const std::size_t width = std::max<std::size_t>(2, std::to_string(count > 0 ? count - 1 : 0).size());
  std::string s = std::to_string(value);
  return std::string(width - std::min(width, s.size()), '0') + s;
}

std::string region_location_id(std::size_t region, std::size_t j, std::size_t per_region) {
  return "r" + std::to_string(region + 1) + "_" + padded(j, per_region);
}

// Integer weights 1..9, normalized exactly.
std::vector<Rat> random_distribution(Rng& rng, std::size_t n) {
  std::vector<long> w(n);
  long total = 0;
  for (auto& x : w) total += (x = rng.uniform_int(1, 9));
  std::vector<Rat> p;
  p.reserve(n);
  for (long x : w) p.emplace_back(x, total);
  return p;
}

}  // namespace

Rat experiment_stall() { return Rat(1, 10); }

FlowVec flow_from_coefficients(const Rat& a, const Rat& b, bool counterclockwise) {
  return counterclockwise ? FlowVec(-b, a) : FlowVec(b, -a);
}

Ppcd gen_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment < 1 || cfg.experiment > 3) throw Error(ErrorCode::InvalidArgument, "experiment must be 1, 2 or 3");
  if (cfg.locs_per_region < 1) throw Error(ErrorCode::InvalidArgument, "locs_per_region must be >= 1");
  if (cfg.coefficient_lo > cfg.coefficient_hi) throw Error(ErrorCode::InvalidArgument, "empty coefficient range");

  Rng rng(cfg.seed);
  const std::size_t k = cfg.locs_per_region;
  Ppcd model;
  for (std::size_t region = 0; region < 8; ++region) {
    for (std::size_t j = 0; j < k; ++j) {
      const Rat c(rng.uniform_int(cfg.coefficient_lo, cfg.coefficient_hi));
      Rat a, b;
      switch (region / 2) {
        case 0: a = 1; b = c; break;
        case 1: b = 1; a = -c; break;
        case 2: a = -1; b = -c; break;
        default: b = -1; a = c; break;
      }
      if (region == 0 && j == 0 && cfg.experiment == 2) { a = 50; b = 1; }
      if (region == 0 && j == 0 && cfg.experiment == 3) { a = 1; b = -5; }
      const Ray lo = kRegionRays[region];
      const Ray hi = kRegionRays[(region + 1) % 8];
      model.locations.push_back(Location{region_location_id(region, j, k), lo, hi,
                                         flow_from_coefficients(a, b), hi, {}, experiment_stall()});
    }
  }
  for (std::size_t region = 0; region < 8; ++region) {
    const std::size_t next = (region + 1) % 8;
    for (std::size_t j = 0; j < k; ++j) {
      const auto probs = random_distribution(rng, k);
      auto& sw = model.locations[region * k + j].switch_probs;
      for (std::size_t m = 0; m < k; ++m) sw.emplace(region_location_id(next, m, k), probs[m]);
    }
  }
  model.initial = {region_location_id(0, 0, k), Facet::Lo};
  require_valid(model);
  return model;
}

FlowVec quadrant_heading(int quadrant, const Rat& scale) {
  Rat x = -1, y = scale;
  for (int i = 0; i < quadrant; ++i) {
    const Rat t = x;
    x = -y;
    y = t;
  }
  return FlowVec(x, y);
}

CaseStudyConfig faulty_robot_config(std::size_t k, const Rat& nominal, const Rat& spread) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "need at least one heading per quadrant");
  CaseStudyConfig cfg;
  for (int q = 0; q < 4; ++q) {
    for (std::size_t j = 0; j < k; ++j) {
      const Rat offset = k == 1 ? Rat(0) : spread * (Rat(2 * static_cast<long>(j), static_cast<long>(k - 1)) - Rat(1));
      cfg.headings[q].push_back(quadrant_heading(q, nominal + offset));
      cfg.probs[q].emplace_back(1, static_cast<long>(k));
    }
  }
  return cfg;
}

Ppcd gen_case_study(const CaseStudyConfig& cfg) {
  Ppcd model;
  auto mode_id = [&](std::size_t q, std::size_t j) {
    return "q" + std::to_string(q + 1) + "_" + padded(j, cfg.headings[q].size());
  };
  for (std::size_t q = 0; q < 4; ++q) {
    if (cfg.headings[q].empty() || cfg.headings[q].size() != cfg.probs[q].size()) {
      throw Error(ErrorCode::InvalidModel, "quadrant " + std::to_string(q + 1) + ": headings and probabilities differ in count");
    }
    Rat total(0);
    for (const Rat& p : cfg.probs[q]) total += p;
    if (total != Rat(1)) throw Error(ErrorCode::InvalidModel, "quadrant " + std::to_string(q + 1) + ": probabilities sum to " + total.str());
  }
  for (std::size_t q = 0; q < 4; ++q) {
    const Ray lo = kAxes[q];
    const Ray hi = kAxes[(q + 1) % 4];
    const std::size_t next = (q + 1) % 4;
    for (std::size_t j = 0; j < cfg.headings[q].size(); ++j) {
      Location loc{mode_id(q, j), lo, hi, cfg.headings[q][j], hi, {}, cfg.stall};
      const StepOutcome step = continuous_step(loc.invariant(), lo, loc.flow);
      const auto* hit = std::get_if<Hit>(&step);
      if (hit == nullptr || hit->exit != Facet::Hi) {
        throw Error(ErrorCode::InvalidModel, "heading of " + loc.id + " does not carry its entry axis to the next axis");
      }
      for (std::size_t m = 0; m < cfg.headings[next].size(); ++m) loc.switch_probs.emplace(mode_id(next, m), cfg.probs[next][m]);
      model.locations.push_back(std::move(loc));
    }
  }
  model.initial = {mode_id(0, 0), Facet::Lo};
  require_valid(model);
  return model;
}

Wdtmc gen_random_wdtmc(std::size_t states, const Rat& density, std::uint64_t seed) {
  if (states < 1) throw Error(ErrorCode::InvalidArgument, "need at least one state");
  if (density.sign() <= 0 || density > Rat(1)) throw Error(ErrorCode::InvalidArgument, "density must be in (0, 1]");
  Rng rng(seed);
  const BigInt den = density.denominator();
  const BigInt num = density.numerator();
  std::vector<std::string> names;
  for (std::size_t s = 0; s < states; ++s) names.push_back("s" + std::to_string(s));

  std::vector<Edge> edges;
  for (StateId u = 0; u < states; ++u) {
    std::vector<StateId> targets;
    for (StateId v = 0; v < states; ++v) {
      const bool backbone = v == u || v == (u + 1) % states;
      if (backbone || rng.uniform_below(den) < num) targets.push_back(v);
    }
    const auto probs = random_distribution(rng, targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const Rat ratio(rng.uniform_int(1, 4), rng.uniform_int(1, 4));
      edges.push_back({u, targets[i], probs[i], Scale::finite(ratio)});
    }
  }
  return Wdtmc(std::move(names), std::move(edges), 0);
}

}  // namespace ppcdstab

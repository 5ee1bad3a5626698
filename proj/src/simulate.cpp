#include <map>

#include "ppcdstab/errors.hpp"
#include "ppcdstab/ppcd.hpp"
#include "ppcdstab/sampling.hpp"

namespace ppcdstab {

namespace {

// Positive t with p = t * r.dir, if p lies on the open ray.
std::optional<Rat> multiple_on_ray(const Vec2Q& p, const Ray& r) {
  const Vec2Q d = r.dir();
  if (!cross(p, d).is_zero()) return std::nullopt;
  const Rat t = d(0).is_zero() ? p(1) / d(1) : p(0) / d(0);
  if (t.sign() <= 0) return std::nullopt;
  return t;
}

// Outcome order shared by simulation and documentation: stall, then targets by id.
struct ModeChoices {
  bool has_stall = false;
  std::vector<std::string> targets;
  DiscreteSampler sampler;
};

ModeChoices make_choices(const Location& loc) {
  std::vector<Rat> probs;
  std::vector<std::string> targets;
  const bool has_stall = loc.stall.sign() > 0;
  if (has_stall) probs.push_back(loc.stall);
  for (const auto& [target, p] : loc.switch_probs) {
    probs.push_back((Rat(1) - loc.stall) * p);
    targets.push_back(target);
  }
  return {has_stall, std::move(targets), DiscreteSampler(probs)};
}

}  // namespace

ConcretePath simulate_concrete(const Ppcd& model, const Vec2Q& start_point, std::size_t steps, std::uint64_t seed) {
  require_valid(model);
  const Location* loc = model.find(model.initial.location);
  Facet entry = model.initial.facet;
  Ray entry_ray = loc->invariant().facet(entry);
  if (!multiple_on_ray(start_point, entry_ray)) {
    throw Error(ErrorCode::StartNotOnFacet, "start point is not on the initial facet of '" + loc->id + "'");
  }

  Rng rng(seed);
  std::map<std::string, ModeChoices> choices;
  ConcretePath path;
  path.steps.push_back({loc->id, start_point});
  Vec2Q x = start_point;

  for (std::size_t i = 0; i < steps; ++i) {
    const Sector sec = loc->invariant();
    const Rat probe = *multiple_on_ray(x, entry_ray);
    const StepOutcome outcome = continuous_step(sec, entry_ray, loc->flow, probe);
    if (std::holds_alternative<Diverge>(outcome)) {
      path.end = Termination::Diverged;
      path.note = "location '" + loc->id + "' flows to infinity inside its invariant";
      break;
    }
    if (const auto* stuck = std::get_if<Stuck>(&outcome)) {
      path.end = Termination::Stuck;
      path.note = "location '" + loc->id + "': " + std::string(to_string(stuck->reason));
      break;
    }
    if (sec.facet(std::get<Hit>(outcome).exit) != loc->guard) {
      path.end = Termination::Stuck;
      path.note = "location '" + loc->id + "' reaches a facet that is not its guard";
      break;
    }
    if (loc->switch_probs.empty()) {
      path.end = Termination::Stuck;
      path.note = "location '" + loc->id + "' has no switch distribution";
      break;
    }

    auto it = choices.find(loc->id);
    if (it == choices.end()) it = choices.emplace(loc->id, make_choices(*loc)).first;
    const ModeChoices& mode = it->second;
    std::size_t k = mode.sampler.sample(rng);
    if (mode.has_stall && k == 0) {
      path.steps.push_back({loc->id, x});
      path.step_scales.push_back(Scale());
      continue;
    }
    if (mode.has_stall) --k;

    // Follow the flow from the actual point, not the canonical one.
    const auto landing = flow_hit(x, loc->flow, loc->guard);
    if (!landing) {
      path.end = Termination::Stuck;
      path.note = "location '" + loc->id + "': no forward intersection with the guard";
      break;
    }
    const Vec2Q next = loc->guard.dir() * landing->along;
    path.step_scales.push_back(Scale::finite(inf_norm(next) / inf_norm(x)));

    const Location* dst = model.find(mode.targets[k]);
    entry = dst->lo == loc->guard ? Facet::Lo : Facet::Hi;
    entry_ray = loc->guard;
    loc = dst;
    x = next;
    path.steps.push_back({loc->id, x});
  }
  return path;
}

std::optional<Path> induced_quotient_path(const Ppcd& model, const Quotient& quotient, const ConcretePath& path) {
  Path out;
  for (const ConcreteState& s : path.steps) {
    const Location* loc = model.find(s.location);
    if (loc == nullptr) return std::nullopt;
    std::optional<Facet> facet;
    if (multiple_on_ray(s.point, loc->lo)) facet = Facet::Lo;
    if (multiple_on_ray(s.point, loc->hi)) facet = Facet::Hi;
    if (!facet) return std::nullopt;
    try {
      out.states.push_back(quotient.chain.index_of(state_name({s.location, *facet})));
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return out;
}

Rat conservation_start_multiple(std::size_t trial) {
  static const Rat multiples[] = {Rat(1), Rat(1, 3), Rat(2), Rat(7, 5), Rat(5, 2)};
  return multiples[trial % (sizeof(multiples) / sizeof(multiples[0]))];
}

ConservationReport weight_conservation_check(const Ppcd& model, std::size_t steps, std::size_t trials,
                                             std::uint64_t seed) {
  const Quotient quotient = build_quotient(model);
  const Location* init = model.find(model.initial.location);
  const Vec2Q base = init->invariant().facet(model.initial.facet).dir();

  ConservationReport report;
  for (std::size_t i = 0; i < trials; ++i) {
    ConservationTrial trial;
    trial.seed = seed + i;
    trial.start_multiple = conservation_start_multiple(i);
    const ConcretePath path = simulate_concrete(model, Vec2Q(base * trial.start_multiple), steps, trial.seed);
    trial.steps_taken = path.step_scales.size();
    trial.end = path.end;
    for (const Scale& s : path.step_scales) trial.concrete_product *= s;

    const auto qpath = induced_quotient_path(model, quotient, path);
    if (!qpath) {
      trial.detail = "concrete state outside the quotient";
      report.trials.push_back(std::move(trial));
      continue;
    }
    bool steps_match = true;
    for (std::size_t k = 0; k + 1 < qpath->states.size(); ++k) {
      const auto e = quotient.chain.find_edge(qpath->states[k], qpath->states[k + 1]);
      if (!e || quotient.chain.edges()[*e].weight != path.step_scales[k]) {
        steps_match = false;
        trial.detail = "step " + std::to_string(k) + " differs from its quotient edge";
        break;
      }
    }
    if (steps_match) {
      trial.quotient_product = path_weight(quotient.chain, *qpath);
      const Rat telescoped = inf_norm(path.steps.back().point) / inf_norm(path.steps.front().point);
      trial.passed = trial.quotient_product == trial.concrete_product &&
                     trial.concrete_product == Scale::finite(telescoped);
      if (path.end == Termination::Diverged) {
        const auto loop = quotient.chain.find_edge(qpath->states.back(), qpath->states.back());
        trial.passed = trial.passed && loop && quotient.chain.edges()[*loop].weight.is_infinite();
      }
      if (!trial.passed) trial.detail = "path products differ";
    }
    report.trials.push_back(std::move(trial));
  }
  return report;
}

}  // namespace ppcdstab

#include "ppcdstab/ppcd.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "ppcdstab/errors.hpp"

namespace ppcdstab {

const Location* Ppcd::find(const std::string& id) const {
  for (const Location& loc : locations) {
    if (loc.id == id) return &loc;
  }
  return nullptr;
}

std::string state_name(const QuotientState& s) { return s.location + "@" + std::string(to_string(s.facet)); }

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Diverged: return "diverged";
    case Termination::Stuck: return "stuck";
  }
  return "?";
}

namespace {

std::string ray_str(const Ray& r) { return "[" + std::to_string(r.dx()) + "," + std::to_string(r.dy()) + "]"; }

}  // namespace

std::vector<ModelIssue> validate_ppcd(const Ppcd& model) {
  using Kind = ModelIssue::Kind;
  std::vector<ModelIssue> issues;
  std::set<std::string> ids;
  for (const Location& loc : model.locations) {
    if (!ids.insert(loc.id).second) issues.push_back({Kind::DuplicateId, "duplicate location id '" + loc.id + "'"});
  }

  for (const Location& loc : model.locations) {
    const std::string where = "location '" + loc.id + "'";
    if (!is_salient_ccw(loc.lo, loc.hi)) {
      issues.push_back({Kind::ReflexSector, where + ": sector " + ray_str(loc.lo) + " to " + ray_str(loc.hi) +
                                                " is not salient and counterclockwise"});
    }
    if (loc.guard != loc.lo && loc.guard != loc.hi) {
      issues.push_back({Kind::GuardNotAFacet, where + ": guard " + ray_str(loc.guard) + " is not a facet"});
    }
    if (loc.stall.sign() < 0 || loc.stall >= Rat(1)) {
      issues.push_back({Kind::BadDistribution, where + ": stall probability " + loc.stall.str() + " not in [0, 1)"});
    }
    Rat total(0);
    for (const auto& [target, p] : loc.switch_probs) {
      if (p.sign() <= 0) {
        issues.push_back({Kind::BadDistribution, where + ": switch probability to '" + target + "' is " + p.str()});
      }
      total += p;
      const Location* dst = model.find(target);
      if (dst == nullptr) {
        issues.push_back({Kind::UnknownLocation, where + ": switch target '" + target + "' does not exist"});
      } else if (dst->lo != loc.guard && dst->hi != loc.guard) {
        issues.push_back({Kind::TargetMissingFacet,
                          where + ": guard " + ray_str(loc.guard) + " is not a facet of target '" + target + "'"});
      }
    }
    if (!loc.switch_probs.empty() && total != Rat(1)) {
      issues.push_back({Kind::BadDistribution, where + ": switch probabilities sum to " + total.str()});
    }
  }

  // Entry facets nobody switches onto can only be used as the initial state.
  for (const Location& loc : model.locations) {
    const Ray entry = loc.guard == loc.lo ? loc.hi : loc.lo;
    const bool covered = std::any_of(model.locations.begin(), model.locations.end(), [&](const Location& pred) {
      return pred.guard == entry && pred.switch_probs.count(loc.id) > 0;
    });
    const bool is_initial = model.initial.location == loc.id;
    if (!covered && !is_initial) {
      issues.push_back({Kind::UncoveredEntryFacet,
                        "location '" + loc.id + "': no predecessor switches in through " + ray_str(entry)});
    }
  }

  if (model.find(model.initial.location) == nullptr) {
    issues.push_back({Kind::UnknownLocation, "initial location '" + model.initial.location + "' does not exist"});
  }
  return issues;
}

void require_valid(const Ppcd& model) {
  std::string msg;
  for (const ModelIssue& issue : validate_ppcd(model)) {
    if (issue.is_warning()) continue;
    if (!msg.empty()) msg += "; ";
    msg += issue.message;
  }
  if (!msg.empty()) throw Error(ErrorCode::InvalidModel, msg);
}

std::size_t ConservationReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const ConservationTrial& t) { return t.passed; }));
}

AnalysisReport analyze(const Ppcd& model) {
  using Clock = std::chrono::steady_clock;
  const auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  auto t0 = Clock::now();
  Quotient quotient = build_quotient(model);
  auto t1 = Clock::now();
  Verdict absolute = check_absolute(quotient.chain);
  auto t2 = Clock::now();
  AnalysisReport report{std::move(quotient), std::move(absolute), std::nullopt, {}, seconds(t0, t1), seconds(t1, t2), 0.0};
  try {
    report.almost_sure = check_almost_sure(report.quotient.chain);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotIrreducible && e.code() != ErrorCode::NotAperiodic) throw;
    report.almost_sure_error = e.what();
  }
  report.almost_sure_seconds = seconds(t2, Clock::now());
  return report;
}

}  // namespace ppcdstab

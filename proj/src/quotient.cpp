#include <algorithm>
#include <deque>
#include <map>

#include "ppcdstab/errors.hpp"
#include "ppcdstab/ppcd.hpp"

namespace ppcdstab {

namespace {

struct PendingEdge {
  QuotientState src;
  QuotientState dst;
  Rat prob;
  Scale weight;
};

std::string describe(const QuotientState& s) { return "(" + s.location + ", " + std::string(to_string(s.facet)) + ")"; }

// Outgoing quotient edges of one state.
std::vector<PendingEdge> expand(const Ppcd& model, const QuotientState& state, const Rat& probe) {
  const Location& loc = *model.find(state.location);
  const Sector sec = loc.invariant();
  const StepOutcome outcome = continuous_step(sec, sec.facet(state.facet), loc.flow, probe);

  if (std::holds_alternative<Diverge>(outcome)) return {{state, state, Rat(1), Scale::infinite()}};
  if (const auto* stuck = std::get_if<Stuck>(&outcome)) {
    throw Error(ErrorCode::StuckTrajectory, describe(state) + ": " + std::string(to_string(stuck->reason)));
  }
  const Hit& hit = std::get<Hit>(outcome);
  if (sec.facet(hit.exit) != loc.guard) {
    throw Error(ErrorCode::HitNonGuardFacet,
                describe(state) + " reaches facet " + std::string(to_string(hit.exit)) + " which is not its guard");
  }
  if (loc.switch_probs.empty()) throw Error(ErrorCode::EmptySwitchAtGuard, "location '" + loc.id + "'");

  std::vector<PendingEdge> out;
  if (loc.stall.sign() > 0) out.push_back({state, state, loc.stall, Scale()});
  const Rat moving = Rat(1) - loc.stall;
  for (const auto& [target, p] : loc.switch_probs) {
    const Location& dst = *model.find(target);
    const Facet entry = dst.lo == loc.guard ? Facet::Lo : Facet::Hi;
    out.push_back({state, {target, entry}, moving * p, Scale::finite(hit.scale)});
  }
  return out;
}

}  // namespace

Quotient build_quotient(const Ppcd& model, const Rat& probe) {
  require_valid(model);
  const QuotientState start{model.initial.location, model.initial.facet};

  std::map<QuotientState, std::vector<PendingEdge>> explored;
  std::deque<QuotientState> queue{start};
  explored[start];
  while (!queue.empty()) {
    const QuotientState s = queue.front();
    queue.pop_front();
    auto edges = expand(model, s, probe);
    for (const PendingEdge& e : edges) {
      if (explored.find(e.dst) == explored.end()) {
        explored[e.dst];
        queue.push_back(e.dst);
      }
    }
    explored[s] = std::move(edges);
  }

  // std::map order is (location id, facet) with lo before hi.
  std::map<QuotientState, StateId> index;
  Quotient q{Wdtmc({}, {}, 0), {}};
  std::vector<std::string> names;
  for (const auto& [s, _] : explored) {
    index.emplace(s, q.states.size());
    q.states.push_back(s);
    names.push_back(state_name(s));
  }
  std::vector<Edge> edges;
  for (const auto& [s, out] : explored) {
    const auto first = static_cast<std::ptrdiff_t>(edges.size());
    for (const PendingEdge& e : out) {
      const StateId u = index.at(e.src);
      const StateId v = index.at(e.dst);
      auto same = std::find_if(edges.begin() + first, edges.end(), [&](const Edge& x) { return x.src == u && x.dst == v; });
      if (same != edges.end()) {
        // A stall loop and a switch loop would only coincide with equal weights.
        if (same->weight != e.weight) throw Error(ErrorCode::InvalidModel, "conflicting weights on " + names[u]);
        same->prob += e.prob;
      } else {
        edges.push_back({u, v, e.prob, e.weight});
      }
    }
  }
  q.chain = Wdtmc(std::move(names), std::move(edges), index.at(start));
  return q;
}

}  // namespace ppcdstab

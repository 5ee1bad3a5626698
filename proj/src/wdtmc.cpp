#include "ppcdstab/wdtmc.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ppcdstab/errors.hpp"

namespace ppcdstab {

Wdtmc::Wdtmc(std::vector<std::string> states, std::vector<Edge> edges, StateId initial)
    : states_(std::move(states)), edges_(std::move(edges)), initial_(initial), out_(states_.size()) {
  for (StateId s = 0; s < states_.size(); ++s) by_name_.emplace(states_[s], s);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].src < states_.size() && edges_[e].dst < states_.size()) out_[edges_[e].src].push_back(e);
  }
  for (auto& out : out_) {
    std::stable_sort(out.begin(), out.end(),
                     [&](std::size_t a, std::size_t b) { return edges_[a].dst < edges_[b].dst; });
  }
}

std::optional<std::size_t> Wdtmc::find_edge(StateId src, StateId dst) const {
  if (src >= out_.size()) return std::nullopt;
  const auto& out = out_[src];
  auto it = std::lower_bound(out.begin(), out.end(), dst,
                             [&](std::size_t e, StateId d) { return edges_[e].dst < d; });
  if (it != out.end() && edges_[*it].dst == dst) return *it;
  return std::nullopt;
}

StateId Wdtmc::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw Error(ErrorCode::UnknownState, "no state named '" + name + "'");
  return it->second;
}

std::vector<ChainIssue> validate(const Wdtmc& chain) {
  std::vector<ChainIssue> issues;
  const std::size_t n = chain.size();
  if (n == 0) {
    issues.push_back({ChainIssue::Kind::BadReference, "chain has no states"});
    return issues;
  }
  if (chain.initial() >= n) issues.push_back({ChainIssue::Kind::BadReference, "initial state out of range"});
  if (std::set<std::string>(chain.states().begin(), chain.states().end()).size() != n) {
    issues.push_back({ChainIssue::Kind::BadReference, "state names are not unique"});
  }

  std::vector<Rat> row_sum(n, Rat(0));
  std::set<std::pair<StateId, StateId>> seen;
  for (std::size_t e = 0; e < chain.edges().size(); ++e) {
    const Edge& edge = chain.edges()[e];
    if (edge.src >= n || edge.dst >= n) {
      issues.push_back({ChainIssue::Kind::BadReference, "edge " + std::to_string(e) + " references an unknown state"});
      continue;
    }
    const std::string label = chain.name(edge.src) + "->" + chain.name(edge.dst);
    if (edge.prob.sign() <= 0 || edge.prob > Rat(1)) {
      issues.push_back({ChainIssue::Kind::NonPositiveProb, "NonPositiveProb(" + label + "): " + edge.prob.str()});
    }
    if (!seen.emplace(edge.src, edge.dst).second) {
      issues.push_back({ChainIssue::Kind::DuplicateEdge, "DuplicateEdge(" + label + ")"});
    }
    row_sum[edge.src] += edge.prob;
  }
  for (StateId s = 0; s < n; ++s) {
    if (row_sum[s] != Rat(1)) {
      issues.push_back({ChainIssue::Kind::RowSumNotOne,
                        "RowSumNotOne(" + chain.name(s) + "): outgoing probabilities sum to " + row_sum[s].str()});
    }
  }
  return issues;
}

void require_valid(const Wdtmc& chain) {
  const auto issues = validate(chain);
  if (issues.empty()) return;
  std::string msg;
  for (const auto& issue : issues) {
    if (!msg.empty()) msg += "; ";
    msg += issue.message;
  }
  throw Error(ErrorCode::InvalidChain, msg);
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Convergent: return "Convergent";
    case Decision::NotConvergent: return "NotConvergent";
    case Decision::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::Less: return "less";
    case Comparison::Equal: return "equal";
    case Comparison::Greater: return "greater";
    case Comparison::Unknown: return "unknown";
  }
  return "?";
}

std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "neg";
    case Sign::Zero: return "zero";
    case Sign::Positive: return "pos";
    case Sign::Unknown: return "unknown";
  }
  return "?";
}

Sign EffectiveWeight::sign() const {
  switch (cmp) {
    case Comparison::Less: return Sign::Negative;
    case Comparison::Equal: return Sign::Zero;
    case Comparison::Greater: return Sign::Positive;
    case Comparison::Unknown: return Sign::Unknown;
  }
  return Sign::Unknown;
}

// --- paths -----------------------------------------------------------------

void require_path(const Wdtmc& chain, const Path& path) {
  if (path.states.empty()) throw Error(ErrorCode::NotAPath, "empty path");
  for (StateId s : path.states) {
    if (s >= chain.size()) throw Error(ErrorCode::NotAPath, "state index out of range");
  }
  for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
    if (!chain.find_edge(path.states[i], path.states[i + 1])) {
      throw Error(ErrorCode::NotAPath, "no edge " + chain.name(path.states[i]) + "->" +
                                           chain.name(path.states[i + 1]));
    }
  }
}

Scale path_weight(const Wdtmc& chain, const Path& path) {
  require_path(chain, path);
  Scale w;
  for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
    w *= chain.edges()[*chain.find_edge(path.states[i], path.states[i + 1])].weight;
  }
  return w;
}

Rat path_probability(const Wdtmc& chain, const Distribution& rho, const Path& path) {
  require_path(chain, path);
  if (rho.mass.size() != static_cast<Eigen::Index>(chain.size())) {
    throw Error(ErrorCode::DimensionMismatch, "distribution size differs from chain size");
  }
  Rat p = rho.mass(static_cast<Eigen::Index>(path.states.front()));
  for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
    p *= chain.edges()[*chain.find_edge(path.states[i], path.states[i + 1])].prob;
  }
  return p;
}

Decomposition decompose_path(const Wdtmc& chain, const Path& path) {
  require_path(chain, path);
  Decomposition out;
  std::vector<StateId>& stack = out.spine.states;
  std::vector<std::size_t> position(chain.size(), static_cast<std::size_t>(-1));
  for (StateId s : path.states) {
    const std::size_t at = position[s];
    if (at != static_cast<std::size_t>(-1)) {
      Path cycle;
      cycle.states.assign(stack.begin() + static_cast<std::ptrdiff_t>(at), stack.end());
      cycle.states.push_back(s);
      for (std::size_t i = at + 1; i < stack.size(); ++i) position[stack[i]] = static_cast<std::size_t>(-1);
      stack.resize(at + 1);
      out.cycles.push_back(std::move(cycle));
    } else {
      position[s] = stack.size();
      stack.push_back(s);
    }
  }
  return out;
}

// --- matrices --------------------------------------------------------------

RatMatrix transition_matrix(const Wdtmc& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  RatMatrix p = RatMatrix::Zero(n, n);
  for (const Edge& e : chain.edges()) {
    p(static_cast<Eigen::Index>(e.src), static_cast<Eigen::Index>(e.dst)) += e.prob;
  }
  return p;
}

RatMatrix n_step_matrix(const Wdtmc& chain, unsigned long n) {
  return matrix_power(transition_matrix(chain), n);
}

// --- derived chains --------------------------------------------------------

Restriction restrict_to_reachable(const Wdtmc& chain) {
  const auto mask = reachable(chain, chain.initial());
  std::vector<StateId> mapping;
  std::vector<StateId> renumber(chain.size(), 0);
  for (StateId s = 0; s < chain.size(); ++s) {
    if (mask[s]) {
      renumber[s] = mapping.size();
      mapping.push_back(s);
    }
  }
  std::vector<std::string> names;
  names.reserve(mapping.size());
  for (StateId s : mapping) names.push_back(chain.name(s));
  std::vector<Edge> edges;
  for (const Edge& e : chain.edges()) {
    if (mask[e.src]) edges.push_back({renumber[e.src], renumber[e.dst], e.prob, e.weight});
  }
  return {Wdtmc(std::move(names), std::move(edges), renumber[chain.initial()]), std::move(mapping)};
}

Wdtmc make_lazy(const Wdtmc& chain) {
  const Rat half(1, 2);
  std::vector<Edge> edges;
  std::vector<bool> has_loop(chain.size(), false);
  for (const Edge& e : chain.edges()) {
    Edge lazy = e;
    lazy.prob = e.prob * half;
    if (e.src == e.dst) {
      lazy.prob += half;
      has_loop[e.src] = true;
    }
    edges.push_back(std::move(lazy));
  }
  for (StateId s = 0; s < chain.size(); ++s) {
    if (!has_loop[s]) edges.push_back({s, s, half, Scale()});
  }
  return Wdtmc(chain.states(), std::move(edges), chain.initial());
}

}  // namespace ppcdstab

#pragma once

// Builders and brute-force oracles shared by the test binaries. The oracles
// deliberately avoid the library's algorithms (no Bellman-Ford, no Tarjan,
// no Bareiss) so that agreement means something.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ppcdstab/bench.hpp"
#include "ppcdstab/errors.hpp"
#include "ppcdstab/ppcd.hpp"
#include "ppcdstab/sampling.hpp"
#include "ppcdstab/wdtmc.hpp"

namespace testing {

using namespace ppcdstab;

inline Rat q(const char* s) { return Rat::parse(s); }

struct E {
  std::string src, dst, prob, weight;  // weight "inf" or a rational
};

inline Wdtmc chain(const std::vector<std::string>& states, const std::vector<E>& edges,
                   const std::string& initial = "") {
  std::map<std::string, StateId> idx;
  for (std::size_t i = 0; i < states.size(); ++i) idx[states[i]] = i;
  std::vector<Edge> out;
  for (const E& e : edges) {
    out.push_back({idx.at(e.src), idx.at(e.dst), Rat::parse(e.prob),
                   e.weight == "inf" ? Scale::infinite() : Scale::finite(Rat::parse(e.weight))});
  }
  return Wdtmc(states, out, initial.empty() ? 0 : idx.at(initial));
}

inline Path path(std::vector<StateId> s) { return Path{std::move(s)}; }

// --- random chains, any structure -----------------------------------------

struct RandomChainSpec {
  std::size_t max_states = 8;
  unsigned edge_percent = 30;
  unsigned infinite_percent = 3;
};

/// Arbitrary valid chain: possibly reducible, periodic, with infinite edges.
/// Every state gets at least one edge so rows sum to 1.
inline Wdtmc random_chain(std::uint64_t seed, const RandomChainSpec& spec = {}) {
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<long>(spec.max_states)));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  // Scales biased toward <= 1 so that both verdicts occur.
  static const char* scales[] = {"1/2", "1/3", "2/3", "1", "1", "3/4", "1/4", "5/4", "3/2", "2", "4/5", "9/10"};
  std::vector<Edge> edges;
  for (StateId u = 0; u < n; ++u) {
    std::vector<StateId> targets;
    for (StateId v = 0; v < n; ++v) {
      if (rng.uniform_below(100) < spec.edge_percent) targets.push_back(v);
    }
    if (targets.empty()) targets.push_back(static_cast<StateId>(rng.uniform_below(n)));
    long total = 0;
    std::vector<long> w;
    for (std::size_t i = 0; i < targets.size(); ++i) total += w.emplace_back(rng.uniform_int(1, 6));
    for (std::size_t i = 0; i < targets.size(); ++i) {
      Scale s = rng.uniform_below(100) < spec.infinite_percent
                    ? Scale::infinite()
                    : Scale::finite(Rat::parse(scales[rng.uniform_below(std::size(scales))]));
      edges.push_back({u, targets[i], Rat(w[i], total), s});
    }
  }
  return Wdtmc(names, edges, static_cast<StateId>(rng.uniform_below(n)));
}

// --- oracles ---------------------------------------------------------------

/// Boolean transitive closure (Floyd-Warshall), reflexive.
inline std::vector<std::vector<bool>> closure(const Wdtmc& c) {
  const std::size_t n = c.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (const Edge& e : c.edges()) r[e.src][e.dst] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

/// Every simple cycle exactly once, as state lists starting at their minimum
/// state (not repeated at the end).
inline std::vector<std::vector<StateId>> simple_cycles(const Wdtmc& c) {
  const std::size_t n = c.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const Edge& e : c.edges()) adj[e.src][e.dst] = true;
  std::vector<std::vector<StateId>> out;
  std::vector<StateId> stack;
  std::vector<bool> on(n, false);
  std::function<void(StateId, StateId)> dfs = [&](StateId start, StateId u) {
    for (StateId v = start; v < n; ++v) {
      if (!adj[u][v]) continue;
      if (v == start) {
        out.push_back(stack);
      } else if (!on[v]) {
        on[v] = true;
        stack.push_back(v);
        dfs(start, v);
        stack.pop_back();
        on[v] = false;
      }
    }
  };
  for (StateId s = 0; s < n; ++s) {
    stack = {s};
    on.assign(n, false);
    on[s] = true;
    dfs(s, s);
  }
  return out;
}

inline Scale cycle_product(const Wdtmc& c, const std::vector<StateId>& cyc) {
  Scale p;
  for (std::size_t i = 0; i < cyc.size(); ++i) p *= c.edges()[*c.find_edge(cyc[i], cyc[(i + 1) % cyc.size()])].weight;
  return p;
}

/// Reference verdict: infinite edge reachable, else simple cycle with product > 1 reachable.
inline Decision absolute_oracle(const Wdtmc& c) {
  const auto reach = closure(c);
  const StateId s0 = c.initial();
  for (const Edge& e : c.edges()) {
    if (reach[s0][e.src] && e.weight.is_infinite()) return Decision::NotConvergent;
  }
  for (const auto& cyc : simple_cycles(c)) {
    if (reach[s0][cyc[0]] && cycle_product(c, cyc) > Scale()) return Decision::NotConvergent;
  }
  return Decision::Convergent;
}

/// Cycle lengths through SCCs, by brute force up to `max_len`; gcd == 1 for each SCC with a cycle.
inline bool aperiodic_oracle(const Wdtmc& c) {
  const auto reach = closure(c);
  const std::size_t n = c.size();
  std::vector<int> scc_gcd(n, 0);
  for (const auto& cyc : simple_cycles(c)) {
    for (StateId s : cyc) scc_gcd[s] = std::gcd(scc_gcd[s], static_cast<int>(cyc.size()));
  }
  // Period is a class property; a state on no simple cycle has no cycle at all.
  for (StateId s = 0; s < n; ++s) {
    if (scc_gcd[s] == 0) continue;
    int g = 0;
    for (StateId t = 0; t < n; ++t) {
      if (reach[s][t] && reach[t][s] && scc_gcd[t] != 0) g = std::gcd(g, scc_gcd[t]);
    }
    if (g != 1) return false;
  }
  return true;
}

inline std::multiset<std::pair<StateId, StateId>> edge_multiset(const Path& p) {
  std::multiset<std::pair<StateId, StateId>> m;
  for (std::size_t i = 0; i + 1 < p.states.size(); ++i) m.insert({p.states[i], p.states[i + 1]});
  return m;
}

inline bool is_simple_path(const Path& p) {
  std::set<StateId> s(p.states.begin(), p.states.end());
  return s.size() == p.states.size();
}

inline bool is_simple_cycle(const Path& p) {
  if (p.states.size() < 2 || p.states.front() != p.states.back()) return false;
  std::set<StateId> s(p.states.begin(), p.states.end() - 1);
  return s.size() == p.states.size() - 1;
}

/// rho * P by plain triple loop over edges.
inline std::vector<Rat> row_times_chain(const Wdtmc& c, const RatVector& rho) {
  std::vector<Rat> out(c.size(), Rat(0));
  for (const Edge& e : c.edges()) out[e.dst] += rho(static_cast<Eigen::Index>(e.src)) * e.prob;
  return out;
}

// --- models ----------------------------------------------------------------

/// Four quadrants, one mode each, rotating counterclockwise; the scale of
/// quadrant i's leg is scales[i].
inline Ppcd quadrant_robot(const std::array<Rat, 4>& scales, const Rat& stall = Rat(1, 10)) {
  CaseStudyConfig cfg;
  for (int i = 0; i < 4; ++i) {
    cfg.headings[i] = {quadrant_heading(i, scales[i])};
    cfg.probs[i] = {Rat(1)};
  }
  cfg.stall = stall;
  return gen_case_study(cfg);
}

}  // namespace testing

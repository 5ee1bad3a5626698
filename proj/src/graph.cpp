#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>

#include "ppcdstab/errors.hpp"
#include "ppcdstab/wdtmc.hpp"

namespace ppcdstab {

std::vector<bool> reachable(const Wdtmc& chain, StateId from) {
  if (from >= chain.size()) throw Error(ErrorCode::UnknownState, "state index " + std::to_string(from));
  std::vector<bool> seen(chain.size(), false);
  std::deque<StateId> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const StateId u = queue.front();
    queue.pop_front();
    for (std::size_t e : chain.out_edges(u)) {
      const StateId v = chain.edges()[e].dst;
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

// Iterative Tarjan; components come out in reverse topological order.
std::vector<std::vector<StateId>> strongly_connected_components(const Wdtmc& chain) {
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  const std::size_t n = chain.size();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  std::vector<std::vector<StateId>> components;
  std::size_t counter = 0;

  struct Frame {
    StateId v;
    std::size_t next;
  };
  for (StateId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& out = chain.out_edges(f.v);
      if (f.next < out.size()) {
        const StateId w = chain.edges()[out[f.next++]].dst;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const StateId v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<StateId> comp;
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

bool is_irreducible(const Wdtmc& chain) {
  return chain.size() > 0 && strongly_connected_components(chain).size() == 1;
}

bool is_aperiodic(const Wdtmc& chain) {
  const auto components = strongly_connected_components(chain);
  std::vector<std::size_t> comp_of(chain.size(), 0);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (StateId s : components[c]) comp_of[s] = c;
  }
  constexpr long kUnset = -1;
  std::vector<long> level(chain.size(), kUnset);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const StateId root = components[c].front();
    level[root] = 0;
    std::deque<StateId> queue{root};
    long period = 0;
    bool has_internal_edge = false;
    while (!queue.empty()) {
      const StateId u = queue.front();
      queue.pop_front();
      for (std::size_t e : chain.out_edges(u)) {
        const StateId v = chain.edges()[e].dst;
        if (comp_of[v] != c) continue;
        has_internal_edge = true;
        if (level[v] == kUnset) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        } else {
          period = std::gcd(period, std::labs(level[u] + 1 - level[v]));
        }
      }
    }
    // A transient state on no cycle has no period to speak of.
    if (has_internal_edge && period != 1) return false;
  }
  return true;
}

}  // namespace ppcdstab

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "ppcdstab/errors.hpp"
#include "ppcdstab/wdtmc.hpp"

namespace ppcdstab {

namespace {

std::optional<InfiniteEdgeWitness> reachable_infinite_edge(const Wdtmc& chain, const std::vector<bool>& mask) {
  for (StateId u = 0; u < chain.size(); ++u) {
    if (!mask[u]) continue;
    for (std::size_t e : chain.out_edges(u)) {
      if (chain.edges()[e].weight.is_infinite()) return InfiniteEdgeWitness{u, chain.edges()[e].dst};
    }
  }
  return std::nullopt;
}

// Rotate so the smallest state comes first; the closing state follows suit.
Path canonical_cycle(std::vector<StateId> body) {
  auto smallest = std::min_element(body.begin(), body.end());
  std::rotate(body.begin(), smallest, body.end());
  body.push_back(body.front());
  return Path{std::move(body)};
}

}  // namespace

Verdict check_absolute(const Wdtmc& chain) {
  require_valid(chain);
  const auto mask = reachable(chain, chain.initial());
  if (auto inf = reachable_infinite_edge(chain, mask)) return {Decision::NotConvergent, *inf};

  const std::size_t n = chain.size();
  const auto live = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));

  // Longest-path Bellman-Ford in the multiplicative semiring: best[v] is the
  // largest product of a walk from the initial state seen so far.
  std::vector<std::optional<Rat>> best(n);
  std::vector<std::optional<StateId>> pred(n);
  best[chain.initial()] = Rat(1);

  auto relax_round = [&]() -> std::optional<StateId> {
    std::optional<StateId> first_relaxed;
    for (StateId u = 0; u < n; ++u) {
      if (!mask[u] || !best[u]) continue;
      for (std::size_t e : chain.out_edges(u)) {
        const Edge& edge = chain.edges()[e];
        Rat candidate = *best[u] * edge.weight.ratio();
        if (!best[edge.dst] || candidate > *best[edge.dst]) {
          best[edge.dst] = std::move(candidate);
          pred[edge.dst] = u;
          if (!first_relaxed) first_relaxed = edge.dst;
        }
      }
    }
    return first_relaxed;
  };

  for (std::size_t round = 1; round < live; ++round) {
    if (!relax_round()) return {Decision::Convergent, std::monostate{}};
  }
  const auto relaxed = relax_round();
  if (!relaxed) return {Decision::Convergent, std::monostate{}};

  // After `live` rounds the predecessor chain from a relaxed state ends in a
  // cycle of the predecessor graph, and such a cycle has product > 1.
  StateId on_cycle = *relaxed;
  for (std::size_t i = 0; i < live; ++i) {
    if (!pred[on_cycle]) throw std::logic_error("predecessor chain left the reachable graph");
    on_cycle = *pred[on_cycle];
  }
  std::vector<StateId> reversed{on_cycle};
  for (StateId s = *pred[on_cycle]; s != on_cycle; s = *pred[s]) reversed.push_back(s);
  std::reverse(reversed.begin(), reversed.end());
  Path cycle = canonical_cycle(std::move(reversed));

  const Scale product = path_weight(chain, cycle);
  if (!(product > Scale())) throw std::logic_error("Bellman-Ford cycle witness has product <= 1");
  return {Decision::NotConvergent, PositiveCycleWitness{std::move(cycle), product.ratio()}};
}

}  // namespace ppcdstab

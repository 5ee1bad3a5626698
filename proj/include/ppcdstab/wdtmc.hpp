#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ppcdstab/linalg.hpp"
#include "ppcdstab/rat.hpp"
#include "ppcdstab/scale.hpp"

namespace ppcdstab {

using StateId = std::size_t;

struct Edge {
  StateId src = 0;
  StateId dst = 0;
  Rat prob;
  Scale weight;
};

/// Finite weighted Markov chain with a designated initial state.
///
/// Structural invariants (row sums, positive probabilities, no parallel
/// edges) are not enforced by the constructor; see validate().
class Wdtmc {
 public:
  Wdtmc(std::vector<std::string> states, std::vector<Edge> edges, StateId initial);

  std::size_t size() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& name(StateId s) const { return states_.at(s); }
  const std::vector<Edge>& edges() const { return edges_; }
  StateId initial() const { return initial_; }

  /// Indices into edges() leaving `s`, ordered by destination.
  const std::vector<std::size_t>& out_edges(StateId s) const { return out_.at(s); }
  /// Edge index of (src, dst), if present.
  std::optional<std::size_t> find_edge(StateId src, StateId dst) const;
  /// Throws Error(UnknownState).
  StateId index_of(const std::string& name) const;

 private:
  std::vector<std::string> states_;
  std::vector<Edge> edges_;
  StateId initial_;
  std::vector<std::vector<std::size_t>> out_;
  std::unordered_map<std::string, StateId> by_name_;
};

struct ChainIssue {
  enum class Kind { RowSumNotOne, NonPositiveProb, DuplicateEdge, BadReference };
  Kind kind;
  std::string message;
};

std::vector<ChainIssue> validate(const Wdtmc& chain);
/// Throws Error(InvalidChain) listing every issue.
void require_valid(const Wdtmc& chain);

/// Finite path as a sequence of states; |path| - 1 edges.
struct Path {
  std::vector<StateId> states;

  std::size_t edge_count() const { return states.empty() ? 0 : states.size() - 1; }
  friend bool operator==(const Path&, const Path&) = default;
};

struct Decomposition {
  Path spine;
  std::vector<Path> cycles;
};

struct Distribution {
  RatVector mass;
};

enum class Decision { Convergent, NotConvergent, Indeterminate };
enum class Comparison { Less, Equal, Greater, Unknown };
enum class Sign { Negative, Zero, Positive, Unknown };

struct InfiniteEdgeWitness {
  StateId src;
  StateId dst;
};

struct PositiveCycleWitness {
  Path cycle;      // first state repeated at the end
  Rat product;     // exact, > 1
};

/// Exact comparison of prod_e ratio_e^{p_e} against 1, plus its log as a double.
struct EffectiveWeight {
  Comparison cmp = Comparison::Unknown;
  double float_log = 0.0;

  Sign sign() const;
};

using Witness = std::variant<std::monostate, InfiniteEdgeWitness, PositiveCycleWitness, EffectiveWeight>;

struct Verdict {
  Decision decision = Decision::Indeterminate;
  Witness witness;
};

std::string_view to_string(Decision d);
std::string_view to_string(Comparison c);
std::string_view to_string(Sign s);

// --- graph structure -------------------------------------------------------

/// States reachable from `from`, including `from` itself, as a membership mask.
std::vector<bool> reachable(const Wdtmc& chain, StateId from);
/// Strongly connected components in Tarjan order; each component sorted.
std::vector<std::vector<StateId>> strongly_connected_components(const Wdtmc& chain);
bool is_irreducible(const Wdtmc& chain);
/// gcd of cycle lengths in every non-trivial SCC is 1.
bool is_aperiodic(const Wdtmc& chain);

// --- paths -----------------------------------------------------------------

/// Throws Error(NotAPath) unless every step is an edge of the chain.
void require_path(const Wdtmc& chain, const Path& path);
Scale path_weight(const Wdtmc& chain, const Path& path);
Rat path_probability(const Wdtmc& chain, const Distribution& rho, const Path& path);
/// Stack walk: every time a state repeats, the loop since its last visit is
/// cut out as a simple cycle.
Decomposition decompose_path(const Wdtmc& chain, const Path& path);

// --- matrices --------------------------------------------------------------

RatMatrix transition_matrix(const Wdtmc& chain);
RatMatrix n_step_matrix(const Wdtmc& chain, unsigned long n);

// --- convergence -----------------------------------------------------------

/// Reachable infinite edge, else reachable cycle with product > 1 (maximizing
/// Bellman-Ford over exact scales), else Convergent.
Verdict check_absolute(const Wdtmc& chain);

/// Throws Error(NotIrreducible) for reducible chains.
Distribution stationary_distribution(const Wdtmc& chain);

struct EffectiveWeightOptions {
  /// Largest exact integer-exponent product attempted, in bits.
  std::uint64_t bit_budget = 1'000'000;
  /// Precision ceiling (bits) of the interval fallback before giving up.
  long max_interval_precision = 1 << 16;
};

/// Throws Error(InfiniteEdgePresent) if any edge with positive mass is infinite.
EffectiveWeight effective_weight(const Wdtmc& chain, const Distribution& rho,
                                 const EffectiveWeightOptions& options = {});

/// Infinite edge reachable: NotConvergent. Otherwise requires an irreducible,
/// aperiodic chain (Error(NotIrreducible) / Error(NotAperiodic)) and decides
/// by the sign of the effective weight; zero counts as convergent.
Verdict check_almost_sure(const Wdtmc& chain, const EffectiveWeightOptions& options = {});

/// Subchain induced by the states reachable from the initial state, keeping
/// their relative order. `mapping[i]` is the original index of new state i.
struct Restriction {
  Wdtmc chain;
  std::vector<StateId> mapping;
};
Restriction restrict_to_reachable(const Wdtmc& chain);

/// (I + P) / 2, keeping weights; self-loops added with weight 1 where absent.
Wdtmc make_lazy(const Wdtmc& chain);

}  // namespace ppcdstab

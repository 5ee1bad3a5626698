#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "ppcdstab/rat.hpp"
#include "ppcdstab/wdtmc.hpp"

namespace ppcdstab {

/// Identifier written into every output that depends on seeded randomness.
/// Engine: std::mt19937_64 (sequence fixed by the C++ standard). Integers
/// uniform below n are drawn from ceil(bits(n)/64) engine words, masked to
/// bits(n) bits, rejecting values >= n. Exact-probability choices draw one
/// such integer below the common denominator of the choice's probabilities.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/masked-rejection/1";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_word() { return engine_(); }
  std::uint64_t uniform_below(std::uint64_t n);
  BigInt uniform_below(const BigInt& n);
  /// Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi);
  /// Index i with probability probs[i]; probs must be exact and sum to 1.
  std::size_t pick(const std::vector<Rat>& probs);

 private:
  std::mt19937_64 engine_;
};

/// Precomputed exact sampler for one categorical distribution.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<Rat>& probs);
  std::size_t sample(Rng& rng) const;

 private:
  BigInt total_;
  std::vector<BigInt> cumulative_;
  bool small_ = false;
  std::uint64_t small_total_ = 0;
  std::vector<std::uint64_t> small_cumulative_;
};

/// Path of `steps` edges from the initial state.
Path sample_path(const Wdtmc& chain, std::size_t steps, std::uint64_t seed);

struct MonteCarloStats {
  std::size_t steps = 0;
  double partial_average = 0.0;  // (sum of log ratios) / steps
  double target = 0.0;           // float log of the effective weight
  double std_error = 0.0;        // batch-means standard error of partial_average
};

/// Throws Error(InfiniteEdgeOnPath), Error(NotAPath), or Error(InvalidArgument)
/// for paths without edges. `target` is NaN when the reachable chain is not
/// irreducible.
MonteCarloStats average_step_weight(const Wdtmc& chain, const Path& path);

/// max_{x,y} |P^n(x,y) - rho*(y)| for n = 1..n_max, computed exactly.
/// Throws Error(NotIrreducible) / Error(NotAperiodic).
std::vector<std::pair<unsigned long, double>> convergence_rate_probe(const Wdtmc& chain, unsigned long n_max);

}  // namespace ppcdstab

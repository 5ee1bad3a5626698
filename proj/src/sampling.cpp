#include "ppcdstab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppcdstab/errors.hpp"

namespace ppcdstab {

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform_below(0)");
  const int bits = 64 - __builtin_clzll(n);
  const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
  for (;;) {
    const std::uint64_t v = engine_() & mask;
    if (v < n) return v;
  }
}

BigInt Rng::uniform_below(const BigInt& n) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "uniform_below of non-positive bound");
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  for (;;) {
    BigInt v(0);
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t word = engine_();
      v <<= 32;
      v += static_cast<unsigned long>(word >> 32);
      v <<= 32;
      v += static_cast<unsigned long>(word & 0xffffffffULL);
    }
    mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
    if (v < n) return v;
  }
}

long Rng::uniform_int(long lo, long hi) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty integer range");
  const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return lo + static_cast<long>(uniform_below(span));
}

std::size_t Rng::pick(const std::vector<Rat>& probs) { return DiscreteSampler(probs).sample(*this); }

DiscreteSampler::DiscreteSampler(const std::vector<Rat>& probs) {
  if (probs.empty()) throw Error(ErrorCode::InvalidArgument, "empty distribution");
  total_ = 1;
  for (const Rat& p : probs) mpz_lcm(total_.get_mpz_t(), total_.get_mpz_t(), p.denominator().get_mpz_t());
  BigInt acc(0);
  for (const Rat& p : probs) {
    acc += p.numerator() * (total_ / p.denominator());
    cumulative_.push_back(acc);
  }
  if (acc != total_) throw Error(ErrorCode::InvalidArgument, "probabilities do not sum to 1");
  small_ = mpz_sizeinbase(total_.get_mpz_t(), 2) <= 63;
  if (small_) {
    small_total_ = mpz_get_ui(total_.get_mpz_t());
    for (const BigInt& c : cumulative_) small_cumulative_.push_back(mpz_get_ui(c.get_mpz_t()));
  }
}

std::size_t DiscreteSampler::sample(Rng& rng) const {
  if (small_) {
    const std::uint64_t u = rng.uniform_below(small_total_);
    return static_cast<std::size_t>(
        std::upper_bound(small_cumulative_.begin(), small_cumulative_.end(), u) - small_cumulative_.begin());
  }
  const BigInt u = rng.uniform_below(total_);
  return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                  cumulative_.begin());
}

Path sample_path(const Wdtmc& chain, std::size_t steps, std::uint64_t seed) {
  require_valid(chain);
  std::vector<DiscreteSampler> samplers;
  samplers.reserve(chain.size());
  for (StateId s = 0; s < chain.size(); ++s) {
    std::vector<Rat> probs;
    for (std::size_t e : chain.out_edges(s)) probs.push_back(chain.edges()[e].prob);
    samplers.emplace_back(probs);
  }
  Rng rng(seed);
  Path path;
  path.states.reserve(steps + 1);
  StateId current = chain.initial();
  path.states.push_back(current);
  for (std::size_t i = 0; i < steps; ++i) {
    const std::size_t k = samplers[current].sample(rng);
    current = chain.edges()[chain.out_edges(current)[k]].dst;
    path.states.push_back(current);
  }
  return path;
}

MonteCarloStats average_step_weight(const Wdtmc& chain, const Path& path) {
  require_path(chain, path);
  const std::size_t n = path.edge_count();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "path has no edges");

  std::vector<double> step_logs;
  step_logs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Edge& e = chain.edges()[*chain.find_edge(path.states[i], path.states[i + 1])];
    if (e.weight.is_infinite()) throw Error(ErrorCode::InfiniteEdgeOnPath, "infinite edge at step " + std::to_string(i));
    step_logs.push_back(e.weight.log_float());
  }

  MonteCarloStats stats;
  stats.steps = n;
  double sum = 0.0;
  for (double v : step_logs) sum += v;
  stats.partial_average = sum / static_cast<double>(n);

  // Batch means absorb the serial correlation of the chain.
  const std::size_t batches = std::min<std::size_t>(n, 100);
  const std::size_t batch_len = n / batches;
  double mean_sq = 0.0, mean = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * batch_len; i < (b + 1) * batch_len; ++i) s += step_logs[i];
    const double m = s / static_cast<double>(batch_len);
    mean += m;
    mean_sq += m * m;
  }
  mean /= static_cast<double>(batches);
  const double var = batches > 1 ? (mean_sq - static_cast<double>(batches) * mean * mean) / static_cast<double>(batches - 1)
                                 : 0.0;
  stats.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(batches));

  const Restriction sub = restrict_to_reachable(chain);
  if (is_irreducible(sub.chain)) {
    stats.target = effective_weight(sub.chain, stationary_distribution(sub.chain)).float_log;
  } else {
    stats.target = std::numeric_limits<double>::quiet_NaN();
  }
  return stats;
}

std::vector<std::pair<unsigned long, double>> convergence_rate_probe(const Wdtmc& chain, unsigned long n_max) {
  require_valid(chain);
  if (!is_irreducible(chain)) throw Error(ErrorCode::NotIrreducible, "convergence probe needs an irreducible chain");
  if (!is_aperiodic(chain)) throw Error(ErrorCode::NotAperiodic, "convergence probe needs an aperiodic chain");
  const Distribution rho = stationary_distribution(chain);
  const RatMatrix p = transition_matrix(chain);
  RatMatrix pn = RatMatrix::Identity(p.rows(), p.cols());
  std::vector<std::pair<unsigned long, double>> out;
  for (unsigned long n = 1; n <= n_max; ++n) {
    pn = pn * p;
    Rat worst(0);
    for (Eigen::Index x = 0; x < pn.rows(); ++x) {
      for (Eigen::Index y = 0; y < pn.cols(); ++y) {
        const Rat d = abs(pn(x, y) - rho.mass(y));
        if (d > worst) worst = d;
      }
    }
    out.emplace_back(n, worst.to_double());
  }
  return out;
}

}  // namespace ppcdstab

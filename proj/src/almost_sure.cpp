#include <algorithm>
#include <stdexcept>

#include <mpfr.h>

#include "ppcdstab/errors.hpp"
#include "ppcdstab/wdtmc.hpp"

namespace ppcdstab {

Distribution stationary_distribution(const Wdtmc& chain) {
  if (!is_irreducible(chain)) throw Error(ErrorCode::NotIrreducible, "stationary distribution needs an irreducible chain");
  const auto n = static_cast<Eigen::Index>(chain.size());
  const RatMatrix p = transition_matrix(chain);

  // Balance equations (P^T - I) rho = 0 plus normalization.
  RatMatrix a(n + 1, n);
  a.topRows(n) = p.transpose() - RatMatrix::Identity(n, n);
  a.row(n).setConstant(Rat(1));
  RatVector b = RatVector::Zero(n + 1);
  b(n) = Rat(1);

  Distribution rho{solve_linear(a, b)};

  const RatVector residual = (rho.mass.transpose() * p).transpose() - rho.mass;
  if (!std::all_of(residual.begin(), residual.end(), [](const Rat& r) { return r.is_zero(); }) ||
      rho.mass.sum() != Rat(1) ||
      !std::all_of(rho.mass.begin(), rho.mass.end(), [](const Rat& r) { return r.sign() > 0; })) {
    throw std::logic_error("stationary distribution failed its exact check");
  }
  return rho;
}

namespace {

// Splits the inputs into pairwise-coprime factors such that every input is a
// product of powers of them. Logs of pairwise-coprime integers > 1 are
// linearly independent over the rationals.
std::vector<BigInt> coprime_basis(const std::vector<BigInt>& inputs) {
  std::vector<BigInt> basis;
  for (const BigInt& x : inputs) {
    std::vector<BigInt> work{x};
    while (!work.empty()) {
      BigInt y = work.back();
      work.pop_back();
      if (y == 1) continue;
      bool split = false;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), y.get_mpz_t(), basis[i].get_mpz_t());
        if (g == 1) continue;
        BigInt b = basis[i];
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        work.push_back(b / g);
        work.push_back(y / g);
        work.push_back(g);
        split = true;
        break;
      }
      if (!split) basis.push_back(y);
    }
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

long valuation(BigInt& x, const BigInt& base) {
  long v = 0;
  while (mpz_divisible_p(x.get_mpz_t(), base.get_mpz_t())) {
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), base.get_mpz_t());
    ++v;
  }
  return v;
}

Comparison compare_exact(const std::vector<BigInt>& basis, const std::vector<BigInt>& exps) {
  BigInt up(1), down(1), term;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int s = sgn(exps[i]);
    if (s == 0) continue;
    mpz_pow_ui(term.get_mpz_t(), basis[i].get_mpz_t(), mpz_get_ui(BigInt(abs(exps[i])).get_mpz_t()));
    (s > 0 ? up : down) *= term;
  }
  const int c = cmp(up, down);
  return c < 0 ? Comparison::Less : (c > 0 ? Comparison::Greater : Comparison::Equal);
}

class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Encloses sum_b c_b log(b) with outward rounding and tightens until the
// enclosure excludes zero. The sum is nonzero whenever some c_b != 0.
Comparison compare_interval(const std::vector<BigInt>& basis, const std::vector<Rat>& exps, long max_prec) {
  for (mpfr_prec_t prec = 128; prec <= max_prec; prec *= 2) {
    MpfrValue lo(prec), hi(prec), log_lo(prec), log_hi(prec), c_lo(prec), c_hi(prec), t1(prec), t2(prec);
    mpfr_set_zero(lo.get(), 1);
    mpfr_set_zero(hi.get(), 1);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (exps[i].is_zero()) continue;
      mpfr_set_z(log_lo.get(), basis[i].get_mpz_t(), MPFR_RNDD);
      mpfr_log(log_lo.get(), log_lo.get(), MPFR_RNDD);
      mpfr_set_z(log_hi.get(), basis[i].get_mpz_t(), MPFR_RNDU);
      mpfr_log(log_hi.get(), log_hi.get(), MPFR_RNDU);
      mpfr_set_q(c_lo.get(), exps[i].raw().get_mpq_t(), MPFR_RNDD);
      mpfr_set_q(c_hi.get(), exps[i].raw().get_mpq_t(), MPFR_RNDU);
      // log(b) > 0, so the product's bounds come from the matching c bound.
      if (exps[i].sign() > 0) {
        mpfr_mul(t1.get(), c_lo.get(), log_lo.get(), MPFR_RNDD);
        mpfr_mul(t2.get(), c_hi.get(), log_hi.get(), MPFR_RNDU);
      } else {
        mpfr_mul(t1.get(), c_lo.get(), log_hi.get(), MPFR_RNDD);
        mpfr_mul(t2.get(), c_hi.get(), log_lo.get(), MPFR_RNDU);
      }
      mpfr_add(lo.get(), lo.get(), t1.get(), MPFR_RNDD);
      mpfr_add(hi.get(), hi.get(), t2.get(), MPFR_RNDU);
    }
    if (mpfr_sgn(lo.get()) > 0) return Comparison::Greater;
    if (mpfr_sgn(hi.get()) < 0) return Comparison::Less;
  }
  return Comparison::Unknown;
}

}  // namespace

EffectiveWeight effective_weight(const Wdtmc& chain, const Distribution& rho, const EffectiveWeightOptions& options) {
  if (rho.mass.size() != static_cast<Eigen::Index>(chain.size())) {
    throw Error(ErrorCode::DimensionMismatch, "distribution size differs from chain size");
  }
  std::vector<std::pair<Rat, Rat>> terms;  // (edge mass, ratio), ratio != 1
  EffectiveWeight out;
  for (const Edge& e : chain.edges()) {
    Rat mass = rho.mass(static_cast<Eigen::Index>(e.src)) * e.prob;
    if (mass.is_zero()) continue;
    if (e.weight.is_infinite()) {
      throw Error(ErrorCode::InfiniteEdgePresent,
                  "edge " + chain.name(e.src) + "->" + chain.name(e.dst) + " has infinite weight");
    }
    if (e.weight.ratio() == Rat(1)) continue;
    out.float_log += mass.to_double() * e.weight.log_float();
    terms.emplace_back(std::move(mass), e.weight.ratio());
  }

  std::vector<BigInt> factors;
  for (const auto& [mass, ratio] : terms) {
    factors.push_back(ratio.numerator());
    factors.push_back(ratio.denominator());
  }
  const std::vector<BigInt> basis = coprime_basis(factors);

  // Exponent of each basis element in prod_e ratio_e^{mass_e}.
  std::vector<Rat> exps(basis.size(), Rat(0));
  for (const auto& [mass, ratio] : terms) {
    BigInt num = ratio.numerator();
    BigInt den = ratio.denominator();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const long v = valuation(num, basis[i]) - valuation(den, basis[i]);
      if (v != 0) exps[i] += mass * Rat(v);
    }
    if (num != 1 || den != 1) throw std::logic_error("coprime basis does not cover an edge ratio");
  }
  if (std::all_of(exps.begin(), exps.end(), [](const Rat& c) { return c.is_zero(); })) {
    out.cmp = Comparison::Equal;
    return out;
  }

  // Common denominator turns the exponents into integers.
  BigInt common(1);
  for (const Rat& c : exps) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), c.denominator().get_mpz_t());
  std::vector<BigInt> int_exps;
  BigInt bits(0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int_exps.push_back(exps[i].numerator() * (common / exps[i].denominator()));
    bits += abs(int_exps.back()) * BigInt(mpz_sizeinbase(basis[i].get_mpz_t(), 2));
  }
  if (bits <= BigInt(static_cast<unsigned long>(options.bit_budget))) {
    out.cmp = compare_exact(basis, int_exps);
  } else {
    out.cmp = compare_interval(basis, exps, options.max_interval_precision);
  }
  return out;
}

Verdict check_almost_sure(const Wdtmc& chain, const EffectiveWeightOptions& options) {
  require_valid(chain);
  const auto mask = reachable(chain, chain.initial());
  for (StateId u = 0; u < chain.size(); ++u) {
    if (!mask[u]) continue;
    for (std::size_t e : chain.out_edges(u)) {
      if (chain.edges()[e].weight.is_infinite()) {
        return {Decision::NotConvergent, InfiniteEdgeWitness{u, chain.edges()[e].dst}};
      }
    }
  }
  const Restriction sub = restrict_to_reachable(chain);
  if (!is_irreducible(sub.chain)) {
    throw Error(ErrorCode::NotIrreducible, "states reachable from the initial state are not mutually reachable");
  }
  if (!is_aperiodic(sub.chain)) throw Error(ErrorCode::NotAperiodic, "reachable chain is periodic");

  const Distribution rho = stationary_distribution(sub.chain);
  const EffectiveWeight ew = effective_weight(sub.chain, rho, options);
  Decision d = Decision::Indeterminate;
  if (ew.cmp == Comparison::Less || ew.cmp == Comparison::Equal) d = Decision::Convergent;
  if (ew.cmp == Comparison::Greater) d = Decision::NotConvergent;
  return {d, ew};
}

}  // namespace ppcdstab

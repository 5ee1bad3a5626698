#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace testing;

namespace {

// The chain whose effective product is (1/2)^{1/6}; `back` is the scale of s2 -> s1.
Wdtmc sixth_chain(const char* back = "1/2") {
  return chain({"s1", "s2"}, {{"s1", "s1", "1/2", "4"},
                              {"s1", "s2", "1/2", "1/4"},
                              {"s2", "s2", "3/4", "1"},
                              {"s2", "s1", "1/4", back}});
}

bool has_issue(const Wdtmc& c, ChainIssue::Kind k) {
  for (const auto& i : validate(c)) {
    if (i.kind == k) return true;
  }
  return false;
}

Distribution dist(std::initializer_list<const char*> masses) {
  RatVector v(static_cast<Eigen::Index>(masses.size()));
  Eigen::Index i = 0;
  for (const char* m : masses) v(i++) = q(m);
  return {v};
}

}  // namespace

TEST_CASE("validate") {
  CHECK(validate(chain({"s"}, {{"s", "s", "1", "1"}})).empty());

  const Wdtmc short_row = chain({"s1", "s2"}, {{"s1", "s1", "1/2", "1"}, {"s1", "s2", "1/3", "1"}, {"s2", "s2", "1", "1"}});
  const auto issues = validate(short_row);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].kind == ChainIssue::Kind::RowSumNotOne);
  CHECK(issues[0].message.find("RowSumNotOne(s1)") == 0);

  const Wdtmc dup = chain({"s1", "s2"}, {{"s1", "s2", "1/2", "1"}, {"s1", "s2", "1/2", "1"}, {"s2", "s2", "1", "1"}});
  CHECK(has_issue(dup, ChainIssue::Kind::DuplicateEdge));

  const Wdtmc zero = chain({"s1", "s2"}, {{"s1", "s2", "0", "1"}, {"s1", "s1", "1", "1"}, {"s2", "s2", "1", "1"}});
  CHECK(has_issue(zero, ChainIssue::Kind::NonPositiveProb));

  try {
    require_valid(short_row);
    FAIL("invalid chain accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidChain);
    CHECK(std::string(e.what()).find("RowSumNotOne(s1)") != std::string::npos);
  }
}

TEST_CASE("reachable") {
  const Wdtmc line = chain({"s1", "s2", "s3"}, {{"s1", "s2", "1", "1"}, {"s2", "s3", "1", "1"}, {"s3", "s3", "1", "1"}});
  CHECK(reachable(line, 0) == std::vector<bool>{true, true, true});
  CHECK(reachable(line, 2) == std::vector<bool>{false, false, true});
  CHECK_THROWS_AS(reachable(line, 7), Error);
}

TEST_CASE("reachable agrees with the transitive closure") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Wdtmc c = random_chain(seed, {8, 20, 0});
    const auto r = closure(c);
    for (StateId s = 0; s < c.size(); ++s) {
      const auto got = reachable(c, s);
      for (StateId t = 0; t < c.size(); ++t) CHECK(got[t] == r[s][t]);
    }
  }
}

TEST_CASE("path weight") {
  const Wdtmc c = chain({"a", "b", "c"}, {{"a", "b", "1", "3/2"}, {"b", "c", "1", "3/2"}, {"c", "a", "1/2", "2/3"},
                                          {"c", "c", "1/2", "2"}});
  CHECK(path_weight(c, path({0})) == Scale());
  CHECK(path_weight(c, path({0, 1, 2, 0})) == Scale::finite(q("3/2")));
  CHECK(path_weight(c, path({2, 2, 0})) == Scale::finite(q("4/3")));
  const Wdtmc cancel = chain({"a", "b"}, {{"a", "b", "1", "2"}, {"b", "a", "1", "1/2"}});
  CHECK(path_weight(cancel, path({0, 1, 0})) == Scale());
  const Wdtmc inf = chain({"a", "b"}, {{"a", "b", "1", "2"}, {"b", "b", "1", "inf"}});
  CHECK(path_weight(inf, path({0, 1, 1})).is_infinite());
  try {
    path_weight(c, path({0, 2}));
    FAIL("non-path accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAPath);
  }
}

TEST_CASE("path probability") {
  const Wdtmc c = chain({"s1", "s2"}, {{"s1", "s2", "1/2", "1"}, {"s1", "s1", "1/2", "1"}, {"s2", "s1", "1", "1"}});
  const Distribution rho = dist({"1/3", "2/3"});
  CHECK(path_probability(c, rho, path({0})) == q("1/3"));
  CHECK(path_probability(c, rho, path({0, 1})) == q("1/6"));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Wdtmc r = gen_random_wdtmc(6, q("1/2"), seed);
    const Path p = sample_path(r, 3, seed);
    RatVector mass = RatVector::Constant(6, Rat(1, 6));
    Rat expected = mass(static_cast<Eigen::Index>(p.states[0]));
    for (std::size_t i = 0; i + 1 < p.states.size(); ++i) {
      for (const Edge& e : r.edges()) {
        if (e.src == p.states[i] && e.dst == p.states[i + 1]) expected *= e.prob;
      }
    }
    CHECK(path_probability(r, {mass}, p) == expected);
  }
}

TEST_CASE("n-step matrices") {
  const Wdtmc c = chain({"s1", "s2"}, {{"s1", "s1", "1/2", "1"}, {"s1", "s2", "1/2", "1"},
                                       {"s2", "s1", "1/4", "1"}, {"s2", "s2", "3/4", "1"}});
  CHECK(n_step_matrix(c, 0) == RatMatrix::Identity(2, 2));
  CHECK(n_step_matrix(c, 1) == transition_matrix(c));
  RatMatrix two(2, 2);
  two << q("3/8"), q("5/8"), q("5/16"), q("11/16");
  CHECK(n_step_matrix(c, 2) == two);

  const Wdtmc r = gen_random_wdtmc(5, q("1/3"), 9);
  for (unsigned long n : {0ul, 1ul, 2ul, 5ul, 13ul}) {
    const RatMatrix m = n_step_matrix(r, n);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Rat s(0);
      for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j);
      CHECK(s == Rat(1));
    }
  }
}

TEST_CASE("path decomposition examples") {
  const Wdtmc c = chain({"s1", "s2", "s3"}, {{"s1", "s1", "1/3", "2"}, {"s1", "s2", "1/3", "3"}, {"s1", "s3", "1/3", "1/5"},
                                             {"s2", "s1", "1/2", "1/7"}, {"s2", "s3", "1/2", "1"}, {"s3", "s3", "1", "1"}});
  Decomposition d = decompose_path(c, path({0, 1, 2}));
  CHECK(d.spine == path({0, 1, 2}));
  CHECK(d.cycles.empty());

  d = decompose_path(c, path({0, 1, 0, 2}));
  CHECK(d.spine == path({0, 2}));
  REQUIRE(d.cycles.size() == 1);
  CHECK(d.cycles[0] == path({0, 1, 0}));

  d = decompose_path(c, path({0, 0, 0}));
  CHECK(d.spine == path({0}));
  REQUIRE(d.cycles.size() == 2);
  CHECK(d.cycles[0] == path({0, 0}));
  CHECK(d.cycles[1] == path({0, 0}));

  CHECK_THROWS_AS(decompose_path(c, path({2, 0})), Error);
}

TEST_CASE("path decomposition properties on sampled paths") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Wdtmc c = gen_random_wdtmc(1 + seed % 7, q("1/2"), seed);
    const Path p = sample_path(c, 1 + seed % 40, seed * 7 + 1);
    const Decomposition d = decompose_path(c, p);
    CHECK(is_simple_path(d.spine));
    CHECK(d.spine.states.front() == p.states.front());
    CHECK(d.spine.states.back() == p.states.back());
    auto parts = edge_multiset(d.spine);
    Scale product = path_weight(c, d.spine);
    for (const Path& cyc : d.cycles) {
      CHECK(is_simple_cycle(cyc));
      const auto m = edge_multiset(cyc);
      parts.insert(m.begin(), m.end());
      product *= path_weight(c, cyc);
    }
    CHECK(parts == edge_multiset(p));
    CHECK(product == path_weight(c, p));
  }
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(chain({"s1", "s2"}, {{"s1", "s2", "1", "1"}, {"s2", "s1", "1", "1"}})));
  CHECK_FALSE(is_irreducible(chain({"s1", "s2"}, {{"s1", "s2", "1", "1"}, {"s2", "s2", "1", "1"}})));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Wdtmc c = random_chain(seed, {8, 25, 0});
    const auto r = closure(c);
    bool all = true;
    for (StateId s = 0; s < c.size(); ++s)
      for (StateId t = 0; t < c.size(); ++t) all = all && r[s][t];
    CHECK(is_irreducible(c) == all);
  }
}

TEST_CASE("strongly connected components partition the states") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Wdtmc c = random_chain(seed, {8, 20, 0});
    const auto r = closure(c);
    std::vector<int> comp(c.size(), -1);
    const auto sccs = strongly_connected_components(c);
    for (std::size_t i = 0; i < sccs.size(); ++i) {
      for (StateId s : sccs[i]) {
        CHECK(comp[s] == -1);
        comp[s] = static_cast<int>(i);
      }
    }
    for (StateId s = 0; s < c.size(); ++s)
      for (StateId t = 0; t < c.size(); ++t) CHECK((comp[s] == comp[t]) == (r[s][t] && r[t][s]));
  }
}

TEST_CASE("aperiodicity") {
  CHECK(is_aperiodic(chain({"s1", "s2"}, {{"s1", "s1", "1/2", "1"}, {"s1", "s2", "1/2", "1"}, {"s2", "s1", "1", "1"}})));
  CHECK_FALSE(is_aperiodic(chain({"s1", "s2"}, {{"s1", "s2", "1", "1"}, {"s2", "s1", "1", "1"}})));
  // 3-cycle with a chord closing a 2-cycle: gcd(3, 2) = 1.
  CHECK(is_aperiodic(chain({"a", "b", "c"}, {{"a", "b", "1", "1"}, {"b", "c", "1/2", "1"}, {"b", "a", "1/2", "1"},
                                            {"c", "a", "1", "1"}})));
  // 4-cycle with a chord closing a 2-cycle: gcd(4, 2) = 2.
  CHECK_FALSE(is_aperiodic(chain({"a", "b", "c", "d"}, {{"a", "b", "1", "1"}, {"b", "c", "1/2", "1"}, {"b", "a", "1/2", "1"},
                                                       {"c", "d", "1", "1"}, {"d", "a", "1", "1"}})));
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Wdtmc c = random_chain(seed, {7, 22, 0});
    CHECK(is_aperiodic(c) == aperiodic_oracle(c));
  }
}

TEST_CASE("absolute convergence examples") {
  CHECK(check_absolute(chain({"s"}, {{"s", "s", "1", "1"}})).decision == Decision::Convergent);

  const Verdict v = check_absolute(chain({"s"}, {{"s", "s", "1", "2"}}));
  CHECK(v.decision == Decision::NotConvergent);
  const auto* cyc = std::get_if<PositiveCycleWitness>(&v.witness);
  REQUIRE(cyc != nullptr);
  CHECK(cyc->cycle == path({0, 0}));
  CHECK(cyc->product == Rat(2));

  const Wdtmc inf = chain({"init", "s1"}, {{"init", "s1", "1", "1/2"}, {"s1", "s1", "1", "inf"}});
  const Verdict w = check_absolute(inf);
  CHECK(w.decision == Decision::NotConvergent);
  const auto* edge = std::get_if<InfiniteEdgeWitness>(&w.witness);
  REQUIRE(edge != nullptr);
  CHECK(edge->src == 1);
  CHECK(edge->dst == 1);

  const Wdtmc unreachable = chain({"init", "s1"}, {{"init", "init", "1", "1/2"}, {"s1", "s1", "1", "inf"}});
  CHECK(check_absolute(unreachable).decision == Decision::Convergent);
}

TEST_CASE("absolute convergence agrees with simple-cycle enumeration") {
  int divergent = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Wdtmc c = random_chain(1000 + seed);
    const Verdict v = check_absolute(c);
    CHECK(v.decision == absolute_oracle(c));
    if (v.decision == Decision::NotConvergent) ++divergent;
    if (const auto* w = std::get_if<PositiveCycleWitness>(&v.witness)) {
      CHECK(is_simple_cycle(w->cycle));
      CHECK(reachable(c, c.initial())[w->cycle.states[0]]);
      CHECK(path_weight(c, w->cycle) == Scale::finite(w->product));
      CHECK(w->product > Rat(1));
    }
    if (const auto* w = std::get_if<InfiniteEdgeWitness>(&v.witness)) {
      CHECK(reachable(c, c.initial())[w->src]);
      CHECK(c.edges()[*c.find_edge(w->src, w->dst)].weight.is_infinite());
    }
  }
  // Both outcomes occur, so the agreement is not vacuous.
  CHECK(divergent > 30);
  CHECK(divergent < 270);
}

TEST_CASE("absolute verdict is invariant under integer powers of the weights") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Wdtmc c = random_chain(500 + seed, {6, 30, 0});
    std::vector<Edge> edges = c.edges();
    for (Edge& e : edges) e.weight = pow(e.weight, 3);
    const Wdtmc cubed(c.states(), edges, c.initial());
    CHECK(check_absolute(cubed).decision == check_absolute(c).decision);
  }
}

TEST_CASE("stationary distribution") {
  const Wdtmc sym = chain({"s1", "s2"}, {{"s1", "s1", "1/2", "1"}, {"s1", "s2", "1/2", "1"},
                                         {"s2", "s1", "1/2", "1"}, {"s2", "s2", "1/2", "1"}});
  Distribution d = stationary_distribution(sym);
  CHECK(d.mass(0) == q("1/2"));
  CHECK(d.mass(1) == q("1/2"));

  d = stationary_distribution(sixth_chain());
  CHECK(d.mass(0) == q("1/3"));
  CHECK(d.mass(1) == q("2/3"));

  try {
    stationary_distribution(chain({"s1", "s2"}, {{"s1", "s2", "1", "1"}, {"s2", "s2", "1", "1"}}));
    FAIL("reducible chain accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotIrreducible);
  }

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Wdtmc c = gen_random_wdtmc(1 + seed % 10, q("1/3"), seed);
    const Distribution rho = stationary_distribution(c);
    const auto next = row_times_chain(c, rho.mass);
    Rat sum(0);
    for (StateId s = 0; s < c.size(); ++s) {
      CHECK(next[s] == rho.mass(static_cast<Eigen::Index>(s)));
      CHECK(rho.mass(static_cast<Eigen::Index>(s)).sign() > 0);
      sum += rho.mass(static_cast<Eigen::Index>(s));
    }
    CHECK(sum == Rat(1));
  }
}

TEST_CASE("effective weight examples") {
  const Wdtmc ones = gen_random_wdtmc(4, q("1/2"), 3);
  std::vector<Edge> edges = ones.edges();
  for (Edge& e : edges) e.weight = Scale();
  const Wdtmc flat(ones.states(), edges, 0);
  const EffectiveWeight z = effective_weight(flat, stationary_distribution(flat));
  CHECK(z.cmp == Comparison::Equal);
  CHECK(z.sign() == Sign::Zero);
  CHECK(z.float_log == 0.0);

  const Wdtmc c = sixth_chain();
  const EffectiveWeight w = effective_weight(c, stationary_distribution(c));
  CHECK(w.cmp == Comparison::Less);
  CHECK(w.float_log == doctest::Approx(std::log(0.5) / 6).epsilon(1e-12));

  const Wdtmc g = sixth_chain("2");
  const EffectiveWeight x = effective_weight(g, stationary_distribution(g));
  CHECK(x.cmp == Comparison::Greater);
  CHECK(x.float_log == doctest::Approx(std::log(2.0) / 6).epsilon(1e-12));

  const Wdtmc inf = chain({"s"}, {{"s", "s", "1", "inf"}});
  CHECK_THROWS_AS(effective_weight(inf, dist({"1"})), Error);
}

TEST_CASE("effective weight cancels exactly through distinct primes") {
  // 6^{1/2} * (1/2)^{1/2} * (1/3)^{1/2} = 1 exactly, although no single ratio is 1.
  const Wdtmc c = chain({"a", "b"}, {{"a", "a", "1/2", "6"}, {"a", "b", "1/2", "1/2"}, {"b", "a", "1", "1/3"}});
  const Distribution rho = stationary_distribution(c);  // (2/3, 1/3)
  const EffectiveWeight w = effective_weight(c, rho);
  // masses: 1/3 * log 6 + 1/3 * log(1/2) + 1/3 * log(1/3) = 0
  CHECK(w.cmp == Comparison::Equal);
  CHECK(check_almost_sure(c).decision == Decision::Convergent);
}

TEST_CASE("effective weight with a tiny margin beyond the exact budget") {
  // (2^k + 1) / 2^k against its inverse with unequal masses: exact product too large for
  // a small budget, forcing the interval path.
  const BigInt big = BigInt(1) << 4000;
  const Rat up(big + 1, big);
  const Rat down(big, big + 1);
  const Wdtmc c({"a", "b"},
                {{0, 0, q("1/2"), Scale::finite(up)}, {0, 1, q("1/2"), Scale()}, {1, 0, q("1/3"), Scale::finite(down)},
                 {1, 1, q("2/3"), Scale()}},
                0);
  const Distribution rho = stationary_distribution(c);  // (2/5, 3/5): masses 1/5 up, 1/5 down
  EffectiveWeightOptions small;
  small.bit_budget = 64;
  CHECK(effective_weight(c, rho, small).cmp == Comparison::Equal);
  CHECK(effective_weight(c, rho).cmp == Comparison::Equal);

  const Rat slightly_more(big + 2, big + 1);
  const Wdtmc d({"a", "b"},
                {{0, 0, q("1/2"), Scale::finite(up)}, {0, 1, q("1/2"), Scale()},
                 {1, 0, q("1/3"), Scale::finite(Rat(1) / slightly_more)}, {1, 1, q("2/3"), Scale()}},
                0);
  // up > slightly_more, so the product is > 1 by about 2^-8000.
  CHECK(effective_weight(d, stationary_distribution(d), small).cmp == Comparison::Greater);
  CHECK(effective_weight(d, stationary_distribution(d)).cmp == Comparison::Greater);
}

TEST_CASE("effective weight sign matches the float log away from zero") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const Wdtmc c = gen_random_wdtmc(2 + seed % 6, q("1/2"), seed);
    const EffectiveWeight w = effective_weight(c, stationary_distribution(c));
    if (std::abs(w.float_log) > 1e-9) {
      ++checked;
      CHECK((w.cmp == Comparison::Less) == (w.float_log < 0));
      CHECK((w.cmp == Comparison::Greater) == (w.float_log > 0));
    }
    std::vector<Edge> edges = c.edges();
    for (Edge& e : edges) e.weight = pow(e.weight, 2);
    const Wdtmc squared(c.states(), edges, 0);
    CHECK(effective_weight(squared, stationary_distribution(squared)).cmp == w.cmp);
  }
  CHECK(checked > 70);
}

TEST_CASE("almost-sure convergence") {
  const Wdtmc flat = chain({"a", "b"}, {{"a", "a", "1/2", "1"}, {"a", "b", "1/2", "1"}, {"b", "a", "1", "1"}});
  const Verdict z = check_almost_sure(flat);
  CHECK(z.decision == Decision::Convergent);
  CHECK(std::get<EffectiveWeight>(z.witness).sign() == Sign::Zero);

  const Wdtmc c = sixth_chain();
  CHECK(check_absolute(c).decision == Decision::NotConvergent);
  const Verdict v = check_almost_sure(c);
  CHECK(v.decision == Decision::Convergent);
  CHECK(std::get<EffectiveWeight>(v.witness).cmp == Comparison::Less);

  const Verdict g = check_almost_sure(sixth_chain("2"));
  CHECK(g.decision == Decision::NotConvergent);
  CHECK(std::get<EffectiveWeight>(g.witness).sign() == Sign::Positive);

  const Wdtmc inf = chain({"a", "b"}, {{"a", "b", "1", "1"}, {"b", "b", "1", "inf"}});
  const Verdict i = check_almost_sure(inf);
  CHECK(i.decision == Decision::NotConvergent);
  CHECK(std::holds_alternative<InfiniteEdgeWitness>(i.witness));

  try {
    check_almost_sure(chain({"a", "b"}, {{"a", "b", "1", "1"}, {"b", "a", "1", "1"}}));
    FAIL("periodic chain accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAperiodic);
  }
  try {
    check_almost_sure(chain({"a", "b", "c"}, {{"a", "b", "1/2", "1"}, {"a", "c", "1/2", "1"}, {"b", "b", "1", "1"},
                                              {"c", "c", "1", "1"}}));
    FAIL("reducible chain accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotIrreducible);
  }
}

TEST_CASE("almost-sure analysis uses the reachable part only") {
  // 'x' is unreachable and would break irreducibility.
  const Wdtmc c = chain({"a", "b", "x"}, {{"a", "a", "1/2", "1/2"}, {"a", "b", "1/2", "1"}, {"b", "a", "1", "1"},
                                          {"x", "a", "1", "inf"}});
  CHECK(check_almost_sure(c).decision == Decision::Convergent);
  CHECK(check_absolute(c).decision == Decision::Convergent);
  const Restriction r = restrict_to_reachable(c);
  CHECK(r.chain.size() == 2);
  CHECK(r.mapping == std::vector<StateId>{0, 1});
}

TEST_CASE("absolute convergence implies almost-sure convergence") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Wdtmc c = random_chain(3000 + seed, {6, 40, 2});
    if (check_absolute(c).decision != Decision::Convergent) continue;
    try {
      const Verdict v = check_almost_sure(c);
      CHECK(v.decision == Decision::Convergent);
    } catch (const Error& e) {
      CHECK((e.code() == ErrorCode::NotIrreducible || e.code() == ErrorCode::NotAperiodic));
    }
  }
}

TEST_CASE("lazy chains keep weights and stay stochastic") {
  const Wdtmc c = chain({"a", "b"}, {{"a", "b", "1", "3"}, {"b", "a", "1", "1/3"}});
  const Wdtmc lazy = make_lazy(c);
  CHECK(validate(lazy).empty());
  CHECK(is_aperiodic(lazy));
  CHECK(lazy.edges()[*lazy.find_edge(0, 1)].prob == q("1/2"));
  CHECK(lazy.edges()[*lazy.find_edge(0, 1)].weight == Scale::finite(Rat(3)));
  CHECK(lazy.edges()[*lazy.find_edge(0, 0)].weight == Scale());
}

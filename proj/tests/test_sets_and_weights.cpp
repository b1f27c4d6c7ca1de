#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "subharm/rng.hpp"
#include "subharm/serialization.hpp"
#include "subharm/sets_and_weights.hpp"

using namespace subharm;

namespace {

Weight linear(double lo, double hi, double p) {
  return Weight({{{lo, hi}, Polynomial({0.0, 1.0})}}, p);
}

}  // namespace

TEST(IntervalSet, NormalizesAndMeasures) {
  EXPECT_DOUBLE_EQ(measure(IntervalSet({{0, 1}, {2, 3}})), 2.0);
  EXPECT_EQ(measure(IntervalSet()), 0.0);
  EXPECT_NEAR(measure(IntervalSet({{0.2, 0.6}})), 0.4, 1e-16);
  const IntervalSet E({{2, 3}, {0, 1}, {1, 1.5}, {2.5, 4}});
  ASSERT_EQ(E.intervals().size(), 2u);
  EXPECT_EQ(E.intervals()[0], (Interval{0, 1.5}));
  EXPECT_EQ(E.intervals()[1], (Interval{2, 4}));
  EXPECT_TRUE(E.contained_in(0, 4));
  EXPECT_FALSE(E.contained_in(0, 3.9));
  EXPECT_THROW(IntervalSet({{1, 0}}), ArgumentError);
}

TEST(Truncate, Examples) {
  EXPECT_EQ(truncate(IntervalSet({{0, 3}}), 2.0), IntervalSet({{1, 2}}));
  EXPECT_TRUE(truncate(IntervalSet({{0, 0.5}}), 2.0).empty());
  EXPECT_EQ(truncate(IntervalSet({{1, 4}, {5, 6}}), 5.5), IntervalSet({{1, 4}, {5, 5.5}}));
  EXPECT_THROW(truncate(IntervalSet({{0, 3}}), 0.5), ArgumentError);
}

TEST(Truncate, MeasureBound) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed, "trunc");
    const IntervalSet E = random_interval_set(rng, 6.0, rng.uniform(0.1, 6.0), 10);
    const double r = rng.uniform(1.0, 7.0);
    EXPECT_LE(measure(truncate(E, r)),
              std::min(measure(E), std::max(0.0, r - 1.0)) + 1e-14);
  }
}

TEST(Weight, ConjugateExponent) {
  EXPECT_DOUBLE_EQ(Weight::constant(1, 0, 1, 2.0).q(), 2.0);
  EXPECT_DOUBLE_EQ(Weight::constant(1, 0, 1, 4.0).q(), 4.0 / 3.0);
  EXPECT_EQ(Weight::constant(1, 0, 1, kInf).q(), 1.0);
  EXPECT_THROW(Weight::constant(1, 0, 1, 1.0), ArgumentError);
}

TEST(Weight, RejectsNegativePieces) {
  EXPECT_THROW(Weight({{{0, 1}, Polynomial({-0.1})}}, 2.0), DegenerateInstance);
  EXPECT_THROW(Weight({{{0, 2}, Polynomial({1.0, -1.0})}}, 2.0), DegenerateInstance);
  // Negative coefficient but nonnegative on the piece.
  EXPECT_NO_THROW(Weight({{{0, 1}, Polynomial({1.0, -1.0})}}, 2.0));
}

TEST(LpNorm, Examples) {
  EXPECT_NEAR(lp_norm(Weight::constant(1, 0, 3, 2.0), IntervalSet({{0, 1}, {2, 3}})),
              std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(lp_norm(linear(0, 1, kInf), IntervalSet({{0, 1}})), 1.0, 1e-15);
  EXPECT_NEAR(lp_norm(linear(0, 1, 2.0), IntervalSet({{0, 1}})), 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(LpNorm, SupOfInteriorMaximum) {
  // 1/4 - (t - 1/2)^2 = t - t^2 peaks at t = 1/2.
  const Weight g({{{0, 1}, Polynomial({0.0, 1.0, -1.0})}}, kInf);
  EXPECT_NEAR(lp_norm(g, IntervalSet({{0, 1}})), 0.25, 1e-15);
  EXPECT_NEAR(lp_norm(g, IntervalSet({{0, 0.2}, {0.9, 1}})), 0.16, 1e-15);
}

TEST(LpNorm, MonotoneUnderInclusion) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(seed, "lp");
    const Weight g({{{0, 2}, Polynomial({rng.uniform(), rng.uniform(), rng.uniform()})}},
                   rng.bernoulli(0.3) ? kInf : rng.uniform(1.1, 6.0));
    const IntervalSet E2 = random_interval_set(rng, 2.0, rng.uniform(0.2, 2.0), 10);
    std::vector<Interval> sub;
    for (const Interval& i : E2.intervals())
      if (rng.bernoulli(0.6)) sub.push_back({i.lo, i.lo + rng.uniform() * i.length()});
    const IntervalSet E1(sub);
    EXPECT_LE(lp_norm(g, E1), lp_norm(g, E2) + 1e-12) << seed;
  }
}

TEST(IntegrateWeighted, Examples) {
  const IntervalSet E({{0.2, 0.6}});
  EXPECT_NEAR(integrate_weighted([](double) { return 1.0; }, Weight::constant(1, 0, 1, 2.0), E)
                  .value,
              0.4, 1e-14);
  const double zero[] = {0.0};
  auto lnp_inv = [](double t) { return std::max(0.0, std::log(1.0 / t)); };
  EXPECT_NEAR(integrate_weighted(lnp_inv, Weight::constant(1, 0, 1, kInf),
                                 IntervalSet({{0, 1}}), {}, zero)
                  .value,
              1.0, 1e-9);
  auto ln_inv = [](double t) { return std::log(1.0 / t); };
  EXPECT_NEAR(integrate_weighted(ln_inv, linear(0, 1, 2.0), IntervalSet({{0, 1}}), {}, zero).value,
              0.25, 1e-10);
}

TEST(IntegrateWeighted, HolderInequality) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(seed, "holder");
    const double p = rng.uniform(1.2, 5.0);
    const Weight g({{{0, 3}, Polynomial({rng.uniform(), rng.uniform()})}}, p);
    const Weight h({{{0, 3}, Polynomial({rng.uniform(), 0.0, rng.uniform()})}}, g.q());
    const Polynomial hp = h.pieces()[0].poly;
    const IntervalSet E = random_interval_set(rng, 3.0, rng.uniform(0.1, 3.0), 6);
    const double lhs = integrate_weighted([&](double t) { return hp(t); }, g, E).value;
    EXPECT_LE(lhs, lp_norm(h, E) * lp_norm(g, E) * (1 + 1e-9)) << seed;
  }
}

TEST(RearrangedMajorant, Examples) {
  auto tent = [](double t) { return 1.0 - std::abs(t); };
  const MajorantPair a = rearranged_majorant(tent, IntervalSet({{0.2, 0.6}}), 1.0);
  EXPECT_NEAR(a.lhs, 0.24, 1e-12);
  EXPECT_NEAR(a.rhs, 0.36, 1e-12);
  const MajorantPair b = rearranged_majorant(tent, IntervalSet({{-0.3, 0.3}}), 1.0);
  EXPECT_NEAR(b.lhs, b.rhs, 1e-10);
  const MajorantPair c =
      rearranged_majorant([](double) { return 1.0; }, IntervalSet({{-0.9, -0.5}, {0.1, 0.2}}), 1.0);
  EXPECT_NEAR(c.lhs, 0.5, 1e-12);
  EXPECT_NEAR(c.rhs, 0.5, 1e-12);
}

TEST(RearrangedMajorant, RejectsBadShapes) {
  auto increasing = [](double t) { return std::abs(t); };
  EXPECT_THROW(rearranged_majorant(increasing, IntervalSet({{0, 0.5}}), 1.0), DegenerateInstance);
  auto odd = [](double t) { return t < 0 ? 2.0 - t : 1.0 - t; };
  EXPECT_THROW(rearranged_majorant(odd, IntervalSet({{0, 0.5}}), 1.0), DegenerateInstance);
  EXPECT_THROW(rearranged_majorant([](double) { return 1.0; }, IntervalSet({{0, 2}}), 1.0),
               ArgumentError);
}

TEST(RearrangedMajorant, SingularKernelAgainstOracle) {
  const double a = 1.0;
  auto f = [a](double t) { return std::log(2.0 * a / std::abs(t)); };
  const IntervalSet E({{-0.4, -0.1}, {0.0, 0.25}, {0.5, 0.7}});
  const MajorantPair m = rearranged_majorant(f, E, a);
  const double lhs = oracle::integrate(f, {-0.4, -0.1}) + oracle::integrate(f, {0.0, 0.25}) +
                     oracle::integrate(f, {0.5, 0.7});
  const double rhs = 2.0 * oracle::integrate(f, {0.0, 0.375});
  EXPECT_NEAR(m.lhs, lhs, 1e-9);
  EXPECT_NEAR(m.rhs, rhs, 1e-9);
  EXPECT_LE(m.lhs, m.rhs);
}

TEST(RandomIntervalSet, Examples) {
  EXPECT_EQ(random_interval_set(std::uint64_t{7}, 2.0, 2.0, 1), IntervalSet({{0, 2}}));
  EXPECT_TRUE(random_interval_set(std::uint64_t{7}, 2.0, 0.0, 4).empty());
  const IntervalSet E = random_interval_set(std::uint64_t{42}, 1.0, 0.3, 3);
  EXPECT_NEAR(measure(E), 0.3, 1e-12);
  EXPECT_LE(E.intervals().size(), 3u);
  EXPECT_THROW(random_interval_set(std::uint64_t{1}, 1.0, 1.5, 3), ArgumentError);
}

TEST(RandomIntervalSet, PropertiesAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    CounterRng rng(seed, "params");
    const double r = rng.uniform(0.1, 10.0);
    const double target = r * rng.uniform();
    const int pieces = static_cast<int>(rng.uniform_int(1, 10));
    const IntervalSet E = random_interval_set(seed, r, target, pieces);
    EXPECT_NEAR(measure(E), target, 1e-12 * std::max(1.0, r)) << seed;
    EXPECT_LE(E.intervals().size(), static_cast<std::size_t>(pieces));
    EXPECT_TRUE(E.contained_in(0.0, r));
    EXPECT_EQ(E, random_interval_set(seed, r, target, pieces));
  }
}

TEST(Serialization, SetAndWeightRoundTrip) {
  const IntervalSet E({{0.1, 0.4}, {1, 2}});
  EXPECT_EQ(set_from_json(to_json(E)), E);
  const Weight g({{{0, 1}, Polynomial({1, 2})}, {{1, 2}, Polynomial({3})}}, kInf);
  const Json j = to_json(g);
  EXPECT_EQ(j[0]["p"], "inf");
  EXPECT_EQ(weight_from_json(j), g);
}

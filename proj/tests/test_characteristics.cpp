#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "subharm/characteristics.hpp"
#include "subharm/rng.hpp"

using namespace subharm;

namespace {

const double ln2 = std::numbers::ln2;

SubharmonicPotential log_at(Complex a, double m = 1.0) {
  return {AtomicMeasure({{a, m}}), 0.0};
}

DeltaSubharmonicFn random_delta(std::uint64_t seed) {
  CounterRng rng(seed, "ch_test");
  std::vector<Atom> plus, minus;
  const long n = rng.uniform_int(1, 8);
  for (long i = 0; i < n; ++i) {
    const Atom a{std::polar(rng.uniform(0.1, 5.0), rng.uniform(0.0, 6.3)), rng.uniform(0.1, 2.0)};
    (rng.bernoulli(0.5) ? plus : minus).push_back(a);
  }
  return {{AtomicMeasure(plus), rng.uniform(-1, 1)}, {AtomicMeasure(minus), rng.uniform(-1, 1)}};
}

oracle::Charge to_oracle(const DeltaSubharmonicFn& U) {
  oracle::Charge c;
  c.constant = U.plus.constant - U.minus.constant;
  for (const Atom& a : U.plus.charge.atoms()) {
    c.centers.push_back(a.center);
    c.masses.push_back(a.mass);
  }
  for (const Atom& a : U.minus.charge.atoms()) {
    c.centers.push_back(a.center);
    c.masses.push_back(-a.mass);
  }
  return c;
}

// Radii that stay at least 1e-3 away from every atom modulus.
double clear_radius(const DeltaSubharmonicFn& U, CounterRng& rng, double lo, double hi) {
  for (;;) {
    const double r = rng.uniform(lo, hi);
    bool ok = true;
    for (const auto* m : {&U.plus.charge, &U.minus.charge})
      for (const Atom& a : m->atoms()) ok = ok && std::abs(std::abs(a.center) - r) >= 1e-3;
    if (ok) return r;
  }
}

}  // namespace

TEST(MaxOnCircle, Examples) {
  EXPECT_NEAR(max_on_circle(log_at({2, 0}), 1.0).value, std::log(3.0), 1e-14);
  const DeltaSubharmonicFn inv{{}, log_at(0)};
  EXPECT_NEAR(max_on_circle(inv, 0.5).value, ln2, 1e-15);
  EXPECT_EQ(max_on_circle(log_at(0), 0.0).value, -kInf);
  EXPECT_EQ(max_on_circle(log_at(0), 0.0).method, Method::closed_form);
}

TEST(MaxOnCircle, MinusAtomOnCircleIsInfinite) {
  const DeltaSubharmonicFn U{{}, log_at({0, 1.5})};
  EXPECT_EQ(max_on_circle(U, 1.5).value, kInf);
  EXPECT_EQ(max_on_circle(U, 1.5, Transform::positive_part).value, kInf);
  EXPECT_LT(max_on_circle(U, 1.5, Transform::negative_part).value, kInf);
}

TEST(MaxOnCircle, AgreesWithDenseGrid) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const DeltaSubharmonicFn U = random_delta(seed);
    CounterRng rng(seed, "radius");
    const double r = clear_radius(U, rng, 0.2, 5.0);
    const double fast = max_on_circle(U, r).value;
    const double dense = oracle::grid_circle_max(to_oracle(U), r, [](double x) { return x; });
    // The dense grid can only undershoot the true maximum.
    EXPECT_GE(fast, dense - 1e-12) << seed;
    EXPECT_LE(fast - dense, 1e-6) << seed;
  }
}

TEST(MaxOnCircle, PositivePartCommutesWithMax) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const DeltaSubharmonicFn U = random_delta(seed);
    CounterRng rng(seed, "radius");
    for (int i = 0; i < 5; ++i) {
      const double r = clear_radius(U, rng, 0.05, 6.0);
      EXPECT_EQ(positive_part(max_on_circle(U, r).value),
                max_on_circle(U, r, Transform::positive_part).value)
          << seed << " r=" << r;
    }
  }
}

TEST(MaxOnCircle, NondecreasingForPotentials) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SubharmonicPotential u = random_delta(seed).plus;
    double prev = -kInf;
    for (double r = 0.05; r < 8.0; r *= 1.17) {
      const double m = max_on_circle(u, r).value;
      EXPECT_GE(m, prev - 1e-12) << seed;
      EXPECT_LE(circle_mean(u, r).value, m + 1e-12);
      prev = m;
    }
  }
}

TEST(CircleMean, Examples) {
  EXPECT_NEAR(circle_mean(log_at({2, 0}), 1.0).value, ln2, 1e-15);
  EXPECT_NEAR(circle_mean(log_at(0), std::numbers::e).value, 1.0, 1e-15);
  EXPECT_NEAR(circle_mean(log_at({1, 0}), 1.0).value, 0.0, 1e-15);
  EXPECT_EQ(circle_mean(log_at(0), 1.0).method, Method::closed_form);
  EXPECT_EQ(circle_mean(log_at(0), 1.0).error_estimate, 0.0);
  // Brute force for ln|z - 1| on the unit circle, whose atom sits on it.
  const oracle::Charge c{{{1, 0}}, {1.0}, 0.0};
  EXPECT_NEAR(oracle::trapezoid_circle_mean(c, 1.0, [](double x) { return x; }), 0.0, 1e-5);
}

TEST(CircleMeanNonlinear, Examples) {
  const DeltaSubharmonicFn inv{{}, log_at(0)};
  EXPECT_NEAR(circle_mean_nonlinear(inv, Transform::positive_part, 0.5).value, ln2, 1e-12);
  EXPECT_NEAR(circle_mean_nonlinear(as_delta(log_at(0)), Transform::positive_part, 0.5).value,
              0.0, 1e-15);
  // C_{|U|}(1) for U = ln|z - 1| equals 2 C_{U+}(1) because C_U(1) = 0.
  const DeltaSubharmonicFn U = as_delta(log_at({1, 0}));
  const double abs_mean = circle_mean_nonlinear(U, Transform::absolute, 1.0).value;
  const double plus_mean = circle_mean_nonlinear(U, Transform::positive_part, 1.0).value;
  EXPECT_NEAR(abs_mean, 0.646131894438901, 1e-9);
  EXPECT_NEAR(abs_mean, 2.0 * plus_mean, 1e-9);
  const double brute = oracle::trapezoid_circle_mean(
      {{{1, 0}}, {1.0}, 0.0}, 1.0, [](double x) { return std::abs(x); });
  EXPECT_NEAR(abs_mean, brute, 1e-5);
}

TEST(CircleMeanNonlinear, AgreesWithTrapezoidOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const DeltaSubharmonicFn U = random_delta(seed);
    CounterRng rng(seed, "radius");
    const double r = clear_radius(U, rng, 0.2, 5.0);
    const auto o = to_oracle(U);
    const double tp = oracle::trapezoid_circle_mean(o, r, oracle::pos);
    const double tm = oracle::trapezoid_circle_mean(o, r, oracle::neg);
    EXPECT_NEAR(circle_mean_nonlinear(U, Transform::positive_part, r).value, tp, 1e-7) << seed;
    EXPECT_NEAR(circle_mean_nonlinear(U, Transform::negative_part, r).value, tm, 1e-7) << seed;
    EXPECT_NEAR(circle_mean_nonlinear(U, Transform::identity, r).value,
                circle_mean(U, r).value, 1e-9) << seed;
  }
}

TEST(RadialCount, Examples) {
  EXPECT_EQ(radial_count(AtomicMeasure({{{0, 0}, 1}}), 0.0), 1.0);
  EXPECT_EQ(radial_count(AtomicMeasure({{{2, 0}, 1}, {{3, 0}, 2}}), 2.5), 1.0);
  EXPECT_EQ(radial_count(AtomicMeasure(), 7.0), 0.0);
}

TEST(CountingIntegral, Examples) {
  const AtomicMeasure at0({{{0, 0}, 1}});
  EXPECT_NEAR(counting_integral(at0, 1.0, std::numbers::e), 1.0, 1e-15);
  EXPECT_NEAR(counting_integral(AtomicMeasure({{{0, 2}, 1}}), 1.0, 4.0), ln2, 1e-15);
  EXPECT_EQ(counting_integral(at0, 0.0, 1.0), kInf);
  EXPECT_EQ(counting_integral(at0, 0.0, 0.0), 0.0);
  EXPECT_THROW(counting_integral(at0, 2.0, 1.0), ArgumentError);
}

TEST(CountingIntegral, MatchesPiecewiseOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const AtomicMeasure mu = random_delta(seed).plus.charge;
    CounterRng rng(seed, "radii");
    const double r = rng.uniform(0.05, 3.0), R = r + rng.uniform(0.0, 4.0);
    std::vector<double> breaks{r, R};
    for (const Atom& a : mu.atoms())
      if (std::abs(a.center) > r && std::abs(a.center) < R) breaks.push_back(std::abs(a.center));
    const double ref =
        oracle::integrate([&](double t) { return radial_count(mu, t) / t; }, breaks);
    EXPECT_NEAR(counting_integral(mu, r, R), ref, 1e-10) << seed;
  }
}

TEST(CircleMeanDiff, Examples) {
  EXPECT_NEAR(circle_mean_diff(log_at(0), 1.0, std::numbers::e).value, 1.0, 1e-15);
  EXPECT_EQ(circle_mean_diff(log_at({0.3, 0.2}), 1.7, 1.7).value, 0.0);
  EXPECT_NEAR(circle_mean_diff(log_at({2, 0}), 1.0, 4.0).value, ln2, 1e-15);
}

TEST(CircleMeanDiff, PoissonJensenPrivalov) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const DeltaSubharmonicFn U = random_delta(seed);
    const SubharmonicPotential v = U.plus.charge.empty() ? U.minus : U.plus;
    CounterRng rng(seed, "pjp");
    const DeltaSubharmonicFn V = as_delta(v);
    const double r = clear_radius(V, rng, 0.1, 5.0);
    const double R = clear_radius(V, rng, r, 6.0);
    const double quad = circle_mean_diff(V, Transform::identity, r, R).value;
    const double n = counting_integral(v.charge, r, R);
    EXPECT_NEAR(quad, n, 1e-8 + 1e-8 * std::abs(n)) << seed;
  }
}

TEST(CharacteristicT, Examples) {
  const DeltaSubharmonicFn inv{{}, log_at(0)};
  EXPECT_NEAR(characteristic_T(inv, 0.1, std::numbers::e).value, 1.0, 1e-12);
  EXPECT_EQ(characteristic_T(DeltaSubharmonicFn{}, 0.5, 2.0).value, 0.0);
  EXPECT_NEAR(characteristic_T(as_delta(log_at(0)), 1.0, std::numbers::e).value, 1.0, 1e-12);
  EXPECT_EQ(characteristic_T(inv, 2.0, 2.0).value, 0.0);
  EXPECT_THROW(characteristic_T(inv, 2.0, 1.0), ArgumentError);
}

TEST(CharacteristicT, IndependentOfRepresentation) {
  const DeltaSubharmonicFn U = random_delta(5);
  DeltaSubharmonicFn W = U;
  const Atom extra{{0.7, -0.4}, 0.9};
  std::vector<Atom> p(U.plus.charge.atoms().begin(), U.plus.charge.atoms().end());
  std::vector<Atom> m(U.minus.charge.atoms().begin(), U.minus.charge.atoms().end());
  p.push_back(extra);
  m.push_back(extra);
  W.plus.charge = AtomicMeasure(p);
  W.minus.charge = AtomicMeasure(m);
  EXPECT_NEAR(characteristic_T(W, 0.5, 3.0).value, characteristic_T(U, 0.5, 3.0).value, 1e-9);
}

TEST(CharacteristicT, MonotoneAndLogConvex) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const DeltaSubharmonicFn U = random_delta(seed);
    const double r = 0.3;
    std::vector<CharacteristicValue> Ts;
    const double ratio = 1.3;
    for (double R = r; R < 9.0; R *= ratio) Ts.push_back(characteristic_T(U, r, R));
    for (std::size_t i = 1; i < Ts.size(); ++i) {
      const double eps = Ts[i].error_estimate + Ts[i - 1].error_estimate;
      EXPECT_GE(Ts[i].value, Ts[i - 1].value - eps) << seed;
      if (i + 1 < Ts.size()) {
        const double eps3 = eps + Ts[i + 1].error_estimate;
        EXPECT_LE(Ts[i].value, 0.5 * (Ts[i - 1].value + Ts[i + 1].value) + eps3) << seed;
      }
    }
    const double R = 4.0;
    double prev = kInf;
    for (double r1 = 0.1; r1 < R; r1 *= 1.4) {
      const CharacteristicValue t = characteristic_T(U, r1, R);
      EXPECT_LE(t.value, prev + 2 * t.error_estimate) << seed;
      EXPECT_GE(t.value, -t.error_estimate) << seed;
      prev = t.value;
    }
  }
}

TEST(Nevanlinna, Examples) {
  const RationalFunctionSpec inv{{}, AtomicMeasure({{{0, 0}, 1}}), 1.0};
  const NevanlinnaValues a = nevanlinna(inv, 2.0);
  EXPECT_NEAR(a.M, 0.5, 1e-15);
  EXPECT_NEAR(a.m, 0.0, 1e-12);
  EXPECT_NEAR(a.N, ln2, 1e-15);
  EXPECT_NEAR(a.T, ln2, 1e-12);
  const NevanlinnaValues b = nevanlinna(inv, 0.5);
  EXPECT_NEAR(b.m, ln2, 1e-12);
  EXPECT_NEAR(b.N, -ln2, 1e-15);
  EXPECT_NEAR(b.T, 0.0, 1e-12);
  const RationalFunctionSpec z{AtomicMeasure({{{0, 0}, 1}}), {}, 1.0};
  for (double r : {0.3, 1.0, 4.0}) {
    const NevanlinnaValues c = nevanlinna(z, r);
    EXPECT_EQ(c.N, 0.0);
    EXPECT_NEAR(c.T, std::max(0.0, std::log(r)), 1e-12);
  }
}

TEST(Nevanlinna, AgreesWithTwoRadiusCharacteristic) {
  // T(r, f) = T_U(r0, r) + C_{U+}(r0) + N(r0, f), with N(r0, f) = 0 once
  // r0 is below every pole modulus.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CounterRng rng(seed, "nev");
    std::vector<Atom> zs, ps;
    for (long i = rng.uniform_int(0, 3); i > 0; --i)
      zs.push_back({std::polar(rng.uniform(0.2, 3.0), rng.uniform(0.0, 6.3)),
                    double(rng.uniform_int(1, 3))});
    for (long i = rng.uniform_int(1, 3); i > 0; --i)
      ps.push_back({std::polar(rng.uniform(0.2, 3.0), rng.uniform(0.0, 6.3)),
                    double(rng.uniform_int(1, 3))});
    const RationalFunctionSpec f{AtomicMeasure(zs), AtomicMeasure(ps), std::exp(rng.uniform(-1, 1))};
    const DeltaSubharmonicFn U = ln_abs(f);
    const double r0 = 0.05, r = 4.0;
    const double lhs = nevanlinna(f, r).T;
    const double rhs = characteristic_T(U, r0, r).value +
                       circle_mean_nonlinear(U, Transform::positive_part, r0).value;
    EXPECT_NEAR(lhs, rhs, 1e-6) << seed;
  }
}

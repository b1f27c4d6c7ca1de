#pragma once

// Both sides of the small-set integral estimates and their auxiliary lemmas,
// evaluated on concrete instances and packaged as BoundReports.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "subharm/characteristics.hpp"
#include "subharm/errors.hpp"
#include "subharm/extended_real.hpp"
#include "subharm/function_model.hpp"
#include "subharm/golden_section.hpp"
#include "subharm/quadrature.hpp"
#include "subharm/serialization.hpp"
#include "subharm/sets_and_weights.hpp"

namespace subharm {

struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  Json params = Json::object();
  double error_estimate = 0.0;
  std::string instance_fingerprint;
  bool degenerate = false;  // 0 <= 0 by convention
  bool probe = false;       // empirical-constant probe, no pass/fail

  /// lhs <= rhs up to the combined numerical error.
  bool holds() const {
    if (std::isnan(lhs) || std::isnan(rhs)) return false;
    if (rhs == kInf) return true;
    return lhs <= rhs + error_estimate + 1e-12 * (1.0 + std::abs(rhs));
  }
};

namespace detail {

inline void finish(BoundReport& rep, double lhs_err, double rhs_err) {
  rep.error_estimate = lhs_err + rhs_err;
  const ExtRatio q = ext_ratio(rep.lhs, rep.rhs, lhs_err, rhs_err);
  rep.ratio = q.value;
  rep.degenerate = rep.degenerate || q.degenerate;
}

inline double roundoff(double x) {
  return 16.0 * std::numeric_limits<double>::epsilon() * std::abs(x);
}

/// (mes E)^{1/q} ln(L / mes E), with the value 0 at mes E = 0.
inline double small_set_factor(double mes, double q, double L) {
  if (mes <= 0.0) return 0.0;
  return std::pow(mes, 1.0 / q) * std::log(L / mes);
}

inline void require_subset(const IntervalSet& E, double lo, double hi) {
  if (!E.contained_in(lo, hi))
    throw ArgumentError("E must lie in [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
}

inline std::vector<double> atom_moduli(const AtomicMeasure& m) {
  std::vector<double> out;
  for (const Atom& a : m.atoms()) out.push_back(std::abs(a.center));
  return out;
}

/// Points of E where t -> f(t) changes sign, located by scanning and
/// bisection; these are kinks of t -> f(t)^+.
template <class F>
std::vector<double> sign_changes(const F& f, const IntervalSet& E) {
  constexpr int kScan = 16;
  std::vector<double> out;
  for (const Interval& iv : E.intervals()) {
    if (!(iv.hi > iv.lo)) continue;
    double pt = iv.lo, pv = f(iv.lo);
    for (int i = 1; i <= kScan; ++i) {
      const double t = iv.lo + (iv.hi - iv.lo) * i / kScan;
      const double v = f(t);
      if ((pv > 0.0) != (v > 0.0) && std::isfinite(pv) && std::isfinite(v)) {
        double lo = pt, hi = t;
        const bool lo_pos = pv > 0.0;
        for (int it = 0; it < 48 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((f(mid) > 0.0) == lo_pos) lo = mid; else hi = mid;
        }
        out.push_back(0.5 * (lo + hi));
      }
      pt = t;
      pv = v;
    }
  }
  return out;
}

inline Json base_params(const IntervalSet& E, const Weight& g) {
  return {{"p", exponent_to_json(g.p())},
          {"q", g.q()},
          {"mes_E", E.measure()},
          {"pieces_E", E.intervals().size()}};
}

}  // namespace detail

/// int_E M_U^+(t) g(t) dt.
inline QuadratureResult max_positive_integral(const DeltaSubharmonicFn& U,
                                              const IntervalSet& E,
                                              const Weight& g,
                                              const QuadratureSpec& quad = {}) {
  const DeltaSubharmonicFn V = canonicalize(U);
  std::vector<double> hints = detail::atom_moduli(V.minus.charge);
  const auto kinks = detail::sign_changes(
      [&](double t) { return max_on_circle(V, t).value; }, E);
  hints.insert(hints.end(), kinks.begin(), kinks.end());
  return integrate_weighted(
      [&](double t) { return max_on_circle(V, t, Transform::positive_part).value; },
      g, E, quad, hints);
}

/// int_E M_{|u|}(t) g(t) dt, with the maximum of |u| taken directly.
inline QuadratureResult max_abs_integral(const SubharmonicPotential& u,
                                         const IntervalSet& E, const Weight& g,
                                         const QuadratureSpec& quad = {}) {
  const std::vector<double> hints = detail::atom_moduli(u.charge);
  const DeltaSubharmonicFn U = as_delta(u);
  return integrate_weighted(
      [&](double t) { return max_on_circle(U, t, Transform::absolute).value; },
      g, E, quad, hints);
}

/// Lemma on radial counts: mu^rad(r) <= R / (R - r) N_mu(r, R).
inline BoundReport lemma2_check(const AtomicMeasure& mu, double r, double R) {
  if (!(r >= 0.0) || !(r < R))
    throw ArgumentError("radial count bound needs 0 <= r < R");
  for (const Atom& a : mu.atoms())
    if (std::abs(a.center) > R)
      throw ArgumentError("measure must be supported in the closed disc of radius R");
  BoundReport rep{.name = "lemma2_check"};
  rep.lhs = radial_count(mu, r);
  rep.rhs = ext_mul(R / (R - r), counting_integral(mu, r, R));
  rep.params = {{"r", r}, {"R", R}, {"atoms", mu.size()}, {"total_mass", mu.total_mass()}};
  rep.instance_fingerprint = fingerprint({{"measure", to_json(mu)}, {"r", r}, {"R", R}});
  detail::finish(rep, detail::roundoff(rep.lhs), detail::roundoff(rep.rhs));
  return rep;
}

/// int_0^a ln^q(A/x) dx <= (1 + q^{q+1}) a ln^q(A/a) for 0 < a <= A/e.
inline BoundReport lemma3_check(double q, double A, double a,
                                const QuadratureSpec& quad = {}) {
  if (!(q >= 0.0)) throw ArgumentError("exponent q must be nonnegative");
  if (!(A > 0.0)) throw ArgumentError("A must be positive");
  const double limit = A / std::numbers::e;
  if (!(a > 0.0) || a > limit * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))
    throw ArgumentError("a must lie in (0, A/e]");
  BoundReport rep{.name = "lemma3_check"};
  const double zero[] = {0.0};
  const QuadratureResult lhs = integrate(
      [&](double x) { return std::pow(std::log(A / x), q); }, 0.0, a, quad, zero);
  rep.lhs = lhs.value;
  rep.rhs = (1.0 + std::pow(q, q + 1.0)) * a * std::pow(std::log(A / a), q);
  rep.params = {{"q", q}, {"A", A}, {"a", a}};
  rep.instance_fingerprint = fingerprint(rep.params);
  detail::finish(rep, lhs.error, detail::roundoff(rep.rhs));
  return rep;
}

/// ||ln(2R / |. - x|)||_{L^q(E)}.
inline QuadratureResult log_kernel_norm(const IntervalSet& E, double R,
                                        double q, double x,
                                        const QuadratureSpec& quad = {}) {
  const double hint[] = {x};
  QuadratureResult s;
  for (const Interval& iv : E.intervals())
    s += integrate(
        [&](double t) { return std::pow(std::log(2.0 * R / std::abs(t - x)), q); },
        iv.lo, iv.hi, quad, hint);
  if (s.value <= 0.0) return {0.0, 0.0, s.panels};
  const double norm = std::pow(s.value, 1.0 / q);
  return {norm, norm / (q * s.value) * s.error, s.panels};
}

/// Supremum over x in [0, R] of log_kernel_norm, by a 256-point grid and a
/// golden-section refinement around the best grid point.
inline Extremum sup_log_kernel_norm(const IntervalSet& E, double R, double q,
                                    const QuadratureSpec& quad = {}) {
  constexpr int kGrid = 256;
  QuadratureSpec coarse = quad;
  coarse.rel_tol = std::max(quad.rel_tol, 1e-7);
  auto norm = [&](double x) { return log_kernel_norm(E, R, q, x, coarse).value; };
  Extremum best{0.0, norm(0.0)};
  for (int i = 1; i <= kGrid; ++i) {
    const double x = R * i / kGrid;
    const double v = norm(x);
    if (v > best.value) best = {x, v};
  }
  const double step = R / kGrid;
  const Extremum refined = golden_section_maximize(
      norm, std::max(0.0, best.argument - step), std::min(R, best.argument + step),
      1e-9 * R);
  if (refined.value > best.value) best = refined;
  best.value = log_kernel_norm(E, R, q, best.argument, quad).value;
  return best;
}

/// ||ln(2R/|. - x|)||_{L^q(E)} <= 2q (mes E)^{1/q} ln(4R / mes E).
inline BoundReport lemma4_check(const IntervalSet& E, double x, double r,
                                double R, double q,
                                const QuadratureSpec& quad = {}) {
  if (!(r > 0.0) || !(r <= R)) throw ArgumentError("need 0 < r <= R");
  if (!(q >= 1.0)) throw ArgumentError("exponent q must be >= 1");
  if (!(x >= 0.0) || !(x <= R)) throw ArgumentError("x must lie in [0, R]");
  detail::require_subset(E, 0.0, r);
  BoundReport rep{.name = "lemma4_check"};
  const double mes = E.measure();
  rep.params = {{"x", x}, {"r", r}, {"R", R}, {"q", q}, {"mes_E", mes},
                {"pieces_E", E.intervals().size()}};
  rep.instance_fingerprint = fingerprint({{"E", to_json(E)}, {"params", rep.params}});
  if (mes == 0.0) {
    rep.degenerate = true;
    detail::finish(rep, 0.0, 0.0);
    return rep;
  }
  const QuadratureResult lhs = log_kernel_norm(E, R, q, x, quad);
  rep.lhs = lhs.value;
  rep.rhs = 2.0 * q * detail::small_set_factor(mes, q, 4.0 * R);
  detail::finish(rep, lhs.error, detail::roundoff(rep.rhs));
  return rep;
}

/// Even kernels on (-a, a) that decrease on (0, a).
struct EvenKernel {
  enum class Family { log_power, tent, exponential, power, constant };
  Family family = Family::tent;
  double shape = 1.0;  // exponent or rate, depending on the family
  double a = 1.0;

  double operator()(double t) const {
    const double s = std::abs(t);
    switch (family) {
      case Family::log_power: return std::pow(std::log(2.0 * a / s), shape);
      case Family::tent: return 1.0 - s / a;
      case Family::exponential: return std::exp(-shape * s);
      case Family::power: return std::pow(std::max(a - s, 0.0), shape);
      case Family::constant: return shape;
    }
    return 0.0;
  }
};

inline const char* to_string(EvenKernel::Family f) {
  switch (f) {
    case EvenKernel::Family::log_power: return "log_power";
    case EvenKernel::Family::tent: return "tent";
    case EvenKernel::Family::exponential: return "exponential";
    case EvenKernel::Family::power: return "power";
    case EvenKernel::Family::constant: return "constant";
  }
  return "?";
}

inline EvenKernel::Family kernel_family_from_string(const std::string& s) {
  using F = EvenKernel::Family;
  for (F f : {F::log_power, F::tent, F::exponential, F::power, F::constant})
    if (s == to_string(f)) return f;
  throw ArgumentError("unknown kernel family: " + s);
}

/// int_E f <= 2 int_0^{lambda(E)/2} f for even f decreasing on (0, a).
inline BoundReport lemma_a_check(const EvenKernel& f, const IntervalSet& E,
                                 const QuadratureSpec& quad = {}) {
  BoundReport rep{.name = "lemma_a_check"};
  const MajorantPair m = rearranged_majorant(f, E, f.a, quad);
  rep.lhs = m.lhs;
  rep.rhs = m.rhs;
  rep.params = {{"family", to_string(f.family)}, {"shape", f.shape}, {"a", f.a},
                {"mes_E", E.measure()}, {"pieces_E", E.intervals().size()}};
  rep.instance_fingerprint = fingerprint({{"E", to_json(E)}, {"params", rep.params}});
  detail::finish(rep, m.lhs_error, m.rhs_error);
  return rep;
}

/// int_E M_U^+ g <= ((R+r)/(R-r) C_{U+}(R) (mes E)^{1/q}
///                   + Delta_v^rad(R) sup_x ||ln(2R/|.-x|)||_{L^q(E)}) ||g||_p.
inline BoundReport lemma1_check(const DeltaSubharmonicFn& U, const IntervalSet& E,
                                const Weight& g, double r, double R,
                                const QuadratureSpec& quad = {},
                                std::optional<QuadratureResult> lhs_integral = {}) {
  if (!(r >= 0.0) || !(r < R)) throw ArgumentError("need 0 <= r < R");
  detail::require_subset(E, 0.0, r);
  const DeltaSubharmonicFn V = canonicalize(U);
  BoundReport rep{.name = "lemma1_check"};
  const double mes = E.measure();
  const double q = g.q();
  const QuadratureResult lhs =
      lhs_integral ? *lhs_integral : max_positive_integral(V, E, g, quad);
  const CharacteristicValue c = circle_mean_nonlinear(V, Transform::positive_part, R, quad);
  const double count = radial_count(V.minus.charge, R);
  const Extremum sup = mes > 0.0 && count > 0.0 ? sup_log_kernel_norm(E, R, q, quad)
                                                 : Extremum{0.0, 0.0};
  const double gnorm = lp_norm(g, E);
  const double first = (R + r) / (R - r) * c.value * std::pow(mes, 1.0 / q);
  rep.lhs = lhs.value;
  rep.rhs = (first + count * sup.value) * gnorm;
  rep.params = detail::base_params(E, g);
  rep.params.update(Json{{"r", r}, {"R", R}, {"C_U+(R)", c.value},
                         {"minus_count(R)", count}, {"sup_x", sup.argument},
                         {"sup_norm", sup.value}, {"g_norm", gnorm}});
  rep.instance_fingerprint = fingerprint(
      {{"fn", to_json(U)}, {"E", to_json(E)}, {"g", to_json(g)}, {"r", r}, {"R", R}});
  const double rhs_err = (R + r) / (R - r) * c.error_estimate *
                             std::pow(mes, 1.0 / q) * gnorm +
                         detail::roundoff(rep.rhs);
  detail::finish(rep, lhs.error, rhs_err);
  return rep;
}

/// int_E M_U^+ g <= q (2+b)/b (C_{U+}((1+b)r) + N_{Delta_v}((1+b)r, (1+b)^2 r))
///                  ||g||_p (mes E)^{1/q} ln(4(1+b)r / mes E).
inline BoundReport main_lemma_check(const DeltaSubharmonicFn& U,
                                    const IntervalSet& E, const Weight& g,
                                    double r, double b,
                                    const QuadratureSpec& quad = {},
                                    std::optional<QuadratureResult> lhs_integral = {}) {
  if (!(r > 0.0)) throw ArgumentError("need r > 0");
  if (!(b > 0.0)) throw ArgumentError("need b > 0");
  detail::require_subset(E, 0.0, r);
  const DeltaSubharmonicFn V = canonicalize(U);
  BoundReport rep{.name = "main_lemma_check"};
  const double mes = E.measure();
  const double q = g.q();
  const double R1 = (1.0 + b) * r;
  const double R2 = (1.0 + b) * R1;
  const QuadratureResult lhs =
      lhs_integral ? *lhs_integral : max_positive_integral(V, E, g, quad);
  const CharacteristicValue c = circle_mean_nonlinear(V, Transform::positive_part, R1, quad);
  const double n = counting_integral(V.minus.charge, R1, R2);
  const double gnorm = lp_norm(g, E);
  const double factor = q * (2.0 + b) / b * gnorm * detail::small_set_factor(mes, q, 4.0 * R1);
  rep.lhs = lhs.value;
  rep.rhs = ext_mul(factor, c.value + n);
  rep.params = detail::base_params(E, g);
  rep.params.update(Json{{"r", r}, {"b", b}, {"C_U+((1+b)r)", c.value},
                         {"N_minus", n}, {"g_norm", gnorm}});
  rep.instance_fingerprint = fingerprint(
      {{"fn", to_json(U)}, {"E", to_json(E)}, {"g", to_json(g)}, {"r", r}, {"b", b}});
  detail::finish(rep, lhs.error, factor * c.error_estimate + detail::roundoff(rep.rhs));
  return rep;
}

/// (1/r) int_E M_U^+ g <= 4q k/(k-1) (T_U(r0, kr) + C_{U+}(r0)) ||g||_p
///                        (mes E)^{1/q} / r ln(4kr / mes E).
inline BoundReport main_theorem_T(const DeltaSubharmonicFn& U, const IntervalSet& E,
                                  const Weight& g, double r, double r0, double k,
                                  const QuadratureSpec& quad = {},
                                  std::optional<QuadratureResult> lhs_integral = {}) {
  if (!(r0 > 0.0) || !(r0 < r)) throw ArgumentError("need 0 < r0 < r");
  if (!(k > 1.0)) throw ArgumentError("need k > 1");
  detail::require_subset(E, 0.0, r);
  const DeltaSubharmonicFn V = canonicalize(U);
  BoundReport rep{.name = "main_theorem_T"};
  const double mes = E.measure();
  const double q = g.q();
  const QuadratureResult lhs =
      lhs_integral ? *lhs_integral : max_positive_integral(V, E, g, quad);
  const CharacteristicValue T = characteristic_T(V, r0, k * r, quad);
  const CharacteristicValue c0 = circle_mean_nonlinear(V, Transform::positive_part, r0, quad);
  const double gnorm = lp_norm(g, E);
  const double factor = 4.0 * q * k / (k - 1.0) * gnorm *
                        detail::small_set_factor(mes, q, 4.0 * k * r) / r;
  rep.lhs = lhs.value / r;
  rep.rhs = ext_mul(factor, T.value + c0.value);
  rep.params = detail::base_params(E, g);
  rep.params.update(Json{{"r", r}, {"r0", r0}, {"k", k}, {"T_U(r0,kr)", T.value},
                         {"C_U+(r0)", c0.value}, {"g_norm", gnorm}});
  rep.instance_fingerprint = fingerprint(
      {{"fn", to_json(U)}, {"E", to_json(E)}, {"g", to_json(g)},
       {"r", r}, {"r0", r0}, {"k", k}});
  detail::finish(rep, lhs.error / r,
                 factor * (T.error_estimate + c0.error_estimate) +
                     detail::roundoff(rep.rhs));
  return rep;
}

/// (1/r) int_E M_{|u|} g <= 5q k/(k-1) (M_{u+}(kr) + C_{u-}(r0)) ||g||_p
///                          (mes E)^{1/q} / r ln(4kr / mes E).
inline BoundReport main_theorem_M(const SubharmonicPotential& u, const IntervalSet& E,
                                  const Weight& g, double r, double r0, double k,
                                  const QuadratureSpec& quad = {},
                                  std::optional<QuadratureResult> lhs_integral = {}) {
  if (!(r0 > 0.0) || !(r0 < r)) throw ArgumentError("need 0 < r0 < r");
  if (!(k > 1.0)) throw ArgumentError("need k > 1");
  detail::require_subset(E, 0.0, r);
  BoundReport rep{.name = "main_theorem_M"};
  const double mes = E.measure();
  const double q = g.q();
  const QuadratureResult lhs =
      lhs_integral ? *lhs_integral : max_abs_integral(u, E, g, quad);

  // M_{|u|} <= M_{u+} + M_{(-u)+}, checked on a sample of E.
  const DeltaSubharmonicFn U = as_delta(u);
  const DeltaSubharmonicFn neg{{}, u};
  double gap = kInf;
  for (const Interval& iv : E.intervals())
    for (int i = 0; i <= 4; ++i) {
      const double t = iv.lo + (iv.hi - iv.lo) * (i + 0.5) / 5.0;
      const double direct = max_on_circle(U, t, Transform::absolute).value;
      const double split = max_on_circle(U, t, Transform::positive_part).value +
                           max_on_circle(neg, t, Transform::positive_part).value;
      if (std::isfinite(direct)) gap = std::min(gap, split - direct);
    }

  const double m_plus = max_on_circle(U, k * r, Transform::positive_part).value;
  const CharacteristicValue c0 = circle_mean_nonlinear(U, Transform::negative_part, r0, quad);
  const double gnorm = lp_norm(g, E);
  const double factor = 5.0 * q * k / (k - 1.0) * gnorm *
                        detail::small_set_factor(mes, q, 4.0 * k * r) / r;
  rep.lhs = lhs.value / r;
  rep.rhs = ext_mul(factor, m_plus + c0.value);
  rep.params = detail::base_params(E, g);
  rep.params.update(Json{{"r", r}, {"r0", r0}, {"k", k}, {"M_u+(kr)", m_plus},
                         {"C_u-(r0)", c0.value}, {"g_norm", gnorm},
                         {"split_gap_min", real_to_json(gap)}});
  rep.instance_fingerprint = fingerprint(
      {{"fn", to_json(U)}, {"E", to_json(E)}, {"g", to_json(g)},
       {"r", r}, {"r0", r0}, {"k", k}});
  detail::finish(rep, lhs.error / r,
                 factor * c0.error_estimate + detail::roundoff(rep.rhs));
  return rep;
}

/// Empirical constant in (1/r) int_0^r ln+ M(t, f) dt <= C(k) T(kr, f):
/// ratio = lhs / T(kr, f), +inf when T(kr, f) = 0 < lhs.
inline BoundReport nevanlinna_ratio(const RationalFunctionSpec& f, double r,
                                    double k, const QuadratureSpec& quad = {},
                                    std::optional<QuadratureResult> lhs_integral = {}) {
  if (!(r > 0.0)) throw ArgumentError("need r > 0");
  if (!(k > 1.0)) throw ArgumentError("need k > 1");
  BoundReport rep{.name = "nevanlinna_ratio", .probe = true};
  const DeltaSubharmonicFn U = ln_abs(f);
  const IntervalSet E({{0.0, r}});
  const QuadratureResult lhs =
      lhs_integral ? *lhs_integral
                   : max_positive_integral(U, E, Weight::constant(1.0, 0.0, r, kInf), quad);
  const NevanlinnaValues nv = nevanlinna(f, k * r, quad);
  rep.lhs = lhs.value / r;
  rep.rhs = nv.T;
  rep.params = {{"r", r}, {"k", k}, {"m(kr)", nv.m}, {"N(kr)", nv.N},
                {"zeros", f.zeros.size()}, {"poles", f.poles.size()}};
  rep.instance_fingerprint =
      fingerprint({{"rational", to_json(f)}, {"r", r}, {"k", k}});
  detail::finish(rep, lhs.error / r, nv.error_estimate);
  return rep;
}

/// m_inf(E; R, b) = mes E + min(mes E, 3bR) ln(3ebR / min(mes E, 3bR)).
inline double small_interval_measure(double mes, double R, double b) {
  if (mes <= 0.0) return 0.0;
  const double m = std::min(mes, 3.0 * b * R);
  return mes + m * std::log(3.0 * std::numbers::e * b * R / m);
}

/// Smallest a >= 1 with (a/b) ln(a/b) >= kappa, for b in (0, 1].
inline double minimal_constant(double kappa, double b) {
  auto phi = [b](double a) { return a / b * std::log(a / b); };
  if (std::isinf(kappa)) return kInf;
  if (kappa <= phi(1.0)) return 1.0;
  double lo = 1.0, hi = 2.0;
  while (phi(hi) < kappa) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < kappa) lo = mid; else hi = mid;
  }
  return hi;
}

/// Probe of the small-intervals estimate with an unspecified absolute
/// constant a: reports kappa = lhs / structure and the smallest admissible a.
inline BoundReport small_intervals_ratio(const SubharmonicPotential& u,
                                         const IntervalSet& E, const Weight& g,
                                         double r0, double r, double R, double b,
                                         const QuadratureSpec& quad = {},
                                         std::optional<QuadratureResult> lhs_integral = {}) {
  if (!(r0 >= 0.0) || !(r0 <= r) || !(r < R))
    throw ArgumentError("need 0 <= r0 <= r < R");
  if (!(b > 0.0) || b > 1.0) throw ArgumentError("need b in (0, 1]");
  if (!std::isinf(g.p())) throw ArgumentError("weight must be measured in L^inf");
  detail::require_subset(E, r, R);
  BoundReport rep{.name = "small_intervals_ratio", .probe = true};
  const double mes = E.measure();
  const QuadratureResult lhs =
      lhs_integral ? *lhs_integral : max_abs_integral(u, E, g, quad);
  const double m_top = max_on_circle(u, (1.0 + b) * R).value;
  const CharacteristicValue c0 = circle_mean_nonlinear(u, Transform::negative_part, r0, quad);
  const double gnorm = lp_norm(g, E);
  const double m_inf = small_interval_measure(mes, R, b);
  const double structure = ext_mul((m_top + 2.0 * c0.value) * gnorm, m_inf);
  rep.lhs = lhs.value;
  rep.rhs = structure;
  detail::finish(rep, lhs.error, 2.0 * c0.error_estimate * gnorm * m_inf +
                                     detail::roundoff(structure));
  const double a_min = minimal_constant(rep.ratio, b);
  if (std::isinf(a_min)) rep.degenerate = true;
  const bool wide = mes > 3.0 * b * R;
  const double m_bound = wide ? 2.0 * mes
                              : 2.0 * mes * std::log(3.0 * std::numbers::e * b * R / mes);
  rep.params = {{"r0", r0}, {"r", r}, {"R", R}, {"b", b}, {"mes_E", mes},
                {"pieces_E", E.intervals().size()}, {"m_inf", m_inf},
                {"m_inf_branch", wide ? "wide" : "narrow"},
                {"m_inf_bound_ok", mes == 0.0 || m_inf <= m_bound * (1.0 + 1e-12)},
                {"a_min", real_to_json(a_min)}, {"g_norm", gnorm}};
  rep.instance_fingerprint = fingerprint(
      {{"fn", to_json(as_delta(u))}, {"E", to_json(E)}, {"g", to_json(g)},
       {"r0", r0}, {"r", r}, {"R", R}, {"b", b}});
  return rep;
}

}  // namespace subharm

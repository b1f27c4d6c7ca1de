#pragma once

// Radial characteristics of (delta-)subharmonic potentials: circle maxima
// M_v(r), circle means C_v(r), counting functions mu^rad and N_mu(r, R), the
// two-variable characteristic T_U(r, R) and the classical Nevanlinna
// quantities M, m, N, T of a rational function.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "subharm/errors.hpp"
#include "subharm/extended_real.hpp"
#include "subharm/function_model.hpp"
#include "subharm/golden_section.hpp"
#include "subharm/quadrature.hpp"

namespace subharm {

enum class Method { closed_form, quadrature, grid_max };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::grid_max: return "grid_max";
  }
  return "?";
}

struct CharacteristicValue {
  double value = 0.0;
  double error_estimate = 0.0;
  Method method = Method::closed_form;
};

/// Pointwise transforms w(U) whose circle means and maxima are needed.
/// For U = ln|f| the positive part is ln+|f|.
enum class Transform { identity, positive_part, negative_part, absolute };

inline double apply(Transform t, double x) {
  switch (t) {
    case Transform::identity: return x;
    case Transform::positive_part: return positive_part(x);
    case Transform::negative_part: return negative_part(x);
    case Transform::absolute: return std::abs(x);
  }
  return x;
}

inline constexpr std::size_t kCircleGridNodes = 1024;
inline constexpr double kAngularResolution = 1e-12;

namespace detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct UnitGrid {
  std::array<double, kCircleGridNodes> cos;
  std::array<double, kCircleGridNodes> sin;
};

inline const UnitGrid& unit_grid() {
  static const UnitGrid grid = [] {
    UnitGrid g{};
    for (std::size_t j = 0; j < kCircleGridNodes; ++j) {
      const double t = kTwoPi * static_cast<double>(j) / kCircleGridNodes;
      g.cos[j] = std::cos(t);
      g.sin[j] = std::sin(t);
    }
    return g;
  }();
  return grid;
}

/// Signed flat copy of a charge for fast evaluation on circles.
struct FlatCharge {
  std::vector<double> x, y, w;  // w = +-mass / 2
  double constant = 0.0;

  explicit FlatCharge(const DeltaSubharmonicFn& U)
      : constant(U.plus.constant - U.minus.constant) {
    const std::size_t n = U.plus.charge.size() + U.minus.charge.size();
    x.reserve(n);
    y.reserve(n);
    w.reserve(n);
    for (const Atom& a : U.plus.charge.atoms()) {
      x.push_back(a.center.real());
      y.push_back(a.center.imag());
      w.push_back(0.5 * a.mass);
    }
    for (const Atom& a : U.minus.charge.atoms()) {
      x.push_back(a.center.real());
      y.push_back(a.center.imag());
      w.push_back(-0.5 * a.mass);
    }
  }

  double operator()(double px, double py) const {
    double s = constant;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double dx = px - x[i];
      const double dy = py - y[i];
      s += w[i] * std::log(dx * dx + dy * dy);
    }
    return s;
  }
};

/// Canonical view of U that only copies when U is not already canonical.
class CanonicalRef {
 public:
  explicit CanonicalRef(const DeltaSubharmonicFn& U) {
    if (is_canonical(U)) {
      ptr_ = &U;
    } else {
      own_ = canonicalize(U);
      ptr_ = &*own_;
    }
  }
  CanonicalRef(const CanonicalRef&) = delete;
  CanonicalRef& operator=(const CanonicalRef&) = delete;
  const DeltaSubharmonicFn& operator*() const { return *ptr_; }
  const DeltaSubharmonicFn* operator->() const { return ptr_; }

 private:
  std::optional<DeltaSubharmonicFn> own_;
  const DeltaSubharmonicFn* ptr_ = nullptr;
};

inline bool on_circle(Complex a, double r) {
  return std::abs(std::abs(a) - r) <= 4.0 * std::numeric_limits<double>::epsilon() * r;
}

/// Angle in [0, 2 pi).
inline double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

/// ln x for x > 0 to about 1e-10 absolute, written with plain arithmetic
/// and bit operations so that loops over it vectorize. Only used to screen
/// the circle grid; reported values are always recomputed with std::log.
inline double screening_log(double x) {
  constexpr std::uint64_t kMantissa = 0x000FFFFFFFFFFFFFULL;
  constexpr std::uint64_t kOneExp = 0x3FF0000000000000ULL;
  constexpr std::uint64_t kMagic = 0x4330000000000000ULL;  // 2^52
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  const double m = std::bit_cast<double>((bits & kMantissa) | kOneExp);
  const double e = std::bit_cast<double>(kMagic | (bits >> 52)) - 0x1.0p52 - 1023.0;
  // ln m = 2 atanh(s), s = (m - 1)/(m + 1) in [0, 1/3).
  const double s = (m - 1.0) / (m + 1.0);
  const double s2 = s * s;
  double series = 1.0 / 19;
  series = 1.0 / 17 + s2 * series;
  series = 1.0 / 15 + s2 * series;
  series = 1.0 / 13 + s2 * series;
  series = 1.0 / 11 + s2 * series;
  series = 1.0 / 9 + s2 * series;
  series = 1.0 / 7 + s2 * series;
  series = 1.0 / 5 + s2 * series;
  series = 1.0 / 3 + s2 * series;
  series = 1.0 + s2 * series;
  return e * 0.69314718055994531 + 2.0 * s * series;
}

/// vals[j] = U(r e^{i theta_j}) on the uniform grid, via screening_log.
inline void screen_circle(const FlatCharge& flat, double r,
                          std::array<double, kCircleGridNodes>& vals) {
  const UnitGrid& grid = unit_grid();
  vals.fill(flat.constant);
  for (std::size_t i = 0; i < flat.w.size(); ++i) {
    const double ax = flat.x[i], ay = flat.y[i], wi = flat.w[i];
    for (std::size_t j = 0; j < kCircleGridNodes; ++j) {
      const double dx = r * grid.cos[j] - ax;
      const double dy = r * grid.sin[j] - ay;
      vals[j] += wi * screening_log(dx * dx + dy * dy);
    }
  }
}

}  // namespace detail

/// M_{w(U)}(r) = sup over |z| = r of w(U(z)).
///
/// The circle is sampled on a uniform grid of kCircleGridNodes angles, then
/// the best local maxima and the angles of atoms close to the circle are
/// refined by golden-section search to kAngularResolution. An atom lying on
/// the circle where w(U) = +inf returns +inf immediately. At r = 0 the value
/// is w(U(0)).
inline CharacteristicValue max_on_circle(const DeltaSubharmonicFn& U, double r,
                                         Transform t = Transform::identity) {
  if (!(r >= 0.0)) throw ArgumentError("radius must be nonnegative");
  const detail::CanonicalRef V(U);
  if (r == 0.0) return {apply(t, evaluate(*V, Complex{0.0, 0.0})), 0.0,
                        Method::closed_form};

  const bool minus_spikes_up = t != Transform::negative_part;
  const bool plus_spikes_up =
      t == Transform::negative_part || t == Transform::absolute;
  std::vector<double> seeds;
  for (const Atom& a : V->minus.charge.atoms()) {
    if (minus_spikes_up && detail::on_circle(a.center, r))
      return {kInf, 0.0, Method::closed_form};
    if (minus_spikes_up && std::abs(std::abs(a.center) - r) < 0.05 * r)
      seeds.push_back(std::arg(a.center));
  }
  for (const Atom& a : V->plus.charge.atoms()) {
    if (plus_spikes_up && detail::on_circle(a.center, r))
      return {kInf, 0.0, Method::closed_form};
    if (plus_spikes_up && std::abs(std::abs(a.center) - r) < 0.05 * r)
      seeds.push_back(std::arg(a.center));
  }

  const detail::FlatCharge flat(*V);
  auto value_at = [&](double theta) {
    return apply(t, flat(r * std::cos(theta), r * std::sin(theta)));
  };

  // Screen the grid with the fast logarithm; candidates are then
  // re-evaluated and refined exactly.
  std::array<double, kCircleGridNodes> vals;
  detail::screen_circle(flat, r, vals);
  for (double& v : vals) v = apply(t, v);

  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < kCircleGridNodes; ++j) {
    const double prev = vals[(j + kCircleGridNodes - 1) % kCircleGridNodes];
    const double next = vals[(j + 1) % kCircleGridNodes];
    if (vals[j] >= prev && vals[j] >= next) peaks.push_back(j);
  }
  // Only the three best peaks are ever refined.
  const auto keep = peaks.begin() + std::min<std::ptrdiff_t>(3, std::ssize(peaks));
  std::partial_sort(peaks.begin(), keep, peaks.end(), [&](std::size_t i, std::size_t k) {
    return vals[i] > vals[k] || (vals[i] == vals[k] && i < k);
  });
  peaks.erase(keep, peaks.end());
  // A smooth peak sits at most curvature * step^2 / 8 above its best grid
  // node; sharper peaks come from atoms near the circle and are seeded.
  double mass = 0.0;
  for (double wi : flat.w) mass += 2.0 * std::abs(wi);
  const double top = vals[peaks.front()];
  const double margin = 0.01 * mass + 1e-9 * (1.0 + std::abs(top));
  std::erase_if(peaks, [&](std::size_t j) { return vals[j] < top - margin; });

  constexpr double kStep = detail::kTwoPi / kCircleGridNodes;
  double best = value_at(kStep * static_cast<double>(peaks.front()));
  auto refine = [&](double center) {
    const Extremum e = golden_section_maximize(
        value_at, center - kStep, center + kStep, kAngularResolution);
    best = std::max(best, e.value);
  };
  for (std::size_t j : peaks) refine(kStep * static_cast<double>(j));
  for (double s : seeds) {
    best = std::max(best, value_at(s));
    refine(s);
  }
  const double err =
      64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(best));
  return {best, std::isfinite(best) ? err : 0.0, Method::grid_max};
}

inline CharacteristicValue max_on_circle(const SubharmonicPotential& u,
                                         double r,
                                         Transform t = Transform::identity) {
  return max_on_circle(as_delta(u), r, t);
}

/// Exact circle mean: C_u(r) = c + sum_j m_j ln max(r, |a_j|); C_u(0) = u(0).
inline CharacteristicValue circle_mean(const SubharmonicPotential& u,
                                       double r) {
  if (!(r >= 0.0)) throw ArgumentError("radius must be nonnegative");
  if (r == 0.0) return {u(Complex{0.0, 0.0}), 0.0, Method::closed_form};
  double s = u.constant;
  for (const Atom& a : u.charge.atoms())
    s += a.mass * std::log(std::max(r, std::abs(a.center)));
  return {s, 0.0, Method::closed_form};
}

inline CharacteristicValue circle_mean(const DeltaSubharmonicFn& U, double r) {
  if (r == 0.0) {
    const detail::CanonicalRef V(U);
    return {evaluate(*V, Complex{0.0, 0.0}), 0.0, Method::closed_form};
  }
  const double v = circle_mean(U.plus, r).value - circle_mean(U.minus, r).value;
  return {v, 0.0, Method::closed_form};
}

namespace detail {

/// Angles in [0, 2 pi] where the integrand of a circle mean is singular or
/// has a kink: atoms near the circle, and sign changes of U for transforms
/// that clip at zero.
inline std::vector<double> circle_hints(const DeltaSubharmonicFn& U, double r,
                                        Transform t) {
  std::vector<double> hints;
  for (const auto* m : {&U.plus.charge, &U.minus.charge})
    for (const Atom& a : m->atoms())
      if (std::abs(std::abs(a.center) - r) <= 0.25 * r)
        hints.push_back(wrap_angle(std::arg(a.center)));
  if (t == Transform::identity) return hints;

  const FlatCharge flat(U);
  auto val = [&](double th) { return flat(r * std::cos(th), r * std::sin(th)); };
  constexpr std::size_t kScan = 256;
  double prev_t = 0.0;
  double prev_v = val(0.0);
  for (std::size_t j = 1; j <= kScan; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / kScan;
    const double v = val(th);
    if ((prev_v < 0.0) != (v < 0.0)) {
      double lo = prev_t, hi = th;
      const bool lo_neg = prev_v < 0.0;
      for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((val(mid) < 0.0) == lo_neg) lo = mid; else hi = mid;
      }
      hints.push_back(0.5 * (lo + hi));
    }
    prev_t = th;
    prev_v = v;
  }
  return hints;
}

}  // namespace detail

/// (1/2pi) int_0^{2pi} w(U(r e^{is})) ds by adaptive quadrature. With the
/// identity transform this is the quadrature route to C_U(r), independent of
/// the closed form.
inline CharacteristicValue circle_mean_nonlinear(const DeltaSubharmonicFn& U,
                                                 Transform t, double r,
                                                 const QuadratureSpec& quad = {}) {
  if (!(r >= 0.0)) throw ArgumentError("radius must be nonnegative");
  const detail::CanonicalRef V(U);
  if (r == 0.0)
    return {apply(t, evaluate(*V, Complex{0.0, 0.0})), 0.0, Method::closed_form};

  const detail::FlatCharge flat(*V);
  auto integrand = [&](double th) {
    return apply(t, flat(r * std::cos(th), r * std::sin(th)));
  };
  QuadratureSpec spec = quad;
  spec.abs_tol *= detail::kTwoPi;
  const std::vector<double> hints = detail::circle_hints(*V, r, t);
  const QuadratureResult q =
      integrate(integrand, 0.0, detail::kTwoPi, spec, hints);
  return {q.value / detail::kTwoPi, q.error / detail::kTwoPi,
          Method::quadrature};
}

inline CharacteristicValue circle_mean_nonlinear(const SubharmonicPotential& u,
                                                 Transform t, double r,
                                                 const QuadratureSpec& quad = {}) {
  return circle_mean_nonlinear(as_delta(u), t, r, quad);
}

/// mu^rad(r) = mu(closed disc of radius r).
inline double radial_count(const AtomicMeasure& mu, double r) {
  if (!(r >= 0.0)) throw ArgumentError("radius must be nonnegative");
  double s = 0.0;
  for (const Atom& a : mu.atoms())
    if (std::abs(a.center) <= r) s += a.mass;
  return s;
}

/// N_mu(r, R) = int_r^R mu^rad(t) / t dt
///            = sum over |a_j| <= R of m_j ln(R / max(r, |a_j|)).
/// +inf when an atom sits at 0 and r = 0 < R.
inline double counting_integral(const AtomicMeasure& mu, double r, double R) {
  if (!(r >= 0.0) || !(R >= r))
    throw ArgumentError("counting integral needs 0 <= r <= R");
  if (r == R) return 0.0;
  double s = 0.0;
  for (const Atom& a : mu.atoms()) {
    const double m = std::abs(a.center);
    if (m > R) continue;
    const double lower = std::max(r, m);
    if (lower == 0.0) return kInf;
    s += a.mass * std::log(R / lower);
  }
  return s;
}

/// C_v(r, R) = C_v(R) - C_v(r), closed form.
inline CharacteristicValue circle_mean_diff(const SubharmonicPotential& v,
                                            double r, double R) {
  if (!(r > 0.0) || !(R >= r))
    throw ArgumentError("circle mean difference needs 0 < r <= R");
  if (r == R) return {0.0, 0.0, Method::closed_form};
  return {circle_mean(v, R).value - circle_mean(v, r).value, 0.0,
          Method::closed_form};
}

inline CharacteristicValue circle_mean_diff(const DeltaSubharmonicFn& U,
                                            double r, double R) {
  if (!(r > 0.0) || !(R >= r))
    throw ArgumentError("circle mean difference needs 0 < r <= R");
  if (r == R) return {0.0, 0.0, Method::closed_form};
  return {circle_mean(U, R).value - circle_mean(U, r).value, 0.0,
          Method::closed_form};
}

/// C_{w(U)}(r, R) by quadrature on both circles.
inline CharacteristicValue circle_mean_diff(const DeltaSubharmonicFn& U,
                                            Transform t, double r, double R,
                                            const QuadratureSpec& quad = {}) {
  if (!(r > 0.0) || !(R >= r))
    throw ArgumentError("circle mean difference needs 0 < r <= R");
  if (r == R) return {0.0, 0.0, Method::closed_form};
  const CharacteristicValue hi = circle_mean_nonlinear(U, t, R, quad);
  const CharacteristicValue lo = circle_mean_nonlinear(U, t, r, quad);
  return {hi.value - lo.value, hi.error_estimate + lo.error_estimate,
          Method::quadrature};
}

/// T_U(r, R) = C_{U+}(r, R) + N_{Delta_U^-}(r, R) for the canonical
/// representation of U; 0 when r = R.
inline CharacteristicValue characteristic_T(const DeltaSubharmonicFn& U,
                                            double r, double R,
                                            const QuadratureSpec& quad = {}) {
  if (!(r > 0.0) || !(R >= r))
    throw ArgumentError("characteristic T needs 0 < r <= R");
  if (r == R) return {0.0, 0.0, Method::closed_form};
  const DeltaSubharmonicFn V = canonicalize(U);
  const CharacteristicValue hi =
      circle_mean_nonlinear(V, Transform::positive_part, R, quad);
  const CharacteristicValue lo =
      circle_mean_nonlinear(V, Transform::positive_part, r, quad);
  const double n = counting_integral(V.minus.charge, r, R);
  const double value = hi.value - lo.value + n;
  const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() *
                          (std::abs(hi.value) + std::abs(lo.value) + std::abs(n));
  return {value, hi.error_estimate + lo.error_estimate + roundoff,
          Method::quadrature};
}

struct NevanlinnaValues {
  double M = 0.0;  // max |f| on |z| = r
  double m = 0.0;  // mean of ln+|f|
  double N = 0.0;  // integrated pole counting function
  double T = 0.0;  // m + N
  double error_estimate = 0.0;
};

/// Classical Nevanlinna quantities of a rational function at radius r, with
/// N(r, f) = sum over 0 < |b| <= r of n_b ln(r / |b|) + n(0, f) ln r, the
/// last term kept even when negative.
inline NevanlinnaValues nevanlinna(const RationalFunctionSpec& f, double r,
                                   const QuadratureSpec& quad = {}) {
  if (!(r > 0.0)) throw ArgumentError("Nevanlinna quantities need r > 0");
  const DeltaSubharmonicFn U = ln_abs(f);
  NevanlinnaValues out;
  out.M = std::exp(max_on_circle(U, r).value);
  const CharacteristicValue m =
      circle_mean_nonlinear(U, Transform::positive_part, r, quad);
  out.m = m.value;
  double n0 = 0.0;
  for (const Atom& b : f.poles.atoms()) {
    const double mod = std::abs(b.center);
    if (mod == 0.0)
      n0 += b.mass;
    else if (mod <= r)
      out.N += b.mass * std::log(r / mod);
  }
  out.N += n0 * std::log(r);
  out.T = out.m + out.N;
  out.error_estimate =
      m.error_estimate + 8.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(out.m) + std::abs(out.N));
  return out;
}

}  // namespace subharm

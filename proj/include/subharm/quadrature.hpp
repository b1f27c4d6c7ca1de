#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature on a finite interval
// with user-supplied break points. Panels touching a hint are graded
// geometrically once before adaptive bisection starts, which is what makes
// integrable logarithmic endpoint singularities cheap.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "subharm/errors.hpp"

namespace subharm {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_panels = std::size_t{1} << 16;
  /// Abscissae where the integrand has an integrable singularity or a kink.
  std::vector<double> singularity_hints;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error += o.error;
    panels += o.panels;
    return *this;
  }
};

namespace detail {

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_21(const F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = wk[0] * fc;
  double gauss = 0.0;
  double resabs = wk[0] * std::abs(fc);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double f1 = f(c - h * x[i]);
    const double f2 = f(c + h * x[i]);
    kronrod += wk[i] * (f1 + f2);
    resabs += wk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += wg[(i - 1) / 2] * (f1 + f2);
  }
  kronrod *= h;
  gauss *= h;
  resabs *= std::abs(h);
  const double roundoff =
      50.0 * std::numeric_limits<double>::epsilon() * resabs;
  return {a, b, kronrod, std::max(std::abs(kronrod - gauss), roundoff)};
}

inline bool contains(std::span<const double> hints, double x) {
  return std::find(hints.begin(), hints.end(), x) != hints.end();
}

}  // namespace detail

/// Integral of f over [a, b]. Throws QuadratureFailure when the estimated
/// error does not reach max(abs_tol, rel_tol |value|) within max_panels, or
/// when the integrand produces a non-finite value.
template <class F>
QuadratureResult integrate(const F& f, double a, double b,
                           const QuadratureSpec& spec,
                           std::span<const double> extra_hints = {}) {
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, spec, extra_hints);
    r.value = -r.value;
    return r;
  }

  std::vector<double> hints;
  for (double h : spec.singularity_hints)
    if (h >= a && h <= b) hints.push_back(h);
  for (double h : extra_hints)
    if (h >= a && h <= b) hints.push_back(h);
  std::sort(hints.begin(), hints.end());
  hints.erase(std::unique(hints.begin(), hints.end()), hints.end());

  std::vector<double> cuts{a};
  for (double h : hints)
    if (h > a && h < b) cuts.push_back(h);
  cuts.push_back(b);

  // One graded layer toward each hinted end of every initial panel.
  constexpr std::array<double, 3> kGrading{1.0 / 512, 1.0 / 64, 1.0 / 8};
  std::vector<double> graded;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double len = hi - lo;
    const bool left = detail::contains(hints, lo);
    const bool right = detail::contains(hints, hi);
    graded.push_back(lo);
    if (left)
      for (double s : kGrading) graded.push_back(lo + s * len * (right ? 0.5 : 1.0));
    if (right)
      for (auto it = kGrading.rbegin(); it != kGrading.rend(); ++it)
        graded.push_back(hi - *it * len * (left ? 0.5 : 1.0));
  }
  graded.push_back(b);
  graded.erase(std::unique(graded.begin(), graded.end()), graded.end());

  std::priority_queue<detail::Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  double frozen_err = 0.0;  // panels that can no longer be split
  std::size_t panels = 0;
  auto push = [&](const detail::Panel& p) {
    if (!std::isfinite(p.value) || !std::isfinite(p.error))
      throw QuadratureFailure("integrand is not finite on [" +
                                  std::to_string(p.a) + ", " +
                                  std::to_string(p.b) + "]",
                              total, std::numeric_limits<double>::infinity());
    total += p.value;
    total_err += p.error;
    ++panels;
    heap.push(p);
  };
  for (std::size_t i = 0; i + 1 < graded.size(); ++i)
    push(detail::gauss_kronrod_21(f, graded[i], graded[i + 1]));

  auto converged = [&] {
    return total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };

  while (!converged()) {
    if (heap.empty()) break;
    if (panels >= spec.max_panels) {
      throw QuadratureFailure("quadrature tolerance not reached within " +
                                  std::to_string(spec.max_panels) + " panels",
                              total, total_err);
    }
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen_err += worst.error;
      continue;
    }
    total -= worst.value;
    total_err -= worst.error;
    --panels;
    push(detail::gauss_kronrod_21(f, worst.a, mid));
    push(detail::gauss_kronrod_21(f, mid, worst.b));
  }

  // Re-sum from the panels to shed drift from the running updates.
  double value = 0.0;
  double error = frozen_err;
  std::size_t count = heap.size();
  std::vector<detail::Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  for (const detail::Panel& p : all) {
    value += p.value;
    error += p.error;
  }
  if (!(error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) &&
      frozen_err > 0.0)
    throw QuadratureFailure("quadrature hit floating-point resolution", value,
                            error);
  return {value, error, count};
}

}  // namespace subharm

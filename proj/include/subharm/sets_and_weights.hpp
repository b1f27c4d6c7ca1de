#pragma once

// Measurable sets on the line modelled as finite unions of closed intervals,
// and nonnegative piecewise-polynomial weights g with their L^p norms.
// Boundary points carry no measure, so half-open and closed intervals are
// not distinguished.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "subharm/errors.hpp"
#include "subharm/extended_real.hpp"
#include "subharm/quadrature.hpp"
#include "subharm/rng.hpp"

namespace subharm {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

class IntervalSet {
 public:
  IntervalSet() = default;

  /// Sorts and merges touching or overlapping intervals.
  explicit IntervalSet(std::vector<Interval> parts) {
    for (const Interval& i : parts)
      if (!(i.lo <= i.hi) || !std::isfinite(i.lo) || !std::isfinite(i.hi))
        throw ArgumentError("interval needs finite ends with lo <= hi");
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const Interval& i : parts) {
      if (!parts_.empty() && i.lo <= parts_.back().hi)
        parts_.back().hi = std::max(parts_.back().hi, i.hi);
      else
        parts_.push_back(i);
    }
  }

  std::span<const Interval> intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  /// Lebesgue measure.
  double measure() const {
    double s = 0.0;
    for (const Interval& i : parts_) s += i.length();
    return s;
  }

  bool contained_in(double lo, double hi) const {
    return parts_.empty() || (parts_.front().lo >= lo && parts_.back().hi <= hi);
  }

  IntervalSet intersect(double lo, double hi) const {
    std::vector<Interval> out;
    for (const Interval& i : parts_) {
      const double a = std::max(i.lo, lo);
      const double b = std::min(i.hi, hi);
      if (a <= b) out.push_back({a, b});
    }
    return IntervalSet(std::move(out));
  }

  IntervalSet scaled(double s) const {
    std::vector<Interval> out(parts_.begin(), parts_.end());
    for (Interval& i : out) i = {s * i.lo, s * i.hi};
    return IntervalSet(std::move(out));
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> parts_;
};

inline double measure(const IntervalSet& E) { return E.measure(); }

/// E(r) = E intersected with [1, r).
inline IntervalSet truncate(const IntervalSet& E, double r) {
  if (!(r >= 1.0)) throw ArgumentError("truncation radius must be >= 1");
  return E.intersect(1.0, r);
}

/// Polynomial sum_j c_j t^j.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::span<const double> coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  double operator()(double t) const {
    double s = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * t + *it;
    return s;
  }

  Polynomial derivative() const {
    std::vector<double> d;
    for (std::size_t j = 1; j < c_.size(); ++j)
      d.push_back(static_cast<double>(j) * c_[j]);
    return Polynomial(std::move(d));
  }

  /// Real roots in [a, b], isolated through the roots of the derivative:
  /// between consecutive critical points the polynomial is monotone, so each
  /// such segment holds at most one root, located by bisection.
  std::vector<double> roots_in(double a, double b) const {
    std::vector<double> out;
    if (degree() < 1) return out;
    std::vector<double> knots{a};
    for (double x : derivative().roots_in(a, b))
      if (x > a && x < b) knots.push_back(x);
    knots.push_back(b);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      double lo = knots[i], hi = knots[i + 1];
      double flo = (*this)(lo), fhi = (*this)(hi);
      if (flo == 0.0) {
        if (out.empty() || out.back() != lo) out.push_back(lo);
        continue;
      }
      if (fhi == 0.0 || (flo < 0.0) == (fhi < 0.0)) continue;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double fm = (*this)(mid);
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
      }
      out.push_back(0.5 * (lo + hi));
    }
    if ((*this)(b) == 0.0 && (out.empty() || out.back() != b)) out.push_back(b);
    return out;
  }

  /// Extremes on [a, b] from the end points and the critical points.
  double max_on(double a, double b) const {
    double m = std::max((*this)(a), (*this)(b));
    for (double x : derivative().roots_in(a, b)) m = std::max(m, (*this)(x));
    return m;
  }
  double min_on(double a, double b) const {
    double m = std::min((*this)(a), (*this)(b));
    for (double x : derivative().roots_in(a, b)) m = std::min(m, (*this)(x));
    return m;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> c_;
};

struct WeightPiece {
  Interval support;
  Polynomial poly;

  friend bool operator==(const WeightPiece&, const WeightPiece&) = default;
};

/// Nonnegative piecewise-polynomial weight g (zero off its pieces) together
/// with the exponent p in (1, inf] of the norm it is measured in.
class Weight {
 public:
  Weight() = default;

  Weight(std::vector<WeightPiece> pieces, double p) : pieces_(std::move(pieces)), p_(p) {
    if (!(p > 1.0)) throw ArgumentError("weight exponent p must lie in (1, inf]");
    std::sort(pieces_.begin(), pieces_.end(), [](const auto& a, const auto& b) {
      return a.support.lo < b.support.lo;
    });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const WeightPiece& w = pieces_[i];
      if (!(w.support.lo <= w.support.hi))
        throw ArgumentError("weight piece needs lo <= hi");
      if (i > 0 && w.support.lo < pieces_[i - 1].support.hi)
        throw ArgumentError("weight pieces overlap");
      if (!certified_nonnegative(w))
        throw DegenerateInstance("weight is negative on part of its support");
    }
  }

  /// g = 1 on [lo, hi].
  static Weight constant(double value, double lo, double hi, double p) {
    return Weight({{{lo, hi}, Polynomial({value})}}, p);
  }

  std::span<const WeightPiece> pieces() const { return pieces_; }
  double p() const { return p_; }

  /// Conjugate exponent: p / (p - 1), and 1 when p = inf.
  double q() const { return std::isinf(p_) ? 1.0 : p_ / (p_ - 1.0); }

  double operator()(double t) const {
    for (const WeightPiece& w : pieces_)
      if (t >= w.support.lo && t <= w.support.hi) return w.poly(t);
    return 0.0;
  }

  Weight with_exponent(double p) const { return Weight(pieces_, p); }

  /// g_s(t) = g(t / s).
  Weight scaled(double s) const {
    std::vector<WeightPiece> out;
    for (const WeightPiece& w : pieces_) {
      std::vector<double> c(w.poly.coeffs().begin(), w.poly.coeffs().end());
      double f = 1.0;
      for (double& x : c) { x *= f; f /= s; }
      out.push_back({{s * w.support.lo, s * w.support.hi}, Polynomial(std::move(c))});
    }
    return Weight(std::move(out), p_);
  }

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  static bool certified_nonnegative(const WeightPiece& w) {
    const auto c = w.poly.coeffs();
    const bool all_nonneg =
        std::all_of(c.begin(), c.end(), [](double x) { return x >= 0.0; });
    if (all_nonneg && w.support.lo >= 0.0) return true;
    double scale = 0.0;
    for (double x : c) scale += std::abs(x);
    const double floor = -1e-13 * std::max(1.0, scale);
    // Sample first, then certify at the critical points.
    for (int i = 0; i <= 64; ++i) {
      const double t = w.support.lo + (w.support.hi - w.support.lo) * i / 64.0;
      if (w.poly(t) < floor) return false;
    }
    return w.poly.min_on(w.support.lo, w.support.hi) >= floor;
  }

  std::vector<WeightPiece> pieces_;
  double p_ = kInf;
};

namespace detail {
/// Calls fn(lo, hi, piece) for every positive-length overlap of E with a
/// piece of g.
template <class Fn>
void for_each_overlap(const Weight& g, const IntervalSet& E, Fn&& fn) {
  for (const Interval& e : E.intervals())
    for (const WeightPiece& w : g.pieces()) {
      const double lo = std::max(e.lo, w.support.lo);
      const double hi = std::min(e.hi, w.support.hi);
      if (lo < hi) fn(lo, hi, w);
    }
}
}  // namespace detail

/// ||g||_{L^p(E)}; the essential supremum when p = inf.
inline double lp_norm(const Weight& g, const IntervalSet& E,
                      const QuadratureSpec& quad = {1e-10, 1e-14}) {
  if (std::isinf(g.p())) {
    double m = 0.0;
    detail::for_each_overlap(g, E, [&](double lo, double hi, const WeightPiece& w) {
      m = std::max(m, w.poly.max_on(lo, hi));
    });
    return m;
  }
  const double p = g.p();
  double s = 0.0;
  detail::for_each_overlap(g, E, [&](double lo, double hi, const WeightPiece& w) {
    const auto zeros = w.poly.roots_in(lo, hi);
    s += integrate([&](double t) { return std::pow(std::abs(w.poly(t)), p); },
                   lo, hi, quad, zeros)
             .value;
  });
  return std::pow(s, 1.0 / p);
}

/// int_E h g d(lambda), split at the ends of E, the ends of the pieces of g
/// and the given hints.
template <class H>
QuadratureResult integrate_weighted(const H& h, const Weight& g,
                                    const IntervalSet& E,
                                    const QuadratureSpec& quad = {},
                                    std::span<const double> hints = {}) {
  QuadratureResult total;
  detail::for_each_overlap(g, E, [&](double lo, double hi, const WeightPiece& w) {
    total += integrate([&](double t) { return h(t) * w.poly(t); }, lo, hi, quad,
                       hints);
  });
  return total;
}

struct MajorantPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_error = 0.0;
  double rhs_error = 0.0;
};

/// For f even on (-a, a) and decreasing on (0, a):
///   lhs = int_E f,  rhs = 2 int_0^{lambda(E)/2} f,
/// so that lhs <= rhs. The shape of f is checked on a sample grid and an
/// instance that fails the check is rejected.
inline MajorantPair rearranged_majorant(const std::function<double(double)>& f,
                                        const IntervalSet& E, double a,
                                        const QuadratureSpec& quad = {}) {
  if (!(a > 0.0)) throw ArgumentError("half-width a must be positive");
  if (!E.contained_in(-a, a)) throw ArgumentError("E must lie in (-a, a)");
  constexpr int kSamples = 256;
  double prev = kInf;
  for (int i = 1; i < kSamples; ++i) {
    const double t = a * i / kSamples;
    const double ft = f(t);
    const double fm = f(-t);
    if (std::abs(ft - fm) > 1e-12 * (1.0 + std::abs(ft)))
      throw DegenerateInstance("kernel is not even");
    if (ft > prev * (1.0 + 1e-14) + 1e-300)
      throw DegenerateInstance("kernel is not decreasing on (0, a)");
    prev = ft;
  }
  MajorantPair out;
  const double zero[] = {0.0};
  for (const Interval& i : E.intervals()) {
    const QuadratureResult q = integrate(f, i.lo, i.hi, quad, zero);
    out.lhs += q.value;
    out.lhs_error += q.error;
  }
  const double half = 0.5 * E.measure();
  const QuadratureResult q = integrate(f, 0.0, half, quad, zero);
  out.rhs = 2.0 * q.value;
  out.rhs_error = 2.0 * q.error;
  return out;
}

/// Deterministic random E in [0, r] with measure(E) = target_measure and at
/// most max_pieces intervals.
inline IntervalSet random_interval_set(CounterRng& rng, double r,
                                       double target_measure, int max_pieces) {
  if (!(r > 0.0)) throw ArgumentError("segment length must be positive");
  if (!(target_measure >= 0.0) || target_measure > r)
    throw ArgumentError("target measure must lie in [0, r]");
  if (max_pieces < 1) throw ArgumentError("need at least one piece");
  if (target_measure == 0.0) return {};
  if (target_measure == r) return IntervalSet({{0.0, r}});

  const int n = static_cast<int>(rng.uniform_int(1, max_pieces));
  // n lengths summing to the target, n + 1 gaps summing to r - target with
  // the interior gaps strictly positive.
  std::vector<double> len(n), gap(n + 1);
  double ls = 0.0, gs = 0.0;
  for (double& x : len) ls += (x = 0.05 + rng.uniform());
  for (int i = 0; i <= n; ++i) {
    const bool end = (i == 0 || i == n);
    gs += (gap[i] = (end ? rng.uniform() : 0.05 + rng.uniform()));
  }
  const double free = r - target_measure;
  std::vector<Interval> parts;
  double pos = gap[0] * free / gs;
  double used = 0.0;
  for (int i = 0; i < n; ++i) {
    const double l = (i + 1 == n) ? target_measure - used
                                  : len[i] * target_measure / ls;
    used += l;
    parts.push_back({pos, pos + l});
    pos += l + gap[i + 1] * free / gs;
  }
  // Pin the last piece inside [0, r] against rounding.
  if (parts.back().hi > r) {
    const double shift = parts.back().hi - r;
    parts.back() = {parts.back().lo - shift, r};
  }
  return IntervalSet(std::move(parts));
}

inline IntervalSet random_interval_set(std::uint64_t seed, double r,
                                       double target_measure, int max_pieces) {
  CounterRng rng(seed, "interval_set");
  return random_interval_set(rng, r, target_measure, max_pieces);
}

}  // namespace subharm

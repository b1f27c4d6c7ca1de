#pragma once

// Reference computations that share no numerical code with the library:
// brute-force grids on circles, Boost's tanh-sinh rule for singular
// integrals, direct products for |f|, the incomplete gamma function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

using C = std::complex<double>;

struct Charge {
  std::vector<C> centers;
  std::vector<double> masses;  // signed
  double constant = 0.0;

  double operator()(C z) const {
    double s = constant;
    for (std::size_t i = 0; i < centers.size(); ++i)
      s += masses[i] * std::log(std::abs(z - centers[i]));
    return s;
  }
};

/// (1/N) sum of w(U(r e^{i s_j})) over N equispaced angles, offset by half a
/// step so that no node lands on an atom at angle 0.
inline double trapezoid_circle_mean(const Charge& U, double r,
                                    const std::function<double(double)>& w,
                                    int n = 1'000'000) {
  long double s = 0.0L;
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * (j + 0.5) / n;
    s += w(U(std::polar(r, t)));
  }
  return static_cast<double>(s / n);
}

/// Maximum over a dense grid; accurate to O(step^2) for smooth U.
inline double grid_circle_max(const Charge& U, double r,
                              const std::function<double(double)>& w,
                              int n = 1'000'000) {
  double m = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * j / n;
    m = std::max(m, w(U(std::polar(r, t))));
  }
  return m;
}

/// Tanh-sinh on each piece between consecutive break points; handles
/// integrable endpoint singularities.
inline double integrate(const std::function<double(double)>& f, std::vector<double> breaks) {
  std::sort(breaks.begin(), breaks.end());
  boost::math::quadrature::tanh_sinh<double> ts;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i + 1] > breaks[i]) s += ts.integrate(f, breaks[i], breaks[i + 1]);
  return s;
}

/// int_0^a ln^q(A/x) dx = A Gamma(q + 1, ln(A/a)).
inline double log_power_integral(double q, double A, double a) {
  return A * boost::math::tgamma(q + 1.0, std::log(A / a));
}

/// |f(z)| for f = scale prod (z - a_j)^{m_j} / prod (z - b_j)^{n_j}.
inline double abs_rational(const std::vector<C>& zeros, const std::vector<int>& zmult,
                           const std::vector<C>& poles, const std::vector<int>& pmult,
                           double scale, C z) {
  double v = scale;
  for (std::size_t i = 0; i < zeros.size(); ++i) v *= std::pow(std::abs(z - zeros[i]), zmult[i]);
  for (std::size_t i = 0; i < poles.size(); ++i) v /= std::pow(std::abs(z - poles[i]), pmult[i]);
  return v;
}

inline double pos(double x) { return x > 0.0 ? x : 0.0; }
inline double neg(double x) { return x < 0.0 ? -x : 0.0; }

}  // namespace oracle

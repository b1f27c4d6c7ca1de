#pragma once

#include <cmath>
#include <utility>

namespace subharm {

struct Extremum {
  double argument;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi],
/// stopping once the bracket is narrower than `width`.
template <class F>
Extremum golden_section_maximize(const F& f, double lo, double hi,
                                 double width) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > width) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
    if (!(x1 > lo && x2 < hi && x1 <= x2)) break;
  }
  return f1 >= f2 ? Extremum{x1, f1} : Extremum{x2, f2};
}

}  // namespace subharm

#pragma once

// Subharmonic and delta-subharmonic test functions on the plane, modelled as
// a constant plus the logarithmic potential of a finite atomic measure:
//
//   u(z) = c + sum_j m_j ln|z - a_j|,   m_j > 0.
//
// The Riesz measure (1/2pi) Laplacian(u) of such a u is exactly the atomic
// measure sum_j m_j delta_{a_j}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subharm/errors.hpp"
#include "subharm/extended_real.hpp"

namespace subharm {

using Complex = std::complex<double>;

struct Atom {
  Complex center;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

namespace detail {
inline bool center_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}
}  // namespace detail

/// Finite positive point-mass measure. Atoms are kept sorted by center and
/// atoms with identical centers are merged by adding their masses.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;

  explicit AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (const Atom& a : atoms_) {
      if (!(a.mass > 0.0) || !std::isfinite(a.mass))
        throw ArgumentError("atom mass must be finite and strictly positive");
      if (!std::isfinite(a.center.real()) || !std::isfinite(a.center.imag()))
        throw ArgumentError("atom center must be finite");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) {
      return detail::center_less(x.center, y.center);
    });
    std::vector<Atom> merged;
    merged.reserve(atoms_.size());
    for (const Atom& a : atoms_) {
      if (!merged.empty() && merged.back().center == a.center)
        merged.back().mass += a.mass;
      else
        merged.push_back(a);
    }
    atoms_ = std::move(merged);
  }

  std::span<const Atom> atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  double total_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.mass;
    return s;
  }

  /// Mass sitting exactly at `c` (0 if there is no atom there).
  double mass_at(const Complex& c) const {
    for (const Atom& a : atoms_)
      if (a.center == c) return a.mass;
    return 0.0;
  }

  bool has_atom_at(const Complex& c) const { return mass_at(c) > 0.0; }

  /// Image under z -> s z.
  AtomicMeasure scaled(double s) const {
    std::vector<Atom> out(atoms_.begin(), atoms_.end());
    for (Atom& a : out) a.center *= s;
    return AtomicMeasure(std::move(out));
  }

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
};

/// c + sum_j m_j ln|z - a_j|; the value is -inf exactly at the atoms.
struct SubharmonicPotential {
  AtomicMeasure charge;
  double constant = 0.0;

  double operator()(const Complex& z) const {
    double s = constant;
    for (const Atom& a : charge.atoms()) {
      const double dx = z.real() - a.center.real();
      const double dy = z.imag() - a.center.imag();
      s += 0.5 * a.mass * std::log(dx * dx + dy * dy);
    }
    return s;
  }

  friend bool operator==(const SubharmonicPotential&,
                         const SubharmonicPotential&) = default;
};

/// U = plus - minus with plus, minus subharmonic potentials.
struct DeltaSubharmonicFn {
  SubharmonicPotential plus;
  SubharmonicPotential minus;

  friend bool operator==(const DeltaSubharmonicFn&,
                         const DeltaSubharmonicFn&) = default;
};

/// Lifts u to the pair (u, 0).
inline DeltaSubharmonicFn as_delta(const SubharmonicPotential& u) {
  return DeltaSubharmonicFn{u, {}};
}

/// Value of U at z: -inf at atoms of plus, +inf at atoms of minus. A point
/// that is an atom of both components is +inf - inf and is rejected.
inline double evaluate(const DeltaSubharmonicFn& U, const Complex& z) {
  const double u = U.plus(z);
  const double v = U.minus(z);
  if (u == -kInf && v == -kInf)
    throw DegenerateInstance(
        "point is an atom of both components; canonicalize first");
  return u - v;
}

/// True when the two charges have no common atom center.
inline bool is_canonical(const DeltaSubharmonicFn& U) {
  for (const Atom& a : U.plus.charge.atoms())
    if (U.minus.charge.has_atom_at(a.center)) return false;
  return true;
}

/// Jordan decomposition of the atomic Riesz charge: masses at common centers
/// cancel, so the result carries the upper variation in `plus` and the lower
/// variation in `minus`. An atomless component ends up with constant 0 and
/// its constant is moved to the other component; the value of U is unchanged
/// at every non-atom point.
inline DeltaSubharmonicFn canonicalize(const DeltaSubharmonicFn& U) {
  std::vector<Atom> plus;
  std::vector<Atom> minus;
  for (const Atom& a : U.plus.charge.atoms()) {
    const double d = a.mass - U.minus.charge.mass_at(a.center);
    if (d > 0.0) plus.push_back({a.center, d});
  }
  for (const Atom& b : U.minus.charge.atoms()) {
    const double d = b.mass - U.plus.charge.mass_at(b.center);
    if (d > 0.0) minus.push_back({b.center, d});
  }
  DeltaSubharmonicFn out{{AtomicMeasure(std::move(plus)), U.plus.constant},
                         {AtomicMeasure(std::move(minus)), U.minus.constant}};
  if (out.minus.charge.empty()) {
    out.plus.constant -= out.minus.constant;
    out.minus.constant = 0.0;
  } else if (out.plus.charge.empty()) {
    out.minus.constant -= out.plus.constant;
    out.plus.constant = 0.0;
  }
  return out;
}

/// U_s(z) = U(z / s): atoms move to s a_j and the constants absorb the
/// resulting -m_j ln s terms.
inline SubharmonicPotential scaled(const SubharmonicPotential& u, double s) {
  if (!(s > 0.0)) throw ArgumentError("scale factor must be positive");
  return {u.charge.scaled(s), u.constant - u.charge.total_mass() * std::log(s)};
}

inline DeltaSubharmonicFn scaled(const DeltaSubharmonicFn& U, double s) {
  return {scaled(U.plus, s), scaled(U.minus, s)};
}

/// Rational function |f| = scale * prod|z - a|^m / prod|z - b|^n with
/// integer multiplicities.
struct RationalFunctionSpec {
  AtomicMeasure zeros;
  AtomicMeasure poles;
  double scale = 1.0;

  friend bool operator==(const RationalFunctionSpec&,
                         const RationalFunctionSpec&) = default;
};

inline void validate(const RationalFunctionSpec& f) {
  if (!(f.scale > 0.0) || !std::isfinite(f.scale))
    throw ArgumentError("rational function scale must be positive");
  for (const auto* m : {&f.zeros, &f.poles})
    for (const Atom& a : m->atoms())
      if (a.mass != std::round(a.mass))
        throw ArgumentError("zero/pole multiplicities must be integers");
}

/// ln|f| as the pair (ln scale + potential of zeros, potential of poles).
inline DeltaSubharmonicFn ln_abs(const RationalFunctionSpec& f) {
  validate(f);
  for (const Atom& a : f.zeros.atoms())
    if (f.poles.has_atom_at(a.center))
      throw ArgumentError("zero and pole share a center; cancel them first");
  return {{f.zeros, std::log(f.scale)}, {f.poles, 0.0}};
}

}  // namespace subharm

#pragma once

// JSON encoding of instances. Field names:
//   potentials:  plus_atoms / minus_atoms = [{re, im, mass}], plus_const, minus_const
//   rational:    zeros / poles = [{re, im, mass}] (integer masses), scale
//   sets:        [[a, b], ...]
//   weights:     [{interval: [a, b], coeffs: [c0, c1, ...], p}]   (p may be "inf")

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "subharm/errors.hpp"
#include "subharm/function_model.hpp"
#include "subharm/rng.hpp"
#include "subharm/sets_and_weights.hpp"

namespace subharm {

using Json = nlohmann::ordered_json;

inline Json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

inline double exponent_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw ArgumentError("exponent must be a number or \"inf\"");
  }
  return j.get<double>();
}

/// Finite numbers as-is; infinities as the strings "inf" / "-inf".
inline Json real_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

inline Json to_json(const AtomicMeasure& m) {
  Json out = Json::array();
  for (const Atom& a : m.atoms())
    out.push_back({{"re", a.center.real()}, {"im", a.center.imag()}, {"mass", a.mass}});
  return out;
}

inline AtomicMeasure measure_from_json(const Json& j) {
  if (!j.is_array()) throw ArgumentError("atom list must be an array");
  std::vector<Atom> atoms;
  for (const Json& a : j)
    atoms.push_back({{a.at("re").get<double>(), a.value("im", 0.0)},
                     a.at("mass").get<double>()});
  return AtomicMeasure(std::move(atoms));
}

inline Json to_json(const DeltaSubharmonicFn& U) {
  return {{"plus_atoms", to_json(U.plus.charge)},
          {"minus_atoms", to_json(U.minus.charge)},
          {"plus_const", U.plus.constant},
          {"minus_const", U.minus.constant}};
}

inline DeltaSubharmonicFn delta_from_json(const Json& j) {
  DeltaSubharmonicFn U;
  if (j.contains("plus_atoms")) U.plus.charge = measure_from_json(j["plus_atoms"]);
  if (j.contains("minus_atoms")) U.minus.charge = measure_from_json(j["minus_atoms"]);
  U.plus.constant = j.value("plus_const", 0.0);
  U.minus.constant = j.value("minus_const", 0.0);
  return U;
}

inline Json to_json(const RationalFunctionSpec& f) {
  auto atoms = [](const AtomicMeasure& m) {
    Json out = Json::array();
    for (const Atom& a : m.atoms())
      out.push_back({{"re", a.center.real()},
                     {"im", a.center.imag()},
                     {"mass", static_cast<long long>(std::llround(a.mass))}});
    return out;
  };
  return {{"zeros", atoms(f.zeros)}, {"poles", atoms(f.poles)}, {"scale", f.scale}};
}

inline RationalFunctionSpec rational_from_json(const Json& j) {
  RationalFunctionSpec f;
  if (j.contains("zeros")) f.zeros = measure_from_json(j["zeros"]);
  if (j.contains("poles")) f.poles = measure_from_json(j["poles"]);
  f.scale = j.value("scale", 1.0);
  validate(f);
  return f;
}

inline Json to_json(const IntervalSet& E) {
  Json out = Json::array();
  for (const Interval& i : E.intervals()) out.push_back({i.lo, i.hi});
  return out;
}

inline IntervalSet set_from_json(const Json& j) {
  if (!j.is_array()) throw ArgumentError("interval set must be an array");
  std::vector<Interval> parts;
  for (const Json& i : j) {
    if (!i.is_array() || i.size() != 2)
      throw ArgumentError("interval must be a pair [a, b]");
    parts.push_back({i[0].get<double>(), i[1].get<double>()});
  }
  return IntervalSet(std::move(parts));
}

inline Json to_json(const Weight& g) {
  Json out = Json::array();
  for (const WeightPiece& w : g.pieces()) {
    Json c = Json::array();
    for (double x : w.poly.coeffs()) c.push_back(x);
    out.push_back({{"interval", {w.support.lo, w.support.hi}},
                   {"coeffs", c},
                   {"p", exponent_to_json(g.p())}});
  }
  return out;
}

inline Weight weight_from_json(const Json& j) {
  if (!j.is_array()) throw ArgumentError("weight must be an array of pieces");
  std::vector<WeightPiece> pieces;
  double p = kInf;
  bool have_p = false;
  for (const Json& w : j) {
    const Json& iv = w.at("interval");
    const double piece_p = exponent_from_json(w.at("p"));
    if (have_p && piece_p != p)
      throw ArgumentError("all weight pieces must carry the same p");
    p = piece_p;
    have_p = true;
    pieces.push_back({{iv.at(0).get<double>(), iv.at(1).get<double>()},
                      Polynomial(w.at("coeffs").get<std::vector<double>>())});
  }
  return Weight(std::move(pieces), p);
}

/// Hex FNV-1a digest of the compact serialization.
inline std::string fingerprint(const Json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

}  // namespace subharm

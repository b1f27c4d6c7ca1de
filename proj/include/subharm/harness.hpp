#pragma once

// Seeded instance generation, the suite runner with its CSV report, and the
// scripted f = 1/z reproduction.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "subharm/characteristics.hpp"
#include "subharm/errors.hpp"
#include "subharm/function_model.hpp"
#include "subharm/inequalities.hpp"
#include "subharm/rng.hpp"
#include "subharm/serialization.hpp"
#include "subharm/sets_and_weights.hpp"

namespace subharm {

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::size_t instances = 10;  // per checker
  std::vector<std::string> checkers;
  std::vector<double> k_values{1.5, 2.0, 4.0};
  std::vector<double> p_values{2.0, 4.0, kInf};
  std::vector<double> b_values{0.25, 0.5, 1.0};
  std::array<long, 2> atom_count_range{1, 8};
  std::array<double, 2> radius_range{0.1, 5.0};  // atom moduli
  std::array<double, 2> mass_range{0.1, 2.0};
  std::array<double, 2> r_range{0.5, 3.0};
  long max_pieces = 10;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_panels = std::size_t{1} << 16;
  unsigned threads = 1;  // 0 = hardware concurrency
  std::string out;

  QuadratureSpec quadrature() const {
    return {.rel_tol = rel_tol, .abs_tol = abs_tol, .max_panels = max_panels};
  }
};

inline const std::vector<std::string>& checker_names() {
  static const std::vector<std::string> names{
      "lemma2_check",     "lemma3_check",   "lemma4_check",   "lemma_a_check",
      "lemma1_check",     "main_lemma_check", "main_theorem_T", "main_theorem_M",
      "nevanlinna_ratio", "small_intervals_ratio"};
  return names;
}

inline bool is_known_checker(const std::string& name) {
  const auto& n = checker_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

inline bool is_probe_checker(const std::string& name) {
  return name == "nevanlinna_ratio" || name == "small_intervals_ratio";
}

inline Json to_json(const SuiteConfig& c) {
  Json p = Json::array();
  for (double x : c.p_values) p.push_back(exponent_to_json(x));
  return {{"seed", c.seed},
          {"instances", c.instances},
          {"checkers", c.checkers},
          {"k_values", c.k_values},
          {"p_values", p},
          {"b_values", c.b_values},
          {"atom_count_range", c.atom_count_range},
          {"radius_range", c.radius_range},
          {"mass_range", c.mass_range},
          {"r_range", c.r_range},
          {"max_pieces", c.max_pieces},
          {"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"max_panels", c.max_panels},
          {"threads", c.threads},
          {"out", c.out}};
}

/// Reads the fields present in j over the defaults. Unknown keys and
/// inconsistent values are rejected.
inline SuiteConfig suite_config_from_json(const Json& j, SuiteConfig c = {}) {
  if (!j.is_object()) throw ArgumentError("suite config must be an object");
  const Json known = to_json(c);
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ArgumentError("unknown config key: " + key);
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("instances")) c.instances = j["instances"].get<std::size_t>();
    if (j.contains("checkers")) c.checkers = j["checkers"].get<std::vector<std::string>>();
    if (j.contains("k_values")) c.k_values = j["k_values"].get<std::vector<double>>();
    if (j.contains("p_values")) {
      c.p_values.clear();
      for (const Json& p : j["p_values"]) c.p_values.push_back(exponent_from_json(p));
    }
    if (j.contains("b_values")) c.b_values = j["b_values"].get<std::vector<double>>();
    if (j.contains("atom_count_range"))
      c.atom_count_range = j["atom_count_range"].get<std::array<long, 2>>();
    if (j.contains("radius_range")) c.radius_range = j["radius_range"].get<std::array<double, 2>>();
    if (j.contains("mass_range")) c.mass_range = j["mass_range"].get<std::array<double, 2>>();
    if (j.contains("r_range")) c.r_range = j["r_range"].get<std::array<double, 2>>();
    if (j.contains("max_pieces")) c.max_pieces = j["max_pieces"].get<long>();
    if (j.contains("rel_tol")) c.rel_tol = j["rel_tol"].get<double>();
    if (j.contains("abs_tol")) c.abs_tol = j["abs_tol"].get<double>();
    if (j.contains("max_panels")) c.max_panels = j["max_panels"].get<std::size_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("bad config value: ") + e.what());
  }
  return c;
}

inline void validate(const SuiteConfig& c) {
  for (const std::string& n : c.checkers)
    if (!is_known_checker(n)) throw ArgumentError("unknown checker: " + n);
  for (double k : c.k_values)
    if (!(k > 1.0)) throw ArgumentError("k values must exceed 1");
  for (double p : c.p_values)
    if (!(p > 1.0)) throw ArgumentError("p values must exceed 1");
  for (double b : c.b_values)
    if (!(b > 0.0) || b > 1.0) throw ArgumentError("b values must lie in (0, 1]");
  if (c.atom_count_range[0] < 1 || c.atom_count_range[1] < c.atom_count_range[0])
    throw ArgumentError("atom count range must satisfy 1 <= lo <= hi");
  auto positive_range = [](const std::array<double, 2>& r, const char* what) {
    if (!(r[0] > 0.0) || !(r[1] >= r[0]) || !std::isfinite(r[1]))
      throw ArgumentError(std::string(what) + " must satisfy 0 < lo <= hi");
  };
  positive_range(c.radius_range, "radius range");
  positive_range(c.mass_range, "mass range");
  positive_range(c.r_range, "r range");
  if (c.max_pieces < 1) throw ArgumentError("max_pieces must be >= 1");
  if (!(c.rel_tol > 0.0) || !(c.abs_tol >= 0.0) || c.max_panels < 1)
    throw ArgumentError("bad quadrature tolerances");
}

namespace detail {

inline constexpr double kProbeClearance = 1e-3;
inline constexpr int kMaxAttempts = 1000;

inline Atom random_atom(CounterRng& rng, double lo, double hi,
                        const std::array<double, 2>& mass) {
  const double rho = rng.uniform(lo, hi);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {std::polar(rho, phi), rng.uniform(mass[0], mass[1])};
}

inline long atom_count(CounterRng& rng, const SuiteConfig& c) {
  return rng.uniform_int(c.atom_count_range[0], c.atom_count_range[1]);
}

inline SubharmonicPotential random_potential(CounterRng& rng, const SuiteConfig& c) {
  std::vector<Atom> atoms;
  const long n = atom_count(rng, c);
  for (long i = 0; i < n; ++i)
    atoms.push_back(random_atom(rng, c.radius_range[0], c.radius_range[1], c.mass_range));
  return {AtomicMeasure(std::move(atoms)), rng.uniform(-1.0, 1.0)};
}

/// Atoms split at random between the two components; the total count is
/// drawn from the configured range.
inline DeltaSubharmonicFn random_delta(CounterRng& rng, const SuiteConfig& c) {
  std::vector<Atom> plus, minus;
  const long n = atom_count(rng, c);
  for (long i = 0; i < n; ++i) {
    const Atom a = random_atom(rng, c.radius_range[0], c.radius_range[1], c.mass_range);
    (rng.bernoulli(0.5) ? plus : minus).push_back(a);
  }
  return {{AtomicMeasure(std::move(plus)), rng.uniform(-1.0, 1.0)},
          {AtomicMeasure(std::move(minus)), rng.uniform(-1.0, 1.0)}};
}

// E + s, clamped to [lo, hi] since (x + s) can round past the shifted end.
inline IntervalSet shifted(const IntervalSet& E, double s, double lo, double hi) {
  std::vector<Interval> parts;
  for (const Interval& i : E.intervals())
    parts.push_back({std::clamp(i.lo + s, lo, hi), std::clamp(i.hi + s, lo, hi)});
  return IntervalSet(std::move(parts));
}

/// A random subset of [lo, hi]; every twentieth draw or so is the whole
/// segment.
inline IntervalSet random_subset(CounterRng& rng, double lo, double hi, long max_pieces) {
  const double len = hi - lo;
  const double target = rng.bernoulli(0.05) ? len : len * rng.uniform(0.01, 1.0);
  return shifted(random_interval_set(rng, len, target, static_cast<int>(max_pieces)), lo, lo,
                 hi);
}

/// Piecewise polynomial weight on [lo, hi] with nonnegative coefficients.
inline Weight random_weight(CounterRng& rng, double lo, double hi) {
  const long n = rng.uniform_int(1, 3);
  std::vector<double> cuts{lo, hi};
  for (long i = 1; i < n; ++i) cuts.push_back(rng.uniform(lo, hi));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<WeightPiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const long degree = rng.uniform_int(0, 2);
    std::vector<double> coeffs;
    for (long d = 0; d <= degree; ++d) coeffs.push_back(rng.uniform(0.0, 1.0));
    coeffs[0] += 0.05;
    pieces.push_back({{cuts[i], cuts[i + 1]}, Polynomial(std::move(coeffs))});
  }
  return Weight(std::move(pieces), kInf);
}

inline bool clear_of(const AtomicMeasure& m, const std::vector<double>& radii) {
  for (const Atom& a : m.atoms())
    for (double rho : radii)
      if (std::abs(std::abs(a.center) - rho) < kProbeClearance) return false;
  return true;
}

inline bool clear_of(const DeltaSubharmonicFn& U, const std::vector<double>& radii) {
  return clear_of(U.plus.charge, radii) && clear_of(U.minus.charge, radii);
}

/// One draw for the named checker, or nullopt when the draw is not
/// admissible.
inline std::optional<Json> draw_instance(CounterRng& rng, const std::string& name,
                                         const SuiteConfig& c) {
  Json inst{{"checker", name}};
  const double r = rng.uniform(c.r_range[0], c.r_range[1]);

  if (name == "lemma2_check") {
    // Closed forms only, so atoms may sit anywhere in the disc.
    const double R = rng.uniform(2.0 * c.radius_range[0], c.radius_range[1]);
    std::vector<Atom> atoms;
    const long n = atom_count(rng, c);
    for (long i = 0; i < n; ++i)
      atoms.push_back(random_atom(rng, c.radius_range[0], R, c.mass_range));
    inst["measure"] = to_json(AtomicMeasure(std::move(atoms)));
    inst["r"] = R * rng.uniform(0.0, 0.98);
    inst["R"] = R;
    return inst;
  }
  if (name == "lemma3_check") {
    const double A = std::exp(rng.uniform(-2.0, 3.0));
    inst["q"] = rng.uniform(0.0, 4.0);
    inst["A"] = A;
    inst["a"] = A / std::numbers::e * rng.uniform(0.001, 1.0);
    return inst;
  }
  if (name == "lemma4_check") {
    const double R = r * rng.uniform(1.0, 3.0);
    inst["E"] = to_json(random_subset(rng, 0.0, r, c.max_pieces));
    inst["x"] = rng.uniform(0.0, R);
    inst["r"] = r;
    inst["R"] = R;
    return inst;
  }
  if (name == "lemma_a_check") {
    using F = EvenKernel::Family;
    constexpr F families[] = {F::log_power, F::tent, F::exponential, F::power, F::constant};
    EvenKernel f;
    f.family = families[rng.uniform_int(0, 4)];
    f.a = rng.uniform(0.5, 3.0);
    switch (f.family) {
      case F::log_power: f.shape = rng.uniform(0.0, 3.0); break;
      case F::tent: f.shape = 1.0; break;
      case F::exponential: f.shape = rng.uniform(0.1, 3.0); break;
      case F::power: f.shape = rng.uniform(0.5, 3.0); break;
      case F::constant: f.shape = rng.uniform(0.1, 2.0); break;
    }
    inst["kernel"] = {{"family", to_string(f.family)}, {"shape", f.shape}, {"a", f.a}};
    inst["E"] = to_json(random_subset(rng, -f.a, f.a, c.max_pieces));
    return inst;
  }
  if (name == "lemma1_check" || name == "main_lemma_check" || name == "main_theorem_T") {
    const DeltaSubharmonicFn U = random_delta(rng, c);
    std::vector<double> radii;
    if (name == "lemma1_check") {
      const double R = r * rng.uniform(1.1, 3.0);
      inst["R"] = R;
      radii.push_back(R);
    } else if (name == "main_lemma_check") {
      for (double b : c.b_values) {
        radii.push_back((1.0 + b) * r);
        radii.push_back((1.0 + b) * (1.0 + b) * r);
      }
    } else {
      const double r0 = r * rng.uniform(0.05, 0.95);
      inst["r0"] = r0;
      radii.push_back(r0);
      for (double k : c.k_values) {
        radii.push_back(std::sqrt(k) * r);
        radii.push_back(k * r);
      }
    }
    if (!clear_of(U, radii)) return std::nullopt;
    inst["fn"] = to_json(U);
    inst["E"] = to_json(random_subset(rng, 0.0, r, c.max_pieces));
    inst["g"] = to_json(random_weight(rng, 0.0, r));
    inst["r"] = r;
    return inst;
  }
  if (name == "main_theorem_M") {
    const SubharmonicPotential u = random_potential(rng, c);
    const double r0 = r * rng.uniform(0.05, 0.95);
    std::vector<double> radii{r0};
    for (double k : c.k_values) {
      radii.push_back(std::sqrt(k) * r);
      radii.push_back(k * r);
    }
    if (!clear_of(u.charge, radii)) return std::nullopt;
    inst["fn"] = to_json(as_delta(u));
    inst["E"] = to_json(random_subset(rng, 0.0, r, c.max_pieces));
    inst["g"] = to_json(random_weight(rng, 0.0, r));
    inst["r"] = r;
    inst["r0"] = r0;
    return inst;
  }
  if (name == "nevanlinna_ratio") {
    RationalFunctionSpec f;
    auto integer_atoms = [&](long n) {
      std::vector<Atom> atoms;
      for (long i = 0; i < n; ++i) {
        Atom a = random_atom(rng, c.radius_range[0], c.radius_range[1], c.mass_range);
        a.mass = static_cast<double>(rng.uniform_int(1, 3));
        atoms.push_back(a);
      }
      return AtomicMeasure(std::move(atoms));
    };
    f.zeros = integer_atoms(rng.uniform_int(0, 4));
    f.poles = integer_atoms(rng.uniform_int(0, 4));
    f.scale = std::exp(rng.uniform(-2.0, 2.0));
    if (f.zeros.empty() && f.poles.empty()) return std::nullopt;
    const double rr = rng.uniform(1.0, 5.0);
    std::vector<double> radii{rr};
    for (double k : c.k_values) radii.push_back(k * rr);
    if (!clear_of(f.zeros, radii) || !clear_of(f.poles, radii)) return std::nullopt;
    inst["rational"] = to_json(f);
    inst["r"] = rr;
    return inst;
  }
  if (name == "small_intervals_ratio") {
    const SubharmonicPotential u = random_potential(rng, c);
    const double R = rng.uniform(1.0, 5.0);
    const double rr = R * rng.uniform(0.1, 0.9);
    const double r0 = rr * rng.uniform(0.0, 1.0);
    std::vector<double> radii{r0};
    for (double b : c.b_values) radii.push_back((1.0 + b) * R);
    if (!clear_of(u.charge, radii)) return std::nullopt;
    inst["fn"] = to_json(as_delta(u));
    inst["E"] = to_json(random_subset(rng, rr, R, c.max_pieces));
    inst["g"] = to_json(random_weight(rng, rr, R));
    inst["r0"] = r0;
    inst["r"] = rr;
    inst["R"] = R;
    return inst;
  }
  throw ArgumentError("unknown checker: " + name);
}

}  // namespace detail

/// Seed of instance `index` of checker `name` in a suite with seed `seed`.
inline std::uint64_t instance_seed(std::uint64_t seed, const std::string& name,
                                   std::size_t index) {
  return derive_seed(seed, name, index);
}

/// Admissible instance for the checker, deterministic in (seed, name) for a
/// fixed config. Parameter grids (p, k, b) are not part of the instance.
inline Json generate_instance(std::uint64_t seed, const std::string& name,
                              const SuiteConfig& config) {
  if (!is_known_checker(name)) throw ArgumentError("unknown checker: " + name);
  for (int attempt = 0; attempt < detail::kMaxAttempts; ++attempt) {
    CounterRng rng(seed, name, static_cast<std::uint64_t>(attempt));
    if (auto inst = detail::draw_instance(rng, name, config)) {
      (*inst)["seed"] = seed;
      return *std::move(inst);
    }
  }
  throw GenerationFailure("no admissible " + name + " instance in " +
                          std::to_string(detail::kMaxAttempts) + " attempts");
}

/// The parameter combinations a checker is run with, as objects to merge
/// into an instance.
inline std::vector<Json> parameter_combinations(const std::string& name,
                                                const SuiteConfig& c) {
  std::vector<Json> out;
  auto for_p = [&](auto&& inner) {
    for (double p : c.p_values) inner(Json{{"p", exponent_to_json(p)}});
  };
  if (name == "lemma4_check" || name == "lemma1_check") {
    for_p([&](Json j) { out.push_back(j); });
  } else if (name == "main_lemma_check") {
    for_p([&](Json j) {
      for (double b : c.b_values) {
        j["b"] = b;
        out.push_back(j);
      }
    });
  } else if (name == "main_theorem_T" || name == "main_theorem_M") {
    for_p([&](Json j) {
      for (double k : c.k_values) {
        j["k"] = k;
        out.push_back(j);
      }
    });
  } else if (name == "nevanlinna_ratio") {
    for (double k : c.k_values) out.push_back({{"k", k}});
  } else if (name == "small_intervals_ratio") {
    for (double b : c.b_values) out.push_back({{"b", b}});
  } else {
    out.push_back(Json::object());
  }
  return out;
}

namespace detail {

inline const Json& field(const Json& inst, const char* key) {
  if (!inst.contains(key)) throw ArgumentError(std::string("instance lacks field '") + key + "'");
  return inst[key];
}

inline double number(const Json& inst, const char* key) {
  const Json& v = field(inst, key);
  if (v.is_string()) return exponent_from_json(v);
  if (!v.is_number()) throw ArgumentError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline Weight weight_of(const Json& inst) {
  const Weight g = weight_from_json(field(inst, "g"));
  return inst.contains("p") ? g.with_exponent(number(inst, "p")) : g;
}

inline SubharmonicPotential potential_of(const Json& inst) {
  const DeltaSubharmonicFn U = delta_from_json(field(inst, "fn"));
  if (!U.minus.charge.empty() || U.minus.constant != 0.0)
    throw ArgumentError("this checker takes a subharmonic potential (no minus part)");
  return U.plus;
}

inline EvenKernel kernel_of(const Json& inst) {
  const Json& k = field(inst, "kernel");
  EvenKernel f;
  f.family = kernel_family_from_string(field(k, "family").get<std::string>());
  f.shape = number(k, "shape");
  f.a = number(k, "a");
  return f;
}

}  // namespace detail

/// The lhs integral of the checker when it does not depend on the
/// parameter grid (it depends on the weight polynomials, not on p), so the
/// suite computes it once per instance.
inline std::optional<QuadratureResult> shared_lhs(const std::string& name,
                                                  const Json& inst,
                                                  const QuadratureSpec& quad) {
  using namespace detail;
  if (name == "lemma1_check" || name == "main_lemma_check" || name == "main_theorem_T")
    return max_positive_integral(delta_from_json(field(inst, "fn")),
                                 set_from_json(field(inst, "E")), weight_of(inst), quad);
  if (name == "main_theorem_M" || name == "small_intervals_ratio")
    return max_abs_integral(potential_of(inst), set_from_json(field(inst, "E")),
                            weight_of(inst), quad);
  if (name == "nevanlinna_ratio") {
    const double r = number(inst, "r");
    return max_positive_integral(ln_abs(rational_from_json(field(inst, "rational"))),
                                 IntervalSet({{0.0, r}}),
                                 Weight::constant(1.0, 0.0, r, kInf), quad);
  }
  return std::nullopt;
}

/// Runs one checker on a fully specified instance (grid parameters merged
/// in). Missing or malformed fields raise ArgumentError.
inline BoundReport run_check(const std::string& name, const Json& inst,
                             const QuadratureSpec& quad = {},
                             std::optional<QuadratureResult> lhs = {}) {
  using namespace detail;
  if (!inst.is_object()) throw ArgumentError("instance must be a JSON object");
  try {
    if (name == "lemma2_check")
      return lemma2_check(measure_from_json(field(inst, "measure")), number(inst, "r"),
                          number(inst, "R"));
    if (name == "lemma3_check")
      return lemma3_check(number(inst, "q"), number(inst, "A"), number(inst, "a"), quad);
    if (name == "lemma4_check") {
      const double q = inst.contains("q") ? number(inst, "q")
                                          : Weight::constant(1, 0, 1, number(inst, "p")).q();
      return lemma4_check(set_from_json(field(inst, "E")), number(inst, "x"),
                          number(inst, "r"), number(inst, "R"), q, quad);
    }
    if (name == "lemma_a_check")
      return lemma_a_check(kernel_of(inst), set_from_json(field(inst, "E")), quad);
    if (name == "lemma1_check")
      return lemma1_check(delta_from_json(field(inst, "fn")), set_from_json(field(inst, "E")),
                          weight_of(inst), number(inst, "r"), number(inst, "R"), quad, lhs);
    if (name == "main_lemma_check")
      return main_lemma_check(delta_from_json(field(inst, "fn")),
                              set_from_json(field(inst, "E")), weight_of(inst),
                              number(inst, "r"), number(inst, "b"), quad, lhs);
    if (name == "main_theorem_T")
      return main_theorem_T(delta_from_json(field(inst, "fn")),
                            set_from_json(field(inst, "E")), weight_of(inst),
                            number(inst, "r"), number(inst, "r0"), number(inst, "k"), quad,
                            lhs);
    if (name == "main_theorem_M")
      return main_theorem_M(potential_of(inst), set_from_json(field(inst, "E")),
                            weight_of(inst), number(inst, "r"), number(inst, "r0"),
                            number(inst, "k"), quad, lhs);
    if (name == "nevanlinna_ratio")
      return nevanlinna_ratio(rational_from_json(field(inst, "rational")), number(inst, "r"),
                              number(inst, "k"), quad, lhs);
    if (name == "small_intervals_ratio")
      return small_intervals_ratio(potential_of(inst), set_from_json(field(inst, "E")),
                                   weight_of(inst).with_exponent(kInf), number(inst, "r0"),
                                   number(inst, "r"), number(inst, "R"), number(inst, "b"),
                                   quad, lhs);
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("malformed instance: ") + e.what());
  }
  throw ArgumentError("unknown checker: " + name);
}

struct SuiteRow {
  BoundReport report;
  std::uint64_t seed = 0;
  std::size_t instance = 0;
  std::string failure;  // non-empty when generation or evaluation failed

  bool failed() const { return !failure.empty(); }
  bool violated() const { return !failed() && !report.probe && !report.holds(); }
};

/// All rows of one (checker, instance) pair, in parameter-grid order.
inline std::vector<SuiteRow> run_instance(const std::string& name, std::size_t index,
                                          const SuiteConfig& c) {
  const std::uint64_t seed = instance_seed(c.seed, name, index);
  const QuadratureSpec quad = c.quadrature();
  const std::vector<Json> combos = parameter_combinations(name, c);
  std::vector<SuiteRow> rows;
  auto fail_all = [&](const std::string& why) {
    for (std::size_t i = 0; i < combos.size(); ++i) {
      SuiteRow row{.seed = seed, .instance = index, .failure = why};
      row.report.name = name;
      rows.push_back(std::move(row));
    }
  };
  Json inst;
  std::optional<QuadratureResult> lhs;
  try {
    inst = generate_instance(seed, name, c);
    Json first = inst;
    first.update(combos.front());
    lhs = shared_lhs(name, first, quad);
  } catch (const std::exception& e) {
    fail_all(e.what());
    return rows;
  }
  for (const Json& combo : combos) {
    SuiteRow row{.seed = seed, .instance = index};
    Json full = inst;
    full.update(combo);
    try {
      row.report = run_check(name, full, quad, lhs);
      row.report.params["instance"] = index;
    } catch (const std::exception& e) {
      row.report = BoundReport{.name = name};
      row.failure = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CheckerSummary {
  std::string name;
  std::size_t rows = 0;
  std::size_t holds = 0;
  std::size_t violations = 0;
  std::size_t failures = 0;
  std::size_t degenerate = 0;
  std::size_t infinite_ratios = 0;
  double max_ratio = -kInf;           // over finite ratios
  double max_a_min = -kInf;           // small_intervals_ratio only
  std::map<double, double> max_ratio_by_k;  // nevanlinna_ratio only
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  std::vector<CheckerSummary> summary;
  std::size_t violations = 0;
  std::size_t failures = 0;
  int exit_code = 0;
};

inline constexpr int kExitViolation = 1;
inline constexpr int kExitFailureBudget = 2;
inline constexpr int kExitBadInput = 3;

inline CheckerSummary summarize(const std::string& name, const std::vector<SuiteRow>& rows) {
  CheckerSummary s{.name = name};
  for (const SuiteRow& row : rows) {
    if (row.report.name != name) continue;
    ++s.rows;
    if (row.failed()) {
      ++s.failures;
      continue;
    }
    const BoundReport& rep = row.report;
    if (rep.holds()) ++s.holds;
    if (row.violated()) ++s.violations;
    if (rep.degenerate) ++s.degenerate;
    if (std::isinf(rep.ratio)) {
      ++s.infinite_ratios;
    } else if (std::isfinite(rep.ratio)) {
      s.max_ratio = std::max(s.max_ratio, rep.ratio);
      if (name == "nevanlinna_ratio") {
        const double k = rep.params["k"].get<double>();
        auto [it, fresh] = s.max_ratio_by_k.try_emplace(k, rep.ratio);
        if (!fresh) it->second = std::max(it->second, rep.ratio);
      }
    }
    if (rep.params.contains("a_min") && rep.params["a_min"].is_number())
      s.max_a_min = std::max(s.max_a_min, rep.params["a_min"].get<double>());
  }
  return s;
}

/// Runs every (checker, instance) pair, possibly on several threads; rows
/// come out in (checker, instance, parameter) order regardless.
inline SuiteResult run_suite(const SuiteConfig& c) {
  validate(c);
  struct Task {
    const std::string* name;
    std::size_t index;
  };
  std::vector<Task> tasks;
  for (const std::string& name : c.checkers)
    for (std::size_t i = 0; i < c.instances; ++i) tasks.push_back({&name, i});

  std::vector<std::vector<SuiteRow>> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();)
      out[t] = run_instance(*tasks[t].name, tasks[t].index, c);
  };
  unsigned n = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, tasks.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }

  SuiteResult res;
  for (auto& rows : out)
    for (SuiteRow& row : rows) res.rows.push_back(std::move(row));
  for (const std::string& name : c.checkers) {
    res.summary.push_back(summarize(name, res.rows));
    res.violations += res.summary.back().violations;
    res.failures += res.summary.back().failures;
  }
  if (res.failures * 100 > res.rows.size())
    res.exit_code = kExitFailureBudget;
  else if (res.violations > 0)
    res.exit_code = kExitViolation;
  return res;
}

inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// RFC 4180 quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

inline constexpr const char* kCsvHeader = "name,seed,lhs,rhs,ratio,holds,err,params";

inline std::string csv_row(const SuiteRow& row) {
  const BoundReport& rep = row.report;
  const char* holds = row.failed() ? "error" : rep.probe ? "na" : rep.holds() ? "true" : "false";
  std::string params;
  if (row.failed()) {
    params = Json{{"instance", row.instance}, {"error", row.failure}}.dump();
  } else {
    params = rep.params.dump();
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string line = csv_field(rep.name);
  line += ',' + std::to_string(row.seed);
  line += ',' + format_real(row.failed() ? nan : rep.lhs);
  line += ',' + format_real(row.failed() ? nan : rep.rhs);
  line += ',' + format_real(row.failed() ? nan : rep.ratio);
  line += ',';
  line += holds;
  line += ',' + format_real(row.failed() ? nan : rep.error_estimate);
  line += ',' + csv_field(params);
  return line;
}

inline void write_csv(std::ostream& os, const SuiteResult& res) {
  os << kCsvHeader << '\n';
  for (const SuiteRow& row : res.rows) os << csv_row(row) << '\n';
}

inline std::string format_summary(const SuiteResult& res) {
  std::ostringstream os;
  os << "checker                 rows  holds  viol  fail  degen  inf   max_ratio\n";
  for (const CheckerSummary& s : res.summary) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s %5zu  %5zu  %4zu  %4zu  %5zu  %4zu  %s\n",
                  s.name.c_str(), s.rows, s.holds, s.violations, s.failures, s.degenerate,
                  s.infinite_ratios,
                  s.rows > s.failures && std::isfinite(s.max_ratio)
                      ? format_real(s.max_ratio).c_str()
                      : "-");
    os << buf;
    for (const auto& [k, v] : s.max_ratio_by_k)
      os << "  max C(k) at k=" << format_real(k) << ": " << format_real(v) << '\n';
    if (std::isfinite(s.max_a_min)) os << "  max minimal a: " << format_real(s.max_a_min) << '\n';
  }
  os << "violations " << res.violations << ", failures " << res.failures << " of "
     << res.rows.size() << " rows, exit " << res.exit_code << '\n';
  return os.str();
}

// f = 1/z reproduction.

struct CounterexampleRow {
  std::string quantity;
  double r = 0.0;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string closed_form;

  bool ok() const {
    if (std::isinf(expected)) return computed == expected;
    return std::abs(computed - expected) <= tolerance;
  }
};

struct CounterexampleReport {
  std::vector<CounterexampleRow> rows;
  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok(); });
  }
};

inline RationalFunctionSpec reciprocal_z() {
  return {{}, AtomicMeasure({{{0.0, 0.0}, 1.0}}), 1.0};
}

/// For f = 1/z: M(r) = 1/r, m(r) = ln+(1/r), N(r) = ln r, T(r) = ln+ r, and
/// (1/r) int_0^r ln+ M(t) dt, which is 1 + ln+(1/r) for r <= 1 and 1/r for
/// r >= 1. The ratio against T(kr) is +inf at r = 1/(2k).
inline CounterexampleReport counterexample(const QuadratureSpec& quad = {}) {
  const RationalFunctionSpec f = reciprocal_z();
  const DeltaSubharmonicFn U = ln_abs(f);
  CounterexampleReport rep;
  for (double r : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const NevanlinnaValues nv = nevanlinna(f, r, quad);
    const double lnp_inv = std::max(0.0, std::log(1.0 / r));
    rep.rows.push_back({"M", r, nv.M, 1.0 / r, 1e-9, "1/r"});
    rep.rows.push_back({"m", r, nv.m, lnp_inv, 1e-9, "ln+(1/r)"});
    rep.rows.push_back({"N", r, nv.N, std::log(r), 1e-9, "ln r"});
    rep.rows.push_back({"T", r, nv.T, std::max(0.0, std::log(r)), 1e-9, "ln+ r"});
    const QuadratureResult I = max_positive_integral(
        U, IntervalSet({{0.0, r}}), Weight::constant(1.0, 0.0, r, kInf), quad);
    if (r <= 1.0)
      rep.rows.push_back({"lhs", r, I.value / r, 1.0 + lnp_inv, 1e-6, "1+ln+(1/r)"});
    else
      rep.rows.push_back({"lhs", r, I.value / r, 1.0 / r, 1e-6, "1/r"});
  }
  for (double k : {2.0, 4.0}) {
    const double r = 1.0 / (2.0 * k);
    const BoundReport b = nevanlinna_ratio(f, r, k, quad);
    rep.rows.push_back({"ratio k=" + format_real(k), r, b.ratio, kInf, 0.0, "+inf"});
  }
  return rep;
}

inline std::string format_counterexample(const CounterexampleReport& rep) {
  std::ostringstream os;
  os << "quantity      r          computed                 expected                 |diff|     form         ok\n";
  for (const CounterexampleRow& row : rep.rows) {
    char buf[200];
    const double diff = std::isinf(row.expected) && row.computed == row.expected
                            ? 0.0
                            : std::abs(row.computed - row.expected);
    std::snprintf(buf, sizeof buf, "%-10s %6g  %-24s %-24s %-10.3g %-12s %s\n",
                  row.quantity.c_str(), row.r, format_real(row.computed).c_str(),
                  format_real(row.expected).c_str(), diff, row.closed_form.c_str(),
                  row.ok() ? "yes" : "NO");
    os << buf;
  }
  os << (rep.passed() ? "all quantities match\n" : "MISMATCH\n");
  return os.str();
}

}  // namespace subharm

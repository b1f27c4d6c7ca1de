// Command-line front end: characteristics of one function, single checks,
// seeded suites with CSV output, and the f = 1/z reproduction.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subharm/subharm.hpp"

namespace {

using namespace subharm;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

struct ComputeArgs {
  std::string file;
  std::optional<double> r, r0, R, k;
  double tol = 1e-9;
};

Json characteristics_at(const DeltaSubharmonicFn& U, double r, const QuadratureSpec& quad) {
  return {{"r", r},
          {"M_U", real_to_json(max_on_circle(U, r).value)},
          {"M_U+", real_to_json(max_on_circle(U, r, Transform::positive_part).value)},
          {"C_U", real_to_json(circle_mean(U, r).value)},
          {"C_U+", real_to_json(circle_mean_nonlinear(U, Transform::positive_part, r, quad).value)},
          {"C_U-", real_to_json(circle_mean_nonlinear(U, Transform::negative_part, r, quad).value)},
          {"plus_count", radial_count(U.plus.charge, r)},
          {"minus_count", radial_count(U.minus.charge, r)}};
}

int run_compute(const ComputeArgs& a) {
  const QuadratureSpec quad{.rel_tol = a.tol};
  Json j = read_json(a.file);
  Json out = Json::object();
  std::optional<RationalFunctionSpec> f;
  DeltaSubharmonicFn U;
  if (j.contains("rational")) j = j["rational"];
  if (j.contains("zeros") || j.contains("poles")) {
    f = rational_from_json(j);
    U = ln_abs(*f);
  } else {
    U = delta_from_json(j.contains("fn") ? j["fn"] : j);
  }
  U = canonicalize(U);
  out["canonical"] = to_json(U);
  if (a.r) {
    out["at_r"] = characteristics_at(U, *a.r, quad);
    if (f) {
      const NevanlinnaValues nv = nevanlinna(*f, *a.r, quad);
      out["nevanlinna"] = {{"M", real_to_json(nv.M)}, {"m", nv.m}, {"N", nv.N}, {"T", nv.T},
                           {"error", nv.error_estimate}};
    }
  }
  if (a.r && a.R) {
    out["N_plus(r,R)"] = real_to_json(counting_integral(U.plus.charge, *a.r, *a.R));
    out["N_minus(r,R)"] = real_to_json(counting_integral(U.minus.charge, *a.r, *a.R));
    out["T_U(r,R)"] = real_to_json(characteristic_T(U, *a.r, *a.R, quad).value);
  }
  if (a.r0) {
    out["C_U+(r0)"] = real_to_json(
        circle_mean_nonlinear(U, Transform::positive_part, *a.r0, quad).value);
    if (a.r && a.k) {
      const CharacteristicValue T = characteristic_T(U, *a.r0, *a.k * *a.r, quad);
      out["T_U(r0,kr)"] = real_to_json(T.value);
      out["T_U(r0,kr)_error"] = T.error_estimate;
    }
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct CheckArgs {
  std::string name;
  std::string file;
  std::optional<double> p, k, b;
  double tol = 1e-9;
};

int run_check_cmd(const CheckArgs& a) {
  if (!is_known_checker(a.name)) throw ArgumentError("unknown checker: " + a.name);
  Json inst = read_json(a.file);
  if (a.p) inst["p"] = exponent_to_json(*a.p);
  if (a.k) inst["k"] = *a.k;
  if (a.b) inst["b"] = *a.b;
  const QuadratureSpec quad{.rel_tol = a.tol};
  SuiteRow row{.report = run_check(a.name, inst, quad)};
  if (inst.contains("seed") && inst["seed"].is_number_unsigned())
    row.seed = inst["seed"].get<std::uint64_t>();
  std::cout << kCsvHeader << '\n' << csv_row(row) << '\n';
  return row.violated() ? kExitViolation : 0;
}

struct SuiteArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> instances;
  std::optional<std::string> checkers;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<unsigned> threads;
  bool quiet = false;
};

SuiteConfig build_config(const SuiteArgs& a) {
  SuiteConfig c;
  if (!a.config.empty()) c = suite_config_from_json(read_json(a.config));
  if (a.seed) c.seed = *a.seed;
  if (a.instances) c.instances = *a.instances;
  if (a.checkers) c.checkers = *a.checkers == "all" ? checker_names() : split_list(*a.checkers);
  if (a.out) c.out = *a.out;
  if (a.tol) c.rel_tol = *a.tol;
  if (a.threads) c.threads = *a.threads;
  validate(c);
  return c;
}

int run_suite_cmd(const SuiteArgs& a) {
  const SuiteConfig c = build_config(a);
  const SuiteResult res = run_suite(c);
  if (c.out.empty() || c.out == "-") {
    write_csv(std::cout, res);
  } else {
    std::ofstream os(c.out, std::ios::binary);
    if (!os) throw ArgumentError("cannot write " + c.out);
    write_csv(os, res);
  }
  if (!a.quiet) std::cerr << format_summary(res);
  return res.exit_code;
}

int run_counterexample(double tol) {
  const CounterexampleReport rep = counterexample({.rel_tol = tol});
  std::cout << format_counterexample(rep);
  return rep.passed() ? 0 : kExitViolation;
}

struct GenerateArgs {
  std::string checker;
  std::uint64_t seed = 1;
  std::optional<std::size_t> index;
  std::string config;
};

int run_generate(const GenerateArgs& a) {
  SuiteConfig c;
  if (!a.config.empty()) c = suite_config_from_json(read_json(a.config));
  validate(c);
  const std::uint64_t seed = a.index ? instance_seed(a.seed, a.checker, *a.index) : a.seed;
  std::cout << generate_instance(seed, a.checker, c).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of small-set integral estimates for "
               "(delta-)subharmonic functions"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Print characteristics of a function file");
  compute->add_option("--fn", ca.file, "JSON file: delta-subharmonic function, rational "
                                       "function or instance")->required();
  compute->add_option("--r", ca.r, "radius");
  compute->add_option("--r0", ca.r0, "inner radius for T_U(r0, kr)");
  compute->add_option("--R", ca.R, "outer radius for N and T_U(r, R)");
  compute->add_option("--k", ca.k, "dilation for T_U(r0, kr)");
  compute->add_option("--tol", ca.tol, "relative quadrature tolerance");

  CheckArgs ka;
  auto* check = app.add_subcommand("check", "Run one checker on an instance file");
  check->add_option("name", ka.name, "checker name")->required();
  check->add_option("--instance,--fn", ka.file, "instance JSON file")->required();
  check->add_option("--p", ka.p, "weight exponent (inf allowed)");
  check->add_option("--k", ka.k, "dilation k");
  check->add_option("--b", ka.b, "parameter b");
  check->add_option("--tol", ka.tol, "relative quadrature tolerance");

  SuiteArgs sa;
  auto* suite = app.add_subcommand("suite", "Run seeded random instances, write CSV");
  suite->add_option("--config", sa.config, "JSON file with SuiteConfig fields");
  suite->add_option("--seed", sa.seed, "suite seed");
  suite->add_option("--instances", sa.instances, "instances per checker");
  suite->add_option("--checkers", sa.checkers, "comma-separated checker names, or 'all'");
  suite->add_option("--out", sa.out, "CSV path ('-' or empty for stdout)");
  suite->add_option("--tol", sa.tol, "relative quadrature tolerance");
  suite->add_option("--threads", sa.threads, "worker threads (0 = all cores)");
  suite->add_flag("--quiet", sa.quiet, "no summary on stderr");

  double ctol = 1e-9;
  auto* cex = app.add_subcommand("counterexample", "Reproduce the f = 1/z example");
  cex->add_option("--tol", ctol, "relative quadrature tolerance");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Print one generated instance");
  gen->add_option("checker", ga.checker, "checker name")->required();
  gen->add_option("--seed", ga.seed, "instance seed, or suite seed with --index");
  gen->add_option("--index", ga.index, "instance index within a suite");
  gen->add_option("--config", ga.config, "JSON file with SuiteConfig fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*compute) return run_compute(ca);
    if (*check) return run_check_cmd(ka);
    if (*suite) return run_suite_cmd(sa);
    if (*cex) return run_counterexample(ctol);
    if (*gen) return run_generate(ga);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const DegenerateInstance& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const Json::exception& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const QuadratureFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitFailureBudget;
  } catch (const GenerationFailure& e) {
    std::cerr << "generation failure: " << e.what() << '\n';
    return kExitFailureBudget;
  }
  return kExitBadInput;
}

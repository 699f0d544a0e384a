#pragma once
// Experiment configuration: one JSON document per run. Parsing is strict:
// unknown keys, missing keys, and type mismatches all raise ConfigError with
// the full field path, so a typo cannot silently fall back to a default.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "confham/assembly.hpp"
#include "confham/errors.hpp"
#include "confham/potential.hpp"

namespace confham {

struct InitialState {
  enum class Kind { gaussian, eigenstate };
  Kind kind = Kind::gaussian;
  double x0 = 0, sigma = 0, k0 = 0;  // gaussian
  int index = 0;                     // eigenstate, 0-based into the spectrum
};

struct EvolveConfig {
  double dt = 0;
  int steps = 0;
  InitialState initial;
};

struct Config {
  double L = 0;
  int N = 0;
  double a = 0, b = 0;
  PotentialSpec potential = PotentialSpec::zero();

  bool separated = true;  // true: bcs below, false: coupling below
  SeparatedBcs bcs;
  CouplingSpec coupling;

  std::optional<EvolveConfig> evolve;
  int spectrum_count = 8;
  std::uint64_t seed = 1;
};

namespace detail {

using Json = nlohmann::json;

[[noreturn]] inline void config_fail(const std::string& path,
                                     const std::string& what) {
  throw ConfigError(path + ": " + what);
}

inline void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) config_fail(path, "expected an object");
}

inline void check_keys(const Json& j, const std::string& path,
                       const std::set<std::string>& allowed) {
  expect_object(j, path);
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      config_fail(path, "unknown key '" + item.key() + "'");
}

inline const Json& get_required(const Json& j, const std::string& path,
                                const std::string& key) {
  if (!j.contains(key)) config_fail(path, "missing key '" + key + "'");
  return j.at(key);
}

inline double get_number(const Json& j, const std::string& path,
                         const std::string& key) {
  const Json& v = get_required(j, path, key);
  if (!v.is_number()) config_fail(path + "." + key, "expected a number");
  return v.get<double>();
}

inline int get_int(const Json& j, const std::string& path,
                   const std::string& key) {
  const Json& v = get_required(j, path, key);
  if (!v.is_number_integer()) config_fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

inline std::string get_string(const Json& j, const std::string& path,
                              const std::string& key) {
  const Json& v = get_required(j, path, key);
  if (!v.is_string()) config_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

/// "dirichlet" | "neumann" | {"kind":"robin","f":x} (object form accepts the
/// other two kinds as well).
inline BoundaryCondition parse_bc(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "dirichlet") return BoundaryCondition::dirichlet();
    if (s == "neumann") return BoundaryCondition::neumann();
    config_fail(path, "unknown boundary condition '" + s +
                          "' (robin needs the object form with f)");
  }
  expect_object(j, path);
  const std::string kind = get_string(j, path, "kind");
  if (kind == "dirichlet") {
    check_keys(j, path, {"kind"});
    return BoundaryCondition::dirichlet();
  }
  if (kind == "neumann") {
    check_keys(j, path, {"kind"});
    return BoundaryCondition::neumann();
  }
  if (kind == "robin") {
    check_keys(j, path, {"kind", "f"});
    return BoundaryCondition::robin(get_number(j, path, "f"));
  }
  config_fail(path + ".kind", "unknown boundary condition '" + kind + "'");
}

inline PointCoupling parse_coupling_point(const Json& j,
                                          const std::string& path) {
  expect_object(j, path);
  const std::string kind = get_string(j, path, "kind");
  if (kind == "transparent") {
    check_keys(j, path, {"kind"});
    return PointCoupling::transparent();
  }
  if (kind == "delta") {
    check_keys(j, path, {"kind", "alpha"});
    return PointCoupling::delta(get_number(j, path, "alpha"));
  }
  if (kind == "delta_prime") {
    check_keys(j, path, {"kind", "beta"});
    return PointCoupling::delta_prime(get_number(j, path, "beta"));
  }
  if (kind == "separated") {
    check_keys(j, path, {"kind", "side1", "side2"});
    return PointCoupling::separated(
        parse_bc(get_required(j, path, "side1"), path + ".side1"),
        parse_bc(get_required(j, path, "side2"), path + ".side2"));
  }
  config_fail(path + ".kind", "unknown coupling '" + kind + "'");
}

inline PotentialSpec parse_potential(const Json& j, const std::string& path,
                                     int N) {
  expect_object(j, path);
  const std::string kind = get_string(j, path, "kind");
  if (kind == "zero") {
    check_keys(j, path, {"kind"});
    return PotentialSpec::zero();
  }
  if (kind == "constant") {
    check_keys(j, path, {"kind", "value"});
    return PotentialSpec::constant(get_number(j, path, "value"));
  }
  if (kind == "harmonic") {
    check_keys(j, path, {"kind", "omega", "x0"});
    return PotentialSpec::harmonic(get_number(j, path, "omega"),
                                   get_number(j, path, "x0"));
  }
  if (kind == "table") {
    check_keys(j, path, {"kind", "values"});
    const Json& vals = get_required(j, path, "values");
    if (!vals.is_array()) config_fail(path + ".values", "expected an array");
    if (static_cast<int>(vals.size()) != N + 1)
      config_fail(path + ".values", "expected " + std::to_string(N + 1) +
                                        " entries (one per box node)");
    std::vector<double> table;
    table.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (!vals[i].is_number())
        config_fail(path + ".values[" + std::to_string(i) + "]",
                    "expected a number");
      table.push_back(vals[i].get<double>());
    }
    return PotentialSpec::table(std::move(table));
  }
  config_fail(path + ".kind", "unknown potential '" + kind + "'");
}

inline InitialState parse_initial(const Json& j, const std::string& path) {
  expect_object(j, path);
  const std::string kind = get_string(j, path, "kind");
  InitialState init;
  if (kind == "gaussian") {
    check_keys(j, path, {"kind", "x0", "sigma", "k0"});
    init.kind = InitialState::Kind::gaussian;
    init.x0 = get_number(j, path, "x0");
    init.sigma = get_number(j, path, "sigma");
    init.k0 = get_number(j, path, "k0");
    return init;
  }
  if (kind == "eigenstate") {
    check_keys(j, path, {"kind", "index"});
    init.kind = InitialState::Kind::eigenstate;
    init.index = get_int(j, path, "index");
    if (init.index < 0) config_fail(path + ".index", "must be >= 0");
    return init;
  }
  config_fail(path + ".kind", "unknown initial state '" + kind + "'");
}

}  // namespace detail

inline Config parse_config_json(const nlohmann::json& root) {
  using detail::check_keys;
  using detail::config_fail;
  using detail::get_int;
  using detail::get_number;
  using detail::get_required;

  const std::string top = "config";
  check_keys(root, top,
             {"box", "omega", "potential", "bc", "coupling", "evolve",
              "spectrum", "seed"});

  Config cfg;
  const auto& box = get_required(root, top, "box");
  check_keys(box, top + ".box", {"L", "N"});
  cfg.L = get_number(box, top + ".box", "L");
  cfg.N = get_int(box, top + ".box", "N");

  const auto& omega = get_required(root, top, "omega");
  check_keys(omega, top + ".omega", {"a", "b"});
  cfg.a = get_number(omega, top + ".omega", "a");
  cfg.b = get_number(omega, top + ".omega", "b");

  cfg.potential = detail::parse_potential(get_required(root, top, "potential"),
                                          top + ".potential", cfg.N);

  const bool has_bc = root.contains("bc");
  const bool has_coupling = root.contains("coupling");
  if (has_bc == has_coupling)
    config_fail(top, "exactly one of 'bc' or 'coupling' is required");

  if (has_bc) {
    cfg.separated = true;
    const auto& bc = root.at("bc");
    check_keys(bc, top + ".bc", {"point_a", "point_b"});
    const char* names[2] = {"point_a", "point_b"};
    for (GammaPoint p : both_points) {
      const std::string path = top + ".bc." + names[index_of(p)];
      const auto& pt = get_required(bc, top + ".bc", names[index_of(p)]);
      check_keys(pt, path, {"side1", "side2"});
      cfg.bcs.bc[index_of(p)][0] =
          detail::parse_bc(get_required(pt, path, "side1"), path + ".side1");
      cfg.bcs.bc[index_of(p)][1] =
          detail::parse_bc(get_required(pt, path, "side2"), path + ".side2");
    }
    cfg.coupling = cfg.bcs.as_coupling();
  } else {
    cfg.separated = false;
    const auto& cpl = root.at("coupling");
    check_keys(cpl, top + ".coupling", {"point_a", "point_b"});
    cfg.coupling.at_a = detail::parse_coupling_point(
        get_required(cpl, top + ".coupling", "point_a"), top + ".coupling.point_a");
    cfg.coupling.at_b = detail::parse_coupling_point(
        get_required(cpl, top + ".coupling", "point_b"), top + ".coupling.point_b");
  }

  if (root.contains("evolve")) {
    const auto& ev = root.at("evolve");
    check_keys(ev, top + ".evolve", {"dt", "steps", "initial"});
    EvolveConfig e;
    e.dt = get_number(ev, top + ".evolve", "dt");
    e.steps = get_int(ev, top + ".evolve", "steps");
    if (e.steps < 0) config_fail(top + ".evolve.steps", "must be >= 0");
    e.initial = detail::parse_initial(get_required(ev, top + ".evolve", "initial"),
                                      top + ".evolve.initial");
    cfg.evolve = e;
  }

  if (root.contains("spectrum")) {
    const auto& sp = root.at("spectrum");
    check_keys(sp, top + ".spectrum", {"count"});
    cfg.spectrum_count = get_int(sp, top + ".spectrum", "count");
    if (cfg.spectrum_count < 1) config_fail(top + ".spectrum.count", "must be >= 1");
  }

  if (root.contains("seed")) {
    const auto& s = root.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0)
      config_fail(top + ".seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  return cfg;
}

inline Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config_json(root);
}

}  // namespace confham

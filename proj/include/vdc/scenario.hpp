// scenario.hpp
// Experiment scenarios: JSON ingestion, validation and the built-in default
// set.
//
// Config documents are JSON: either a top-level array of scenarios or an
// object whose "scenarios" member is that array. Complex numbers are
// [re, im] pairs (a bare number is read as a real value):
//
//   [{"name": "balanced-orthogonal",
//     "c_a": [0.7071067811865476, 0], "c_b": [0.7071067811865476, 0],
//     "phi_a": [[1, 0], [0, 0]], "phi_b": [[0, 0], [1, 0]],
//     "shots": 100000, "phase_points": 64, "seed": 42}]
//
// shots, phase_points and seed are optional (defaults 100000, 64, 42).

#pragma once

#include "vdc/core_state.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vdc {

/// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultShots = 100000;
inline constexpr std::size_t kDefaultPhasePoints = 64;
inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::uint64_t kMinScenarioShots = 100;

struct Scenario {
  std::string name;
  Complex c_a{1.0, 0.0};
  Complex c_b{0.0, 0.0};
  std::vector<Complex> phi_a{Complex{1.0}, Complex{0.0}};
  std::vector<Complex> phi_b{Complex{1.0}, Complex{0.0}};
  std::uint64_t shots = kDefaultShots;
  std::size_t phase_points = kDefaultPhasePoints;
  std::uint64_t seed = kDefaultSeed;
  /// Constructed stand-in rather than a measured configuration.
  bool illustrative = false;

  TwoPathState state() const {
    const auto vec = [](const std::vector<Complex>& v) {
      ComplexVector out(static_cast<Eigen::Index>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
      return out;
    };
    return TwoPathState(c_a, c_b, InternalState(vec(phi_a)), InternalState(vec(phi_b)));
  }
};

/// Throws ValidationError naming the scenario and offending field.
inline void validate(const Scenario& sc) {
  const std::string who = "scenario '" + sc.name + "'";
  if (sc.name.empty()) throw ValidationError("scenario name must not be empty");
  if (sc.phi_a.size() != 2 || sc.phi_b.size() != 2) {
    throw ValidationError(who + ": phi_a, phi_b must be complex 2-vectors");
  }
  const auto check_unit = [&](const std::vector<Complex>& v, const char* field) {
    double n2 = 0.0;
    for (const Complex& c : v) n2 += std::norm(c);
    if (!std::isfinite(n2) || std::abs(std::sqrt(n2) - 1.0) > kValidationTolerance) {
      throw ValidationError(who + ": " + field + " is not normalized (norm " +
                            std::to_string(std::sqrt(n2)) + ")");
    }
  };
  check_unit(sc.phi_a, "phi_a");
  check_unit(sc.phi_b, "phi_b");
  const double amp = std::norm(sc.c_a) + std::norm(sc.c_b);
  if (!std::isfinite(amp) || std::abs(amp - 1.0) > kValidationTolerance) {
    throw ValidationError(who + ": c_a, c_b are not normalized (|c_a|^2 + |c_b|^2 = " +
                          std::to_string(amp) + ")");
  }
  if (sc.shots < kMinScenarioShots) {
    throw ValidationError(who + ": shots must be >= " + std::to_string(kMinScenarioShots) +
                          ", got " + std::to_string(sc.shots));
  }
  if (sc.phase_points < 8) {
    throw ValidationError(who + ": phase_points must be >= 8, got " +
                          std::to_string(sc.phase_points));
  }
  try {
    (void)sc.state();
  } catch (const ValidationError& e) {
    throw ValidationError(who + ": " + e.what());
  }
}

/// Seven constructed states: balanced amplitudes with |gamma| in
/// {0, 0.38, 0.71, 0.92, 1} tracing the D = 0 arc from (0, 0, 1) to
/// (1, 0, 0), plus p_a = 0.85 with |gamma| in {0, 1} off the arc.
inline std::vector<Scenario> default_scenarios() {
  const auto tagged = [](double g) {
    return std::vector<Complex>{Complex{g}, Complex{std::sqrt(std::max(0.0, 1.0 - g * g))}};
  };
  std::vector<Scenario> out;
  const auto add = [&](std::string name, double p_a, double g) {
    Scenario sc;
    sc.name = std::move(name);
    sc.c_a = std::sqrt(p_a);
    sc.c_b = std::sqrt(1.0 - p_a);
    sc.phi_a = {Complex{1.0}, Complex{0.0}};
    sc.phi_b = tagged(g);
    sc.illustrative = true;
    out.push_back(std::move(sc));
  };
  add("illustrative-1-balanced-g0.00", 0.5, 0.0);
  add("illustrative-2-balanced-g0.38", 0.5, 0.38);
  add("illustrative-3-balanced-g0.71", 0.5, 0.71);
  add("illustrative-4-balanced-g0.92", 0.5, 0.92);
  add("illustrative-5-balanced-g1.00", 0.5, 1.0);
  add("illustrative-6-pa0.85-g0.00", 0.85, 0.0);
  add("illustrative-7-pa0.85-g1.00", 0.85, 1.0);
  return out;
}

namespace detail {

inline std::string json_path(std::size_t index) {
  return "scenarios[" + std::to_string(index) + "]";
}

inline std::string json_path(std::size_t index, const std::string& field) {
  return json_path(index) + "." + field;
}

inline Complex read_complex(const nlohmann::json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ValidationError(where + ": expected a complex number [re, im]");
}

inline std::vector<Complex> read_complex_vector(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_complex(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline std::uint64_t read_count(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw ValidationError(where + ": expected a non-negative integer");
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Scenario read_scenario(const nlohmann::json& j, std::size_t index) {
  if (!j.is_object()) throw ValidationError(json_path(index) + ": expected an object");
  static const std::set<std::string> known{"name", "c_a", "c_b", "phi_a", "phi_b",
                                           "shots", "phase_points", "seed"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) throw ValidationError(json_path(index, it.key()) + ": unknown field");
  }
  const auto require = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ValidationError(json_path(index, key) + ": missing field");
    return j.at(key);
  };
  Scenario sc;
  const auto& name = require("name");
  if (!name.is_string()) throw ValidationError(json_path(index, "name") + ": expected a string");
  sc.name = name.get<std::string>();
  sc.c_a = read_complex(require("c_a"), json_path(index, "c_a"));
  sc.c_b = read_complex(require("c_b"), json_path(index, "c_b"));
  sc.phi_a = read_complex_vector(require("phi_a"), json_path(index, "phi_a"));
  sc.phi_b = read_complex_vector(require("phi_b"), json_path(index, "phi_b"));
  if (j.contains("shots")) sc.shots = read_count(j["shots"], json_path(index, "shots"));
  if (j.contains("phase_points")) {
    sc.phase_points = static_cast<std::size_t>(read_count(j["phase_points"], json_path(index, "phase_points")));
  }
  if (j.contains("seed")) sc.seed = read_count(j["seed"], json_path(index, "seed"));
  try {
    validate(sc);
  } catch (const ValidationError& e) {
    throw ValidationError(json_path(index) + ": " + e.what());
  }
  return sc;
}

}  // namespace detail

/// Parses and validates a config document. Throws ValidationError with a
/// line/column for syntax errors and a field path for content errors.
inline std::vector<Scenario> parse_scenarios(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config parse error at " + detail::line_column(text, e.byte) + ": " +
                          e.what());
  }
  const nlohmann::json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("scenarios")) throw ValidationError("config object has no \"scenarios\" array");
    list = &doc["scenarios"];
  }
  if (!list->is_array()) throw ValidationError("config must hold an array of scenarios");
  if (list->empty()) throw ValidationError("config contains no scenarios");

  std::vector<Scenario> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list->size(); ++i) {
    Scenario sc = detail::read_scenario((*list)[i], i);
    if (!names.insert(sc.name).second) {
      throw ValidationError(detail::json_path(i, "name") + ": duplicate scenario name '" + sc.name + "'");
    }
    out.push_back(std::move(sc));
  }
  return out;
}

inline std::vector<Scenario> load_scenarios(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading config file '" + path + "'");
  try {
    return parse_scenarios(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

/// Inverse of parse_scenarios for a single scenario.
inline nlohmann::json to_json(const Scenario& sc) {
  const auto cx = [](Complex c) { return nlohmann::json::array({c.real(), c.imag()}); };
  nlohmann::json phi_a = nlohmann::json::array();
  nlohmann::json phi_b = nlohmann::json::array();
  for (const Complex& c : sc.phi_a) phi_a.push_back(cx(c));
  for (const Complex& c : sc.phi_b) phi_b.push_back(cx(c));
  return {{"name", sc.name}, {"c_a", cx(sc.c_a)}, {"c_b", cx(sc.c_b)}, {"phi_a", phi_a},
          {"phi_b", phi_b},  {"shots", sc.shots}, {"phase_points", sc.phase_points},
          {"seed", sc.seed}};
}

}  // namespace vdc

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edh/model.hpp"

namespace edh {

/// Everything a CLI run needs. Serialized as JSON; every key is optional and
/// unknown keys are rejected. Layout:
///
///   { "model":      {"L", "N", "half_fill", "J", "Jp", "U", "eps"},
///     "sweep":      {"Lmin", "Lmax", "eps": [..]},
///     "overlap":    {"Lmin", "Lmax", "J", "U", "density"},
///     "integrable": {"build_superposition", "node_sites": [p, q]},
///     "analysis":   {"kappa", "ref_site", "cap", "states": [..]},
///     "out", "checkpoint", "threads", "seed", "tag" }
struct RunConfig {
  int L = 12;
  std::optional<int> N;
  bool half_fill = false;
  double J = 1.0;
  double Jp = 0.2;
  double U = 1.0;
  double eps = 0.0;

  int sweep_Lmin = 8;
  int sweep_Lmax = 12;
  std::vector<double> sweep_eps = {0.0, 0.1};

  int overlap_Lmin = 64;
  int overlap_Lmax = 4096;
  double overlap_J = 1.0;
  double overlap_U = 1.0;
  double overlap_density = 0.5;

  bool build_superposition = false;
  std::optional<std::pair<int, int>> node_sites;

  double kappa = 3.0;
  int ref_site = 1;
  std::size_t cap = 20000;
  std::vector<std::size_t> states;

  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> checkpoint;
  int threads = 0;
  std::uint64_t seed = 0;
  std::string tag;

  /// N from the explicit value, else the half-filling rule.
  ModelParams model() const;
  void validate() const;
};

/// Throws ValidationError on unknown keys, wrong types or invalid values.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace edh

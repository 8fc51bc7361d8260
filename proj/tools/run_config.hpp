// run_config.hpp: JSON run configuration for the dicke tool. Every key is
// optional; unknown keys are rejected.

#pragma once

#include "dicke/protocol.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dicke::cli {

// Either {"values": [...]} or {"min": a, "max": b, "points": n, "scale": "linear" | "log"}.
struct GridSpec {
  std::vector<double> values;
};

struct SpectrumSection {
  GridSpec omega_x;
  int levels = 4;
};

// Cartesian product of the three grids; unset grids fall back to the
// physics value.
struct GapSection {
  std::optional<GridSpec> n_atoms;
  std::optional<GridSpec> omega;
  std::optional<GridSpec> omega_x;
};

struct SweepSection {
  SweepParameter parameter = SweepParameter::delta;
  GridSpec grid;
};

struct DemkovSection {
  GridSpec x;
  GridSpec ratio;  // N delta / gamma
  double gamma = 0.03;
  int n_atoms = 4;
  double t_end_gamma = 12.0;  // trajectories run to gamma t = t_end_gamma
  std::size_t samples = 61;
};

struct RunConfig {
  DickeParams physics;
  RampSettings ramp;
  double xi = 0.1;
  double margin = 10.0;
  double readout_dressing = 1e-3;
  Engine engine = Engine::full_simulation;
  std::size_t samples = 200;
  bool enforce_conditions = false;
  FockCutoffPolicy fock;
  PropagationOptions propagation;
  SpectrumSection spectrum;
  GapSection gap;
  std::optional<SweepSection> sweep;
  DemkovSection demkov;
  unsigned workers = 1;

  ProtocolConfig protocol_config() const;
};

// Throws ValidationError on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig parse_run_config_text(const std::string& text);

// Fully resolved configuration (defaults included), for output headers.
nlohmann::json to_json(const RunConfig& config);

}  // namespace dicke::cli

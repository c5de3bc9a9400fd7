#ifndef QTRAJ_CONFIG_HPP
#define QTRAJ_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "qtraj/states.hpp"
#include "qtraj/types.hpp"

namespace qtraj {

enum class Mode {
  Diffusive,
  Counting,
  Analytic,
  Compare,
  Ensemble,
  Survival,
  Lindblad,
};

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);

/// Per-observable comparison tolerances; overridable from the config.
struct Tolerances {
  double max_mean_x = 1e-2;
  double max_mean_y = 1e-2;
  double max_mean_n = 1e-2;
  double max_dx = 1e-2;
  double max_dy = 1e-2;
  double max_infidelity = 1e-3;
  bool allow_coarse_dt = false;  // lifts the mu*dt <= 0.01 validation guard
};

/// Validated run description; the one canonical on-disk format is JSON
/// (see README for the schema).
struct RunConfig {
  Mode mode = Mode::Diffusive;
  InitialState initial{};
  ModelParams params{};
  TimeGrid grid{};
  std::uint64_t seed = 1;
  int n_trajectories = 1;
  std::string scheme = "diffusive";  // ensemble mode: "diffusive" | "counting"
  int record_every = 1;
  std::string output = "out";
  Tolerances tol{};

  void validate() const;
};

/// Parse and validate the canonical JSON document; unknown keys are rejected
/// and errors name the offending field.
RunConfig parse_config(const std::string& text);

/// Canonical re-emission; parse(emit(c)) == c.
std::string emit_config(const RunConfig& c);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace qtraj

#endif

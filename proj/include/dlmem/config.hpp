// Copyright 2026 The dlmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment descriptions: a sectioned YAML file, optionally layered on a
// named preset. All physical values are dimensionless products with the probe
// time scale tau and the medium length L; `units` only anchors SI reporting.

#ifndef DLMEM_CONFIG_HPP
#define DLMEM_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "dlmem/dynamics.hpp"
#include "dlmem/params.hpp"
#include "dlmem/protocol.hpp"

namespace dlmem {

enum class RunMode { analytic, propagate, memory, sweep, converge };
enum class OutputFormat { csv, json };

struct Units {
  double tau_s = 25e-9;
  double length_m = 0.1;
  bool operator==(const Units&) const = default;
};

/// One analytic curve: input intensity of mode 1, coupling phase difference
/// and input relative phase.
struct CurveSpec {
  std::string label;
  double i1 = 0.5;
  double phi12 = 0.0;
  double varphi12 = 0.0;
  bool operator==(const CurveSpec&) const = default;
};

struct AnalyticSettings {
  std::optional<cplx> alpha;  // overrides the computed oscillation rate
  std::size_t samples = 401;  // z samples over [0, L]
  std::vector<CurveSpec> curves;  // empty: one curve from the probe and coupling sections
  bool operator==(const AnalyticSettings&) const = default;
};

struct OutputSettings {
  std::string dir = "out";
  OutputFormat format = OutputFormat::csv;
  bool operator==(const OutputSettings&) const = default;
};

struct SweepSettings {
  RunMode base = RunMode::propagate;  // what each row runs
  std::string param;
  std::vector<double> values;
  std::vector<std::string> metrics;
  bool operator==(const SweepSettings&) const = default;
};

struct ExperimentConfig {
  RunMode mode = RunMode::propagate;
  std::string preset;  // empty when none
  Units units;
  MediumParams medium;
  CouplingDrive coupling;
  ProbeInput probe;
  SpaceTimeGrid grid;
  bool auto_nt = true;  // nt from the stiffness bound
  IntegratorConfig integrator;
  MemoryWindows windows;
  AnalyticSettings analytic;
  OutputSettings output;
  SweepSettings sweep;
  std::size_t converge_levels = 3;

  /// Grid with nt resolved when auto_nt is set.
  SpaceTimeGrid resolved_grid() const;
  /// Invariant checks of every section; throws ParameterError or ConfigError.
  void check() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

const std::vector<std::string>& preset_names();
/// Throws ConfigError for unknown names.
ExperimentConfig preset(const std::string& name);

/// Reads a config file. A `preset` key (or `preset_override`, which wins)
/// selects the base; explicit keys override it. Unknown keys are errors.
ExperimentConfig load_config(const std::string& path, const std::string& preset_override = "");
ExperimentConfig parse_config(const std::string& text, const std::string& preset_override = "",
                              const std::string& source = "<string>");
/// Serializes every field so that parse_config(write_config(c)) == c.
std::string write_config(const ExperimentConfig& c);

/// Sets one numeric field named "section.key" (same names as the file).
/// Throws ConfigError when the path does not name a numeric field.
void set_parameter(ExperimentConfig& c, const std::string& path, double value);
/// Names accepted by set_parameter.
std::vector<std::string> numeric_parameters();

/// A number as written in config files: decimal, .inf, or a multiple of pi
/// such as "pi/4" or "-2*pi". Throws ConfigError.
double parse_real(const std::string& text);

std::string to_string(RunMode m);
std::string to_string(ZStepper s);

}  // namespace dlmem

#endif  // DLMEM_CONFIG_HPP

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

// Runs a configured experiment and writes its tables.

#ifndef DLMEM_EXPERIMENT_HPP
#define DLMEM_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dlmem/analytic.hpp"
#include "dlmem/config.hpp"
#include "dlmem/dynamics.hpp"
#include "dlmem/protocol.hpp"

namespace dlmem {

struct AnalyticCurve {
  std::string label;
  std::vector<double> z;
  std::vector<double> i1;
  std::vector<double> i2;
  std::vector<double> phase12;  // NaN where a mode vanishes
};

/// Curves of the analytic mode, one per configured CurveSpec.
std::vector<AnalyticCurve> analytic_curves(const ExperimentConfig& c);

/// Mean spacing of successive maxima (or minima) of a sampled curve; NaN when
/// the curve does not oscillate by more than `min_swing`.
double estimate_period(const std::vector<double>& z, const std::vector<double>& y, double min_swing = 1e-6);

using Metrics = std::map<std::string, double>;

struct RunResult {
  RunMode mode = RunMode::propagate;
  std::vector<AnalyticCurve> curves;
  std::optional<EvolutionRecord> record;
  std::optional<MemoryMetrics> memory;
  Metrics metrics;  // scalar observables usable in sweeps
  std::string summary;
  std::vector<RegimeWarning> warnings;
};

/// Names of the scalar metrics produced by a mode.
std::vector<std::string> metric_names(RunMode mode);

/// Runs analytic, propagate or memory mode. `keep_record` false drops the
/// stored arrays (the scalar metrics are still computed).
RunResult run_experiment(const ExperimentConfig& c, bool keep_record = true);

struct SweepRow {
  double value = 0.0;
  Metrics metrics;
  std::string error;  // empty when the row succeeded
};

/// One independent run per value of `c.sweep.param`, in input order. Rows run
/// concurrently on up to SIM_THREADS threads (default: hardware concurrency).
std::vector<SweepRow> run_sweep(const ExperimentConfig& c);

ConvergenceReport run_convergence(const ExperimentConfig& c);

using Cell = std::variant<double, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::vector<Table> result_tables(const RunResult& r, const Units& units);
Table sweep_table(const ExperimentConfig& c, const std::vector<SweepRow>& rows);
Table convergence_table(const ConvergenceReport& report);

/// Writes tables (and metrics.json for memory results) into `out.dir`,
/// creating it if needed. Returns the written paths. On any failure the files
/// written so far are removed and IoError is thrown.
std::vector<std::string> export_tables(const std::vector<Table>& tables, const OutputSettings& out,
                                       const std::optional<MemoryMetrics>& metrics = std::nullopt);

/// CSV text of a table: header row, then 9 significant digits per value.
std::string to_csv(const Table& t);

}  // namespace dlmem

#endif  // DLMEM_EXPERIMENT_HPP

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

// sim: command-line driver for the double-Lambda propagation and memory
// experiments.
//
//   sim run      --config <path> [--preset <name>] [--out <dir>] [--format csv|json]
//   sim sweep    --config <path> --param <section.key> --values <v1,v2,...> [--metrics <m1,...>]
//   sim converge --config <path> --levels <n>
//
// Exit status: 0 success, 1 configuration error, 2 simulation error.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dlmem/config.hpp"
#include "dlmem/errors.hpp"
#include "dlmem/experiment.hpp"

namespace {

constexpr int kConfigFailure = 1;
constexpr int kSimulationFailure = 2;

struct CommonOptions {
  std::string config;
  std::string preset;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "experiment config file")->required();
  cmd->add_option("--preset", o.preset, "base parameter set")
      ->check(CLI::IsMember(dlmem::preset_names()));
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

dlmem::ExperimentConfig load(const CommonOptions& o) {
  dlmem::ExperimentConfig c = dlmem::load_config(o.config, o.preset);
  if (!o.out.empty()) c.output.dir = o.out;
  if (!o.format.empty()) c.output.format = o.format == "json" ? dlmem::OutputFormat::json : dlmem::OutputFormat::csv;
  return c;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

void report_written(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
}

void print_warnings(const std::vector<dlmem::RegimeWarning>& warnings) {
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.message.c_str());
}

void sweep(dlmem::ExperimentConfig& c) {
  const std::vector<dlmem::SweepRow> rows = dlmem::run_sweep(c);
  std::size_t failed = 0;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      ++failed;
      std::fprintf(stderr, "row %s=%g failed: %s\n", c.sweep.param.c_str(), row.value, row.error.c_str());
    }
  }
  report_written(dlmem::export_tables({dlmem::sweep_table(c, rows)}, c.output));
  std::printf("sweep: %zu rows over %s, %zu failed\n", rows.size(), c.sweep.param.c_str(), failed);
}

void converge(const dlmem::ExperimentConfig& c) {
  const dlmem::ConvergenceReport report = dlmem::run_convergence(c);
  report_written(dlmem::export_tables({dlmem::convergence_table(report)}, c.output));
  std::string line = "converge: dz ratios";
  for (std::size_t k = 0; k + 1 < report.z_levels.size(); ++k) {
    line += " " + std::to_string(report.z_levels[k].ratio);
  }
  line += "; dt ratios";
  for (std::size_t k = 0; k + 1 < report.t_levels.size(); ++k) line += " " + std::to_string(report.t_levels[k].ratio);
  std::printf("%s\n", line.c_str());
}

void run(dlmem::ExperimentConfig& c) {
  if (c.mode == dlmem::RunMode::sweep) {
    if (c.sweep.metrics.empty()) c.sweep.metrics = dlmem::metric_names(c.sweep.base);
    sweep(c);
    return;
  }
  if (c.mode == dlmem::RunMode::converge) {
    converge(c);
    return;
  }
  const dlmem::RunResult r = dlmem::run_experiment(c);
  print_warnings(r.warnings);
  report_written(dlmem::export_tables(dlmem::result_tables(r, c.units), c.output, r.memory));
  std::printf("%s\n", r.summary.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-colour single-photon propagation and memory simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, conv_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "run the configured experiment");
  add_common(run_cmd, run_opts);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "repeat a run over values of one parameter");
  add_common(sweep_cmd, sweep_opts);
  std::string param, values, metrics;
  sweep_cmd->add_option("--param", param, "section.key of a numeric field")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values (pi multiples allowed)")->required();
  sweep_cmd->add_option("--metrics", metrics, "comma-separated metrics to tabulate");

  CLI::App* conv_cmd = app.add_subcommand("converge", "grid refinement study");
  add_common(conv_cmd, conv_opts);
  std::size_t levels = 0;
  conv_cmd->add_option("--levels", levels, "number of grids per direction")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigFailure;
  }

  try {
    if (*run_cmd) {
      dlmem::ExperimentConfig c = load(run_opts);
      run(c);
    } else if (*sweep_cmd) {
      dlmem::ExperimentConfig c = load(sweep_opts);
      if (c.mode == dlmem::RunMode::analytic || c.mode == dlmem::RunMode::propagate ||
          c.mode == dlmem::RunMode::memory) {
        c.sweep.base = c.mode;
      }
      c.mode = dlmem::RunMode::sweep;
      c.sweep.param = param;
      c.sweep.values.clear();
      for (const auto& v : split(values)) c.sweep.values.push_back(dlmem::parse_real(v));
      if (sweep_cmd->count("--metrics")) {
        c.sweep.metrics = split(metrics);
      } else if (c.sweep.metrics.empty()) {
        c.sweep.metrics = dlmem::metric_names(c.sweep.base);
      }
      sweep(c);
    } else if (*conv_cmd) {
      dlmem::ExperimentConfig c = load(conv_opts);
      c.converge_levels = levels;
      c.check();
      converge(c);
    }
  } catch (const dlmem::SimulationError& e) {
    std::fprintf(stderr, "simulation error: %s\n", e.what());
    return kSimulationFailure;
  } catch (const dlmem::Error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSimulationFailure;
  }
  return 0;
}

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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlmem/config.hpp"
#include "dlmem/errors.hpp"
#include "dlmem/experiment.hpp"

using namespace dlmem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dlmem_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Presets, ReferenceMedium) {
  for (const std::string& name : preset_names()) {
    const ExperimentConfig c = preset(name);
    SCOPED_TRACE(name);
    EXPECT_EQ(c.units.tau_s, 25e-9);
    EXPECT_EQ(c.units.length_m, 0.1);
    EXPECT_EQ(c.medium.gamma2, 0.16);
    EXPECT_EQ(c.medium.gamma13, 1.6e-5);
    EXPECT_EQ(c.medium.delta_p1, 0.0);
    EXPECT_EQ(c.medium.delta_p2, 160.0);
    EXPECT_EQ(c.coupling.amp1, 18.0);
    EXPECT_EQ(c.coupling.amp2, 18.0);
    EXPECT_EQ(c.probe.t_center, 3.5);
    EXPECT_EQ(c.probe.width, 1.0);
    EXPECT_NO_THROW(c.check());
  }
  EXPECT_EQ(preset("fig4").medium.kappa12, 500.0);
  EXPECT_NEAR(preset("fig4_calibrated").medium.kappa12, 5027.0, 0.5);
  EXPECT_THROW(preset("fig9"), ConfigError);
}

TEST(Presets, StorageGate) {
  for (const char* name : {"fig5", "fig5_calibrated"}) {
    const ExperimentConfig c = preset(name);
    EXPECT_EQ(c.mode, RunMode::memory);
    EXPECT_EQ(c.coupling.schedule.kind, ScheduleKind::tanh_gate);
    EXPECT_EQ(c.coupling.schedule.sigma, 0.5);
    EXPECT_EQ(c.coupling.schedule.t1, 2.0 * c.probe.t_center);
    EXPECT_EQ(c.coupling.schedule.t2, 6.0 * c.probe.t_center);
    EXPECT_EQ(c.probe.amp1, c.probe.amp2);
  }
}

TEST(Presets, ProbeMirrorsFirstCurve) {
  const ExperimentConfig c = preset("fig2");
  ASSERT_EQ(c.analytic.curves.size(), 3u);
  const double i1 = c.probe.amp1 * c.probe.amp1 / (c.probe.amp1 * c.probe.amp1 + c.probe.amp2 * c.probe.amp2);
  EXPECT_NEAR(i1, c.analytic.curves[0].i1, 1e-12);
  EXPECT_EQ(c.probe.varphi12, c.analytic.curves[0].varphi12);
}

TEST(ParseConfig, PresetThenOverrides) {
  const ExperimentConfig c = parse_config("preset: fig4\nmedium:\n  gamma2_tau: 0.3\nprobe:\n  varphi12_rad: pi/2\n");
  EXPECT_EQ(c.preset, "fig4");
  EXPECT_EQ(c.medium.gamma2, 0.3);
  EXPECT_NEAR(c.probe.varphi12, kPi / 2, 1e-15);
  EXPECT_EQ(c.medium.kappa12, 500.0);
  // command-line preset wins over the file
  const ExperimentConfig o = parse_config("preset: fig4\nmedium:\n  gamma2_tau: 0.3\n", "fig5");
  EXPECT_EQ(o.mode, RunMode::memory);
  EXPECT_EQ(o.medium.gamma2, 0.3);
}

TEST(ParseConfig, UnknownKeyNamesLine) {
  try {
    parse_config("preset: fig4\nmedium:\n  gamma2_tau: 0.1\n  gama13_tau: 1\n", "", "cfg.yaml");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("cfg.yaml:4"), std::string::npos) << what;
    EXPECT_NE(what.find("gama13_tau"), std::string::npos) << what;
  }
  EXPECT_THROW(parse_config("bogus:\n  x: 1\n"), ConfigError);
  EXPECT_THROW(parse_config("medium: [1, 2\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/file.yaml"), ConfigError);
}

TEST(ParseConfig, InvariantViolationNamesField) {
  try {
    parse_config("preset: fig4\nmedium:\n  gamma2_tau: -1\n");
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_EQ(e.field(), "gamma2");
  }
}

TEST(ParseConfig, RoundTrip) {
  for (const std::string& name : preset_names()) {
    const ExperimentConfig c = preset(name);
    EXPECT_TRUE(parse_config(write_config(c)) == c) << name;
  }
  ExperimentConfig c = preset("fig4");
  set_parameter(c, "grid.nt", 4001);
  c.output.format = OutputFormat::json;
  c.sweep.param = "medium.gamma2_tau";
  c.sweep.values = {0.1, 0.2};
  c.sweep.metrics = {"energy_ratio"};
  EXPECT_TRUE(parse_config(write_config(c)) == c);
}

TEST(SetParameter, PathsAndErrors) {
  ExperimentConfig c = preset("fig4");
  set_parameter(c, "medium.kappa12_tau_L", 1234.5);
  EXPECT_EQ(c.medium.kappa12, 1234.5);
  set_parameter(c, "coupling.phi1_rad", 0.25);
  EXPECT_EQ(c.coupling.phi1, 0.25);
  EXPECT_TRUE(c.auto_nt);
  set_parameter(c, "grid.nt", 5001);
  EXPECT_FALSE(c.auto_nt);
  EXPECT_EQ(c.grid.nt, 5001u);
  EXPECT_THROW(set_parameter(c, "grid.nz", 10.5), ConfigError);
  EXPECT_THROW(set_parameter(c, "medium.nothing", 1.0), ConfigError);
  for (const std::string& p : numeric_parameters()) EXPECT_NE(p.find('.'), std::string::npos) << p;
}

TEST(ParseReal, Expressions) {
  EXPECT_EQ(parse_real("0.25"), 0.25);
  EXPECT_NEAR(parse_real("pi/4"), kPi / 4, 1e-15);
  EXPECT_NEAR(parse_real("-2*pi"), -2 * kPi, 1e-15);
  EXPECT_NEAR(parse_real("pi"), kPi, 1e-15);
  EXPECT_THROW(parse_real("abc"), ConfigError);
}

TEST(GridResolution, AutoRespectsStiffness) {
  const ExperimentConfig c = preset("fig4");
  const SpaceTimeGrid g = c.resolved_grid();
  EXPECT_LE(g.dt(), max_time_step(c.medium, c.coupling));
  EXPECT_NO_THROW(g.check(c.medium, c.coupling));
}

TEST(Export, AnalyticProfileColumns) {
  const auto tables = result_tables(run_experiment(preset("fig2")), Units{});
  ASSERT_EQ(tables.size(), 3u);
  EXPECT_EQ(tables[0].name, "intensity_profile_solid");
  EXPECT_EQ(tables[0].columns, (std::vector<std::string>{"z_over_L", "I1", "I2", "Phi12_rad"}));
  EXPECT_EQ(tables[0].rows.size(), 401u);
}

TEST(Analytic, CurvesAndPeriod) {
  const ExperimentConfig c = preset("fig3");
  const auto curves = analytic_curves(c);
  ASSERT_EQ(curves.size(), 3u);
  for (const auto& cv : curves) {
    ASSERT_EQ(cv.z.size(), c.analytic.samples);
    for (std::size_t k = 0; k < cv.z.size(); ++k) EXPECT_NEAR(cv.i1[k] + cv.i2[k], 1.0, 1e-12);
  }
  // prescribed rate 2 pi / L
  EXPECT_NEAR(estimate_period(curves[0].z, curves[0].i1), 1.0, 1e-3);
  std::vector<double> z, flat;
  for (int k = 0; k < 50; ++k) {
    z.push_back(k * 0.02);
    flat.push_back(0.5);
  }
  EXPECT_TRUE(std::isnan(estimate_period(z, flat)));
}

TEST(Sweep, RowsFollowValues) {
  ExperimentConfig c = preset("fig3");
  c.analytic.curves.resize(1);
  c.mode = RunMode::sweep;
  c.sweep.base = RunMode::analytic;
  c.sweep.param = "probe.varphi12_rad";
  c.sweep.values = {0.0, kPi / 3};
  c.sweep.metrics = {"i1_min", "i1_max"};
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].value, 0.0);
  EXPECT_EQ(rows[1].value, kPi / 3);
  for (const auto& r : rows) EXPECT_TRUE(r.error.empty()) << r.error;

  c.sweep.values = {0.5};
  EXPECT_EQ(run_sweep(c).size(), 1u);

  const Table t = sweep_table(c, run_sweep(c));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"probe.varphi12_rad", "i1_min", "i1_max", "error"}));

  c.sweep.metrics.clear();
  EXPECT_THROW(run_sweep(c), ConfigError);
  c.sweep.metrics = {"eta"};
  EXPECT_THROW(run_sweep(c), ConfigError);
}

TEST(Sweep, FailingRowIsRecorded) {
  ExperimentConfig c = preset("fig3");
  c.analytic.curves.resize(1);
  c.mode = RunMode::sweep;
  c.sweep.base = RunMode::analytic;
  c.sweep.param = "medium.gamma2_tau";
  c.sweep.values = {0.16, -1.0, 0.2};
  c.sweep.metrics = {"i1_end"};
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
  EXPECT_TRUE(rows[2].error.empty());
}

TEST(Export, SchemaAndDeterminism) {
  ExperimentConfig c = preset("fig4");
  c.grid.nz = 101;
  c.grid.t_max = 10.0;
  const RunResult r = run_experiment(c);
  const auto tables = result_tables(r, c.units);
  std::vector<std::string> names;
  for (const Table& t : tables) names.push_back(t.name);
  EXPECT_EQ(names, (std::vector<std::string>{"evolution", "peaks"}));
  EXPECT_EQ(tables[0].columns, (std::vector<std::string>{"z_over_L", "t_over_tau", "I1", "I2", "e1_re", "e1_im",
                                                          "e2_re", "e2_im", "g_re", "g_im"}));
  EXPECT_EQ(tables[1].columns,
            (std::vector<std::string>{"z_over_L", "t_peak_tau", "I1", "I2", "Phi12_rad", "energy"}));

  const fs::path a = scratch_dir("a"), b = scratch_dir("b");
  export_tables(tables, {a.string(), OutputFormat::csv});
  export_tables(result_tables(run_experiment(c), c.units), {b.string(), OutputFormat::csv});
  for (const char* f : {"evolution.csv", "peaks.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const fs::path j = scratch_dir("j");
  const auto written = export_tables(tables, {j.string(), OutputFormat::json});
  EXPECT_EQ(written.size(), 2u);
  EXPECT_NE(slurp(j / "peaks.json").find("\"columns\""), std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(j);
}

TEST(Export, MemoryMetricsFile) {
  MemoryMetrics m{0.9, 0.8, 0.72, 0.99, 0.1, 0.2, 14.0};
  const fs::path d = scratch_dir("m");
  export_tables({}, {d.string(), OutputFormat::json}, m);
  const std::string text = slurp(d / "metrics.json");
  std::size_t last = 0;
  for (const char* key : {"eta_abs", "eta_ret", "eta", "fidelity", "phase_in_rad", "phase_out_rad", "storage_time_tau"}) {
    const std::size_t pos = text.find(std::string("\"") + key + "\"");
    ASSERT_NE(pos, std::string::npos) << key;
    EXPECT_GE(pos, last) << key;
    last = pos;
  }
  fs::remove_all(d);
}

TEST(Export, FailureLeavesNoPartialFiles) {
  Table good{"good", {"x"}, {{1.0}}};
  Table bad{"missing/sub", {"x"}, {{2.0}}};
  const fs::path d = scratch_dir("p");
  EXPECT_THROW(export_tables({good, bad}, {d.string(), OutputFormat::csv}), IoError);
  EXPECT_FALSE(fs::exists(d / "good.csv"));
  fs::remove_all(d);

  RunResult empty;
  empty.mode = RunMode::propagate;
  empty.record = EvolutionRecord{};
  EXPECT_THROW(result_tables(empty, Units{}), IoError);
}

TEST(Export, CsvFormatting) {
  Table t{"t", {"a", "b"}, {{0.5, std::string("x")}, {1.0 / 3.0, std::string("")}}};
  EXPECT_EQ(to_csv(t), "a,b\n0.5,x\n0.333333333,\n");
}

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

#include "dlmem/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "dlmem/errors.hpp"
#include "json.hpp"

namespace dlmem {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format("%.9g", v);
}

double si_velocity(double v, const Units& u) { return v * u.length_m / u.tau_s; }

void curve_metrics(const std::vector<double>& z, const std::vector<double>& i1, const std::vector<double>& i2,
                   const std::vector<double>& phase, Metrics& m) {
  m["i1_min"] = *std::min_element(i1.begin(), i1.end());
  m["i1_max"] = *std::max_element(i1.begin(), i1.end());
  m["i1_end"] = i1.back();
  m["i2_end"] = i2.back();
  m["phase_end"] = phase.back();
  m["period_L"] = estimate_period(z, i1);
}

// Parabolic refinement of an interior extremum at index k.
double refine(const std::vector<double>& z, const std::vector<double>& y, std::size_t k) {
  const double a = y[k - 1], b = y[k], c = y[k + 1];
  const double denom = a - 2.0 * b + c;
  if (denom == 0.0) return z[k];
  const double shift = 0.5 * (a - c) / denom;
  return z[k] + shift * (z[k + 1] - z[k]);
}

std::optional<OscillationRate> try_rate(const MediumParams& m, const CouplingDrive& d) {
  try {
    return oscillation_rate(m, d);
  } catch (const SingularityError&) {
    return std::nullopt;
  }
}

RunResult run_analytic(const ExperimentConfig& c) {
  RunResult r;
  r.mode = RunMode::analytic;
  r.warnings = validate(c.medium, c.coupling, c.probe);
  r.curves = analytic_curves(c);
  const AnalyticCurve& first = r.curves.front();
  curve_metrics(first.z, first.i1, first.i2, first.phase12, r.metrics);
  std::optional<OscillationRate> rate = try_rate(c.medium, c.coupling);
  const cplx alpha = c.analytic.alpha ? *c.analytic.alpha : (rate ? rate->alpha : cplx{kNaN, kNaN});
  const double period = alpha.real() != 0.0 ? 2.0 * kPi / std::abs(alpha.real()) : kNaN;
  r.metrics["period_L"] = period;
  r.summary = format("analytic: alpha*L = %.6g%+.6gi, period = %.6g L, %zu curve(s)", alpha.real(), alpha.imag(),
                     period, r.curves.size());
  if (rate) {
    r.summary += format(", v_a = %.6g L/tau (%.4g m/s)", rate->v_a(), si_velocity(rate->v_a(), c.units));
  }
  return r;
}

RunResult run_propagate(const ExperimentConfig& c, bool keep_record) {
  RunResult r;
  r.mode = RunMode::propagate;
  r.warnings = validate(c.medium, c.coupling, c.probe);
  const SpaceTimeGrid grid = c.resolved_grid();
  IntegratorConfig cfg = c.integrator;
  if (!keep_record) cfg.store_stride_z = cfg.store_stride_t = std::numeric_limits<std::size_t>::max() / 2;
  EvolutionRecord rec = simulate(c.medium, c.coupling, c.probe, grid, cfg);

  std::vector<double> z, i1, i2, phase;
  for (const PeakSample& s : rec.peaks) {
    z.push_back(s.z);
    i1.push_back(s.i1);
    i2.push_back(s.i2);
    phase.push_back(s.phase12);
  }
  curve_metrics(z, i1, i2, phase, r.metrics);
  const double delay = rec.peaks.back().t_peak - rec.peaks.front().t_peak;
  r.metrics["delay_tau"] = delay;
  r.metrics["velocity_L_per_tau"] = delay > 0.0 ? grid.z_max / delay : kNaN;
  const double e_in = rec.peaks.front().energy;
  r.metrics["energy_ratio"] = e_in > 0.0 ? rec.peaks.back().energy / e_in : kNaN;
  const std::optional<OscillationRate> rate = try_rate(c.medium, c.coupling);
  r.metrics["period_analytic_L"] = rate && rate->alpha.real() != 0.0 ? 2.0 * kPi / std::abs(rate->alpha.real()) : kNaN;
  r.metrics["delay_analytic_tau"] = rate ? grid.z_max * rate->inv_va : kNaN;

  const double period = r.metrics["period_L"];
  r.summary = "propagate: ";
  r.summary += std::isnan(period) ? std::string("no spatial oscillation") : format("period = %.4g L", period);
  r.summary += format(" (analytic %.4g L), peak delay = %.4g tau (analytic %.4g tau)", r.metrics["period_analytic_L"],
                      delay, r.metrics["delay_analytic_tau"]);
  if (delay > 0.0) {
    r.summary += format(", v = %.4g L/tau (%.4g m/s)", grid.z_max / delay, si_velocity(grid.z_max / delay, c.units));
  }
  r.summary += format(", energy out/in = %.6f", r.metrics["energy_ratio"]);
  if (keep_record) r.record = std::move(rec);
  return r;
}

RunResult run_memory_mode(const ExperimentConfig& c, bool keep_record) {
  RunResult r;
  r.mode = RunMode::memory;
  r.warnings = validate(c.medium, c.coupling, c.probe);
  IntegratorConfig cfg = c.integrator;
  if (!keep_record) cfg.store_stride_z = cfg.store_stride_t = std::numeric_limits<std::size_t>::max() / 2;
  MemoryRun run = run_memory(c.medium, c.coupling, c.probe, c.resolved_grid(), cfg, c.windows);
  const MemoryMetrics& m = run.metrics;
  r.metrics = {{"eta_abs", m.eta_abs},   {"eta_ret", m.eta_ret},     {"eta", m.eta},
               {"fidelity", m.fidelity}, {"phase_in", m.phase_in}, {"phase_out", m.phase_out},
               {"storage_time", m.storage_time}};
  r.summary = format("memory: eta_abs = %.4f, eta_ret = %.4f, eta = %.4f, F_c = %.4f, phase in/out = %.4f/%.4f rad, "
                     "storage %.4g tau",
                     m.eta_abs, m.eta_ret, m.eta, m.fidelity, m.phase_in, m.phase_out, m.storage_time);
  r.memory = m;
  if (keep_record) r.record = std::move(run.record);
  return r;
}

std::size_t thread_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw ConfigError("SIM_THREADS must be a positive integer");
    n = static_cast<std::size_t>(v);
  }
  return std::min(n, std::max<std::size_t>(jobs, 1));
}

void write_cell(std::ostream& out, const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) {
    out << number(*v);
    return;
  }
  const std::string& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char ch : s) out << (ch == '"' ? "\"\"" : std::string(1, ch));
  out << '"';
}

nlohmann::ordered_json json_value(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

class OutputGuard {
 public:
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }
  void write(const std::filesystem::path& path, const std::string& text) {
    written_.push_back(path.string());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
  }
  std::vector<std::string> commit() {
    committed_ = true;
    return written_;
  }

 private:
  std::vector<std::string> written_;
  bool committed_ = false;
};

}  // namespace

std::vector<AnalyticCurve> analytic_curves(const ExperimentConfig& c) {
  OscillationRate rate{};
  if (c.analytic.alpha) {
    if (std::optional<OscillationRate> r = try_rate(c.medium, c.coupling)) rate = *r;
    rate.alpha = *c.analytic.alpha;
  } else {
    rate = oscillation_rate(c.medium, c.coupling);
  }
  std::vector<CurveSpec> specs = c.analytic.curves;
  if (specs.empty()) specs.push_back({"", c.probe.input_fraction1(), c.coupling.phase12(), c.probe.varphi12});
  double amp = std::hypot(c.probe.amp1, c.probe.amp2);
  if (amp == 0.0) amp = 1.0;

  std::vector<AnalyticCurve> curves;
  for (const CurveSpec& spec : specs) {
    ProbeInput p = c.probe;
    p.amp1 = amp * std::sqrt(spec.i1);
    p.amp2 = amp * std::sqrt(1.0 - spec.i1);
    p.varphi12 = spec.varphi12;
    CouplingDrive d = c.coupling;
    d.phi1 = spec.phi12;
    d.phi2 = 0.0;
    AnalyticCurve curve;
    curve.label = spec.label;
    for (std::size_t k = 0; k < c.analytic.samples; ++k) {
      const double z = c.grid.z_max * static_cast<double>(k) / static_cast<double>(c.analytic.samples - 1);
      const auto [i1, i2] = intensity_profile(p, d, rate, z);
      double phase = kNaN;
      try {
        phase = phase_profile(p, d, rate, z);
      } catch (const SingularityError&) {
      }
      curve.z.push_back(z);
      curve.i1.push_back(i1);
      curve.i2.push_back(i2);
      curve.phase12.push_back(phase);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

double estimate_period(const std::vector<double>& z, const std::vector<double>& y, double min_swing) {
  if (y.size() < 3) return kNaN;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi - *lo <= min_swing) return kNaN;
  std::vector<double> maxima, minima;
  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    if (y[k] > y[k - 1] && y[k] >= y[k + 1]) maxima.push_back(refine(z, y, k));
    if (y[k] < y[k - 1] && y[k] <= y[k + 1]) minima.push_back(refine(z, y, k));
  }
  const std::vector<double>& ext = maxima.size() >= minima.size() ? maxima : minima;
  if (ext.size() >= 2) return (ext.back() - ext.front()) / static_cast<double>(ext.size() - 1);
  if (maxima.size() == 1 && minima.size() == 1) return 2.0 * std::abs(maxima[0] - minima[0]);
  return kNaN;
}

std::vector<std::string> metric_names(RunMode mode) {
  switch (mode) {
    case RunMode::analytic:
      return {"i1_min", "i1_max", "i1_end", "i2_end", "phase_end", "period_L"};
    case RunMode::propagate:
      return {"i1_min",   "i1_max",    "i1_end",       "i2_end",           "phase_end",         "period_L",
              "delay_tau", "velocity_L_per_tau", "energy_ratio", "period_analytic_L", "delay_analytic_tau"};
    case RunMode::memory:
      return {"eta_abs", "eta_ret", "eta", "fidelity", "phase_in", "phase_out", "storage_time"};
    default:
      return {};
  }
}

RunResult run_experiment(const ExperimentConfig& c, bool keep_record) {
  c.check();
  switch (c.mode) {
    case RunMode::analytic: return run_analytic(c);
    case RunMode::propagate: return run_propagate(c, keep_record);
    case RunMode::memory: return run_memory_mode(c, keep_record);
    default: throw ConfigError("run_experiment handles analytic, propagate and memory modes; got " + to_string(c.mode));
  }
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& c) {
  const RunMode base = (c.mode == RunMode::sweep || c.mode == RunMode::converge) ? c.sweep.base : c.mode;
  if (c.sweep.param.empty()) throw ConfigError("sweep needs a parameter path");
  if (c.sweep.values.empty()) throw ConfigError("sweep needs at least one value");
  if (c.sweep.metrics.empty()) throw ConfigError("sweep needs at least one metric to tabulate");
  const std::vector<std::string> known = metric_names(base);
  for (const std::string& name : c.sweep.metrics) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError("metric '" + name + "' is not produced in " + to_string(base) + " mode");
    }
  }
  {
    ExperimentConfig probe = c;
    set_parameter(probe, c.sweep.param, c.sweep.values.front());
  }

  std::vector<SweepRow> rows(c.sweep.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      SweepRow& row = rows[k];
      row.value = c.sweep.values[k];
      try {
        ExperimentConfig rc = c;
        rc.mode = base;
        rc.analytic.curves.clear();
        set_parameter(rc, c.sweep.param, row.value);
        const RunResult r = run_experiment(rc, false);
        for (const std::string& name : c.sweep.metrics) row.metrics[name] = r.metrics.at(name);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const std::size_t n = thread_count(rows.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

ConvergenceReport run_convergence(const ExperimentConfig& c) {
  c.check();
  return convergence_study(c.medium, c.coupling, c.probe, c.resolved_grid(), c.integrator, c.converge_levels);
}

std::vector<Table> result_tables(const RunResult& r, const Units&) {
  std::vector<Table> tables;
  if (r.mode == RunMode::analytic) {
    for (std::size_t k = 0; k < r.curves.size(); ++k) {
      const AnalyticCurve& curve = r.curves[k];
      Table t;
      t.name = "intensity_profile";
      if (r.curves.size() > 1) t.name += "_" + (curve.label.empty() ? std::to_string(k + 1) : curve.label);
      t.columns = {"z_over_L", "I1", "I2", "Phi12_rad"};
      for (std::size_t i = 0; i < curve.z.size(); ++i) {
        t.rows.push_back({curve.z[i], curve.i1[i], curve.i2[i], curve.phase12[i]});
      }
      tables.push_back(std::move(t));
    }
    return tables;
  }
  if (!r.record || r.record->empty()) throw IoError("empty evolution record; nothing to export");
  const EvolutionRecord& rec = *r.record;
  const double norm = rec.input_peak_intensity > 0.0 ? rec.input_peak_intensity : 1.0;
  Table evo;
  evo.name = "evolution";
  evo.columns = {"z_over_L", "t_over_tau", "I1", "I2", "e1_re", "e1_im", "e2_re", "e2_im", "g_re", "g_im"};
  for (std::size_t i = 0; i < rec.z_index.size(); ++i) {
    const double z = rec.grid.z(rec.z_index[i]);
    for (std::size_t j = 0; j < rec.t_index.size(); ++j) {
      const cplx e1 = rec.e1(i, j), e2 = rec.e2(i, j), g = rec.g(i, j);
      evo.rows.push_back({z, rec.lab_time(rec.grid.t(rec.t_index[j]), z), std::norm(e1) / norm, std::norm(e2) / norm,
                          e1.real(), e1.imag(), e2.real(), e2.imag(), g.real(), g.imag()});
    }
  }
  tables.push_back(std::move(evo));
  Table peaks;
  peaks.name = "peaks";
  peaks.columns = {"z_over_L", "t_peak_tau", "I1", "I2", "Phi12_rad", "energy"};
  for (const PeakSample& s : rec.peaks) peaks.rows.push_back({s.z, s.t_peak, s.i1, s.i2, s.phase12, s.energy});
  tables.push_back(std::move(peaks));
  return tables;
}

Table sweep_table(const ExperimentConfig& c, const std::vector<SweepRow>& rows) {
  Table t;
  t.name = "sweep";
  t.columns.push_back(c.sweep.param);
  for (const std::string& m : c.sweep.metrics) t.columns.push_back(m);
  t.columns.push_back("error");
  for (const SweepRow& row : rows) {
    std::vector<Cell> cells{row.value};
    for (const std::string& m : c.sweep.metrics) {
      const auto it = row.metrics.find(m);
      cells.emplace_back(it == row.metrics.end() ? kNaN : it->second);
    }
    cells.emplace_back(row.error);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

Table convergence_table(const ConvergenceReport& report) {
  Table t;
  t.name = "convergence";
  t.columns = {"direction", "nz", "nt", "step", "diff_norm", "ratio"};
  auto add = [&t](const char* dir, const std::vector<RefinementLevel>& levels) {
    for (const RefinementLevel& l : levels) {
      t.rows.push_back({std::string(dir), static_cast<double>(l.nz), static_cast<double>(l.nt), l.step, l.diff_norm,
                        l.ratio});
    }
  };
  add("z", report.z_levels);
  add("t", report.t_levels);
  return t;
}

std::string to_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t k = 0; k < t.columns.size(); ++k) {
    if (k) out << ',';
    write_cell(out, t.columns[k]);
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      write_cell(out, row[k]);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> export_tables(const std::vector<Table>& tables, const OutputSettings& out,
                                       const std::optional<MemoryMetrics>& metrics) {
  const std::filesystem::path dir(out.dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out.dir + "': " + ec.message());

  OutputGuard guard;
  for (const Table& t : tables) {
    if (out.format == OutputFormat::csv) {
      guard.write(dir / (t.name + ".csv"), to_csv(t));
      continue;
    }
    nlohmann::ordered_json j;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json jr = nlohmann::ordered_json::array();
      for (const Cell& cell : row) {
        if (const double* v = std::get_if<double>(&cell)) {
          jr.push_back(json_value(*v));
        } else {
          jr.push_back(std::get<std::string>(cell));
        }
      }
      j["rows"].push_back(std::move(jr));
    }
    guard.write(dir / (t.name + ".json"), j.dump(1) + "\n");
  }
  if (metrics) {
    nlohmann::ordered_json j;
    j["eta_abs"] = json_value(metrics->eta_abs);
    j["eta_ret"] = json_value(metrics->eta_ret);
    j["eta"] = json_value(metrics->eta);
    j["fidelity"] = json_value(metrics->fidelity);
    j["phase_in_rad"] = json_value(metrics->phase_in);
    j["phase_out_rad"] = json_value(metrics->phase_out);
    j["storage_time_tau"] = json_value(metrics->storage_time);
    guard.write(dir / "metrics.json", j.dump(2) + "\n");
  }
  return guard.commit();
}

}  // namespace dlmem

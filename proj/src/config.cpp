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

#include "dlmem/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <regex>
#include <sstream>

#include "dlmem/errors.hpp"

namespace dlmem {
namespace {

struct RealField {
  const char* section;
  const char* key;
  std::function<double&(ExperimentConfig&)> ref;
};

struct CountField {
  const char* section;
  const char* key;
  std::function<std::size_t&(ExperimentConfig&)> ref;
};

const std::vector<RealField>& real_fields() {
  static const std::vector<RealField> fields = {
      {"units", "tau_s", [](ExperimentConfig& c) -> double& { return c.units.tau_s; }},
      {"units", "length_m", [](ExperimentConfig& c) -> double& { return c.units.length_m; }},
      {"medium", "kappa12_tau_L", [](ExperimentConfig& c) -> double& { return c.medium.kappa12; }},
      {"medium", "gamma2_tau", [](ExperimentConfig& c) -> double& { return c.medium.gamma2; }},
      {"medium", "gamma13_tau", [](ExperimentConfig& c) -> double& { return c.medium.gamma13; }},
      {"medium", "delta_p1_tau", [](ExperimentConfig& c) -> double& { return c.medium.delta_p1; }},
      {"medium", "delta_p2_tau", [](ExperimentConfig& c) -> double& { return c.medium.delta_p2; }},
      {"medium", "c_light_L_per_tau", [](ExperimentConfig& c) -> double& { return c.medium.c_light; }},
      {"coupling", "amp1_tau", [](ExperimentConfig& c) -> double& { return c.coupling.amp1; }},
      {"coupling", "amp2_tau", [](ExperimentConfig& c) -> double& { return c.coupling.amp2; }},
      {"coupling", "phi1_rad", [](ExperimentConfig& c) -> double& { return c.coupling.phi1; }},
      {"coupling", "phi2_rad", [](ExperimentConfig& c) -> double& { return c.coupling.phi2; }},
      {"coupling", "sigma_per_tau", [](ExperimentConfig& c) -> double& { return c.coupling.schedule.sigma; }},
      {"coupling", "t1_tau", [](ExperimentConfig& c) -> double& { return c.coupling.schedule.t1; }},
      {"coupling", "t2_tau", [](ExperimentConfig& c) -> double& { return c.coupling.schedule.t2; }},
      {"probe", "amp1_tau", [](ExperimentConfig& c) -> double& { return c.probe.amp1; }},
      {"probe", "amp2_tau", [](ExperimentConfig& c) -> double& { return c.probe.amp2; }},
      {"probe", "varphi12_rad", [](ExperimentConfig& c) -> double& { return c.probe.varphi12; }},
      {"probe", "t_center_tau", [](ExperimentConfig& c) -> double& { return c.probe.t_center; }},
      {"probe", "width_tau", [](ExperimentConfig& c) -> double& { return c.probe.width; }},
      {"grid", "z_max_L", [](ExperimentConfig& c) -> double& { return c.grid.z_max; }},
      {"grid", "t_max_tau", [](ExperimentConfig& c) -> double& { return c.grid.t_max; }},
      {"memory", "t0_tau", [](ExperimentConfig& c) -> double& { return c.windows.t0; }},
      {"memory", "t_split_tau", [](ExperimentConfig& c) -> double& { return c.windows.t_split; }},
      {"memory", "t_f_tau", [](ExperimentConfig& c) -> double& { return c.windows.t_f; }},
  };
  return fields;
}

const std::vector<CountField>& count_fields() {
  static const std::vector<CountField> fields = {
      {"grid", "nz", [](ExperimentConfig& c) -> std::size_t& { return c.grid.nz; }},
      {"grid", "store_stride_z", [](ExperimentConfig& c) -> std::size_t& { return c.integrator.store_stride_z; }},
      {"grid", "store_stride_t", [](ExperimentConfig& c) -> std::size_t& { return c.integrator.store_stride_t; }},
      {"analytic", "samples", [](ExperimentConfig& c) -> std::size_t& { return c.analytic.samples; }},
      {"converge", "levels", [](ExperimentConfig& c) -> std::size_t& { return c.converge_levels; }},
  };
  return fields;
}

const RealField* find_real(const std::string& section, const std::string& key) {
  for (const auto& f : real_fields()) {
    if (section == f.section && key == f.key) return &f;
  }
  return nullptr;
}

const CountField* find_count(const std::string& section, const std::string& key) {
  for (const auto& f : count_fields()) {
    if (section == f.section && key == f.key) return &f;
  }
  return nullptr;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& n, const std::string& what) const {
    const YAML::Mark mark = n.Mark();
    std::string where = source_;
    if (!mark.is_null()) where += ":" + std::to_string(mark.line + 1);
    throw ConfigError(where + ": " + what);
  }

  std::string text(const YAML::Node& n, const std::string& name) const {
    if (!n.IsScalar()) fail(n, name + " must be a scalar");
    return n.Scalar();
  }

  // Numbers, .inf, and multiples of pi such as "pi/4", "-2*pi", "0.5pi".
  double real(const YAML::Node& n, const std::string& name) const {
    const std::string s = text(n, name);
    double v = 0.0;
    if (YAML::convert<double>::decode(n, v)) return v;
    static const std::regex pi_re(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
    static const std::regex sign_re(R"(^\s*([+-])\s*pi)");
    std::smatch m;
    if (std::regex_match(s, m, pi_re)) {
      double coeff = 1.0;
      if (m[1].matched) {
        coeff = std::stod(m[1].str());
      } else {
        std::smatch sm;
        if (std::regex_search(s, sm, sign_re) && sm[1].str() == "-") coeff = -1.0;
      }
      const double denom = m[2].matched ? std::stod(m[2].str()) : 1.0;
      if (denom == 0.0) fail(n, name + ": division by zero");
      return coeff * kPi / denom;
    }
    fail(n, name + " must be a number, got '" + s + "'");
  }

  std::size_t count(const YAML::Node& n, const std::string& name) const {
    const double v = real(n, name);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) fail(n, name + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  bool flag(const YAML::Node& n, const std::string& name) const {
    bool b = false;
    if (!n.IsScalar() || !YAML::convert<bool>::decode(n, b)) fail(n, name + " must be true or false");
    return b;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

RunMode parse_mode(const std::string& s, const Reader& r, const YAML::Node& n) {
  if (s == "analytic") return RunMode::analytic;
  if (s == "propagate") return RunMode::propagate;
  if (s == "memory") return RunMode::memory;
  if (s == "sweep") return RunMode::sweep;
  if (s == "converge") return RunMode::converge;
  r.fail(n, "unknown mode '" + s + "' (analytic, propagate, memory, sweep, converge)");
}

ZStepper parse_stepper(const std::string& s, const Reader& r, const YAML::Node& n) {
  if (s == "euler") return ZStepper::euler;
  if (s == "predictor_corrector") return ZStepper::predictor_corrector;
  if (s == "trapezoidal") return ZStepper::trapezoidal;
  r.fail(n, "unknown z_stepper '" + s + "' (euler, predictor_corrector, trapezoidal)");
}

void apply_curves(ExperimentConfig& c, const YAML::Node& list, const Reader& r) {
  if (!list.IsSequence()) r.fail(list, "analytic.curves must be a list");
  c.analytic.curves.clear();
  for (const auto& item : list) {
    if (!item.IsMap()) r.fail(item, "each curve must be a mapping");
    CurveSpec curve;
    for (const auto& kv : item) {
      const std::string key = kv.first.as<std::string>();
      if (key == "label") {
        curve.label = r.text(kv.second, "label");
      } else if (key == "i1") {
        curve.i1 = r.real(kv.second, "i1");
      } else if (key == "phi12_rad") {
        curve.phi12 = r.real(kv.second, "phi12_rad");
      } else if (key == "varphi12_rad") {
        curve.varphi12 = r.real(kv.second, "varphi12_rad");
      } else {
        r.fail(kv.first, "unknown key '" + key + "' in analytic.curves");
      }
    }
    c.analytic.curves.push_back(curve);
  }
}

void apply_section(ExperimentConfig& c, const std::string& section, const YAML::Node& body, const Reader& r) {
  if (!body.IsMap()) r.fail(body, "section [" + section + "] must be a mapping");
  for (const auto& kv : body) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    const std::string name = section + "." + key;
    if (const RealField* f = find_real(section, key)) {
      f->ref(c) = r.real(v, name);
    } else if (const CountField* f = find_count(section, key)) {
      f->ref(c) = r.count(v, name);
    } else if (section == "coupling" && key == "schedule") {
      const std::string s = r.text(v, name);
      if (s == "constant") {
        c.coupling.schedule.kind = ScheduleKind::constant;
      } else if (s == "tanh_gate") {
        c.coupling.schedule.kind = ScheduleKind::tanh_gate;
      } else {
        r.fail(v, "unknown schedule '" + s + "' (constant, tanh_gate)");
      }
    } else if (section == "grid" && key == "nt") {
      if (v.IsScalar() && v.Scalar() == "auto") {
        c.auto_nt = true;
      } else {
        c.grid.nt = r.count(v, name);
        c.auto_nt = false;
      }
    } else if (section == "grid" && key == "z_stepper") {
      c.integrator.z_stepper = parse_stepper(r.text(v, name), r, v);
    } else if (section == "grid" && key == "check_truncation") {
      c.integrator.check_truncation = r.flag(v, name);
    } else if (section == "analytic" && key == "alpha_re_L") {
      c.analytic.alpha = cplx(r.real(v, name), c.analytic.alpha.value_or(cplx{}).imag());
    } else if (section == "analytic" && key == "alpha_im_L") {
      c.analytic.alpha = cplx(c.analytic.alpha.value_or(cplx{}).real(), r.real(v, name));
    } else if (section == "analytic" && key == "curves") {
      apply_curves(c, v, r);
    } else if (section == "output" && key == "dir") {
      c.output.dir = r.text(v, name);
    } else if (section == "output" && key == "format") {
      const std::string s = r.text(v, name);
      if (s == "csv") {
        c.output.format = OutputFormat::csv;
      } else if (s == "json") {
        c.output.format = OutputFormat::json;
      } else {
        r.fail(v, "unknown format '" + s + "' (csv, json)");
      }
    } else if (section == "sweep" && key == "base") {
      c.sweep.base = parse_mode(r.text(v, name), r, v);
    } else if (section == "sweep" && key == "param") {
      c.sweep.param = r.text(v, name);
    } else if (section == "sweep" && key == "values") {
      if (!v.IsSequence()) r.fail(v, name + " must be a list");
      c.sweep.values.clear();
      for (const auto& x : v) c.sweep.values.push_back(r.real(x, name));
    } else if (section == "sweep" && key == "metrics") {
      if (!v.IsSequence()) r.fail(v, name + " must be a list");
      c.sweep.metrics.clear();
      for (const auto& x : v) c.sweep.metrics.push_back(r.text(x, name));
    } else {
      r.fail(kv.first, "unknown key '" + key + "' in section [" + section + "]");
    }
  }
}

const std::vector<std::string> kSections = {"units", "medium", "coupling", "probe", "grid",
                                            "memory", "analytic", "output", "sweep", "converge"};

void apply_document(ExperimentConfig& c, const YAML::Node& root, const Reader& r) {
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (key == "preset") continue;
    if (key == "mode") {
      c.mode = parse_mode(r.text(kv.second, "mode"), r, kv.second);
    } else if (std::find(kSections.begin(), kSections.end(), key) != kSections.end()) {
      apply_section(c, key, kv.second, r);
    } else {
      r.fail(kv.first, "unknown top-level key '" + key + "'");
    }
  }
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  if (std::isnan(v)) return ".nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.grid = {401, 2, 1.0, 10.0};
  return c;
}

void fig_medium(ExperimentConfig& c, double kappa) {
  c.medium.kappa12 = kappa;
  c.medium.gamma2 = 0.16;
  c.medium.gamma13 = 1.6e-5;
  c.medium.delta_p1 = 0.0;
  c.medium.delta_p2 = 160.0;
  c.coupling.amp1 = 18.0;
  c.coupling.amp2 = 18.0;
  c.probe.t_center = 3.5;
  c.probe.width = 1.0;
}

void propagation_preset(ExperimentConfig& c, double kappa, std::size_t nz, double t_max) {
  c.mode = RunMode::propagate;
  fig_medium(c, kappa);
  c.probe.amp1 = 1.3e-3;
  c.probe.amp2 = std::sqrt(0.3 / 0.7) * 1.3e-3;
  c.probe.varphi12 = kPi / 4;
  c.grid.nz = nz;
  c.grid.t_max = t_max;
  c.integrator.store_stride_z = 10;
  c.integrator.store_stride_t = 50;
}

void memory_preset(ExperimentConfig& c, double kappa, std::size_t nz) {
  c.mode = RunMode::memory;
  fig_medium(c, kappa);
  c.coupling.schedule = {ScheduleKind::tanh_gate, 0.5, 2.0 * 3.5, 6.0 * 3.5};
  c.probe.amp1 = 1.3e-3;
  c.probe.amp2 = 1.3e-3;
  c.probe.varphi12 = 0.0;
  c.grid.nz = nz;
  c.grid.t_max = 40.0;
  c.windows = {0.0, 15.0, 30.0};
  c.integrator.store_stride_z = 10;
  c.integrator.store_stride_t = 100;
}

// The probe section mirrors the first curve.
void analytic_preset(ExperimentConfig& c, std::vector<CurveSpec> curves) {
  c.mode = RunMode::analytic;
  fig_medium(c, 500.0);
  const double amp = 1.3e-3 / std::sqrt(0.7);
  c.probe.amp1 = amp * std::sqrt(curves.front().i1);
  c.probe.amp2 = amp * std::sqrt(1.0 - curves.front().i1);
  c.probe.varphi12 = curves.front().varphi12;
  c.coupling.phi1 = curves.front().phi12;
  c.analytic.alpha = cplx(2.0 * kPi, 0.0);
  c.analytic.curves = std::move(curves);
}

}  // namespace

SpaceTimeGrid ExperimentConfig::resolved_grid() const {
  SpaceTimeGrid g = grid;
  if (auto_nt) g.nt = min_time_samples(medium, coupling, grid.t_max);
  return g;
}

void ExperimentConfig::check() const {
  if (!(units.tau_s > 0.0) || !(units.length_m > 0.0)) throw ParameterError("units", "tau_s and length_m must be > 0");
  medium.check();
  coupling.check();
  probe.check();
  resolved_grid().check();
  windows.check();
  if (analytic.samples < 2) throw ParameterError("analytic.samples", "need at least 2 samples");
  for (const CurveSpec& curve : analytic.curves) {
    if (!(curve.i1 >= 0.0 && curve.i1 <= 1.0)) throw ParameterError("analytic.curves.i1", "must lie in [0, 1]");
  }
  if (converge_levels < 2) throw ParameterError("converge.levels", "need at least 2 refinement levels");
  if (sweep.base == RunMode::sweep || sweep.base == RunMode::converge) {
    throw ConfigError("sweep.base must be analytic, propagate or memory");
  }
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  const auto& ma = a.medium;
  const auto& mb = b.medium;
  const auto& ca = a.coupling;
  const auto& cb = b.coupling;
  const auto& pa = a.probe;
  const auto& pb = b.probe;
  return a.mode == b.mode && a.preset == b.preset && a.units == b.units && same(ma.kappa12, mb.kappa12) &&
         same(ma.gamma2, mb.gamma2) && same(ma.gamma13, mb.gamma13) && same(ma.delta_p1, mb.delta_p1) &&
         same(ma.delta_p2, mb.delta_p2) && same(ma.c_light, mb.c_light) && ma.length == mb.length &&
         ma.tau == mb.tau && ca.amp1 == cb.amp1 && ca.amp2 == cb.amp2 && ca.phi1 == cb.phi1 && ca.phi2 == cb.phi2 &&
         ca.schedule.kind == cb.schedule.kind && ca.schedule.sigma == cb.schedule.sigma &&
         ca.schedule.t1 == cb.schedule.t1 && ca.schedule.t2 == cb.schedule.t2 && pa.amp1 == pb.amp1 &&
         pa.amp2 == pb.amp2 && pa.varphi12 == pb.varphi12 && pa.t_center == pb.t_center && pa.width == pb.width &&
         a.grid.nz == b.grid.nz && (a.auto_nt || a.grid.nt == b.grid.nt) && a.grid.z_max == b.grid.z_max &&
         a.grid.t_max == b.grid.t_max && a.auto_nt == b.auto_nt &&
         a.integrator.z_stepper == b.integrator.z_stepper &&
         a.integrator.store_stride_z == b.integrator.store_stride_z &&
         a.integrator.store_stride_t == b.integrator.store_stride_t &&
         a.integrator.check_truncation == b.integrator.check_truncation && a.windows.t0 == b.windows.t0 &&
         a.windows.t_split == b.windows.t_split && a.windows.t_f == b.windows.t_f && a.analytic == b.analytic &&
         a.output == b.output && a.sweep == b.sweep && a.converge_levels == b.converge_levels;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig2", "fig3", "fig4", "fig4_calibrated", "fig5", "fig5_calibrated"};
  return names;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c = base_config();
  if (name == "fig2") {
    analytic_preset(c, {{"solid", 0.99, 0.0, kPi / 4}, {"dashed", 0.85, 0.0, kPi / 4}, {"dotted", 0.70, 0.0, kPi / 4}});
  } else if (name == "fig3") {
    analytic_preset(c, {{"solid", 0.5, 0.0, kPi / 3}, {"dashed", 0.5, kPi / 2, kPi / 3}, {"dotted", 0.5, 0.0, 0.0}});
  } else if (name == "fig4") {
    propagation_preset(c, 500.0, 801, 10.0);
  } else if (name == "fig4_calibrated") {
    propagation_preset(c, 5027.0, 1001, 20.0);
  } else if (name == "fig5") {
    memory_preset(c, 500.0, 801);
  } else if (name == "fig5_calibrated") {
    memory_preset(c, 5027.0, 1001);
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (" + known + ")");
  }
  c.preset = name;
  return c;
}

ExperimentConfig parse_config(const std::string& text, const std::string& preset_override, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": parse error: " + e.msg);
  }
  const Reader reader(source);
  if (!root.IsNull() && !root.IsMap()) reader.fail(root, "config must be a mapping of sections");

  std::string preset_name = preset_override;
  if (preset_name.empty() && root["preset"]) preset_name = reader.text(root["preset"], "preset");
  ExperimentConfig c = preset_name.empty() ? base_config() : preset(preset_name);
  try {
    if (root.IsMap()) apply_document(c, root, reader);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  c.check();
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::string& preset_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), preset_override, path);
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::analytic: return "analytic";
    case RunMode::propagate: return "propagate";
    case RunMode::memory: return "memory";
    case RunMode::sweep: return "sweep";
    case RunMode::converge: return "converge";
  }
  return "";
}

std::string to_string(ZStepper s) {
  switch (s) {
    case ZStepper::euler: return "euler";
    case ZStepper::predictor_corrector: return "predictor_corrector";
    case ZStepper::trapezoidal: return "trapezoidal";
  }
  return "";
}

std::string write_config(const ExperimentConfig& c) {
  std::ostringstream out;
  if (!c.preset.empty()) out << "preset: " << c.preset << "\n";
  out << "mode: " << to_string(c.mode) << "\n";
  ExperimentConfig mc = c;
  for (const std::string& section : kSections) {
    std::ostringstream body;
    for (const auto& f : real_fields()) {
      if (section == f.section) body << "  " << f.key << ": " << fmt(f.ref(mc)) << "\n";
    }
    for (const auto& f : count_fields()) {
      if (section == f.section) body << "  " << f.key << ": " << f.ref(mc) << "\n";
    }
    if (section == "coupling") {
      body << "  schedule: " << (c.coupling.schedule.kind == ScheduleKind::constant ? "constant" : "tanh_gate") << "\n";
    } else if (section == "grid") {
      body << "  nt: " << (c.auto_nt ? std::string("auto") : std::to_string(c.grid.nt)) << "\n";
      body << "  z_stepper: " << to_string(c.integrator.z_stepper) << "\n";
      body << "  check_truncation: " << (c.integrator.check_truncation ? "true" : "false") << "\n";
    } else if (section == "analytic") {
      if (c.analytic.alpha) {
        body << "  alpha_re_L: " << fmt(c.analytic.alpha->real()) << "\n";
        body << "  alpha_im_L: " << fmt(c.analytic.alpha->imag()) << "\n";
      }
      body << "  curves:" << (c.analytic.curves.empty() ? " []" : "") << "\n";
      for (const CurveSpec& curve : c.analytic.curves) {
        body << "    - {label: " << YAML::Dump(YAML::Node(curve.label)) << ", i1: " << fmt(curve.i1)
             << ", phi12_rad: " << fmt(curve.phi12) << ", varphi12_rad: " << fmt(curve.varphi12) << "}\n";
      }
    } else if (section == "output") {
      body << "  dir: " << YAML::Dump(YAML::Node(c.output.dir)) << "\n";
      body << "  format: " << (c.output.format == OutputFormat::csv ? "csv" : "json") << "\n";
    } else if (section == "sweep") {
      body << "  base: " << to_string(c.sweep.base) << "\n";
      body << "  param: " << YAML::Dump(YAML::Node(c.sweep.param)) << "\n";
      body << "  values: [";
      for (std::size_t k = 0; k < c.sweep.values.size(); ++k) body << (k ? ", " : "") << fmt(c.sweep.values[k]);
      body << "]\n  metrics: [";
      for (std::size_t k = 0; k < c.sweep.metrics.size(); ++k) {
        body << (k ? ", " : "") << YAML::Dump(YAML::Node(c.sweep.metrics[k]));
      }
      body << "]\n";
    }
    out << section << ":\n" << body.str();
  }
  return out.str();
}

void set_parameter(ExperimentConfig& c, const std::string& path, double value) {
  const auto dot = path.find('.');
  const std::string section = dot == std::string::npos ? "" : path.substr(0, dot);
  const std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
  if (const RealField* f = find_real(section, key)) {
    f->ref(c) = value;
    return;
  }
  if (const CountField* f = find_count(section, key)) {
    if (!(value >= 0.0) || value != std::floor(value)) throw ConfigError(path + " must be a non-negative integer");
    f->ref(c) = static_cast<std::size_t>(value);
    return;
  }
  if (section == "grid" && key == "nt") {
    if (!(value >= 2.0) || value != std::floor(value)) throw ConfigError("grid.nt must be an integer >= 2");
    c.grid.nt = static_cast<std::size_t>(value);
    c.auto_nt = false;
    return;
  }
  throw ConfigError("'" + path + "' is not a numeric parameter");
}

double parse_real(const std::string& text) {
  const Reader reader("value");
  return reader.real(YAML::Node(text), "'" + text + "'");
}

std::vector<std::string> numeric_parameters() {
  std::vector<std::string> names;
  for (const auto& f : real_fields()) names.push_back(std::string(f.section) + "." + f.key);
  for (const auto& f : count_fields()) names.push_back(std::string(f.section) + "." + f.key);
  names.push_back("grid.nt");
  return names;
}

}  // namespace dlmem

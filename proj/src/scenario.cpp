#include "epm/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "epm/fit.hpp"
#include "json.hpp"

namespace epm {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ScenarioError(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ScenarioError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ScenarioError(where + ": expected a number");
  return j.get<double>();
}

/// A complex number is a plain number or a [re, im] pair.
cplx complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ScenarioError(where + ": expected a number or [re, im]");
}

ComplexPoint complex_point(const json& j, int dim, const std::string& where) {
  if (dim == 1) {
    if (j.is_array() && j.size() == 1) return ComplexPoint(complex_value(j[0], where));
    return ComplexPoint(complex_value(j, where));
  }
  if (!j.is_array() || j.size() != 2) throw ScenarioError(where + ": expected two components");
  return ComplexPoint(complex_value(j[0], where), complex_value(j[1], where));
}

std::array<double, 2> real_pair(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && (j.size() == 1 || j.size() == 2)) {
    std::array<double, 2> out{};
    for (size_t k = 0; k < j.size(); ++k) out[k] = number(j[k], where);
    return out;
  }
  throw ScenarioError(where + ": expected a number or [x, y]");
}

PhysicalParams parse_physics(const json& j) {
  only_keys(j, {"hbar", "mass", "epsilon", "light_speed"}, "physics");
  PhysicalParams p;
  if (j.contains("hbar")) p.hbar = number(j["hbar"], "physics.hbar");
  if (j.contains("mass")) p.mass = number(j["mass"], "physics.mass");
  if (j.contains("epsilon")) p.epsilon = number(j["epsilon"], "physics.epsilon");
  if (j.contains("light_speed")) p.light_speed = number(j["light_speed"], "physics.light_speed");
  return p;
}

DriftConfig parse_drift(const json& j, int dim) {
  only_keys(j, {"kind", "value", "a", "b", "omega"}, "model.drift");
  DriftConfig d;
  d.a = d.b = ComplexPoint::zero(dim);
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    d.kind = DriftConfig::Kind::constant;
    if (j.contains("value")) d.a = complex_point(j["value"], dim, "model.drift.value");
  } else if (kind == "linear" || kind == "oscillating") {
    d.kind = kind == "linear" ? DriftConfig::Kind::linear : DriftConfig::Kind::oscillating;
    if (j.contains("a")) d.a = complex_point(j["a"], dim, "model.drift.a");
    if (j.contains("b")) d.b = complex_point(j["b"], dim, "model.drift.b");
    if (j.contains("omega")) d.omega = number(j["omega"], "model.drift.omega");
  } else if (kind == "field") {
    d.kind = DriftConfig::Kind::field;
  } else {
    throw ScenarioError("model.drift.kind: unknown drift '" + kind + "'");
  }
  return d;
}

ModelSpec parse_model(const json& j) {
  only_keys(j, {"dimension", "orientation", "z0", "drift", "steps", "period"}, "model");
  ModelSpec m;
  if (j.contains("dimension")) m.dimension = j["dimension"].get<int>();
  if (m.dimension != 1 && m.dimension != 2) throw ScenarioError("model.dimension must be 1 or 2");
  if (j.contains("orientation")) {
    try {
      m.orientation = orientation_from_string(j["orientation"].get<std::string>());
    } catch (const std::exception& e) {
      throw ScenarioError(std::string("model.orientation: ") + e.what());
    }
  }
  m.z0 = j.contains("z0") ? complex_point(j["z0"], m.dimension, "model.z0")
                          : ComplexPoint::zero(m.dimension);
  m.drift = j.contains("drift") ? parse_drift(j["drift"], m.dimension) : DriftConfig{};
  if (!j.contains("drift")) m.drift.a = m.drift.b = ComplexPoint::zero(m.dimension);
  if (j.contains("steps")) m.steps = j["steps"].get<long>();
  if (j.contains("period")) m.period = j["period"].get<long>();
  return m;
}

GaussianSpec parse_gaussian(const json& j, const std::string& where) {
  only_keys(j, {"sigma0", "x0", "k0"}, where);
  GaussianSpec g;
  if (j.contains("sigma0")) g.sigma0 = number(j["sigma0"], where + ".sigma0");
  if (j.contains("x0")) g.x0 = real_pair(j["x0"], where + ".x0");
  if (j.contains("k0")) g.k0 = real_pair(j["k0"], where + ".k0");
  return g;
}

FieldSpec parse_field(const json& j) {
  only_keys(j, {"grid", "initial", "potential", "dt", "steps", "stride", "l2_tolerance",
                "norm_tolerance"},
            "field");
  FieldSpec f;
  const json& grid = j.at("grid");
  if (!grid.is_array() || grid.empty()) throw ScenarioError("field.grid: expected axis list");
  for (const auto& a : grid) {
    only_keys(a, {"min", "max", "nodes"}, "field.grid[]");
    f.axes.push_back(Axis{number(a.at("min"), "axis.min"), number(a.at("max"), "axis.max"),
                          a.at("nodes").get<int>()});
  }
  const json& init = j.at("initial");
  only_keys(init, {"kind", "sigma0", "x0", "k0", "k", "first", "second"}, "field.initial");
  const std::string kind = init.value("kind", "gaussian");
  if (kind == "gaussian") {
    f.initial.kind = InitialWaveSpec::Kind::gaussian;
    json g = init;
    g.erase("kind");
    f.initial.first = parse_gaussian(g, "field.initial");
  } else if (kind == "plane_wave") {
    f.initial.kind = InitialWaveSpec::Kind::plane_wave;
    f.initial.k = real_pair(init.at("k"), "field.initial.k");
  } else if (kind == "superposition") {
    f.initial.kind = InitialWaveSpec::Kind::superposition;
    f.initial.first = parse_gaussian(init.at("first"), "field.initial.first");
    f.initial.second = parse_gaussian(init.at("second"), "field.initial.second");
  } else {
    throw ScenarioError("field.initial.kind: unknown wave '" + kind + "'");
  }
  if (j.contains("potential")) {
    const json& p = j["potential"];
    only_keys(p, {"kind", "omega"}, "field.potential");
    const std::string pk = p.value("kind", "free");
    if (pk == "free")
      f.potential.kind = PotentialSpec::Kind::free;
    else if (pk == "harmonic")
      f.potential.kind = PotentialSpec::Kind::harmonic;
    else
      throw ScenarioError("field.potential.kind: unknown potential '" + pk + "'");
    if (p.contains("omega")) f.potential.omega = number(p["omega"], "field.potential.omega");
  }
  if (j.contains("dt")) f.dt = number(j["dt"], "field.dt");
  if (j.contains("steps")) f.steps = j["steps"].get<long>();
  if (j.contains("stride")) f.stride = j["stride"].get<int>();
  if (j.contains("l2_tolerance")) f.l2_tolerance = number(j["l2_tolerance"], "field.l2_tolerance");
  if (j.contains("norm_tolerance"))
    f.norm_tolerance = number(j["norm_tolerance"], "field.norm_tolerance");
  return f;
}

BohmSpec parse_bohm(const json& j) {
  only_keys(j, {"starts", "t_end", "substeps", "tolerance"}, "bohm");
  BohmSpec b;
  for (const auto& s : j.at("starts")) b.starts.push_back(real_pair(s, "bohm.starts[]"));
  if (j.contains("t_end")) b.t_end = number(j["t_end"], "bohm.t_end");
  if (j.contains("substeps")) b.substeps = j["substeps"].get<int>();
  if (j.contains("tolerance")) b.tolerance = number(j["tolerance"], "bohm.tolerance");
  return b;
}

ConvergeSpec parse_converge(const json& j) {
  only_keys(j, {"target", "t_end", "function", "dt_ratio", "expected_slope", "slope_tolerance",
                "p0", "kappa", "domain", "window", "velocity_bound"},
            "converge");
  ConvergeSpec c;
  c.target = j.value("target", c.target);
  if (j.contains("t_end")) c.t_end = number(j["t_end"], "converge.t_end");
  c.function = j.value("function", c.function);
  if (j.contains("dt_ratio")) c.dt_ratio = number(j["dt_ratio"], "converge.dt_ratio");
  if (j.contains("expected_slope"))
    c.expected_slope = number(j["expected_slope"], "converge.expected_slope");
  if (j.contains("slope_tolerance"))
    c.slope_tolerance = number(j["slope_tolerance"], "converge.slope_tolerance");
  if (j.contains("p0")) c.p0 = number(j["p0"], "converge.p0");
  if (j.contains("kappa")) c.kappa = number(j["kappa"], "converge.kappa");
  if (j.contains("domain")) c.domain = real_pair(j["domain"], "converge.domain");
  if (j.contains("window")) c.window = number(j["window"], "converge.window");
  if (j.contains("velocity_bound"))
    c.velocity_bound = number(j["velocity_bound"], "converge.velocity_bound");
  return c;
}

}  // namespace

void Scenario::validate() const {
  try {
    if (name.empty()) throw ScenarioError("scenario name missing");
    physics.validate();
    if (model.steps < 1) throw ScenarioError("model.steps must be >= 1");
    if (model.period < 0) throw ScenarioError("model.period must be >= 0");
    if (field) {
      make_grid(*field);
      if ((int)field->axes.size() != model.dimension)
        throw ScenarioError("field grid dimension differs from model.dimension");
      if (!(field->dt > 0.0) || field->steps < 1 || field->stride < 1)
        throw ScenarioError("field: dt > 0, steps >= 1 and stride >= 1 required");
    }
    if (bohm) {
      if (!field) throw ScenarioError("bohm section needs a field section");
      if (bohm->starts.empty()) throw ScenarioError("bohm.starts must not be empty");
      if (bohm->substeps < 1) throw ScenarioError("bohm.substeps must be >= 1");
    }
    if (!sweeps.empty()) {
      try {
        validate_sweep(sweeps);
      } catch (const std::exception& e) {
        throw ScenarioError(std::string("sweeps: ") + e.what());
      }
    }
    if (converge && !(converge->t_end > 0.0)) throw ScenarioError("converge.t_end must be > 0");
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(e.what());
  }
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  Scenario s;
  try {
    only_keys(j, {"name", "physics", "model", "field", "bohm", "sweeps", "converge", "outputs"},
              "scenario");
    s.name = j.at("name").get<std::string>();
    if (j.contains("physics")) s.physics = parse_physics(j["physics"]);
    s.model = j.contains("model") ? parse_model(j["model"]) : parse_model(json::object());
    if (j.contains("field")) s.field = parse_field(j["field"]);
    if (j.contains("bohm")) s.bohm = parse_bohm(j["bohm"]);
    if (j.contains("sweeps"))
      for (const auto& e : j["sweeps"]) s.sweeps.push_back(number(e, "sweeps[]"));
    if (j.contains("converge")) s.converge = parse_converge(j["converge"]);
    if (j.contains("outputs")) {
      const json& o = j["outputs"];
      only_keys(o, {"directory", "csv", "json"}, "outputs");
      s.outputs.directory = o.value("directory", std::string("out"));
      s.outputs.csv = o.value("csv", true);
      s.outputs.json = o.value("json", true);
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

Grid make_grid(const FieldSpec& field) {
  try {
    return Grid(field.axes);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("field.grid: ") + e.what());
  }
}

std::array<GaussianPacket, 2> packets(const GaussianSpec& g) {
  return {GaussianPacket{g.sigma0, g.x0[0], g.k0[0]}, GaussianPacket{g.sigma0, g.x0[1], g.k0[1]}};
}

WaveField make_initial_wave(const FieldSpec& field, const PhysicalParams& params) {
  const Grid grid = make_grid(field);
  const int dim = grid.dimension();
  auto gaussian = [&](const GaussianSpec& g) {
    const auto p = packets(g);
    return dim == 1 ? sample_gaussian(grid, p[0], 0.0, params)
                    : sample_gaussian(grid, p[0], p[1], 0.0, params);
  };
  switch (field.initial.kind) {
    case InitialWaveSpec::Kind::gaussian: return gaussian(field.initial.first);
    case InitialWaveSpec::Kind::plane_wave: {
      const double kx = commensurate_wavenumber(grid.axis(0), field.initial.k[0]);
      const double ky = dim == 2 ? commensurate_wavenumber(grid.axis(1), field.initial.k[1]) : 0.0;
      return sample_wavefield(grid, 0.0,
                              [&](double x, double y) { return std::polar(1.0, kx * x + ky * y); });
    }
    case InitialWaveSpec::Kind::superposition: {
      WaveField a = gaussian(field.initial.first);
      const WaveField b = gaussian(field.initial.second);
      for (size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
      const double n = a.norm();
      for (cplx& v : a.values) v /= n;
      return a;
    }
  }
  throw ScenarioError("field.initial: unsupported kind");
}

Potential make_potential(const FieldSpec& field, const PhysicalParams& params) {
  if (field.potential.kind == PotentialSpec::Kind::harmonic)
    return harmonic_potential(params.mass, field.potential.omega);
  return free_potential();
}

DriftSpec make_drift(const DriftConfig& d, int dimension) {
  if (d.a.dimension() != dimension || d.b.dimension() != dimension)
    throw ScenarioError("drift dimension differs from the model");
  switch (d.kind) {
    case DriftConfig::Kind::constant: return DriftSpec::constant(d.a);
    case DriftConfig::Kind::linear: {
      const ComplexPoint a = d.a, b = d.b;
      return DriftSpec::closed_form([a, b](double t) { return a + b * t; }, "a + b t");
    }
    case DriftConfig::Kind::oscillating: {
      const ComplexPoint a = d.a, b = d.b;
      const double w = d.omega;
      return DriftSpec::closed_form([a, b, w](double t) { return a + b * std::cos(w * t); },
                                    "a + b cos(omega t)");
    }
    case DriftConfig::Kind::field:
      throw ScenarioError("field-coupled drift needs a field history");
  }
  throw ScenarioError("unsupported drift kind");
}

ProcessConfig make_process_config(const Scenario& s) {
  ProcessConfig cfg;
  cfg.params = s.physics;
  cfg.frame = VertexFrame(s.model.dimension, s.model.orientation);
  cfg.z0 = s.model.z0;
  cfg.drift = make_drift(s.model.drift, s.model.dimension);
  cfg.steps = s.model.steps;
  return cfg;
}

}  // namespace epm

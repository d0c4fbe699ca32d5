#include "epm/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace epm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, bool binary = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << num(v);
    first = false;
  }
  out << '\n';
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("CSV: not a number: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& names, const fs::path& p) {
  if (t.header != names) throw std::runtime_error("CSV: unexpected columns in " + p.string());
}

std::vector<std::string> wave_columns(int dim) {
  if (dim == 1) return {"x", "re", "im", "rho", "S"};
  return {"x", "y", "re", "im", "rho", "S"};
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw std::out_of_range("CSV: no column " + name);
}

CsvTable read_csv(const fs::path& path) {
  auto in = open_in(path);
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(1));
      continue;
    }
    auto cells = split(line);
    if (!have_header) {
      t.header = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size())
      throw std::runtime_error("CSV: ragged row in " + path.string());
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("CSV: missing header in " + path.string());
  return t;
}

// ---------------------------------------------------------------------------
// Trajectories

void write_trajectory_csv(const fs::path& path, const ProcessTrajectory& traj) {
  auto out = open_out(path);
  const int dim = traj.dimension();
  out << (dim == 2 ? "t,j,re_x,im_x,re_y,im_y\n" : "t,j,re,im\n");
  auto row = [&](double t, int j, const ComplexPoint& z) {
    if (dim == 2)
      write_row(out, {t, double(j), z[0].real(), z[0].imag(), z[1].real(), z[1].imag()});
    else
      write_row(out, {t, double(j), z[0].real(), z[0].imag()});
  };
  for (long n = 0; n <= traj.steps(); ++n) {
    row(traj.times[n], -1, traj.mean[n]);
    for (int j = 0; j < traj.frame.size(); ++j) row(traj.times[n], j, traj.points[j][n]);
  }
}

ProcessTrajectory read_trajectory_csv(const fs::path& path, const PhysicalParams& params,
                                      const VertexFrame& frame) {
  const CsvTable t = read_csv(path);
  const int dim = frame.dimension();
  if (dim == 2)
    expect_header(t, {"t", "j", "re_x", "im_x", "re_y", "im_y"}, path);
  else
    expect_header(t, {"t", "j", "re", "im"}, path);
  const size_t per = static_cast<size_t>(frame.size()) + 1;
  if (t.rows.empty() || t.rows.size() % per != 0)
    throw std::runtime_error("trajectory CSV: row count is not a multiple of the vertex count");
  ProcessTrajectory traj;
  traj.params = params;
  traj.frame = frame;
  traj.points.assign(static_cast<size_t>(frame.size()), {});
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const ComplexPoint z = dim == 2 ? ComplexPoint(cplx(row[2], row[3]), cplx(row[4], row[5]))
                                    : ComplexPoint(cplx(row[2], row[3]));
    const int j = static_cast<int>(row[1]);
    if (j != static_cast<int>(r % per) - 1)
      throw std::runtime_error("trajectory CSV: rows out of order");
    if (j < 0) {
      traj.times.push_back(row[0]);
      traj.mean.push_back(z);
    } else {
      traj.points[j].push_back(z);
    }
  }
  traj.drift.assign(traj.times.size(), ComplexPoint::zero(dim));
  return traj;
}

// ---------------------------------------------------------------------------
// Observables

void write_observables_json(const fs::path& path, const ObservablesRecord& rec) {
  const int d = rec.stats.dimension;
  auto arr = [d](const std::array<double, 2>& a) {
    return d == 2 ? json::array({a[0], a[1]}) : json::array({a[0]});
  };
  json j = {{"orientation", to_string(rec.orientation)},
            {"hbar", rec.hbar},
            {"mass", rec.mass},
            {"epsilon", rec.epsilon},
            {"dimension", d},
            {"delta_x", arr(rec.stats.delta_x)},
            {"delta_p", arr(rec.stats.delta_p)},
            {"product", arr(rec.stats.product)},
            {"spin_intrinsic", rec.spin_intrinsic},
            {"spin_total", rec.spin_total}};
  open_out(path) << j.dump(2) << '\n';
}

ObservablesRecord read_observables_json(const fs::path& path) {
  json j = json::parse(open_in(path));
  ObservablesRecord r;
  r.orientation = orientation_from_string(j.at("orientation").get<std::string>());
  r.hbar = j.at("hbar");
  r.mass = j.at("mass");
  r.epsilon = j.at("epsilon");
  r.stats.dimension = j.at("dimension");
  auto arr = [&](const char* key, std::array<double, 2>& a) {
    const auto& v = j.at(key);
    for (size_t k = 0; k < v.size() && k < 2; ++k) a[k] = v[k];
  };
  arr("delta_x", r.stats.delta_x);
  arr("delta_p", r.stats.delta_p);
  arr("product", r.stats.product);
  r.spin_intrinsic = j.at("spin_intrinsic");
  r.spin_total = j.at("spin_total");
  return r;
}

// ---------------------------------------------------------------------------
// Grid action

void write_grid_action_csv(const fs::path& path, const GridAction& action) {
  action.validate();
  auto out = open_out(path);
  out << "x,t,S\n";
  for (size_t k = 0; k < action.times.size(); ++k)
    for (size_t i = 0; i < action.x.size(); ++i)
      write_row(out, {action.x[i], action.times[k], action.values[k][i]});
}

GridAction read_grid_action_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"x", "t", "S"}, path);
  GridAction a;
  for (const auto& row : t.rows) {
    if (a.times.empty() || row[1] != a.times.back()) {
      a.times.push_back(row[1]);
      a.values.emplace_back();
    }
    if (a.times.size() == 1) a.x.push_back(row[0]);
    a.values.back().push_back(row[2]);
  }
  a.validate();
  return a;
}

// ---------------------------------------------------------------------------
// Wave fields

void write_wavefield_csv(const fs::path& path, const WaveField& psi, const PhysicalParams& params) {
  const PhaseDecomposition dec = decompose(psi, params, 0.0);
  auto out = open_out(path);
  for (const Axis& a : psi.grid.axes())
    out << "# axis " << num(a.min) << ' ' << num(a.max) << ' ' << a.nodes << '\n';
  out << "# time " << num(psi.time) << '\n';
  const auto cols = wave_columns(psi.grid.dimension());
  for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (size_t i = 0; i < psi.values.size(); ++i) {
    const auto x = psi.grid.coords(i);
    const cplx v = psi.values[i];
    if (psi.grid.dimension() == 2)
      write_row(out, {x[0], x[1], v.real(), v.imag(), dec.rho[i], dec.phase[i]});
    else
      write_row(out, {x[0], v.real(), v.imag(), dec.rho[i], dec.phase[i]});
  }
}

WaveField read_wavefield_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<Axis> axes;
  double time = 0.0;
  for (const auto& c : t.comments) {
    std::istringstream ss(c);
    std::string key;
    ss >> key;
    if (key == "axis") {
      std::string lo, hi;
      int n = 0;
      ss >> lo >> hi >> n;
      axes.push_back(Axis{parse_double(lo), parse_double(hi), n});
    } else if (key == "time") {
      std::string v;
      ss >> v;
      time = parse_double(v);
    }
  }
  if (axes.empty()) throw std::runtime_error("wavefield CSV: missing axis metadata");
  WaveField psi{Grid(axes), time, {}};
  const int dim = psi.grid.dimension();
  expect_header(t, wave_columns(dim), path);
  if (t.rows.size() != psi.grid.size()) throw std::runtime_error("wavefield CSV: row count");
  for (const auto& row : t.rows) psi.values.emplace_back(row[dim], row[dim + 1]);
  return psi;
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary dumps assume little-endian");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw std::runtime_error("binary wavefield: truncated file");
  return v;
}

}  // namespace

void write_wavefield_binary(const fs::path& path, const WaveField& psi) {
  auto out = open_out(path, true);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(psi.grid.dimension()));
  for (const Axis& a : psi.grid.axes()) put<std::uint32_t>(out, static_cast<std::uint32_t>(a.nodes));
  put<double>(out, psi.time);
  for (const cplx& v : psi.values) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
}

WaveField read_wavefield_binary(const fs::path& path, const Grid& grid) {
  auto in = open_in(path, true);
  const auto dims = get<std::uint32_t>(in);
  if (dims != static_cast<std::uint32_t>(grid.dimension()))
    throw std::runtime_error("binary wavefield: dimension mismatch");
  for (const Axis& a : grid.axes())
    if (get<std::uint32_t>(in) != static_cast<std::uint32_t>(a.nodes))
      throw std::runtime_error("binary wavefield: node count mismatch");
  WaveField psi{grid, get<double>(in), {}};
  psi.values.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const double re = get<double>(in);
    psi.values.emplace_back(re, get<double>(in));
  }
  return psi;
}

// ---------------------------------------------------------------------------
// Paths and coupled runs

void write_bohm_csv(const fs::path& path, const BohmPath& p) {
  auto out = open_out(path);
  out << (p.dimension == 2 ? "t,x,y\n" : "t,x\n");
  for (size_t n = 0; n < p.times.size(); ++n) {
    if (p.dimension == 2)
      write_row(out, {p.times[n], p.positions[n][0], p.positions[n][1]});
    else
      write_row(out, {p.times[n], p.positions[n][0]});
  }
}

BohmPath read_bohm_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  BohmPath p;
  if (t.header == std::vector<std::string>{"t", "x", "y"})
    p.dimension = 2;
  else
    expect_header(t, {"t", "x"}, path);
  for (const auto& row : t.rows) {
    p.times.push_back(row[0]);
    p.positions.push_back({row[1], p.dimension == 2 ? row[2] : 0.0});
  }
  return p;
}

void write_coupled_csv(const fs::path& path, const CoupledRun& run) {
  auto out = open_out(path);
  const int dim = run.bohm.dimension;
  out << (dim == 2 ? "t,x,y,deviation\n" : "t,x,deviation\n");
  const double h = run.bohm.times.size() > 1 ? run.bohm.times[1] - run.bohm.times[0] : 1.0;
  for (size_t k = 0; k < run.sample_times.size(); ++k) {
    const double t = run.sample_times[k];
    const auto b = static_cast<size_t>(std::lround((t - run.bohm.times.front()) / h));
    const auto& x = run.bohm.positions.at(b);
    if (dim == 2)
      write_row(out, {t, x[0], x[1], run.deviations[k]});
    else
      write_row(out, {t, x[0], run.deviations[k]});
  }
}

CoupledTable read_coupled_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  CoupledTable c;
  if (t.header == std::vector<std::string>{"t", "x", "y", "deviation"})
    c.dimension = 2;
  else
    expect_header(t, {"t", "x", "deviation"}, path);
  for (const auto& row : t.rows) {
    c.times.push_back(row[0]);
    c.positions.push_back({row[1], c.dimension == 2 ? row[2] : 0.0});
    c.deviations.push_back(row.back());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Convergence tables

void write_convergence(const fs::path& csv, const fs::path& json_path,
                       const ConvergenceTable& table) {
  {
    auto out = open_out(csv);
    out << "epsilon,error\n";
    for (size_t i = 0; i < table.epsilon.size(); ++i)
      write_row(out, {table.epsilon[i], table.error[i]});
  }
  json j = {{"target", table.target},
            {"slope", table.slope},
            {"intercept", table.intercept},
            {"points", table.epsilon.size()}};
  open_out(json_path) << j.dump(2) << '\n';
}

ConvergenceTable read_convergence(const fs::path& csv, const fs::path& json_path) {
  const CsvTable t = read_csv(csv);
  expect_header(t, {"epsilon", "error"}, csv);
  ConvergenceTable c;
  for (const auto& row : t.rows) {
    c.epsilon.push_back(row[0]);
    c.error.push_back(row[1]);
  }
  json j = json::parse(open_in(json_path));
  c.target = j.at("target");
  c.slope = j.at("slope");
  c.intercept = j.at("intercept");
  return c;
}

// ---------------------------------------------------------------------------
// Run reports

std::string report_to_json(const RunReport& report) {
  json checks = json::array();
  for (const CheckRecord& c : report.checks) {
    json e = {{"id", c.id},
              {"measured", c.measured},
              {"expected", c.expected},
              {"tolerance", c.tolerance},
              {"comparison", to_string(c.comparison)},
              {"passed", c.passed},
              {"wall_time_s", c.wall_time_s}};
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  json j = {{"scenario", report.scenario}, {"checks", checks}, {"passed", report.passed()}};
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  json j = json::parse(text);
  RunReport r;
  r.scenario = j.at("scenario");
  for (const auto& e : j.at("checks")) {
    CheckRecord c;
    c.id = e.at("id");
    // NaN measurements serialise as null.
    c.measured = e.at("measured").is_null() ? std::nan("") : e.at("measured").get<double>();
    c.expected = e.at("expected");
    c.tolerance = e.at("tolerance");
    c.comparison = comparison_from_string(e.at("comparison"));
    c.passed = e.at("passed");
    c.wall_time_s = e.at("wall_time_s");
    c.note = e.value("note", "");
    r.checks.push_back(std::move(c));
  }
  return r;
}

void write_report_json(const fs::path& path, const RunReport& report) {
  open_out(path) << report_to_json(report) << '\n';
}

}  // namespace epm

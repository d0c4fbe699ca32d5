#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "epm/io.hpp"
#include "epm/reference.hpp"

using namespace epm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "epm_test_io";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("trajectory CSV round trip") {
  for (int dim : {1, 2}) {
    ProcessConfig cfg;
    cfg.params = {1.0, 1.0, 0.013, {}};
    cfg.frame = dim == 1 ? VertexFrame::line() : VertexFrame::square(Orientation::minus);
    cfg.z0 = dim == 1 ? ComplexPoint(cplx(0.1, 0.7)) : ComplexPoint(cplx(0.1, 0.7), cplx(-1.0 / 3, 0));
    cfg.drift = DriftSpec::constant(dim == 1 ? ComplexPoint(cplx(0.3, 0.1))
                                             : ComplexPoint(cplx(0.3, 0.1), cplx(std::sqrt(2.0), 0)));
    cfg.steps = 17;
    const ProcessTrajectory traj = run_process(cfg);
    const fs::path p = scratch("traj.csv");
    write_trajectory_csv(p, traj);
    const ProcessTrajectory back = read_trajectory_csv(p, cfg.params, cfg.frame);
    CHECK(back.times == traj.times);
    CHECK(back.mean == traj.mean);
    CHECK(back.points == traj.points);
    const CsvTable t = read_csv(p);
    CHECK(t.column("t") == 0);
    CHECK(t.column("j") == 1);
    CHECK(t.rows.size() == size_t(18 * (cfg.frame.size() + 1)));
  }
}

TEST_CASE("observables JSON round trip") {
  ObservablesRecord rec;
  rec.orientation = Orientation::minus;
  rec.hbar = 0.5;
  rec.epsilon = 1e-3;
  rec.stats.dimension = 2;
  rec.stats.delta_x = {0.1, 0.2};
  rec.stats.delta_p = {3.0, 4.0};
  rec.stats.product = {0.3, 0.8};
  rec.spin_intrinsic = 0.25;
  rec.spin_total = 1.0 / 3.0;
  const fs::path p = scratch("obs.json");
  write_observables_json(p, rec);
  const ObservablesRecord back = read_observables_json(p);
  CHECK(back.orientation == Orientation::minus);
  CHECK(back.hbar == 0.5);
  CHECK(back.stats.delta_p == rec.stats.delta_p);
  CHECK(back.spin_total == rec.spin_total);
}

TEST_CASE("grid action CSV round trip") {
  GridAction a;
  a.x = {-1, -0.5, 0, 0.5};
  a.times = {0, 0.1};
  a.values = {{1, 2, 3, 4}, {0.1, 0.2, 1.0 / 7, -4}};
  const fs::path p = scratch("action.csv");
  write_grid_action_csv(p, a);
  const GridAction b = read_grid_action_csv(p);
  CHECK(b.x == a.x);
  CHECK(b.times == a.times);
  CHECK(b.values == a.values);
}

TEST_CASE("wave field text and binary round trips") {
  const PhysicalParams params{};
  const Grid g2 = Grid::plane(Axis{-2, 2, 64}, Axis{-1, 3, 64});
  const WaveField psi = sample_gaussian(g2, GaussianPacket{0.5, 0, 1}, GaussianPacket{0.7, 1, -2}, 0.3, params);
  const fs::path csv = scratch("psi.csv"), bin = scratch("psi.bin");
  write_wavefield_csv(csv, psi, params);
  const WaveField a = read_wavefield_csv(csv);
  CHECK(a.grid == psi.grid);
  CHECK(a.time == psi.time);
  CHECK(a.values == psi.values);
  write_wavefield_binary(bin, psi);
  const WaveField b = read_wavefield_binary(bin, g2);
  CHECK(b.values == psi.values);
  CHECK(b.time == psi.time);
  CHECK(fs::file_size(bin) == 4 + 2 * 4 + 8 + g2.size() * 16);
  CHECK_THROWS(read_wavefield_binary(bin, Grid::plane(Axis{-2, 2, 64}, Axis{-1, 3, 128})));
  CHECK_THROWS(read_wavefield_binary(bin, Grid::line(-2, 2, 64)));
}

TEST_CASE("Bohm and coupled CSV round trips") {
  BohmPath path;
  path.dimension = 2;
  path.times = {0, 0.5, 1.0};
  path.positions = {{0.1, 0.2}, {0.3, 0.4}, {1.0 / 3, -2}};
  const fs::path p = scratch("bohm.csv");
  write_bohm_csv(p, path);
  const BohmPath back = read_bohm_csv(p);
  CHECK(back.dimension == 2);
  CHECK(back.times == path.times);
  CHECK(back.positions == path.positions);

  CoupledRun run;
  run.bohm = path;
  run.sample_times = path.times;
  run.deviations = {0, 1e-3, 2e-3};
  const fs::path q = scratch("coupled.csv");
  write_coupled_csv(q, run);
  const CoupledTable t = read_coupled_csv(q);
  CHECK(t.dimension == 2);
  CHECK(t.times == run.sample_times);
  CHECK(t.deviations == run.deviations);
  CHECK(t.positions == path.positions);
}

TEST_CASE("convergence table round trip") {
  ConvergenceTable t{"process", {0.1, 0.05, 0.025}, {1e-2, 5e-3, 2.5e-3}, 1.0, -2.3};
  const fs::path c = scratch("conv.csv"), j = scratch("conv.json");
  write_convergence(c, j, t);
  const ConvergenceTable b = read_convergence(c, j);
  CHECK(b.target == "process");
  CHECK(b.epsilon == t.epsilon);
  CHECK(b.error == t.error);
  CHECK(b.slope == 1.0);
  CHECK(b.intercept == -2.3);
}

TEST_CASE("report JSON round trip keeps NaN as null") {
  RunReport r;
  r.scenario = "demo";
  r.add(make_check("a", 1.0, 1.0, 1e-9, Comparison::relative, 0.5, "note"));
  r.add(make_check("b", NAN, 0.0, 1.0, Comparison::at_most));
  const std::string text = report_to_json(r);
  CHECK(text.find("null") != std::string::npos);
  const RunReport back = report_from_json(text);
  CHECK(back.scenario == "demo");
  REQUIRE(back.checks.size() == 2);
  CHECK(back.checks[0].note == "note");
  CHECK(back.checks[0].comparison == Comparison::relative);
  CHECK(std::isnan(back.checks[1].measured));
  CHECK_FALSE(back.checks[1].passed);
  CHECK_FALSE(back.passed());
}

TEST_CASE("malformed CSV input is rejected") {
  const fs::path p = scratch("bad.csv");
  write_text(p, "# comment\nx,t,S\n1,2,3\n4,5\n");
  CHECK_THROWS(read_csv(p));
  write_text(p, "x,t,S\n1,2,abc\n");
  CHECK_THROWS(read_csv(p));
  write_text(p, "x,S\n1,2\n");
  CHECK_THROWS(read_grid_action_csv(p));
  write_text(p, "t,x\n0,1\n");
  const CsvTable t = read_csv(p);
  CHECK_THROWS(t.column("missing"));
  CHECK_THROWS(read_csv(scratch("does-not-exist.csv")));
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mqcloc/errors.hpp"
#include "mqcloc/experiment.hpp"
#include "mqcloc/svg.hpp"

using namespace mqcloc;

namespace {

ExperimentConfig small_config(const std::string& dir) {
  ExperimentConfig cfg;
  cfg.system.n_spins = 6;
  cfg.schedule.n_cycles = 8;
  cfg.schedule.p_values = {0.0, 0.1, 0.4};
  cfg.schedule.prep_cycles = {0, 2};
  cfg.output.dir = std::filesystem::temp_directory_path() / dir;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorKind kind_of(const std::string& text) {
  try {
    std::istringstream in(text);
    parse_config(in);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io;  // sentinel: parsed fine
}

}  // namespace

TEST_CASE("default config is the desk-scale profile") {
  std::istringstream empty("");
  const ExperimentConfig cfg = parse_config(empty);
  CHECK(cfg.system.n_spins == 12);
  CHECK(cfg.schedule.tau0 == doctest::Approx(57.6e-6));
  CHECK(cfg.schedule.n_cycles == 40);
  CHECK(cfg.schedule.p_values.size() == 6);
  CHECK(*cfg.system.model.target_second_moment == doctest::Approx(2 * M_PI * 7.9e3));
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "[system]\nn_spins = 8\ncoupling = chain\nchain_strength = 1000\nrms_hz = 0\n"
      "[schedule]\ntau0_us = 10\nn_cycles = 12\np_values = 0, 0.2\nprep_cycles = 0, 3\n"
      "[analysis]\nslope_tol = 0.1\n"
      "[output]\ndir = out-here\nformats = csv\n"
      "[run]\nseed = 99\nbackend = trotter\ntrotter_step_us = 0.5\n");
  const ExperimentConfig cfg = parse_config(in);
  CHECK(cfg.system.n_spins == 8);
  CHECK(std::holds_alternative<ChainCouplings>(cfg.system.model.variant));
  CHECK_FALSE(cfg.system.model.target_second_moment.has_value());
  CHECK(cfg.schedule.tau0 == doctest::Approx(1e-5));
  CHECK(cfg.schedule.prep_cycles == std::vector<int>{0, 3});
  CHECK(cfg.analysis.plateau.slope_tol == 0.1);
  CHECK(cfg.output.csv);
  CHECK_FALSE(cfg.output.svg);
  CHECK(cfg.seed == 99);
  CHECK(cfg.backend.kind == BackendKind::trotter);
  CHECK(cfg.backend.trotter_step == doctest::Approx(5e-7));
}

TEST_CASE("config round trip") {
  ExperimentConfig cfg = small_config("roundtrip");
  cfg.system.model.variant = GeometricCouplings{{{0, 0, 0}, {1e-10, 0, 0}, {0, 2e-10, 1e-10}, {1e-10, 1e-10, 1e-10},
                                                 {3e-10, 0, 0}, {0, 0, 3e-10}},
                                                1e-25};
  std::stringstream text;
  write_config(text, cfg);
  const ExperimentConfig back = parse_config(text);
  std::stringstream again;
  write_config(again, back);
  CHECK(text.str() == again.str());
  CHECK(back.schedule.tau0 == cfg.schedule.tau0);
  CHECK(*back.system.model.target_second_moment == *cfg.system.model.target_second_moment);
}

TEST_CASE("config rejection") {
  CHECK(kind_of("[system]\nspins = 4\n") == ErrorKind::config);
  CHECK(kind_of("[sytem]\nn_spins = 4\n") == ErrorKind::config);
  CHECK(kind_of("n_spins = 4\n") == ErrorKind::config);
  CHECK(kind_of("[system]\nn_spins = 15\n") == ErrorKind::config);
  CHECK(kind_of("[system]\nn_spins = four\n") == ErrorKind::config);
  CHECK(kind_of("[system]\ncoupling = lattice\n") == ErrorKind::config);
  CHECK(kind_of("[system]\ncoupling = geometric\n") == ErrorKind::config);
  CHECK(kind_of("[schedule]\np_values = 0, 1.0\n") == ErrorKind::config);
  CHECK(kind_of("[schedule]\ntau0_us = 0\n") == ErrorKind::config);
  CHECK(kind_of("[schedule]\nprep_cycles = -1\n") == ErrorKind::config);
  CHECK(kind_of("[analysis]\nn_phi = 10\n") == ErrorKind::config);
  CHECK(kind_of("[run]\nbackend = krylov\n") == ErrorKind::config);
  CHECK(kind_of("[run]\nbackend = trotter\n") == ErrorKind::config);  // 12 spins is too many for dense
  CHECK(kind_of("[run]\nseed = -3\n") == ErrorKind::config);
  CHECK(kind_of("[output]\nformats = png\n") == ErrorKind::config);
  CHECK(kind_of("[system]\nn_spins = 4\n") == ErrorKind::io);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), Error);
}

TEST_CASE("equilibrium runs are ordered p-major and start where they should") {
  const ExperimentConfig cfg = small_config("order");
  const auto traces = run_equilibrium(cfg);
  REQUIRE(traces.size() == 6);
  CHECK(traces[0].p == 0.0);
  CHECK(traces[1].n_prep_cycles == 2);
  CHECK(traces[2].p == 0.1);
  for (const auto& t : traces) {
    CHECK(t.points.size() == 9);
    CHECK(t.spectra.size() == 9);
    CHECK(t.points.front().time == 0.0);
    CHECK(t.points[1].time == doctest::Approx(t.tau0 + t.tau_sigma));
    for (const auto& s : t.spectra) CHECK(s.odd_fraction() < 1e-10);
  }
  // No preparation: K(0) = 1. With preparation: K(0) = K of H_0 after N0 cycles.
  CHECK(traces[0].points.front().k == doctest::Approx(1.0));
  CHECK(traces[1].points.front().k == doctest::Approx(traces[0].points[2].k));
  CHECK(traces[3].points.front().k == doctest::Approx(traces[0].points[2].k));
  // p = 0 is a perfect echo at every n.
  for (const auto& s : traces[0].spectra) CHECK(s.total == doctest::Approx(1.0).epsilon(1e-9));
  const auto summary = summarize_equilibrium(traces, cfg.analysis.plateau);
  REQUIRE(summary.size() == 3);
  CHECK(summary[1].prep_cycles == std::vector<int>{0, 2});
}

TEST_CASE("trotter and eigen backends give the same traces") {
  ExperimentConfig cfg = small_config("backends");
  cfg.system.n_spins = 4;
  cfg.schedule.n_cycles = 4;
  const auto eigen = run_traces(cfg, {{0.2, 1}});
  cfg.backend = Backend::trotter(2e-7);
  const auto trotter = run_traces(cfg, {{0.2, 1}});
  for (std::size_t i = 0; i < eigen[0].points.size(); ++i) {
    CHECK(trotter[0].points[i].k == doctest::Approx(eigen[0].points[i].k).epsilon(1e-3));
  }
}

TEST_CASE("outputs are deterministic") {
  ExperimentConfig a = small_config("det-a");
  ExperimentConfig b = small_config("det-b");
  std::filesystem::remove_all(a.output.dir);
  std::filesystem::remove_all(b.output.dir);
  const auto pa = emit_outputs({"all", run_equilibrium(a)}, a);
  const auto pb = emit_outputs({"all", run_equilibrium(b)}, b);
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].filename() == pb[i].filename());
    CHECK(slurp(pa[i]) == slurp(pb[i]));
  }
  CHECK(std::filesystem::exists(a.output.dir / "trace_p0.1_n0-2.csv"));
  CHECK(std::filesystem::exists(a.output.dir / "heatmap_p0.4_n0-0.svg"));
  CHECK(std::filesystem::exists(a.output.dir / "equilibrium.txt"));
  const std::string info = slurp(a.output.dir / "run_info.txt");
  CHECK(info.find("rms_coupling_times_tau0") != std::string::npos);
}

TEST_CASE("seed changes the couplings") {
  ExperimentConfig a = small_config("seed");
  ExperimentConfig b = a;
  b.seed = 2;
  CHECK(build_system(a).couplings != build_system(b).couplings);
}

TEST_CASE("heatmap carries the support widths") {
  ExperimentConfig cfg = small_config("svg");
  const ClusterTrace t = run_growth(cfg);
  std::ostringstream svg;
  write_heatmap_svg(svg, t);
  const std::string text = svg.str();
  CHECK(text.find("<svg") == 0);
  CHECK(text.find("data-support-widths=\"0 ") != std::string::npos);
  CHECK(support_width(t.spectra.front()) == 0);
  CHECK(support_width(t.spectra.back()) >= 2);
  CHECK(text.find("</svg>") != std::string::npos);
}

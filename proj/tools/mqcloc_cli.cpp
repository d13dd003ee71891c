// mqcloc: run the growth / localization / equilibrium experiments and fit K_loc(p).
#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>

#include "mqcloc/experiment.hpp"
#include "mqcloc/format.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::string backend;
  int spins = 0;
};

mqcloc::ExperimentConfig resolve(const Overrides& o, CLI::App& app) {
  mqcloc::ExperimentConfig cfg;
  if (!o.config.empty()) cfg = mqcloc::load_config(o.config);
  if (!o.out.empty()) cfg.output.dir = o.out;
  if (app.get_option("--seed")->count() > 0) cfg.seed = o.seed;
  if (!o.backend.empty()) cfg.backend.kind = mqcloc::backend_from_string(o.backend);
  if (o.spins > 0) cfg.system.n_spins = o.spins;
  cfg.validate();
  return cfg;
}

void report(const mqcloc::RunResults& results, const mqcloc::ExperimentConfig& cfg) {
  for (const auto& path : mqcloc::emit_outputs(results, cfg)) std::cout << "wrote " << path.string() << '\n';
  for (const auto& trace : results.traces) {
    std::cout << mqcloc::trace_stem(trace) << ": K(0) = " << mqcloc::format_double(trace.points.front().k)
              << ", K(end) = " << mqcloc::format_double(trace.points.back().k) << '\n';
  }
}

int fit_files(const std::vector<std::string>& files, const std::string& out_dir,
              const mqcloc::PlateauOptions& opts) {
  std::vector<std::pair<double, double>> points;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) mqcloc::fail(mqcloc::ErrorKind::io, "cannot read " + f);
    const mqcloc::ClusterTrace trace = mqcloc::read_trace_csv(in);
    if (trace.p > 0.0) points.emplace_back(trace.p, mqcloc::plateau(trace, opts).k_loc);
  }
  const mqcloc::PowerLawFit fit = mqcloc::powerlaw_fit(points);
  mqcloc::write_fit_report(std::cout, fit);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / "fit.txt");
    mqcloc::write_fit_report(out, fit);
    if (!out) mqcloc::fail(mqcloc::ErrorKind::io, "cannot write fit.txt");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbed time-reversal MQC simulator for small dipolar spin clusters"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "random coupling seed (overrides config)");
  app.add_option("--backend", o.backend, "propagation backend")->check(CLI::IsMember({"eigen", "trotter"}));
  app.add_option("--spins", o.spins, "number of spins (overrides config)")->check(CLI::Range(2, 14));

  auto* growth = app.add_subcommand("growth", "unperturbed cluster growth, p = 0");
  auto* localize = app.add_subcommand("localize", "one trace per configured p");
  auto* equilibrium = app.add_subcommand("equilibrium", "traces for every (p, N0) pair");
  auto* all = app.add_subcommand("all", "localize, equilibrium and fit in one pass");
  auto* fit = app.add_subcommand("fit", "fit K_loc against p from trace CSV files");
  std::vector<std::string> fit_inputs;
  fit->add_option("traces", fit_inputs, "trace_*.csv files")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      mqcloc::PlateauOptions opts;
      if (!o.config.empty()) opts = mqcloc::load_config(o.config).analysis.plateau;
      return fit_files(fit_inputs, o.out, opts);
    }
    const mqcloc::ExperimentConfig cfg = resolve(o, app);
    mqcloc::RunResults results;
    if (growth->parsed()) {
      results = {"growth", {mqcloc::run_growth(cfg)}};
    } else if (localize->parsed()) {
      results = {"localize", mqcloc::run_localization(cfg)};
    } else if (equilibrium->parsed()) {
      results = {"equilibrium", mqcloc::run_equilibrium(cfg)};
    } else if (all->parsed()) {
      // The fit needs the unprepared traces, so N0 = 0 is always included.
      mqcloc::ExperimentConfig full = cfg;
      auto& prep = full.schedule.prep_cycles;
      if (std::find(prep.begin(), prep.end(), 0) == prep.end()) prep.insert(prep.begin(), 0);
      results = {"all", mqcloc::run_equilibrium(full)};
    }
    report(results, cfg);
    if (auto f = mqcloc::fit_localization(results.traces, cfg.analysis.plateau)) {
      std::cout << "exponent = " << mqcloc::format_double(f->exponent) << " +- "
                << mqcloc::format_double(f->exponent_stderr) << '\n';
    }
  } catch (const mqcloc::Error& e) {
    std::cerr << mqcloc::to_string(e.kind()) << " error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mqcloc/cluster.hpp"
#include "mqcloc/hamiltonian.hpp"
#include "mqcloc/propagate.hpp"

namespace mqcloc {

struct SystemConfig {
  int n_spins = 12;
  CouplingModel model{RandomAllToAllCouplings{}, 2.0 * 3.141592653589793 * 7.9e3};
};

struct ScheduleConfig {
  double tau0 = 57.6e-6;  // seconds
  int n_cycles = 40;
  std::vector<double> p_values{0.0, 0.034, 0.065, 0.108, 0.2, 0.5};
  std::vector<int> prep_cycles{0};
};

struct AnalysisConfig {
  PlateauOptions plateau;
  int n_phi = 0;  // phase grid for the dense backend; 0 selects the default
};

struct OutputConfig {
  std::filesystem::path dir = "mqcloc-out";
  bool csv = true;
  bool svg = true;
};

struct ExperimentConfig {
  SystemConfig system;
  ScheduleConfig schedule;
  AnalysisConfig analysis;
  OutputConfig output;
  std::uint64_t seed = 1;
  Backend backend;

  /// Throws a config error describing the first violated constraint.
  void validate() const;
};

/// Parses the sectioned key = value format documented in configs/README.md.
/// Unknown sections or keys are rejected.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(write_config(c)) reproduces c.
void write_config(std::ostream& out, const ExperimentConfig& cfg);

/// Spin system described by the config; the random coupling model draws from cfg.seed.
SpinSystem build_system(const ExperimentConfig& cfg);

struct TraceRequest {
  double p = 0.0;
  int n_prep_cycles = 0;
};

/// K(n) for n = 0..n_cycles for every request, spectra retained. Requests
/// sharing a preparation count share the decoding observables. Output order
/// follows the request order.
std::vector<ClusterTrace> run_traces(const ExperimentConfig& cfg,
                                     const std::vector<TraceRequest>& requests);

/// Unperturbed growth (p = 0, no preparation).
ClusterTrace run_growth(const ExperimentConfig& cfg);
/// One trace per configured p, no preparation.
std::vector<ClusterTrace> run_localization(const ExperimentConfig& cfg);
/// One trace per (p, N0) pair, p-major in config order.
std::vector<ClusterTrace> run_equilibrium(const ExperimentConfig& cfg);

struct EquilibriumSummary {
  double p = 0.0;
  std::vector<int> prep_cycles;
  std::vector<double> initial_k;
  std::vector<double> k_loc;
  double relative_spread = 0.0;  // (max - min) / mean of k_loc
};

std::vector<EquilibriumSummary> summarize_equilibrium(const std::vector<ClusterTrace>& traces,
                                                      const PlateauOptions& options);

/// Fit of plateau K over the p > 0 traces; nullopt with fewer than 3 such traces.
std::optional<PowerLawFit> fit_localization(const std::vector<ClusterTrace>& traces,
                                            const PlateauOptions& options);

struct RunResults {
  std::string experiment;  // growth | localize | equilibrium | all
  std::vector<ClusterTrace> traces;
};

/// Writes trace_*.csv, spectra_*.csv, heatmap_*.svg, fit.txt, equilibrium.txt
/// and run_info.txt into cfg.output.dir. Returns the paths written.
std::vector<std::filesystem::path> emit_outputs(const RunResults& results, const ExperimentConfig& cfg);

/// "p0.108_n0-0" style stem used for per-trace files.
std::string trace_stem(const ClusterTrace& trace);

}  // namespace mqcloc

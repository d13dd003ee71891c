#include "mqcloc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>

#include "mqcloc/format.hpp"
#include "mqcloc/mqc.hpp"
#include "mqcloc/sector.hpp"
#include "mqcloc/svg.hpp"

namespace mqcloc {

namespace {

ClusterTrace empty_trace(const ExperimentConfig& cfg, const TraceRequest& req) {
  const auto schedule = CycleSchedule::with_strength(cfg.schedule.tau0, req.p, cfg.schedule.n_cycles,
                                                     req.n_prep_cycles);
  ClusterTrace trace;
  trace.p = req.p;
  trace.tau0 = schedule.tau0;
  trace.tau_sigma = schedule.tau_sigma;
  trace.n_prep_cycles = req.n_prep_cycles;
  return trace;
}

void append_point(ClusterTrace& trace, int n, double time, CoherenceSpectrum spectrum) {
  std::string note;
  double k = 1.0;
  try {
    k = cluster_size(spectrum, &note);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate) throw;
    note = "no positive coherence weight; K set to the one-spin floor\n";
  }
  if (!note.empty()) trace.diagnostics += "n=" + std::to_string(n) + ": " + note;
  trace.points.push_back({n, time, k});
  trace.spectra.push_back(std::move(spectrum));
}

// Eigendecomposition backend on flip/parity sectors.
void run_sector(const ExperimentConfig& cfg, const SpinSystem& sys,
                const std::vector<TraceRequest>& requests, std::vector<ClusterTrace>& traces) {
  auto layout = std::make_shared<const sector::SectorLayout>(sys.n_spins, true);
  const auto h0 = std::make_shared<const sector::SectorHamiltonian>(layout, sys, 0.0);
  std::map<double, std::shared_ptr<const sector::SectorHamiltonian>> heff{{0.0, h0}};
  for (const auto& r : requests) {
    if (!heff.count(r.p)) heff.emplace(r.p, std::make_shared<const sector::SectorHamiltonian>(layout, sys, r.p));
  }
  const sector::SectorTrajectory decode(h0, sector::sector_iz(layout));
  const double tau0 = cfg.schedule.tau0;

  std::map<int, std::vector<std::size_t>> by_prep;
  for (std::size_t i = 0; i < requests.size(); ++i) by_prep[requests[i].n_prep_cycles].push_back(i);

  for (const auto& [n0, members] : by_prep) {
    const sector::FOddOperator initial = decode.at(n0 * tau0);
    std::vector<sector::SectorTrajectory> forward;
    forward.reserve(members.size());
    for (std::size_t idx : members) forward.emplace_back(heff.at(requests[idx].p), initial);

    for (int n = 0; n <= cfg.schedule.n_cycles; ++n) {
      const sector::FOddOperator observable = decode.at((n0 + n) * tau0);
      for (std::size_t j = 0; j < members.size(); ++j) {
        ClusterTrace& trace = traces[members[j]];
        const double t = n * (trace.tau0 + trace.tau_sigma);
        // Unperturbed and unprepared: the forward state is the decoding observable itself.
        const bool echo = requests[members[j]].p == 0.0 && n0 == 0;
        const sector::FOddOperator rho = echo ? observable : forward[j].at(t);
        append_point(trace, n, t,
                     make_spectrum(sys.n_spins, sector::overlap_amplitudes(observable, rho),
                                   SpectrumSource::sector));
      }
    }
  }
}

// Dense product-formula backend; spectra via phase encoding and Fourier transform.
void run_dense_trotter(const ExperimentConfig& cfg, const SpinSystem& sys,
                       const std::vector<TraceRequest>& requests, std::vector<ClusterTrace>& traces) {
  const ZeemanBasis basis = build_basis(sys.n_spins);
  const int n_phi = cfg.analysis.n_phi > 0 ? cfg.analysis.n_phi : default_phase_count(sys.n_spins);
  const double step = cfg.backend.trotter_step;
  const Propagator decode_cycle = trotter_propagator(sys, {0.0, SigmaKind::dipolar}, cfg.schedule.tau0, step);

  for (std::size_t i = 0; i < requests.size(); ++i) {
    ClusterTrace& trace = traces[i];
    const double tau_c = trace.tau0 + trace.tau_sigma;
    const Propagator cycle = trotter_propagator(sys, {requests[i].p, SigmaKind::dipolar}, tau_c, step);
    OperatorMatrix observable = collective_iz(basis);
    for (int k = 0; k < requests[i].n_prep_cycles; ++k) observable = evolve_observable(observable, decode_cycle);
    OperatorMatrix rho = observable;
    for (int n = 0; n <= cfg.schedule.n_cycles; ++n) {
      if (n > 0) {
        observable = evolve_observable(observable, decode_cycle);
        rho = evolve_observable(rho, cycle);
      }
      append_point(trace, n, n * tau_c, spectrum_fft(rho, observable, basis, n_phi));
    }
  }
}

}  // namespace

std::vector<ClusterTrace> run_traces(const ExperimentConfig& cfg, const std::vector<TraceRequest>& requests) {
  cfg.validate();
  const SpinSystem sys = build_system(cfg);
  std::vector<ClusterTrace> traces;
  traces.reserve(requests.size());
  for (const auto& r : requests) traces.push_back(empty_trace(cfg, r));
  if (requests.empty()) return traces;

  if (cfg.backend.kind == BackendKind::eigen) {
    run_sector(cfg, sys, requests, traces);
  } else {
    run_dense_trotter(cfg, sys, requests, traces);
  }
  for (const auto& t : traces) t.validate();
  return traces;
}

ClusterTrace run_growth(const ExperimentConfig& cfg) {
  return run_traces(cfg, {{0.0, 0}}).front();
}

std::vector<ClusterTrace> run_localization(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TraceRequest> requests;
  for (double p : cfg.schedule.p_values) requests.push_back({p, 0});
  return run_traces(cfg, requests);
}

std::vector<ClusterTrace> run_equilibrium(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TraceRequest> requests;
  for (double p : cfg.schedule.p_values) {
    for (int n0 : cfg.schedule.prep_cycles) requests.push_back({p, n0});
  }
  return run_traces(cfg, requests);
}

std::vector<EquilibriumSummary> summarize_equilibrium(const std::vector<ClusterTrace>& traces,
                                                      const PlateauOptions& options) {
  std::vector<EquilibriumSummary> out;
  for (const auto& trace : traces) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.p == trace.p; });
    if (it == out.end()) {
      out.push_back({trace.p, {}, {}, {}, 0.0});
      it = std::prev(out.end());
    }
    it->prep_cycles.push_back(trace.n_prep_cycles);
    it->initial_k.push_back(trace.points.empty() ? 0.0 : trace.points.front().k);
    it->k_loc.push_back(plateau(trace, options).k_loc);
  }
  for (auto& s : out) {
    const auto [lo, hi] = std::minmax_element(s.k_loc.begin(), s.k_loc.end());
    double mean = 0.0;
    for (double k : s.k_loc) mean += k;
    mean /= static_cast<double>(s.k_loc.size());
    s.relative_spread = mean > 0.0 ? (*hi - *lo) / mean : 0.0;
  }
  return out;
}

std::optional<PowerLawFit> fit_localization(const std::vector<ClusterTrace>& traces,
                                            const PlateauOptions& options) {
  std::vector<std::pair<double, double>> points;
  for (const auto& trace : traces) {
    if (trace.p > 0.0 && trace.n_prep_cycles == 0 && trace.points.size() >= 6) {
      points.emplace_back(trace.p, plateau(trace, options).k_loc);
    }
  }
  if (points.size() < 3) return std::nullopt;
  return powerlaw_fit(points);
}

std::string trace_stem(const ClusterTrace& trace) {
  char p[32];
  std::snprintf(p, sizeof p, "%.6g", trace.p);
  return "p" + std::string(p) + "_n0-" + std::to_string(trace.n_prep_cycles);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) fail(ErrorKind::io, "error while writing " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> emit_outputs(const RunResults& results, const ExperimentConfig& cfg) {
  if (results.traces.empty()) fail(ErrorKind::domain, "no results to write");
  const auto& dir = cfg.output.dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto& opts = cfg.analysis.plateau;
  for (const auto& trace : results.traces) {
    const std::string stem = trace_stem(trace);
    if (cfg.output.csv) {
      const auto trace_path = dir / ("trace_" + stem + ".csv");
      auto out = open_output(trace_path);
      write_trace_csv(out, trace);
      close_output(out, trace_path);
      written.push_back(trace_path);

      const auto spectra_path = dir / ("spectra_" + stem + ".csv");
      std::vector<SpectrumRow> rows;
      for (std::size_t i = 0; i < trace.spectra.size(); ++i) rows.push_back({trace.points[i].n_cycles, &trace.spectra[i]});
      auto sout = open_output(spectra_path);
      write_spectrum_csv(sout, rows, trace.p, cfg.seed);
      close_output(sout, spectra_path);
      written.push_back(spectra_path);
    }
    if (cfg.output.svg && !trace.spectra.empty()) {
      const auto svg_path = dir / ("heatmap_" + stem + ".svg");
      auto out = open_output(svg_path);
      write_heatmap_svg(out, trace);
      close_output(out, svg_path);
      written.push_back(svg_path);
    }
  }

  const SpinSystem sys = build_system(cfg);
  const auto info_path = dir / "run_info.txt";
  {
    auto out = open_output(info_path);
    const double rms = rms_coupling_per_spin(sys.couplings);
    out << "experiment = " << results.experiment << '\n'
        << "n_spins = " << sys.n_spins << '\n'
        << "seed = " << cfg.seed << '\n'
        << "backend = " << to_string(cfg.backend.kind) << '\n'
        << "tau0_s = " << format_double(cfg.schedule.tau0) << '\n'
        << "rms_coupling_rad_per_s = " << format_double(rms) << '\n'
        << "rms_coupling_times_tau0 = " << format_double(rms * cfg.schedule.tau0) << '\n'
        << "p,n0,k_initial,k_final,k_loc,plateau_slope,localized,onset_index\n";
    for (const auto& trace : results.traces) {
      const PlateauResult pl = trace.points.size() >= 6 ? plateau(trace, opts) : PlateauResult{};
      out << format_double(trace.p) << ',' << trace.n_prep_cycles << ','
          << format_double(trace.points.front().k) << ',' << format_double(trace.points.back().k) << ','
          << format_double(pl.k_loc) << ',' << format_double(pl.slope) << ',' << (pl.localized ? 1 : 0)
          << ',' << pl.onset_index << '\n';
    }
    for (const auto& trace : results.traces) {
      if (!trace.diagnostics.empty()) out << "# diagnostics " << trace_stem(trace) << '\n' << trace.diagnostics;
    }
    close_output(out, info_path);
    written.push_back(info_path);
  }

  if (auto fit = fit_localization(results.traces, opts)) {
    const auto fit_path = dir / "fit.txt";
    auto out = open_output(fit_path);
    write_fit_report(out, *fit);
    close_output(out, fit_path);
    written.push_back(fit_path);
  }

  const bool has_prep = std::any_of(results.traces.begin(), results.traces.end(),
                                    [](const auto& t) { return t.n_prep_cycles > 0; });
  if (has_prep) {
    const auto eq_path = dir / "equilibrium.txt";
    auto out = open_output(eq_path);
    out << "p,n0,k_initial,k_loc\n";
    for (const auto& s : summarize_equilibrium(results.traces, opts)) {
      for (std::size_t i = 0; i < s.prep_cycles.size(); ++i) {
        out << format_double(s.p) << ',' << s.prep_cycles[i] << ',' << format_double(s.initial_k[i]) << ','
            << format_double(s.k_loc[i]) << '\n';
      }
      out << "# p=" << format_double(s.p) << " relative plateau spread " << format_double(s.relative_spread) << '\n';
    }
    close_output(out, eq_path);
    written.push_back(eq_path);
  }
  return written;
}

}  // namespace mqcloc

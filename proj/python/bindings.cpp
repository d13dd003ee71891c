#include <pybind11/eigen.h>
#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "mqcloc/cluster.hpp"
#include "mqcloc/experiment.hpp"
#include "mqcloc/hamiltonian.hpp"
#include "mqcloc/mqc.hpp"
#include "mqcloc/propagate.hpp"

namespace py = pybind11;
using namespace mqcloc;

namespace {

CycleSchedule schedule_of(double tau0, double p, int n_cycles, int n_prep_cycles) {
  if (p == 1.0) return {0.0, tau0, n_cycles, 0};
  return CycleSchedule::with_strength(tau0, p, n_cycles, n_prep_cycles);
}

py::dict trace_dict(const ClusterTrace& t) {
  std::vector<int> n;
  std::vector<double> time, k;
  std::vector<std::vector<double>> spectra;
  for (const auto& pt : t.points) {
    n.push_back(pt.n_cycles);
    time.push_back(pt.time);
    k.push_back(pt.k);
  }
  for (const auto& s : t.spectra) spectra.push_back(s.amplitudes);
  py::dict d;
  d["p"] = t.p;
  d["n_prep_cycles"] = t.n_prep_cycles;
  d["tau0"] = t.tau0;
  d["tau_sigma"] = t.tau_sigma;
  d["n_cycles"] = n;
  d["time"] = time;
  d["k"] = k;
  d["spectra"] = spectra;
  d["diagnostics"] = t.diagnostics;
  return d;
}

ClusterTrace trace_from(const std::vector<int>& n, const std::vector<double>& time, const std::vector<double>& k) {
  if (n.size() != time.size() || n.size() != k.size()) fail(ErrorKind::shape, "n, time and k must have equal length");
  ClusterTrace t;
  for (std::size_t i = 0; i < n.size(); ++i) t.points.push_back({n[i], time[i], k[i]});
  return t;
}

ExperimentConfig config_from(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Perturbed time-reversal MQC simulator for small dipolar spin clusters";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&]() { return py::exception<Error>(m, "MqclocError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type.get_stored(), (std::string(to_string(e.kind())) + " error: " + e.what()).c_str());
    }
  });

  m.def("random_couplings", [](int n, std::uint64_t seed, double rms) {
        return couplings_from_model({RandomAllToAllCouplings{seed, 1.0}, rms}, n).couplings;
      },
      py::arg("n_spins"), py::arg("seed"), py::arg("rms") = 2.0 * 3.141592653589793 * 7.9e3,
      "Random all-to-all couplings (rad/s) rescaled to the given RMS coupling per spin.");
  m.def("rms_coupling_per_spin", &rms_coupling_per_spin, py::arg("couplings"));

  m.def("h_dd", [](const RMatrix& d) { return build_h_dd(make_spin_system(d)).entries; }, py::arg("couplings"));
  m.def("h0", [](const RMatrix& d) { return build_h0(make_spin_system(d)).entries; }, py::arg("couplings"));
  m.def("h_eff", [](const RMatrix& d, double p) { return build_h_eff(make_spin_system(d), {p}).entries; },
        py::arg("couplings"), py::arg("p"));
  m.def("collective_iz", [](int n) { return collective_iz(build_basis(n)).entries; }, py::arg("n_spins"));

  m.def("forward_state",
        [](const RMatrix& d, double tau0, double p, int n_cycles, int n_prep_cycles, const std::string& backend) {
          Backend b;
          b.kind = backend_from_string(backend);
          return forward_state(make_spin_system(d), schedule_of(tau0, p, n_cycles, n_prep_cycles),
                               SigmaKind::dipolar, b)
              .entries;
        },
        py::arg("couplings"), py::arg("tau0"), py::arg("p"), py::arg("n_cycles"), py::arg("n_prep_cycles") = 0,
        py::arg("backend") = "eigen");
  m.def("backward_observable",
        [](const RMatrix& d, double tau0, int n_cycles, int n_prep_cycles) {
          return backward_observable(make_spin_system(d), schedule_of(tau0, 0.0, n_cycles, n_prep_cycles),
                                     Backend::eigen())
              .entries;
        },
        py::arg("couplings"), py::arg("tau0"), py::arg("n_cycles"), py::arg("n_prep_cycles") = 0);

  m.def("spectrum",
        [](const CMatrix& rho, const CMatrix& observable, int n_phi) {
          const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(rho.rows()))));
          const ZeemanBasis basis = build_basis(n);
          const OperatorMatrix r{rho, OperatorKind::hermitian}, a{observable, OperatorKind::hermitian};
          return (n_phi > 0 ? spectrum_fft(r, a, basis, n_phi) : spectrum_direct(r, a, basis)).amplitudes;
        },
        py::arg("rho"), py::arg("observable"), py::arg("n_phi") = 0,
        "A_M for M = -N..N; n_phi > 0 selects phase encoding on that grid, 0 the direct overlap.");

  m.def("cluster_size",
        [](const std::vector<double>& amplitudes) {
          if (amplitudes.size() % 2 == 0) fail(ErrorKind::shape, "amplitudes must have odd length 2N+1");
          CoherenceSpectrum s;
          s.n_spins = static_cast<int>(amplitudes.size() / 2);
          s.amplitudes = amplitudes;
          return cluster_size(s);
        },
        py::arg("amplitudes"));

  m.def("plateau",
        [](const std::vector<int>& n, const std::vector<double>& time, const std::vector<double>& k,
           double window_fraction, double slope_tol) {
          const PlateauResult r = plateau(trace_from(n, time, k), {window_fraction, slope_tol, 0.1});
          py::dict d;
          d["localized"] = r.localized;
          d["k_loc"] = r.k_loc;
          d["slope"] = r.slope;
          d["onset_index"] = r.onset_index;
          return d;
        },
        py::arg("n_cycles"), py::arg("time"), py::arg("k"), py::arg("window_fraction") = 1.0 / 3.0,
        py::arg("slope_tol") = 0.05);

  m.def("powerlaw_fit",
        [](const std::vector<double>& p, const std::vector<double>& k) {
          if (p.size() != k.size()) fail(ErrorKind::shape, "p and k must have equal length");
          std::vector<std::pair<double, double>> pts;
          for (std::size_t i = 0; i < p.size(); ++i) pts.emplace_back(p[i], k[i]);
          const PowerLawFit f = powerlaw_fit(pts);
          py::dict d;
          d["exponent"] = f.exponent;
          d["prefactor"] = f.prefactor;
          d["exponent_stderr"] = f.exponent_stderr;
          return d;
        },
        py::arg("p"), py::arg("k_loc"));

  m.def("default_config", [] {
    std::ostringstream out;
    write_config(out, ExperimentConfig{});
    return out.str();
  });
  m.def("run", [](const std::string& experiment, const std::string& config_text, bool write) {
        const ExperimentConfig cfg = config_from(config_text);
        RunResults results{experiment, {}};
        if (experiment == "growth") {
          results.traces = {run_growth(cfg)};
        } else if (experiment == "localize") {
          results.traces = run_localization(cfg);
        } else if (experiment == "equilibrium") {
          results.traces = run_equilibrium(cfg);
        } else {
          fail(ErrorKind::config, "experiment must be growth, localize or equilibrium");
        }
        py::list traces;
        for (const auto& t : results.traces) traces.append(trace_dict(t));
        py::dict out;
        out["traces"] = traces;
        if (write) out["files"] = emit_outputs(results, cfg);
        return out;
      },
      py::arg("experiment"), py::arg("config") = "", py::arg("write") = false,
      "Runs an experiment from config text (same format as the CLI) and returns its traces.");
}

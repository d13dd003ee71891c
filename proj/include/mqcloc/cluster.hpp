#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mqcloc/mqc.hpp"

namespace mqcloc {

/// Cluster size K = 2 <M^2> under the Gaussian model A_M ~ exp(-M^2 / K),
/// floored at one spin. Negative amplitudes are clipped to zero; if their
/// total magnitude exceeds 1e-6 of the sum a warning is appended to
/// `diagnostic` (when non-null).
double cluster_size(const CoherenceSpectrum& spectrum, std::string* diagnostic = nullptr);

struct TracePoint {
  int n_cycles;
  double time;  // seconds
  double k;
};

struct ClusterTrace {
  double p = 0.0;
  double tau0 = 0.0;
  double tau_sigma = 0.0;
  int n_prep_cycles = 0;
  std::vector<TracePoint> points;
  std::vector<CoherenceSpectrum> spectra;  // parallel to points when retained
  std::string diagnostics;                 // clipping and degenerate-spectrum notes

  /// Throws when times are not strictly increasing or a K value is negative or non-finite.
  void validate() const;
};

struct PlateauOptions {
  double window_fraction = 1.0 / 3.0;
  double slope_tol = 0.05;
  double settle_band = 0.1;  // relative band around K_loc that defines the onset
};

struct PlateauResult {
  bool localized = false;
  double k_loc = 0.0;
  double slope = 0.0;  // d log K / d log n over the trailing window
  std::size_t onset_index = 0;
};

/// Least-squares slope of log K against log n over the trailing window; the
/// trace is localized when |slope| < slope_tol. K_loc is the window mean and
/// the onset is the first point after which K stays within settle_band of it
/// (points.size() when not localized).
PlateauResult plateau(const ClusterTrace& trace, const PlateauOptions& options = {});

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double exponent_stderr = 0.0;
  std::vector<std::pair<double, double>> points_used;  // (p, K_loc)
};

/// Ordinary least squares of log K_loc on log p.
PowerLawFit powerlaw_fit(const std::vector<std::pair<double, double>>& points);

/// CSV with header n_cycles,time_s,p,K.
void write_trace_csv(std::ostream& out, const ClusterTrace& trace);
/// Reads the format written by write_trace_csv; p and tau fields other than p are not stored there.
ClusterTrace read_trace_csv(std::istream& in);

/// "exponent = a +- s" style report with prefactor and the fitted points.
void write_fit_report(std::ostream& out, const PowerLawFit& fit);

}  // namespace mqcloc

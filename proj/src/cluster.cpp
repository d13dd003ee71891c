#include "mqcloc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mqcloc/format.hpp"

namespace mqcloc {

double cluster_size(const CoherenceSpectrum& spectrum, std::string* diagnostic) {
  double weight = 0.0, second = 0.0, clipped = 0.0;
  for (int order = -spectrum.n_spins; order <= spectrum.n_spins; ++order) {
    const double a = spectrum.at(order);
    if (!std::isfinite(a)) fail(ErrorKind::domain, "non-finite coherence amplitude");
    if (a < 0.0) {
      clipped += -a;
      continue;
    }
    weight += a;
    second += static_cast<double>(order) * order * a;
  }
  if (!(weight > 0.0)) fail(ErrorKind::degenerate, "spectrum has no positive weight");
  if (diagnostic != nullptr && clipped > 1e-6 * weight) {
    *diagnostic += "clipped negative amplitude " + format_double(clipped) + " against weight " +
                   format_double(weight) + "\n";
  }
  return std::max(1.0, 2.0 * second / weight);
}

void ClusterTrace::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].k) || points[i].k < 0.0) {
      fail(ErrorKind::domain, "cluster size must be finite and >= 0");
    }
    if (i > 0 && !(points[i].time > points[i - 1].time)) {
      fail(ErrorKind::domain, "trace times must be strictly increasing");
    }
  }
  if (!spectra.empty() && spectra.size() != points.size()) {
    fail(ErrorKind::shape, "retained spectra must parallel the trace points");
  }
}

PlateauResult plateau(const ClusterTrace& trace, const PlateauOptions& options) {
  trace.validate();
  const auto& pts = trace.points;
  if (pts.size() < 6) {
    fail(ErrorKind::insufficient_data, "plateau detection needs at least 6 points, got " +
                                           std::to_string(pts.size()));
  }
  if (!(options.window_fraction > 0.0 && options.window_fraction <= 1.0)) {
    fail(ErrorKind::domain, "window fraction must lie in (0, 1]");
  }
  const std::size_t window =
      std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(options.window_fraction * pts.size())));
  const std::size_t start = pts.size() - std::min(window, pts.size());

  std::vector<double> xs, ys;
  double k_sum = 0.0;
  for (std::size_t i = start; i < pts.size(); ++i) {
    k_sum += pts[i].k;
    if (pts[i].n_cycles <= 0 || pts[i].k <= 0.0) continue;
    xs.push_back(std::log(static_cast<double>(pts[i].n_cycles)));
    ys.push_back(std::log(pts[i].k));
  }
  if (xs.size() < 2) fail(ErrorKind::insufficient_data, "plateau window has fewer than 2 usable points");

  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }

  PlateauResult result;
  result.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  result.localized = std::abs(result.slope) < options.slope_tol;
  result.k_loc = k_sum / static_cast<double>(pts.size() - start);
  result.onset_index = pts.size();
  if (result.localized) {
    std::size_t onset = pts.size();
    while (onset > 0 &&
           std::abs(pts[onset - 1].k - result.k_loc) <= options.settle_band * result.k_loc) {
      --onset;
    }
    result.onset_index = onset;
  }
  return result;
}

PowerLawFit powerlaw_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) {
    fail(ErrorKind::insufficient_data, "power-law fit needs at least 3 points");
  }
  std::vector<double> xs, ys;
  for (const auto& [p, k] : points) {
    if (!(p > 0.0) || !(k > 0.0) || !std::isfinite(p) || !std::isfinite(k)) {
      fail(ErrorKind::domain, "power-law fit needs positive finite (p, K_loc) pairs");
    }
    xs.push_back(std::log(p));
    ys.push_back(std::log(k));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::degenerate, "power-law fit needs at least two distinct p values");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ssr += r * r;
  }
  fit.exponent_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  fit.points_used = points;
  return fit;
}

void write_trace_csv(std::ostream& out, const ClusterTrace& trace) {
  out << "n_cycles,time_s,p,K\n";
  for (const auto& pt : trace.points) {
    out << pt.n_cycles << ',' << format_double(pt.time) << ',' << format_double(trace.p) << ','
        << format_double(pt.k) << '\n';
  }
}

ClusterTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "n_cycles,time_s,p,K") {
    fail(ErrorKind::io, "trace CSV must start with header n_cycles,time_s,p,K");
  }
  ClusterTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string n, t, p, k;
    if (!std::getline(fields, n, ',') || !std::getline(fields, t, ',') ||
        !std::getline(fields, p, ',') || !std::getline(fields, k)) {
      fail(ErrorKind::io, "malformed trace CSV line " + std::to_string(line_no));
    }
    try {
      trace.points.push_back({std::stoi(n), std::stod(t), std::stod(k)});
      trace.p = std::stod(p);
    } catch (const std::exception&) {
      fail(ErrorKind::io, "unparseable number on trace CSV line " + std::to_string(line_no));
    }
  }
  trace.validate();
  return trace;
}

void write_fit_report(std::ostream& out, const PowerLawFit& fit) {
  out << "K_loc ~ prefactor * p^exponent (least squares on log-log data)\n"
      << "exponent = " << format_double(fit.exponent) << " +- " << format_double(fit.exponent_stderr)
      << '\n'
      << "prefactor = " << format_double(fit.prefactor) << '\n'
      << "points = " << fit.points_used.size() << '\n'
      << "p,K_loc\n";
  for (const auto& [p, k] : fit.points_used) out << format_double(p) << ',' << format_double(k) << '\n';
}

}  // namespace mqcloc

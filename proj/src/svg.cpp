#include "mqcloc/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "mqcloc/format.hpp"

namespace mqcloc {

namespace {

constexpr int kCell = 12;
constexpr int kMarginLeft = 48;
constexpr int kMarginTop = 28;
constexpr int kMarginBottom = 36;
constexpr double kDecades = 4.0;

// Viridis, sampled at five stops.
constexpr std::array<std::array<double, 3>, 5> kStops{{
    {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string color(double level) {
  level = std::clamp(level, 0.0, 1.0) * (kStops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(level), kStops.size() - 2);
  const double f = level - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(kStops[i][0] + f * (kStops[i + 1][0] - kStops[i][0]))),
                static_cast<int>(std::lround(kStops[i][1] + f * (kStops[i + 1][1] - kStops[i][1]))),
                static_cast<int>(std::lround(kStops[i][2] + f * (kStops[i + 1][2] - kStops[i][2]))));
  return buf;
}

}  // namespace

int support_width(const CoherenceSpectrum& spectrum, double relative_threshold) {
  const double peak = *std::max_element(spectrum.amplitudes.begin(), spectrum.amplitudes.end());
  if (!(peak > 0.0)) return 0;
  int width = 0;
  for (int order = -spectrum.n_spins; order <= spectrum.n_spins; ++order) {
    if (spectrum.at(order) >= relative_threshold * peak) width = std::max(width, std::abs(order));
  }
  return width;
}

void write_heatmap_svg(std::ostream& out, const ClusterTrace& trace) {
  if (trace.spectra.empty()) fail(ErrorKind::domain, "heatmap needs retained spectra");
  const int n_spins = trace.spectra.front().n_spins;
  const int columns = static_cast<int>(trace.spectra.size());
  const int rows = 2 * n_spins + 1;
  const int width = kMarginLeft + columns * kCell + 16;
  const int height = kMarginTop + rows * kCell + kMarginBottom;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<g id=\"heatmap\" data-p=\"" << format_double(trace.p) << "\" data-prep-cycles=\""
      << trace.n_prep_cycles << "\" data-n-spins=\"" << n_spins << "\" data-columns=\"" << columns
      << "\" data-support-widths=\"";
  for (int c = 0; c < columns; ++c) out << (c ? " " : "") << support_width(trace.spectra[c]);
  out << "\">\n";
  out << "<text x=\"" << kMarginLeft << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">A_M(n), p = "
      << format_double(trace.p) << ", N0 = " << trace.n_prep_cycles << ", log10 scale over "
      << kDecades << " decades</text>\n";

  for (int c = 0; c < columns; ++c) {
    const CoherenceSpectrum& s = trace.spectra[c];
    const double peak = std::max(*std::max_element(s.amplitudes.begin(), s.amplitudes.end()), 0.0);
    for (int order = n_spins; order >= -n_spins; --order) {
      const double a = s.at(order);
      const int x = kMarginLeft + c * kCell;
      const int y = kMarginTop + (n_spins - order) * kCell;
      std::string fill = "#ffffff";
      if (peak > 0.0 && a > 0.0) {
        const double level = 1.0 + std::log10(a / peak) / kDecades;
        if (level > 0.0) fill = color(level);
      }
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  // Axis labels: every other order on the left, every fifth cycle along the bottom.
  for (int order = n_spins; order >= -n_spins; order -= 2) {
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + (n_spins - order) * kCell + kCell - 2
        << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"end\">" << order << "</text>\n";
  }
  for (int c = 0; c < columns; c += 5) {
    out << "<text x=\"" << kMarginLeft + c * kCell + kCell / 2 << "\" y=\"" << kMarginTop + rows * kCell + 12
        << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">"
        << trace.points[c].n_cycles << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + columns * kCell / 2 << "\" y=\"" << height - 6
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">cycle n</text>\n";
  out << "</g>\n</svg>\n";
}

}  // namespace mqcloc

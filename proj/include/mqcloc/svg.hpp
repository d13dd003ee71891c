#pragma once

#include <iosfwd>

#include "mqcloc/cluster.hpp"

namespace mqcloc {

/// Largest |M| whose amplitude reaches `relative_threshold` of the largest amplitude.
int support_width(const CoherenceSpectrum& spectrum, double relative_threshold = 1e-3);

/// Heatmap of A_M(n): coherence order on the vertical axis, cycle on the
/// horizontal axis, log10 color scale over four decades. The root group
/// carries the per-column support widths in a data-support-widths attribute.
void write_heatmap_svg(std::ostream& out, const ClusterTrace& trace);

}  // namespace mqcloc

#ifndef QJET_SVG_HPP
#define QJET_SVG_HPP

#include <string>
#include <vector>

#include "qjet/train.hpp"

namespace qjet {

/// Two-panel SVG line chart (loss left, FID right) for a metrics series.
/// Output is fully deterministic: fixed layout, no timestamps.
std::string metrics_plot_svg(const std::vector<MetricsRecord>& metrics);

void write_metrics_plot(const std::string& path, const std::vector<MetricsRecord>& metrics);

} // namespace qjet

#endif

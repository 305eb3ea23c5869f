#pragma once

#include <string>
#include <vector>

#include "gpustress/core.hpp"
#include "gpustress/roofline.hpp"

namespace gpustress {

// Radar chart of normalized stress axes, one polygon per workload (ranked
// order sets the legend and palette). Self-contained SVG, no external CSS.
std::string radar_svg(const std::vector<StressProfile>& ranked);

// Log-log roofline: memory and compute ceilings for the given hardware plus
// one marker per workload, colored by efficiency cluster. Points without a
// positive finite position are listed as unplotted in the chart footer.
std::string roofline_svg(const std::vector<NamedRooflinePoint>& points,
                         const HardwareSpec& hw,
                         const ClusterBands& bands = {});

}  // namespace gpustress

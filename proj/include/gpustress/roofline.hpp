#pragma once

#include <span>
#include <string>
#include <vector>

#include "gpustress/core.hpp"

namespace gpustress {

// Arithmetic intensity where the bandwidth ramp meets the compute ceiling.
// Throws std::invalid_argument on zero bandwidth.
double ridge_point(const HardwareSpec& hw);

// Place one (intensity, throughput) measurement against the device roofline.
// Points above the attainable ceiling are flagged (above_roof), not rejected:
// counter-derived FLOP totals can exceed nominal ceilings with aggressive
// flop weights.
RooflinePoint place(double arithmetic_intensity, double throughput_gflops,
                    const HardwareSpec& hw);

// Efficiency-band thresholds for the deterministic cluster labels.
struct ClusterBands {
    double high_pct = 60.0;  // High: efficiency >= high_pct
    double low_pct = 10.0;   // Low:  efficiency <  low_pct
};

enum class ClusterLabel { High, Moderate, Low };

std::string_view to_string(ClusterLabel label);

struct NamedRooflinePoint {
    std::string name;
    RooflinePoint point;
};

// Label each point by its efficiency against attainable performance.
std::vector<ClusterLabel> cluster(std::span<const NamedRooflinePoint> points,
                                  const ClusterBands& bands = {});

}  // namespace gpustress

#include "gpustress/roofline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gpustress {

double ridge_point(const HardwareSpec& hw) {
    if (!(hw.peak_bandwidth_gbps > 0.0)) {
        throw std::invalid_argument("ridge_point: zero bandwidth");
    }
    return hw.peak_gflops / hw.peak_bandwidth_gbps;
}

RooflinePoint place(double arithmetic_intensity, double throughput_gflops,
                    const HardwareSpec& hw) {
    if (arithmetic_intensity < 0.0 || throughput_gflops < 0.0) {
        throw std::invalid_argument("place: intensity and throughput must be >= 0");
    }
    RooflinePoint p;
    p.arithmetic_intensity = arithmetic_intensity;
    p.throughput_gflops = throughput_gflops;
    const double bandwidth_bound = hw.peak_bandwidth_gbps * arithmetic_intensity;
    p.attainable_gflops = std::min(hw.peak_gflops, bandwidth_bound);
    p.efficiency_pct = p.attainable_gflops > 0.0
                           ? 100.0 * throughput_gflops / p.attainable_gflops
                           : 0.0;
    p.bound = arithmetic_intensity >= ridge_point(hw) ? RooflineBound::ComputeBound
                                                      : RooflineBound::MemoryBound;
    p.above_roof = throughput_gflops > p.attainable_gflops;
    return p;
}

std::string_view to_string(ClusterLabel label) {
    switch (label) {
        case ClusterLabel::High:     return "High";
        case ClusterLabel::Moderate: return "Moderate";
        case ClusterLabel::Low:      return "Low";
    }
    return "?";
}

std::vector<ClusterLabel> cluster(std::span<const NamedRooflinePoint> points,
                                  const ClusterBands& bands) {
    if (points.empty()) {
        throw std::invalid_argument("cluster: need at least one point");
    }
    std::vector<ClusterLabel> labels;
    labels.reserve(points.size());
    for (const NamedRooflinePoint& np : points) {
        const double eff = np.point.efficiency_pct;
        if (eff >= bands.high_pct) {
            labels.push_back(ClusterLabel::High);
        } else if (eff < bands.low_pct) {
            labels.push_back(ClusterLabel::Low);
        } else {
            labels.push_back(ClusterLabel::Moderate);
        }
    }
    return labels;
}

}  // namespace gpustress

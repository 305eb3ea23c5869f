#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gpustress/core.hpp"
#include "gpustress/counters.hpp"
#include "gpustress/roofline.hpp"
#include "gpustress/thermal.hpp"

namespace gpustress {

// Everything one trace yields: the seven radar-axis metrics plus the
// intermediate results worth reporting alongside them.
struct AnalysisResult {
    MetricSet metrics;
    ThermalFit thermal;
    std::optional<RooflinePoint> roofline;  // absent for telemetry-only traces
    std::vector<std::string> warnings;
};

// Runs the full metric pipeline over a validated trace: thermal fit, energy
// accounting, clock deficit, and (when kernel counters are present) the
// performance-counter metrics and roofline placement.
// Throws std::invalid_argument if the trace fails validation.
AnalysisResult build_metric_set(const WorkloadTrace& trace, const HardwareSpec& hw);

struct NormalizeOptions {
    // Radar energy axis: total kilojoules by default, mean watts when set.
    bool energy_axis_uses_rate = false;
};

// Min-max normalization of each radar axis over the compared set. The t_r
// and s_act axes are direction-inverted first (lower raw value reads as
// higher stress). A degenerate axis (all values equal) is pinned to 0.5 and
// flagged through `warnings`. Axes absent from every workload are dropped;
// an axis present for some workloads but not others is an error.
// Requires at least two workloads. Output preserves input order;
// composite_index and rank are left unset.
std::vector<StressProfile> normalize_axes(
    std::span<const std::pair<std::string, MetricSet>> sets,
    const NormalizeOptions& options = {}, Warnings* warnings = nullptr);

// Weighted mean of the normalized axes. Axes missing from `weights` get
// weight 1, so an empty map is the equal-weight default. All seven radar
// axes must be present in the profile.
double composite_index(const StressProfile& profile,
                       const AxisMap& weights = {});

// Orders profiles by descending composite index, ties broken by name, and
// assigns 1-based ranks. Requires a non-empty input.
std::vector<StressProfile> rank(std::vector<StressProfile> profiles);

// Raw value backing one radar axis, or nullopt when the metric set lacks it.
std::optional<double> axis_value(const MetricSet& metrics, std::string_view axis,
                                 const NormalizeOptions& options = {});

}  // namespace gpustress

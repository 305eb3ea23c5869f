#include "gpustress/stress.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gpustress/telemetry.hpp"

namespace gpustress {

AnalysisResult build_metric_set(const WorkloadTrace& trace, const HardwareSpec& hw) {
    const std::vector<ValidationFinding> findings = validate_trace(trace);
    for (const ValidationFinding& f : findings) {
        if (f.severity == Severity::Error) {
            throw std::invalid_argument("build_metric_set: invalid trace: " + f.path +
                                        ": " + f.message);
        }
    }

    AnalysisResult result;
    Warnings warnings;
    for (const ValidationFinding& f : findings) {
        warnings.add(f.path + ": " + f.message);
    }

    result.thermal = fit_exponential(trace.telemetry);
    for (const std::string& flag : result.thermal.flags) {
        warnings.add("thermal fit: " + flag);
    }
    result.metrics.t_inf_c = steady_state_temp(trace.telemetry, result.thermal, &warnings);
    result.metrics.t_r_s = result.thermal.t_r_s;

    const EnergySummary e = energy(trace.telemetry);
    result.metrics.energy_kj = e.total_kj;
    result.metrics.energy_rate_w = e.rate_w;
    result.metrics.delta_cf_mhz = delta_cf(trace.telemetry);

    if (!trace.kernels.empty()) {
        const CounterAggregate agg = aggregate(trace.kernels);
        result.metrics.sm_busy_rate_pct = sm_busy_rate(agg, hw, &warnings);
        result.metrics.aii_pct = aii(agg, hw, &warnings);
        result.metrics.s_act_pct = s_act(agg.total_stalls, &warnings);
        result.metrics.throughput_gflops = throughput_gflops(agg, hw);
        result.metrics.arithmetic_intensity = arithmetic_intensity(agg, hw, &warnings);
        result.roofline = place(*result.metrics.arithmetic_intensity,
                                *result.metrics.throughput_gflops, hw);
        if (result.roofline->above_roof) {
            warnings.add("roofline: throughput exceeds the attainable roof; "
                         "check counter weights against the hardware spec");
        }
    }

    result.warnings = std::move(warnings.messages);
    return result;
}

std::optional<double> axis_value(const MetricSet& m, std::string_view axis,
                                 const NormalizeOptions& options) {
    if (axis == "sm_busy_rate") return m.sm_busy_rate_pct;
    if (axis == "aii") return m.aii_pct;
    if (axis == "s_act") return m.s_act_pct;
    if (axis == "t_inf") return m.t_inf_c;
    if (axis == "t_r") return m.t_r_s;
    if (axis == "energy") return options.energy_axis_uses_rate ? m.energy_rate_w : m.energy_kj;
    if (axis == "delta_cf") return m.delta_cf_mhz;
    throw std::invalid_argument("axis_value: unknown axis '" + std::string(axis) + "'");
}

std::vector<StressProfile> normalize_axes(
    std::span<const std::pair<std::string, MetricSet>> sets,
    const NormalizeOptions& options, Warnings* warnings) {
    if (sets.size() < 2) {
        throw std::invalid_argument("normalize_axes: need at least two workloads");
    }

    std::vector<StressProfile> profiles(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        profiles[i].name = sets[i].first;
    }

    for (const std::string_view axis : kRadarAxes) {
        std::vector<double> values;
        values.reserve(sets.size());
        std::size_t present = 0;
        for (const auto& [name, metrics] : sets) {
            if (const auto v = axis_value(metrics, axis, options)) {
                values.push_back(*v);
                ++present;
            }
        }
        if (present == 0) continue;  // axis unavailable across the board
        if (present != sets.size()) {
            throw std::invalid_argument(
                "normalize_axes: axis '" + std::string(axis) +
                "' is present for some workloads and absent for others");
        }

        const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
        const double lo = *min_it, hi = *max_it;
        const bool inverted = axis_is_inverted(axis);

        if (hi == lo) {
            if (warnings) {
                warnings->add("normalize_axes: axis '" + std::string(axis) +
                              "' has no spread; pinned to 0.5");
            }
            for (StressProfile& p : profiles) {
                p.normalized_axes.emplace(axis, 0.5);
            }
            continue;
        }
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const double x = (values[i] - lo) / (hi - lo);
            profiles[i].normalized_axes.emplace(axis, inverted ? 1.0 - x : x);
        }
    }
    return profiles;
}

double composite_index(const StressProfile& profile, const AxisMap& weights) {
    double num = 0.0, den = 0.0;
    for (const std::string_view axis : kRadarAxes) {
        const auto it = profile.normalized_axes.find(axis);
        if (it == profile.normalized_axes.end()) {
            throw std::invalid_argument("composite_index: missing axis '" +
                                        std::string(axis) + "'");
        }
        const auto w_it = weights.find(axis);
        const double w = w_it != weights.end() ? w_it->second : 1.0;
        if (w < 0.0 || !std::isfinite(w)) {
            throw std::invalid_argument("composite_index: invalid weight for axis '" +
                                        std::string(axis) + "'");
        }
        num += w * it->second;
        den += w;
    }
    if (den == 0.0) {
        throw std::invalid_argument("composite_index: all axis weights are zero");
    }
    return num / den;
}

std::vector<StressProfile> rank(std::vector<StressProfile> profiles) {
    if (profiles.empty()) {
        throw std::invalid_argument("rank: empty profile list");
    }
    std::sort(profiles.begin(), profiles.end(),
              [](const StressProfile& a, const StressProfile& b) {
                  if (a.composite_index != b.composite_index) {
                      return a.composite_index > b.composite_index;
                  }
                  return a.name < b.name;
              });
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        profiles[i].rank = static_cast<int>(i) + 1;
    }
    return profiles;
}

}  // namespace gpustress

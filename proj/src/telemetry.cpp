#include "gpustress/telemetry.hpp"

#include <algorithm>
#include <stdexcept>

namespace gpustress {

EnergySummary energy(std::span<const TelemetrySample> telemetry) {
    if (telemetry.size() < 2) {
        throw std::invalid_argument("energy: need at least two samples");
    }
    const double span = telemetry.back().t_s - telemetry.front().t_s;
    if (!(span > 0.0)) {
        throw std::invalid_argument("energy: zero time span");
    }
    const double joules = telemetry.back().energy_j - telemetry.front().energy_j;
    EnergySummary e;
    e.total_kj = joules / 1000.0;
    e.rate_w = joules / span;
    return e;
}

double energy_from_power(std::span<const TelemetrySample> telemetry) {
    if (telemetry.size() < 2) {
        throw std::invalid_argument("energy_from_power: need at least two samples");
    }
    double joules = 0.0;
    for (std::size_t i = 1; i < telemetry.size(); ++i) {
        const double dt = telemetry[i].t_s - telemetry[i - 1].t_s;
        joules += 0.5 * (telemetry[i].power_w + telemetry[i - 1].power_w) * dt;
    }
    return joules;
}

double delta_cf(std::span<const TelemetrySample> telemetry) {
    if (telemetry.empty()) {
        throw std::invalid_argument("delta_cf: empty telemetry");
    }
    double peak = telemetry.front().sm_clock_mhz;
    double sum = 0.0;
    for (const TelemetrySample& s : telemetry) {
        peak = std::max(peak, s.sm_clock_mhz);
        sum += s.sm_clock_mhz;
    }
    return peak - sum / static_cast<double>(telemetry.size());
}

}  // namespace gpustress
